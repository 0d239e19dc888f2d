use serde::Serialize;

/// Outcome of one identity check, possibly aggregated over many trials.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub trials: usize,
    /// NaN marks a residual that could not be evaluated and always fails.
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Offending input in the matrix text format, when the check failed on one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

impl IdentityReport {
    pub fn new(name: impl Into<String>, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            trials: 0,
            max_residual: f64::NEG_INFINITY,
            tolerance,
            pass: true,
            note: None,
            counterexample: None,
        }
    }

    pub fn single(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        let mut r = Self::new(name, tolerance);
        r.record(residual);
        r
    }

    /// Folds one more residual in. Returns true if it is the new maximum.
    pub fn record(&mut self, residual: f64) -> bool {
        let previous = self.max_residual;
        self.trials += 1;
        self.max_residual = if self.trials == 1 {
            residual
        } else {
            nan_max(previous, residual)
        };
        self.pass = self.max_residual <= self.tolerance;
        self.trials == 1 || residual > previous || residual.is_nan()
    }

    pub fn absorb(&mut self, other: &IdentityReport) {
        if other.trials == 0 {
            return;
        }
        if self.trials == 0 {
            self.max_residual = other.max_residual;
        } else {
            self.max_residual = nan_max(self.max_residual, other.max_residual);
        }
        self.trials += other.trials;
        self.pass = self.max_residual <= self.tolerance;
        if self.counterexample.is_none() {
            self.counterexample = other.counterexample.clone();
        }
        if self.note.is_none() {
            self.note = other.note.clone();
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}
