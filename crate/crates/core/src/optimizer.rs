//! Alternating spectral ascent for `sup f(A,B;q) / (‖A‖²‖B‖²)`.
//!
//! For fixed `B`, `f` is a Hermitian quadratic form in `vec(A)`; its maximum over
//! unit `A` is the top eigenvalue. The same holds with the roles swapped, so each
//! half-step is an exact block maximization and the objective never decreases.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::functionals::{f_func, make_witness, NORM_FLOOR};
use crate::matcore::{fro_norm_sq, kron, random_ginibre, unvec, vec, ComplexMatrix, HermitianForm};
use crate::rng::{derive_seed, rng_from_seed};

/// Lifts `A ↦ f(A, B; q)` to `vec(A)* H vec(A)`.
///
/// `H = I ⊗ B*B + q (BB*)ᵀ ⊗ I − (1+q)/2 (Bᵀ ⊗ B* + B̄ ⊗ B)`.
pub fn lift_form_in_a(b: &ComplexMatrix, q: f64) -> Result<HermitianForm> {
    require_nonzero(b, "B")?;
    let n = b.n();
    let id = ComplexMatrix::identity(n);
    let bh = b.adjoint();
    let t1 = kron(&id, &(&bh * b));
    let t2 = kron(&(b * &bh).transpose(), &id);
    let t3 = kron(&b.transpose(), &bh);
    let t4 = kron(&b.conj(), b);
    Ok(combine(&t1, &t2, &t3, &t4, q))
}

/// Lifts `B ↦ f(A, B; q)` to `vec(B)* K vec(B)`.
///
/// `K = (AA*)ᵀ ⊗ I + q I ⊗ A*A − (1+q)/2 (Ā ⊗ A + Aᵀ ⊗ A*)`.
pub fn lift_form_in_b(a: &ComplexMatrix, q: f64) -> Result<HermitianForm> {
    require_nonzero(a, "A")?;
    let n = a.n();
    let id = ComplexMatrix::identity(n);
    let ah = a.adjoint();
    let t1 = kron(&(a * &ah).transpose(), &id);
    let t2 = kron(&id, &(&ah * a));
    let t3 = kron(&a.conj(), a);
    let t4 = kron(&a.transpose(), &ah);
    Ok(combine(&t1, &t2, &t3, &t4, q))
}

// t1 + q t2 − (1+q)/2 (t3 + t4), then symmetrized.
fn combine(t1: &ComplexMatrix, t2: &ComplexMatrix, t3: &ComplexMatrix, t4: &ComplexMatrix, q: f64) -> HermitianForm {
    let w = Complex64::new(-(1.0 + q) / 2.0, 0.0);
    let qz = Complex64::new(q, 0.0);
    let dim = t1.n();
    let m = ComplexMatrix::from_fn(dim, |i, j| {
        t1.get(i, j) + qz * t2.get(i, j) + w * (t3.get(i, j) + t4.get(i, j))
    });
    HermitianForm::from_matrix(&m)
}

fn require_nonzero(m: &ComplexMatrix, name: &str) -> Result<()> {
    if fro_norm_sq(m) <= NORM_FLOOR {
        return Err(Error::Degenerate(format!("cannot lift around a zero {name}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizeConfig {
    pub n: usize,
    pub q: f64,
    pub restarts: usize,
    pub max_iters: usize,
    /// Relative ascent over one full sweep below which a restart has stalled.
    pub tol: f64,
    pub seed: u64,
    /// Keep the per-sweep ratio sequence of every restart.
    pub record_trace: bool,
}

impl OptimizeConfig {
    pub const DEFAULT_RESTARTS: usize = 16;
    pub const DEFAULT_MAX_ITERS: usize = 500;
    pub const DEFAULT_TOL: f64 = 1e-10;

    pub fn new(n: usize, q: f64, seed: u64) -> Self {
        Self {
            n,
            q,
            restarts: Self::DEFAULT_RESTARTS,
            max_iters: Self::DEFAULT_MAX_ITERS,
            tol: Self::DEFAULT_TOL,
            seed,
            record_trace: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidParameter(format!("n must be >= 2, got {}", self.n)));
        }
        if !self.q.is_finite() {
            return Err(Error::InvalidParameter(format!("q must be finite, got {}", self.q)));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidParameter("restarts must be >= 1".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter("max_iters must be >= 1".into()));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidParameter(format!("tol must be > 0, got {}", self.tol)));
        }
        Ok(())
    }
}

/// Outcome of one restart.
#[derive(Clone, Debug)]
pub struct RestartSummary {
    pub index: usize,
    pub witness_seeded: bool,
    pub best_ratio: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Ratio after each full sweep; empty unless tracing was requested.
    pub trace: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct RestartFailure {
    pub index: usize,
    pub message: String,
}

#[derive(Clone, Debug)]
pub struct OptimizeResult {
    pub best_ratio: f64,
    /// Unit Frobenius norm.
    pub a_opt: ComplexMatrix,
    /// Unit Frobenius norm.
    pub b_opt: ComplexMatrix,
    /// Full sweeps summed over all restarts.
    pub iterations_used: usize,
    /// Restarts that ran to completion.
    pub restarts_used: usize,
    /// Whether the restart that produced `best_ratio` met the stall criterion.
    pub converged: bool,
    pub best_restart: usize,
    pub restarts: Vec<RestartSummary>,
    pub failures: Vec<RestartFailure>,
}

struct RestartRun {
    summary: RestartSummary,
    a: ComplexMatrix,
    b: ComplexMatrix,
}

fn normalize(m: &ComplexMatrix) -> ComplexMatrix {
    m.scale(Complex64::new(1.0 / fro_norm_sq(m).sqrt(), 0.0))
}

fn ascend_a(b: &ComplexMatrix, q: f64) -> Result<ComplexMatrix> {
    let (_, v) = lift_form_in_a(b, q)?.top_eigpair()?;
    Ok(normalize(&unvec(&v, b.n())?))
}

fn ascend_b(a: &ComplexMatrix, q: f64) -> Result<ComplexMatrix> {
    let (_, v) = lift_form_in_b(a, q)?.top_eigpair()?;
    Ok(normalize(&unvec(&v, a.n())?))
}

fn run_restart(cfg: &OptimizeConfig, index: usize, b0: ComplexMatrix) -> Result<RestartRun> {
    let q = cfg.q;
    let mut b = normalize(&b0);
    let mut a = ascend_a(&b, q)?;
    let mut current = f_func(&a, &b, q)?;
    let mut best = (current, a.clone(), b.clone());
    let mut trace = Vec::new();
    if cfg.record_trace {
        trace.push(current);
    }
    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iters {
        iterations += 1;
        b = ascend_b(&a, q)?;
        a = ascend_a(&b, q)?;
        let next = f_func(&a, &b, q)?;
        if cfg.record_trace {
            trace.push(next);
        }
        if next > best.0 {
            best = (next, a.clone(), b.clone());
        }
        let stalled = next - current <= cfg.tol * next.abs().max(f64::MIN_POSITIVE);
        current = next;
        if stalled {
            converged = true;
            break;
        }
    }
    let (ratio, a, b) = best;
    Ok(RestartRun {
        summary: RestartSummary {
            index,
            witness_seeded: index == 0,
            best_ratio: ratio,
            iterations,
            converged,
            trace,
        },
        a,
        b,
    })
}

/// Best ratio over `cfg.restarts` ascents.
///
/// Restart 0 starts from the witness `B`; the others start from independent
/// Ginibre samples seeded by `derive_seed(cfg.seed, [restart])`. A restart whose
/// eigensolve fails is recorded in `failures` and skipped.
pub fn optimize_cell(cfg: &OptimizeConfig) -> Result<OptimizeResult> {
    cfg.validate()?;
    let mut best: Option<RestartRun> = None;
    let mut restarts = Vec::with_capacity(cfg.restarts);
    let mut failures = Vec::new();
    let mut iterations_used = 0;

    for index in 0..cfg.restarts {
        let b0 = if index == 0 {
            make_witness(cfg.q, cfg.n)?.b
        } else {
            let mut rng = rng_from_seed(derive_seed(cfg.seed, &[index as u64]));
            random_ginibre(cfg.n, &mut rng)
        };
        match run_restart(cfg, index, b0) {
            Ok(run) => {
                iterations_used += run.summary.iterations;
                restarts.push(run.summary.clone());
                if best
                    .as_ref()
                    .is_none_or(|b| run.summary.best_ratio > b.summary.best_ratio)
                {
                    best = Some(run);
                }
            }
            Err(e) => failures.push(RestartFailure {
                index,
                message: e.to_string(),
            }),
        }
    }

    let best = best.ok_or_else(|| {
        Error::Eigen(format!(
            "all {} restarts failed; first: {}",
            cfg.restarts,
            failures.first().map(|f| f.message.as_str()).unwrap_or("")
        ))
    })?;
    Ok(OptimizeResult {
        best_ratio: best.summary.best_ratio,
        a_opt: best.a,
        b_opt: best.b,
        iterations_used,
        restarts_used: restarts.len(),
        converged: best.summary.converged,
        best_restart: best.summary.index,
        restarts,
        failures,
    })
}

/// `vec(A)* H vec(A)` for a lifted form.
pub fn form_value(h: &HermitianForm, a: &ComplexMatrix) -> f64 {
    h.quad_form(&vec(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::bound_c;
    use crate::rng::rng_from_seed;

    #[test]
    fn lifted_hand_value() {
        let h = lift_form_in_a(&ComplexMatrix::unit(2, 0, 1), 1.0).unwrap();
        let a = ComplexMatrix::diag_real(&[1.0, -1.0]);
        assert!((form_value(&h, &a) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn lift_rejects_zero() {
        assert!(matches!(
            lift_form_in_a(&ComplexMatrix::zeros(2), 0.0),
            Err(Error::Degenerate(_))
        ));
        assert!(matches!(
            lift_form_in_b(&ComplexMatrix::zeros(2), 0.0),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn lift_around_identity_is_zero() {
        for q in [-2.0, 0.0, 0.5, 3.0] {
            let h = lift_form_in_a(&ComplexMatrix::identity(3), q).unwrap();
            assert!(h.fro_norm() <= 1e-12, "q={q}");
            let k = lift_form_in_b(&ComplexMatrix::identity(3), q).unwrap();
            assert!(k.fro_norm() <= 1e-12, "q={q}");
        }
    }

    #[test]
    fn witness_is_feasible_for_b_form() {
        for q in [-3.0, -1.0, 0.0, 0.4, 1.0, 2.0] {
            let w = make_witness(q, 3).unwrap();
            let k = lift_form_in_b(&w.a, q).unwrap();
            let (lambda, _) = k.top_eigpair().unwrap();
            let c = bound_c(q).unwrap().c();
            assert!(lambda >= c * fro_norm_sq(&w.a) - 1e-10, "q={q}");
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = OptimizeConfig::new(2, 0.0, 1);
        assert!(cfg.validate().is_ok());
        cfg.restarts = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = OptimizeConfig::new(2, 0.0, 1);
        cfg.tol = 0.0;
        assert!(cfg.validate().is_err());
        let mut cfg = OptimizeConfig::new(2, 0.0, 1);
        cfg.max_iters = 0;
        assert!(cfg.validate().is_err());
        assert!(OptimizeConfig::new(1, 0.0, 1).validate().is_err());
    }

    #[test]
    fn small_cell_hits_bound() {
        let mut cfg = OptimizeConfig::new(2, 1.0, 11);
        cfg.restarts = 8;
        let res = optimize_cell(&cfg).unwrap();
        assert!((res.best_ratio - 2.0).abs() <= 1e-6);
        assert!((fro_norm_sq(&res.a_opt) - 1.0).abs() <= 1e-12);
        assert!((fro_norm_sq(&res.b_opt) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn random_restart_alone_reaches_bound_n2() {
        // Without the witness seed, a random start should still find c(q) at n = 2.
        let q = 0.0;
        let mut rng = rng_from_seed(5);
        let cfg = OptimizeConfig::new(2, q, 0);
        let run = run_restart(&cfg, 1, random_ginibre(2, &mut rng)).unwrap();
        let c = bound_c(q).unwrap().c();
        assert!((run.summary.best_ratio - c).abs() <= 1e-6, "{}", run.summary.best_ratio);
    }
}
