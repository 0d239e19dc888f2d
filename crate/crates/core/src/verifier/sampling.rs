use rand::Rng;
use serde::Serialize;

use super::report::IdentityReport;
use crate::error::{Error, Result};
use crate::functionals::{ratio, QParams};
use crate::matcore::{random_ginibre, random_normal_matrix};
use crate::matfile::format_pair;

/// Default slack above `c(q)` tolerated by [`sample_bound`].
pub const TOL_SAMPLE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Ensemble {
    /// Independent Ginibre `A` and `B`.
    Ginibre,
    /// Random normal `A`, Ginibre `B`.
    NormalA,
}

/// Largest `ratio(A, B, q) − c` over random pairs.
///
/// The report fails when that excess is above `tol`; the worst pair is then
/// attached as a counterexample.
pub fn sample_bound<R: Rng + ?Sized>(
    n: usize,
    params: &QParams,
    samples: usize,
    ensemble: Ensemble,
    tol: f64,
    rng: &mut R,
) -> Result<IdentityReport> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be >= 1".into()));
    }
    let name = match ensemble {
        Ensemble::Ginibre => "sample_bound",
        Ensemble::NormalA => "sample_bound_normal",
    };
    let mut report = IdentityReport::new(name, tol).with_note(format!("n={n} q={}", params.q()));
    let mut worst = None;
    for _ in 0..samples {
        let a = match ensemble {
            Ensemble::Ginibre => random_ginibre(n, rng),
            Ensemble::NormalA => random_normal_matrix(n, rng),
        };
        let b = random_ginibre(n, rng);
        let excess = ratio(&a, &b, params.q())? - params.c();
        if report.record(excess) {
            worst = Some((a, b));
        }
    }
    if !report.pass {
        if let Some((a, b)) = worst {
            report.counterexample = Some(format_pair(&a, &b));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::bound_c;
    use crate::rng::rng_from_seed;

    #[test]
    fn n2_has_no_violation() {
        let mut rng = rng_from_seed(31);
        for q in [-2.0, -1.0, 0.0, 1.0, 2.5] {
            let r = sample_bound(2, &bound_c(q).unwrap(), 2000, Ensemble::Ginibre, TOL_SAMPLE, &mut rng).unwrap();
            assert!(r.pass, "q={q} {r:?}");
            assert!(r.counterexample.is_none());
        }
    }

    #[test]
    fn lowered_c_is_caught_with_counterexample() {
        let mut rng = rng_from_seed(32);
        // At q = 1 every ratio is positive, so c shifted to zero is always exceeded.
        let p = bound_c(1.0).unwrap().with_c_offset(-2.0);
        let r = sample_bound(2, &p, 200, Ensemble::Ginibre, TOL_SAMPLE, &mut rng).unwrap();
        assert!(!r.pass);
        assert!(r.counterexample.as_deref().unwrap().starts_with("2\n"));
    }

    #[test]
    fn zero_samples_rejected() {
        let mut rng = rng_from_seed(33);
        assert!(sample_bound(2, &bound_c(0.0).unwrap(), 0, Ensemble::Ginibre, TOL_SAMPLE, &mut rng).is_err());
    }
}
