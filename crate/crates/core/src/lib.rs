//! The q-deformed commutator functional `f(A,B;q) = Re⟨[B,A], [B,A]_q⟩`, its
//! sharp constant `c(q) = ((1+q) + √(2(1+q²)))/2`, extremal witnesses, identity
//! checks, and an alternating spectral-ascent estimate of
//! `sup f(A,B;q) / (‖A‖²‖B‖²)`.

pub mod error;
pub mod exec;
pub mod functionals;
pub mod harness;
pub mod matcore;
pub mod matfile;
pub mod optimizer;
pub mod rng;
pub mod verifier;

pub use error::{Error, Result};
pub use functionals::{bound_c, f_func, make_witness, r_func, ratio, QParams, WitnessPair};
pub use matcore::ComplexMatrix;
pub use optimizer::{optimize_cell, OptimizeConfig, OptimizeResult};
