use serde::Serialize;

use crate::error::Result;
use crate::functionals::{bound_c, f_func, f_func_with, r_func, ratio, FForm};
use crate::matcore::{check_same_dim, fro_norm_sq, ComplexMatrix};

/// Everything `eval` prints for one pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalRecord {
    pub n: usize,
    pub q: f64,
    pub f: f64,
    /// `f` from the trace form, as a cross-check.
    pub f_trace: f64,
    pub r: f64,
    pub norm_a_sq: f64,
    pub norm_b_sq: f64,
    /// Absent when either operand is zero.
    pub ratio: Option<f64>,
    pub c_q: f64,
    pub gap: Option<f64>,
    /// `‖BA‖² − ‖AB‖²`, printed only at `q = −1` where it equals `f`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form_qm1: Option<f64>,
}

pub fn evaluate(a: &ComplexMatrix, b: &ComplexMatrix, q: f64) -> Result<EvalRecord> {
    check_same_dim(a, b)?;
    let c_q = bound_c(q)?.c();
    let ratio = ratio(a, b, q).ok();
    Ok(EvalRecord {
        n: a.n(),
        q,
        f: f_func(a, b, q)?,
        f_trace: f_func_with(a, b, q, FForm::Trace)?,
        r: r_func(a, b)?,
        norm_a_sq: fro_norm_sq(a),
        norm_b_sq: fro_norm_sq(b),
        ratio,
        c_q,
        gap: ratio.map(|x| c_q - x),
        closed_form_qm1: (q == -1.0).then(|| fro_norm_sq(&(b * a)) - fro_norm_sq(&(a * b))),
    })
}
