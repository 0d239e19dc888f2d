//! Scalar functionals of a matrix pair, the sharp constant `c(q)` and its
//! extremal witness.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::{check_same_dim, commutator, fro_norm_sq, hs_inner, q_commutator, ComplexMatrix};

/// Operands whose squared norm falls at or below this are rejected by [`ratio`].
pub const NORM_FLOOR: f64 = 1e-300;

/// Deformation parameter `q` with its bound `c(q)` and sign constants.
///
/// For every `q`:
/// `2 eps1 √((c−q)(c−1)) = q + 1` and `2 eps2 √(c(c−q−1)) = 1 − q`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QParams {
    q: f64,
    c: f64,
    eps1: f64,
    eps2: f64,
}

impl QParams {
    pub fn new(q: f64) -> Result<Self> {
        if !q.is_finite() {
            return Err(Error::InvalidParameter(format!("q must be finite, got {q}")));
        }
        let c = ((1.0 + q) + (2.0 * (1.0 + q * q)).sqrt()) / 2.0;
        let eps1 = if q >= -1.0 { 1.0 } else { -1.0 };
        let eps2 = if q <= 1.0 { 1.0 } else { -1.0 };
        Ok(Self { q, c, eps1, eps2 })
    }

    /// Same `q` with `c` shifted by `delta`. Violates the invariants on purpose;
    /// exists so the verification suite can be shown to fail.
    pub fn with_c_offset(self, delta: f64) -> Self {
        Self {
            c: self.c + delta,
            ..self
        }
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn eps1(&self) -> f64 {
        self.eps1
    }

    pub fn eps2(&self) -> f64 {
        self.eps2
    }

    /// `√(c−1)`, clamped at zero.
    pub fn sqrt_c_minus_1(&self) -> f64 {
        (self.c - 1.0).max(0.0).sqrt()
    }

    /// `√(c−q)`, clamped at zero.
    pub fn sqrt_c_minus_q(&self) -> f64 {
        (self.c - self.q).max(0.0).sqrt()
    }

    /// `√(c−1−q)`, clamped at zero.
    pub fn sqrt_c_minus_1_minus_q(&self) -> f64 {
        (self.c - 1.0 - self.q).max(0.0).sqrt()
    }

    /// Residuals of the two sign-constant identities.
    pub fn identity_residuals(&self) -> (f64, f64) {
        let (q, c) = (self.q, self.c);
        let first = 2.0 * self.eps1 * ((c - q) * (c - 1.0)).max(0.0).sqrt() - (q + 1.0);
        let second = 2.0 * self.eps2 * (c * (c - q - 1.0)).max(0.0).sqrt() - (1.0 - q);
        (first, second)
    }
}

/// `c(q) = ((1+q) + √(2(1+q²)))/2` together with `eps1`, `eps2`.
pub fn bound_c(q: f64) -> Result<QParams> {
    QParams::new(q)
}

/// Which algebraic form [`f_func_with`] evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FForm {
    /// `Re⟨[B,A], [B,A]_q⟩`.
    InnerProduct,
    /// `tr(A*B*BA + q B*A*AB − (1+q)/2 (A*B*AB + B*A*BA))`.
    Trace,
}

/// `f(A, B; q) = Re⟨[B,A], [B,A]_q⟩`.
pub fn f_func(a: &ComplexMatrix, b: &ComplexMatrix, q: f64) -> Result<f64> {
    f_func_with(a, b, q, FForm::InnerProduct)
}

pub fn f_func_with(a: &ComplexMatrix, b: &ComplexMatrix, q: f64, form: FForm) -> Result<f64> {
    check_same_dim(a, b)?;
    match form {
        FForm::InnerProduct => {
            let k = commutator(b, a)?;
            let kq = q_commutator(b, a, q)?;
            Ok(hs_inner(&k, &kq)?.re)
        }
        FForm::Trace => {
            let ab = a * b;
            let ba = b * a;
            let ah = a.adjoint();
            let bh = b.adjoint();
            // tr(A*B*BA) = ‖BA‖², tr(B*A*AB) = ‖AB‖², tr(A*B*AB) = ⟨BA, AB⟩.
            let t1 = fro_norm_sq(&ba);
            let t2 = fro_norm_sq(&ab);
            let t3 = trace(&(&(&ah * &bh) * &ab));
            let t4 = trace(&(&(&bh * &ah) * &ba));
            Ok(t1 + q * t2 - (1.0 + q) / 2.0 * (t3 + t4).re)
        }
    }
}

fn trace(m: &ComplexMatrix) -> Complex64 {
    m.diagonal().into_iter().sum()
}

/// `½(⟨[B,A], BA⟩ + ⟨[B,A*], BA*⟩)` before the imaginary part is dropped.
pub fn r_func_complex(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    check_same_dim(a, b)?;
    let ah = a.adjoint();
    let first = hs_inner(&commutator(b, a)?, &(b * a))?;
    let second = hs_inner(&commutator(b, &ah)?, &(b * &ah))?;
    Ok((first + second) * 0.5)
}

/// The real functional `r(A, B)`.
pub fn r_func(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    Ok(r_func_complex(a, b)?.re)
}

/// `f(A,B;q) / (‖A‖² ‖B‖²)`. Zero or negligible operands are an error.
pub fn ratio(a: &ComplexMatrix, b: &ComplexMatrix, q: f64) -> Result<f64> {
    check_same_dim(a, b)?;
    let na = fro_norm_sq(a);
    let nb = fro_norm_sq(b);
    if na <= NORM_FLOOR || nb <= NORM_FLOOR || na * nb == 0.0 {
        return Err(Error::Degenerate(format!(
            "ratio needs nonzero operands (‖A‖² = {na:e}, ‖B‖² = {nb:e})"
        )));
    }
    Ok(f_func(a, b, q)? / (na * nb))
}

/// A pair attaining `f(A,B;q) = c(q) ‖A‖² ‖B‖²`.
#[derive(Clone, Debug)]
pub struct WitnessPair {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub params: QParams,
}

/// Extremal pair: `a11 = √(c−1)`, `a22 = −eps1 √(c−q)`, `b12 = 1`, zero elsewhere,
/// padded with zeros to `n × n`.
pub fn make_witness(q: f64, n: usize) -> Result<WitnessPair> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("witness needs n >= 2, got {n}")));
    }
    let params = bound_c(q)?;
    let a = ComplexMatrix::diag_real(&[params.sqrt_c_minus_1(), -params.eps1() * params.sqrt_c_minus_q()]);
    let b = ComplexMatrix::unit(2, 0, 1);
    Ok(WitnessPair {
        a: a.embed(n),
        b: b.embed(n),
        params,
    })
}
