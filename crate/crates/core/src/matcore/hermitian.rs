use faer::{Mat, Side};
use num_complex::Complex64;

use super::matrix::{fro_norm_sq, ComplexMatrix};
use crate::error::{Error, Result};

/// Relative residual bound every returned eigenpair must satisfy.
pub const EIG_RESIDUAL_TOL: f64 = 1e-10;

/// Hermitian matrix acting on vectorized `n × n` matrices (`dim = n²`).
///
/// Construction symmetrizes `(M + M*) / 2`, so `entry(i, j) == conj(entry(j, i))`
/// holds exactly.
#[derive(Clone, Debug)]
pub struct HermitianForm {
    inner: ComplexMatrix,
}

impl HermitianForm {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let dim = m.n();
        let half = Complex64::new(0.5, 0.0);
        let mut inner = ComplexMatrix::zeros(dim);
        for j in 0..dim {
            inner.set(j, j, Complex64::new(m.get(j, j).re, 0.0));
            for i in j + 1..dim {
                let z = (m.get(i, j) + m.get(j, i).conj()) * half;
                inner.set(i, j, z);
                inner.set(j, i, z.conj());
            }
        }
        Self { inner }
    }

    pub fn dim(&self) -> usize {
        self.inner.n()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.inner.get(i, j)
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.inner
    }

    pub fn fro_norm(&self) -> f64 {
        fro_norm_sq(&self.inner).sqrt()
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let dim = self.dim();
        assert_eq!(v.len(), dim, "vector length must equal form dimension");
        let data = self.inner.as_col_major();
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for (j, &vj) in v.iter().enumerate() {
            for (o, h) in out.iter_mut().zip(&data[j * dim..(j + 1) * dim]) {
                *o += h * vj;
            }
        }
        out
    }

    /// `v* H v`, real for Hermitian `H`.
    pub fn quad_form(&self, v: &[Complex64]) -> f64 {
        let hv = self.apply(v);
        v.iter().zip(&hv).map(|(a, b)| (a.conj() * b).re).sum()
    }

    /// Largest eigenvalue and a unit eigenvector, from a full dense decomposition.
    ///
    /// The pair is checked against `‖Hv − λv‖ ≤ 1e-10 ‖H‖_F` before it is returned.
    pub fn top_eigpair(&self) -> Result<(f64, Vec<Complex64>)> {
        let dim = self.dim();
        let mat = Mat::<faer::c64>::from_fn(dim, dim, |i, j| self.inner.get(i, j));
        let evd = mat
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Eigen(format!("{e:?}")))?;
        let values = evd.S().column_vector();
        let mut top = 0;
        for k in 1..dim {
            if values[k].re > values[top].re {
                top = k;
            }
        }
        let lambda = values[top].re;
        let u = evd.U();
        let mut v: Vec<Complex64> = (0..dim).map(|i| u[(i, top)]).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !lambda.is_finite() || !norm.is_finite() || norm == 0.0 {
            return Err(Error::Eigen("non-finite eigenpair".into()));
        }
        v.iter_mut().for_each(|z| *z /= norm);

        let hv = self.apply(&v);
        let residual = hv
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b * lambda).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let bound = EIG_RESIDUAL_TOL * self.fro_norm();
        if residual > bound && residual > f64::MIN_POSITIVE {
            return Err(Error::Eigen(format!("residual {residual:.3e} exceeds {bound:.3e}")));
        }
        Ok((lambda, v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetrization_is_exact() {
        let m = ComplexMatrix::from_fn(3, |i, j| Complex64::new(i as f64 + 0.1, j as f64 - 0.7));
        let h = HermitianForm::from_matrix(&m);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(h.entry(i, j), h.entry(j, i).conj());
            }
        }
    }

    #[test]
    fn diagonal_top_pair() {
        let h = HermitianForm::from_matrix(&ComplexMatrix::diag_real(&[3.0, 1.0, 1.0]));
        let (lambda, v) = h.top_eigpair().unwrap();
        assert!((lambda - 3.0).abs() < 1e-14);
        assert!((v[0].norm() - 1.0).abs() < 1e-14);
        assert!(v[1].norm() < 1e-14 && v[2].norm() < 1e-14);
    }

    #[test]
    fn negative_scalar() {
        let h = HermitianForm::from_matrix(&ComplexMatrix::identity(4).scale(Complex64::new(-1.0, 0.0)));
        let (lambda, v) = h.top_eigpair().unwrap();
        assert!((lambda + 1.0).abs() < 1e-14);
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_form() {
        let h = HermitianForm::from_matrix(&ComplexMatrix::zeros(3));
        let (lambda, _) = h.top_eigpair().unwrap();
        assert_eq!(lambda, 0.0);
    }
}
