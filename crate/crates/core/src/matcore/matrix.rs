use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix stored column-major.
///
/// Column-major storage makes [`ComplexMatrix::vec`] a plain copy of the
/// backing buffer: entry `(i, j)` sits at index `i + j * n`.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from column-major data, rejecting non-finite entries.
    pub fn from_col_major(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if data.len() != n * n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        if let Some(idx) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                row: idx % n,
                col: idx / n,
            });
        }
        Ok(Self { n, data })
    }

    /// Builds a matrix from rows, as read from a text file.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Self::from_col_major(n, (0..n * n).map(|k| rows[k % n][k / n]).collect())
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(n > 0, "dimension must be positive");
        let data = (0..n * n).map(|k| f(k % n, k / n)).collect();
        Self { n, data }
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_fn(n, |_, _| ZERO)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { ONE } else { ZERO })
    }

    /// Matrix unit `e_ij` (zero-based indices).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        assert!(i < n && j < n, "matrix unit index out of range");
        Self::from_fn(n, |r, c| if r == i && c == j { ONE } else { ZERO })
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        Self::from_fn(entries.len(), |i, j| if i == j { entries[i] } else { ZERO })
    }

    pub fn diag_real(entries: &[f64]) -> Self {
        let entries: Vec<_> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::diag(&entries)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i + j * self.n]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.data[i + j * self.n] = z;
    }

    pub fn as_col_major(&self) -> &[Complex64] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i))
    }

    pub fn conj(&self) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * alpha).collect(),
        }
    }

    /// Copies `self` into the top-left block of an `m × m` zero matrix.
    pub fn embed(&self, m: usize) -> Self {
        assert!(m >= self.n, "cannot embed into a smaller matrix");
        Self::from_fn(m, |i, j| if i < self.n && j < self.n { self.get(i, j) } else { ZERO })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Checked product; the `*` operator panics on mismatch instead.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        check_same_dim(self, rhs)?;
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let n = self.n;
        let mut out = vec![ZERO; n * n];
        for j in 0..n {
            let col = &mut out[j * n..(j + 1) * n];
            for k in 0..n {
                let b = rhs.data[k + j * n];
                if b == ZERO {
                    continue;
                }
                let a_col = &self.data[k * n..(k + 1) * n];
                for (o, a) in col.iter_mut().zip(a_col) {
                    *o += a * b;
                }
            }
        }
        Self { n, data: out }
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        Self {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }
}

pub(crate) fn check_same_dim(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch {
            expected: a.n,
            found: b.n,
        });
    }
    Ok(())
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: Self) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        self.mul_unchecked(rhs)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: Self) -> ComplexMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: Self) -> ComplexMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.n, self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| format!("{:.6}", self.get(i, j))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Hilbert-Schmidt inner product `tr(A* B)`, conjugate-linear in `a`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    check_same_dim(a, b)?;
    Ok(a.data.iter().zip(&b.data).map(|(x, y)| x.conj() * y).sum())
}

/// Squared Frobenius norm.
pub fn fro_norm_sq(a: &ComplexMatrix) -> f64 {
    a.data.iter().map(|z| z.norm_sqr()).sum()
}

/// `[A, B] = AB - BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    q_commutator(a, b, 1.0)
}

/// `[A, B]_q = AB - q BA`.
pub fn q_commutator(a: &ComplexMatrix, b: &ComplexMatrix, q: f64) -> Result<ComplexMatrix> {
    check_same_dim(a, b)?;
    let ab = a * b;
    if q == 0.0 {
        return Ok(ab);
    }
    let ba = b * a;
    Ok(ab.zip_with(&ba, |x, y| x - y * q))
}

/// Column-stacking vectorization: entry `(i, j)` maps to index `i + j n`.
pub fn vec(a: &ComplexMatrix) -> Vec<Complex64> {
    a.data.clone()
}

/// Inverse of [`vec`].
pub fn unvec(v: &[Complex64], n: usize) -> Result<ComplexMatrix> {
    ComplexMatrix::from_col_major(n, v.to_vec())
}

/// Kronecker product `X ⊗ Y` of two square matrices.
///
/// With the column-stacking convention, `vec(X A Y) = (Yᵀ ⊗ X) vec(A)`.
pub fn kron(x: &ComplexMatrix, y: &ComplexMatrix) -> ComplexMatrix {
    let (nx, ny) = (x.n, y.n);
    ComplexMatrix::from_fn(nx * ny, |r, c| x.get(r / ny, c / ny) * y.get(r % ny, c % ny))
}
