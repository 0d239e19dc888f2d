//! Floating-point checks of the algebraic identities behind the bound.
//!
//! Every sum is a direct loop over its index range or index set; nothing is
//! simplified algebraically, so each check is an independent second evaluation of
//! `c‖A‖²‖B‖² − f(A,B;q)`.

use num_complex::Complex64;

use super::index_sets::{enumerate_index_sets, IndexSet, IndexSets};
use super::report::IdentityReport;
use crate::error::{Error, Result};
use crate::functionals::{bound_c, f_func, QParams};
use crate::matcore::{check_same_dim, fro_norm_sq, ComplexMatrix};

pub const TOL_LEMMA1: f64 = 1e-12;
pub const TOL_DECOMPOSITION: f64 = 1e-10;
pub const TOL_N2: f64 = 1e-10;
pub const TOL_NORMAL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `|x − y| / scale`, or the absolute difference when `scale` is zero.
pub(crate) fn rel_residual(x: f64, y: f64, scale: f64) -> f64 {
    let d = (x - y).abs();
    if d == 0.0 {
        0.0
    } else if scale > 0.0 {
        d / scale
    } else {
        d
    }
}

/// Largest absolute residual of the two sign-constant identities.
pub fn lemma1_residual(p: &QParams) -> f64 {
    let (r1, r2) = p.identity_residuals();
    r1.abs().max(r2.abs())
}

pub fn check_lemma1(q: f64) -> Result<IdentityReport> {
    Ok(check_lemma1_params(&bound_c(q)?))
}

pub fn check_lemma1_params(p: &QParams) -> IdentityReport {
    IdentityReport::single("lemma1", lemma1_residual(p), TOL_LEMMA1)
}

/// Terms shared by the index-sum expansions, for one `(A, B)`.
struct Expansion<'a> {
    a: &'a ComplexMatrix,
    b: &'a ComplexMatrix,
    n: usize,
}

impl<'a> Expansion<'a> {
    fn new(a: &'a ComplexMatrix, b: &'a ComplexMatrix) -> Self {
        Self { a, b, n: a.n() }
    }

    #[inline]
    fn a(&self, i: usize, j: usize) -> Complex64 {
        self.a.get(i, j)
    }

    #[inline]
    fn b(&self, i: usize, j: usize) -> Complex64 {
        self.b.get(i, j)
    }

    /// `Σ_{(i,j,k,l) ∈ S} |a_ij|² |b_kl|²`.
    fn weight(&self, sets: &IndexSets, set: IndexSet) -> f64 {
        sets.get(set)
            .iter()
            .map(|t| self.a(t.i, t.j).norm_sqr() * self.b(t.k, t.l).norm_sqr())
            .sum()
    }

    fn weight_d0(&self, sets: &IndexSets) -> f64 {
        sets.d0
            .iter()
            .map(|t| self.a(t.i, t.j).norm_sqr() * self.b(t.k, t.l).norm_sqr())
            .sum()
    }

    /// `a_ij ā_kj b_li b̄_lk`
    fn t1(&self, i: usize, j: usize, k: usize, l: usize) -> Complex64 {
        self.a(i, j) * self.a(k, j).conj() * self.b(l, i) * self.b(l, k).conj()
    }

    /// `a_ij ā_il b_jk b̄_lk`
    fn t2(&self, i: usize, j: usize, k: usize, l: usize) -> Complex64 {
        self.a(i, j) * self.a(i, l).conj() * self.b(j, k) * self.b(l, k).conj()
    }

    /// `a_ij ā_lk b_jk b̄_il`
    fn t3(&self, i: usize, j: usize, k: usize, l: usize) -> Complex64 {
        self.a(i, j) * self.a(l, k).conj() * self.b(j, k) * self.b(i, l).conj()
    }

    /// `a_ij ā_kl b_ji b̄_lk`
    fn t_cross(&self, i: usize, j: usize, k: usize, l: usize) -> Complex64 {
        self.a(i, j) * self.a(k, l).conj() * self.b(j, i) * self.b(l, k).conj()
    }

    fn quads(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> {
        let n = self.n;
        (0..n * n * n * n).map(move |x| (x / (n * n * n), (x / (n * n)) % n, (x / n) % n, x % n))
    }

    /// `Σ_{i≠k} |√(c−q) (AB)_ik + ε₁ √(c−1) (BA)_ik|²`
    fn off_diagonal_modulus_sum(&self, p: &QParams) -> f64 {
        let n = self.n;
        let (sq, s1) = (p.sqrt_c_minus_q(), p.sqrt_c_minus_1());
        let mut total = 0.0;
        for i in 0..n {
            for k in 0..n {
                if i == k {
                    continue;
                }
                let mut ab = ZERO;
                let mut ba = ZERO;
                for j in 0..n {
                    ab += self.a(i, j) * self.b(j, k);
                    ba += self.a(j, k) * self.b(i, j);
                }
                total += (ab * sq + ba * (p.eps1() * s1)).norm_sqr();
            }
        }
        total
    }

    /// `Σ_{i≠k, j} a_ij ā_kj b_ji b̄_jk`, `Σ_{j≠l, i} a_ij ā_il b_ji b̄_li`,
    /// `Σ_{i,j,l not all equal} Re(a_ij ā_li b_ji b̄_il)`.
    fn three_index_tail(&self) -> (f64, f64, f64) {
        let n = self.n;
        let (mut v1, mut v2, mut v3) = (ZERO, ZERO, 0.0);
        for i in 0..n {
            for j in 0..n {
                for x in 0..n {
                    if i != x {
                        v1 += self.a(i, j) * self.a(x, j).conj() * self.b(j, i) * self.b(j, x).conj();
                    }
                    if j != x {
                        v2 += self.a(i, j) * self.a(i, x).conj() * self.b(j, i) * self.b(x, i).conj();
                    }
                    if !(i == j && j == x) {
                        v3 += (self.a(i, j) * self.a(x, i).conj() * self.b(j, i) * self.b(i, x).conj()).re;
                    }
                }
            }
        }
        (v1.re, v2.re, v3)
    }
}

/// Residuals of the three decompositions of `c‖A‖²‖B‖² − f(A,B;q)`, each
/// relative to `‖A‖²‖B‖²`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DecompositionResiduals {
    /// Weighted `D1..D4` sums minus the three off-diagonal index sums.
    pub index_form: f64,
    /// Squared-modulus sum plus the `D4`/`D1` sums and remaining index sums.
    pub squared_form: f64,
    /// The squared-modulus sum against its index-sum expansion.
    pub modulus_expansion: f64,
}

impl DecompositionResiduals {
    pub fn max(&self) -> f64 {
        self.index_form.max(self.squared_form).max(self.modulus_expansion)
    }
}

pub fn decomposition_residuals(a: &ComplexMatrix, b: &ComplexMatrix, p: &QParams) -> Result<DecompositionResiduals> {
    check_same_dim(a, b)?;
    let sets = enumerate_index_sets(a.n());
    decomposition_residuals_with(a, b, p, &sets)
}

pub(crate) fn decomposition_residuals_with(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    p: &QParams,
    sets: &IndexSets,
) -> Result<DecompositionResiduals> {
    let (q, c) = (p.q(), p.c());
    let scale = fro_norm_sq(a) * fro_norm_sq(b);
    let direct = c * scale - f_func(a, b, q)?;
    let e = Expansion::new(a, b);

    let w1 = e.weight(sets, IndexSet::D1);
    let w2 = e.weight(sets, IndexSet::D2);
    let w3 = e.weight(sets, IndexSet::D3);
    let w4 = e.weight(sets, IndexSet::D4);

    let (mut t1_ik, mut t2_jl, mut t3_not_diag) = (ZERO, ZERO, 0.0);
    let (mut t1_both, mut t2_both, mut t3_ik) = (ZERO, ZERO, ZERO);
    for (i, j, k, l) in e.quads() {
        let (x1, x2, x3) = (e.t1(i, j, k, l), e.t2(i, j, k, l), e.t3(i, j, k, l));
        if i != k {
            t1_ik += x1;
            t3_ik += x3;
        }
        if j != l {
            t2_jl += x2;
        }
        if i != k && j != l {
            t1_both += x1;
            t2_both += x2;
        }
        if !(i == j && j == k && k == l) {
            t3_not_diag += x3.re;
        }
    }

    let index_rhs =
        c * w4 + (c - 1.0) * w2 + (c - q) * w3 + (c - 1.0 - q) * w1 - t1_ik.re - q * t2_jl.re + (1.0 + q) * t3_not_diag;

    let lhs_mod = e.off_diagonal_modulus_sum(p);
    let rhs_mod = (c - 1.0) * w2 + (c - q) * w3 + (c - 1.0) * t1_both.re + (c - q) * t2_both.re + (1.0 + q) * t3_ik.re;

    let (v1, v2, v3) = e.three_index_tail();
    let squared_rhs = lhs_mod + c * w4 + (c - 1.0 - q) * w1 - c * (t1_both + t2_both).re - v1 - q * v2 + (1.0 + q) * v3;

    Ok(DecompositionResiduals {
        index_form: rel_residual(direct, index_rhs, scale),
        squared_form: rel_residual(direct, squared_rhs, scale),
        modulus_expansion: rel_residual(lhs_mod, rhs_mod, scale),
    })
}

pub fn check_decomposition(a: &ComplexMatrix, b: &ComplexMatrix, q: f64) -> Result<IdentityReport> {
    check_decomposition_params(a, b, &bound_c(q)?)
}

pub fn check_decomposition_params(a: &ComplexMatrix, b: &ComplexMatrix, p: &QParams) -> Result<IdentityReport> {
    let r = decomposition_residuals(a, b, p)?;
    Ok(IdentityReport::single("decomposition", r.max(), TOL_DECOMPOSITION))
}

/// The three squared-modulus groups that sum to `c‖A‖²‖B‖² − f` for `n = 2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct N2Groups {
    /// `Σ_{i≠k} |√(c−q)(AB)_ik + ε₁√(c−1)(BA)_ik|²`
    pub off_diagonal: f64,
    /// `c |a11 b̄22 + a22 b̄11 − a12 b̄12 − a21 b̄21|²`
    pub cross: f64,
    /// `|√c a11 b11 − √c a22 b22 + ε₂ √(c−1−q)(a12 b21 − a21 b12)|²`
    pub diagonal: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct N2Residuals {
    pub groups: N2Groups,
    /// `c‖A‖²‖B‖² − f` against the sum of the three groups.
    pub total: f64,
    /// Expansion of `|a11 b̄22 + …|²` as index sums.
    pub cross_expansion: f64,
    /// Direct side against the intermediate index-sum form.
    pub form2: f64,
    /// Remainder after two groups, written out term by term, against the last group.
    pub remainder: f64,
}

impl N2Residuals {
    pub fn max(&self) -> f64 {
        self.total.max(self.cross_expansion).max(self.form2).max(self.remainder)
    }
}

pub fn n2_residuals(a: &ComplexMatrix, b: &ComplexMatrix, p: &QParams) -> Result<N2Residuals> {
    check_same_dim(a, b)?;
    if a.n() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: a.n(),
        });
    }
    let (q, c) = (p.q(), p.c());
    let scale = fro_norm_sq(a) * fro_norm_sq(b);
    let direct = c * scale - f_func(a, b, q)?;
    let sets = enumerate_index_sets(2);
    let e = Expansion::new(a, b);
    let (a11, a12, a21, a22) = (a.get(0, 0), a.get(0, 1), a.get(1, 0), a.get(1, 1));
    let (b11, b12, b21, b22) = (b.get(0, 0), b.get(0, 1), b.get(1, 0), b.get(1, 1));

    let off_diagonal = e.off_diagonal_modulus_sum(p);
    let g2 = a11 * b22.conj() + a22 * b11.conj() - a12 * b12.conj() - a21 * b21.conj();
    let cross = c * g2.norm_sqr();
    let sc = c.max(0.0).sqrt();
    let g3 = a11 * b11 * sc - a22 * b22 * sc + (a12 * b21 - a21 * b12) * (p.eps2() * p.sqrt_c_minus_1_minus_q());
    let diagonal = g3.norm_sqr();

    // |g2|² = Σ_{D4∖D0} − Σ_{i≠k, j≠l} (t1 + t2 − t_cross)
    let w4_minus_d0 = e.weight(&sets, IndexSet::D4) - e.weight_d0(&sets);
    let mut both = ZERO;
    let mut cross_both = ZERO;
    for (i, j, k, l) in e.quads() {
        if i != k && j != l {
            both += e.t1(i, j, k, l) + e.t2(i, j, k, l);
            cross_both += e.t_cross(i, j, k, l);
        }
    }
    let g2_expanded = w4_minus_d0 - (both - cross_both).re;

    let (v1, v2, v3) = e.three_index_tail();
    let form2_rhs = off_diagonal + cross + c * e.weight_d0(&sets) + (c - 1.0 - q) * e.weight(&sets, IndexSet::D1)
        - c * cross_both.re
        - v1
        - q * v2
        + (1.0 + q) * v3;

    let re = |z: Complex64| z.re;
    let remainder_terms = c * (a11.norm_sqr() * b11.norm_sqr() + a22.norm_sqr() * b22.norm_sqr())
        + (c - 1.0 - q) * (a12.norm_sqr() * b21.norm_sqr() + a21.norm_sqr() * b12.norm_sqr())
        - 2.0 * c * re(a11 * a22.conj() * b11 * b22.conj())
        - 2.0 * (c - 1.0 - q) * re(a12 * a21.conj() * b21 * b12.conj())
        + (1.0 - q)
            * re(
                -a11 * a21.conj() * b11 * b12.conj() - a12 * a22.conj() * b21 * b22.conj()
                    + a11 * a12.conj() * b11 * b21.conj()
                    + a21 * a22.conj() * b12 * b22.conj(),
            );

    Ok(N2Residuals {
        groups: N2Groups {
            off_diagonal,
            cross,
            diagonal,
        },
        total: rel_residual(direct, off_diagonal + cross + diagonal, scale),
        cross_expansion: rel_residual(g2.norm_sqr(), g2_expanded, scale),
        form2: rel_residual(direct, form2_rhs, scale),
        remainder: rel_residual(direct - off_diagonal - cross, remainder_terms, scale).max(rel_residual(
            remainder_terms,
            diagonal,
            scale,
        )),
    })
}

pub fn check_n2_identity(a: &ComplexMatrix, b: &ComplexMatrix, q: f64) -> Result<IdentityReport> {
    check_n2_identity_params(a, b, &bound_c(q)?)
}

pub fn check_n2_identity_params(a: &ComplexMatrix, b: &ComplexMatrix, p: &QParams) -> Result<IdentityReport> {
    let r = n2_residuals(a, b, p)?;
    Ok(IdentityReport::single("n2_identity", r.max(), TOL_N2))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalReduction {
    /// `f(diag(a), B; q)` against `Σ_{i≠j} |b_ji|² (|a_i|² + q|a_j|² − (1+q) Re(a_i ā_j))`.
    pub explicit_sum: f64,
    /// Per-pair bracket `(c−1)|a_i|² + (c−q)|a_j|² + (1+q)Re(a_i ā_j)` against
    /// `|√(c−1) a_i + ε₁ √(c−q) a_j|²`.
    pub bracket: f64,
    /// `Σ_{i≠j} |b_ji|² |√(c−1) a_i + ε₁ √(c−q) a_j|²`.
    pub chain: f64,
    /// `c‖A‖²‖B‖² − f − chain`; non-negative when the chain holds.
    pub chain_slack: f64,
    pub scale: f64,
}

impl NormalReduction {
    pub fn max_residual(&self) -> f64 {
        let slack_violation = if self.chain_slack < 0.0 {
            rel_residual(self.chain_slack, 0.0, self.scale)
        } else {
            0.0
        };
        self.explicit_sum.max(self.bracket).max(slack_violation)
    }
}

pub fn normal_reduction(diag: &[Complex64], b: &ComplexMatrix, p: &QParams) -> Result<NormalReduction> {
    let n = diag.len();
    if b.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.n(),
        });
    }
    let (q, c) = (p.q(), p.c());
    let a = ComplexMatrix::diag(diag);
    let scale = fro_norm_sq(&a) * fro_norm_sq(b);
    let f = f_func(&a, b, q)?;
    let (s1, sq) = (p.sqrt_c_minus_1(), p.sqrt_c_minus_q());

    let mut explicit = 0.0;
    let mut chain = 0.0;
    let mut bracket: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (ai, aj) = (diag[i], diag[j]);
            let w = b.get(j, i).norm_sqr();
            let cross = (ai * aj.conj()).re;
            explicit += w * (ai.norm_sqr() + q * aj.norm_sqr() - (1.0 + q) * cross);
            let square = (ai * s1 + aj * (p.eps1() * sq)).norm_sqr();
            chain += w * square;
            let expanded = (c - 1.0) * ai.norm_sqr() + (c - q) * aj.norm_sqr() + (1.0 + q) * cross;
            bracket = bracket.max(rel_residual(expanded, square, ai.norm_sqr() + aj.norm_sqr()));
        }
    }
    Ok(NormalReduction {
        explicit_sum: rel_residual(f, explicit, scale),
        bracket,
        chain,
        chain_slack: c * scale - f - chain,
        scale,
    })
}

pub fn check_normal_reduction(diag: &[Complex64], b: &ComplexMatrix, q: f64) -> Result<IdentityReport> {
    check_normal_reduction_params(diag, b, &bound_c(q)?)
}

pub fn check_normal_reduction_params(diag: &[Complex64], b: &ComplexMatrix, p: &QParams) -> Result<IdentityReport> {
    let r = normal_reduction(diag, b, p)?;
    Ok(IdentityReport::single("normal_reduction", r.max_residual(), TOL_NORMAL))
}
