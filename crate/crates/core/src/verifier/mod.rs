//! Numerical verification of the identities and decompositions that prove the
//! bound for `n = 2` and for normal `A`, plus random sampling of the bound.

mod identities;
mod index_sets;
mod report;
mod sampling;
mod suite;

pub use identities::{
    check_decomposition, check_decomposition_params, check_lemma1, check_lemma1_params, check_n2_identity,
    check_n2_identity_params, check_normal_reduction, check_normal_reduction_params, decomposition_residuals,
    lemma1_residual, n2_residuals, normal_reduction, DecompositionResiduals, N2Groups, N2Residuals, NormalReduction,
    TOL_DECOMPOSITION, TOL_LEMMA1, TOL_N2, TOL_NORMAL,
};
pub use index_sets::{enumerate_index_sets, IndexQuadruple, IndexSet, IndexSets};
pub use report::IdentityReport;
pub use sampling::{sample_bound, Ensemble, TOL_SAMPLE};
pub use suite::{
    partition_report, special_case_residuals, Check, VerifySuite, IDENTITY_Q_GRID, TOL_SPECIAL, TOL_SUITE_SAMPLE,
};
