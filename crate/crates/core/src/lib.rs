//! Distances to a common null space and lower bounds on the distance to
//! singularity for structured matrix pencils and matrix polynomials.
//!
//! Data-parallel loops (multistart, sampling, per-λ evaluation) run on rayon
//! with the default `parallel` feature and sequentially without it.

pub mod backward;
pub mod dh;
pub mod error;
pub mod linalg;
pub mod mapping;
pub mod model;
pub mod nullspace;
pub mod optimize;
pub mod oracle;
pub mod par;
pub mod poly;
pub mod random;

#[cfg(test)]
mod test_util;

pub use backward::{
    choose_lambda_family, delta_a_lower, delta_e_lower, delta_lower_bound, eta_for, eta_hermitian,
    eta_palindromic, eta_related, eta_unstructured, BackwardErrorResult, LambdaFamily, LowerBound,
};
pub use dh::{dh_delta0, dh_frobenius_norm_of_optimum, DhKind};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, LinalgError, C64};
pub use model::{DhTriple, DistanceReport, MatrixPolynomial, Star, StructureTag, StructuredPencil};
pub use nullspace::{
    delta0_a_only, delta0_e_only, delta0_palindromic, delta0_structured, delta0_unstructured,
};
pub use oracle::{
    sample_null_space_upper_bound, singularity_probe, verify_common_null, OracleOptions,
    OracleProblem,
};
pub use poly::{poly_delta0, poly_delta0_palindromic, PalindromicPolyReport};
