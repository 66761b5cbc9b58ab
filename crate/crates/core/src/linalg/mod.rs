//! Dense complex linear algebra used by the distance computations.

mod decomp;
mod eig;
mod matrix;
mod svd;
pub mod vector;

pub use decomp::{cholesky, congruence_inverse, inverse, lu, solve_lower, solve_lower_adjoint, Lu};
pub use eig::{
    check_hermitian, eigvalsh, hermitian_eig, lambda_max, lambda_min, EigenDecomposition,
    HERMITIAN_TOL,
};
pub use matrix::{ComplexMatrix, C64, I};
pub use svd::{
    kernel, kernel_intersection, null_space_basis, sigma_min, singular_values, svd, Svd,
    DEFAULT_RANK_TOL,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },
    #[error("matrix is not positive definite (pivot {pivot:.3e})")]
    NotPositiveDefinite { pivot: f64 },
    #[error("matrix is numerically singular")]
    Singular,
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("non-finite entry")]
    NonFinite,
    #[error("zero vector")]
    ZeroVector,
}

/// Numerical rank with relative threshold `tol`.
pub fn rank(m: &ComplexMatrix, tol: f64) -> Result<usize, LinalgError> {
    let s = singular_values(m)?;
    let smax = s.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return Ok(0);
    }
    Ok(s.iter().filter(|&&x| x > tol * smax).count())
}
