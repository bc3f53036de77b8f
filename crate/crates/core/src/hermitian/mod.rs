//! Dense complex Hermitian matrices: inertia, Stein equations, Schur complements.

mod inertia;
mod ldl;
mod matrix;
mod schur;
mod stein;

pub use inertia::{inertia, inertia_of_eigenvalues, Inertia, TolerancePolicy};
pub use ldl::inertia_ldl;
pub use matrix::{HermitianMatrix, ASYMMETRY_LIMIT};
pub use schur::{max_nonsingular_principal_submatrix, schur_complement, SchurComplement};
pub use stein::{
    solve_stein, solve_stein_bidiagonal, spectral_radius, stein_residual, SteinData,
    SPECTRAL_MARGIN, STEIN_RESIDUAL_FACTOR,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix has a non-finite entry")]
    NonFinite,
    #[error("asymmetry {residual:e} exceeds {limit:e}")]
    Asymmetric { residual: f64, limit: f64 },
    #[error("eigen-solver did not converge (dimension {dim}, residual {residual:e})")]
    NoConvergence { dim: usize, residual: f64 },
    #[error("spectral radius {radius} of the state matrix is not below 1")]
    SpectralRadius { radius: f64 },
    #[error("Stein residual {residual:e} exceeds bound {bound:e}")]
    SteinResidual { residual: f64, bound: f64 },
    #[error("linear system is singular")]
    Singular,
    #[error(
        "leading block is singular (smallest |eigenvalue| {smallest:e} <= {tol:e}); \
         select a nonsingular principal submatrix first"
    )]
    SingularBlock { smallest: f64, tol: f64 },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
}
