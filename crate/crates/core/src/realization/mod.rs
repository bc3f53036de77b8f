//! State-space realizations: the J-unitary `Θ` built from Pick data and
//! Blaschke products realized from Jordan state matrices.

mod blaschke;
mod theta;

pub use blaschke::{realize_blaschke, BlaschkeRealization};
pub use theta::{build_theta, signature_j, ThetaRealization, PICK_INVERTIBILITY};

use thiserror::Error;

use crate::hermitian::LinalgError;
use crate::model::ModelError;
use crate::pick::PickError;
use crate::C64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RealizationError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Pick(#[from] PickError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("at least one node is required")]
    NoNodes,
    #[error(
        "Pick matrix is singular (smallest |eigenvalue| {smallest:e} <= {tol:e}); \
         restrict to a maximal nonsingular principal submatrix first"
    )]
    SingularPick { smallest: f64, tol: f64 },
    #[error("Stein identity residual {residual:e} exceeds {bound:e}")]
    SteinIdentity { residual: f64, bound: f64 },
    #[error("d(z) = θ21 f - θ11 vanishes at {z} (|d| = {modulus:e})")]
    Singularity { z: C64, modulus: f64 },
    #[error("F has a pole at {z}")]
    PoleOfF { z: C64 },
    #[error("Gram matrix of the Blaschke realization is not positive definite")]
    NotPositiveDefinite,
}

impl RealizationError {
    pub fn is_validation(&self) -> bool {
        match self {
            RealizationError::Model(_) | RealizationError::NoNodes | RealizationError::SingularPick { .. } => true,
            RealizationError::Pick(e) => e.is_validation(),
            _ => false,
        }
    }
}
