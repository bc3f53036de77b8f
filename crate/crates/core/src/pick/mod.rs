//! Pick matrices and negative-square profiles.

mod build;
mod profile;
mod region;

pub use build::{
    build_pick, conditioned_pick, pick_inertia, pick_matrix_from_values, Conditioned, PickInertia,
    PickMatrixResult, DEFAULT_LINK_RADIUS,
};
pub use profile::{
    kn_profile, kn_profile_with, link_radius_for, plateau_of, Plateau, ProfileEntry, ProfileResult, SearchBudget,
    MIN_POLE_MODULUS,
};
pub use region::{Region, WHOLE_DISK_SAMPLE_RADIUS};

use thiserror::Error;

use crate::hermitian::LinalgError;
use crate::model::ModelError;
use crate::C64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PickError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("node {index} ({z}) is an undefined pole of the function")]
    NodeAtPole { index: usize, z: C64 },
    #[error("invalid region: {0}")]
    BadRegion(String),
    #[error("no admissible node found in the region")]
    EmptyRegion,
    #[error("n_max must be at least 1")]
    BadNMax,
    #[error("degenerate node configuration")]
    Degenerate,
    #[error("negative count {count} at n = {n} exceeds the bound {bound}")]
    UpperBound { n: usize, count: usize, bound: usize },
}

impl PickError {
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            PickError::Model(_)
                | PickError::NodeAtPole { .. }
                | PickError::BadRegion(_)
                | PickError::EmptyRegion
                | PickError::BadNMax
        )
    }
}
