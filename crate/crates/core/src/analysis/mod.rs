//! Classification, witness placement and sampling tests built on the Pick engine.

pub mod classify;
pub mod hindmarsh;
pub mod verify;
pub mod witness;

pub use classify::{find_n, plateau_classify, plateau_classify_with, BoundCheck, ClassificationReport, NResult};
pub use hindmarsh::{hindmarsh_test, DiskFunction, HindmarshOutcome};
pub use verify::{plan_inertia, verify_witness, WitnessVerification, DEFAULT_SHRINK_ROUNDS};
pub use witness::{max_epsilon, witness_plan, WitnessPlan};

use thiserror::Error;

use crate::pick::PickError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error(transparent)]
    Pick(#[from] PickError),
    #[error("epsilon {epsilon} is not below the admissible maximum {max}")]
    EpsilonTooLarge { epsilon: f64, max: f64 },
    #[error("{count} negative squares exceed the bound {bound}")]
    AboveBound { count: usize, bound: usize },
    #[error("witness plan did not reach the expected inertia; (epsilon, negatives) trajectory {trajectory:?}")]
    WitnessFailed { trajectory: Vec<(f64, usize)> },
    #[error("only {found} admissible sample points in the region; need 3")]
    InsufficientPoints { found: usize },
}

impl AnalysisError {
    pub fn is_validation(&self) -> bool {
        match self {
            AnalysisError::Pick(e) => e.is_validation(),
            AnalysisError::EpsilonTooLarge { .. } | AnalysisError::InsufficientPoints { .. } => true,
            AnalysisError::AboveBound { .. } | AnalysisError::WitnessFailed { .. } => false,
        }
    }
}
