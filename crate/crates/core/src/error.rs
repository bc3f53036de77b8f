use thiserror::Error;

use crate::analysis::AnalysisError;
use crate::divdiff::DivDiffError;
use crate::hermitian::LinalgError;
use crate::model::ModelError;
use crate::pick::PickError;
use crate::realization::RealizationError;

/// Crate-level error, one variant per module.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Pick(#[from] PickError),
    #[error(transparent)]
    DivDiff(#[from] DivDiffError),
    #[error(transparent)]
    Realization(#[from] RealizationError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

impl Error {
    /// True for errors caused by invalid input rather than numerical breakdown.
    pub fn is_validation(&self) -> bool {
        match self {
            Error::Model(_) => true,
            Error::Pick(e) => e.is_validation(),
            Error::DivDiff(e) => !matches!(e, DivDiffError::Evaluation { .. }),
            Error::Analysis(e) => e.is_validation(),
            Error::Realization(e) => e.is_validation(),
            _ => false,
        }
    }
}
