//! Function classes on the unit disk: Schur functions, Blaschke products and
//! standard functions `S/B` with jumps.

mod blaschke;
mod point;
mod schur;
mod spec;
mod standard;

pub use blaschke::BlaschkeProduct;
pub use point::{PointConfig, UnitDiskPoint, DISK_MARGIN, MIN_SEPARATION};
pub use schur::{quasi_random_disk, SchurPart, SUP_SLACK};
pub use spec::{FunctionSpec, JumpSpec, SchurSpec, ZeroSpec, SPEC_VERSION};
pub use standard::{Counts, Jump, StandardFunction, COMMON_ZERO_TOL, JUMP_MARGIN};

use thiserror::Error;

use crate::C64;

/// Which condition of the standard-function definition a check enforces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Clause {
    /// Jump points and undefined poles are pairwise distinct and disjoint.
    Distinct = 1,
    /// Undefined poles lie among the zeros of `B`, every zero of `B` is an
    /// undefined pole or a jump, and `S` and `B` share no zero.
    Poles = 2,
    /// A jump off the zeros of `B` changes the value of `S/B`.
    GenuineJump = 3,
}

impl std::fmt::Display for Clause {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Clause::Distinct => "distinct points",
            Clause::Poles => "pole structure",
            Clause::GenuineJump => "genuine jump",
        };
        write!(f, "clause {} ({name})", *self as u8)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("point {0} is not inside the open unit disk")]
    OutsideDisk(C64),
    #[error("points {i} and {j} are {distance:e} apart")]
    NotDistinct { i: usize, j: usize, distance: f64 },
    #[error("value {0} is not unimodular")]
    NotUnimodular(C64),
    #[error("multiplicity must be positive")]
    ZeroMultiplicity,
    #[error("not a Schur function: supremum bound {bound}")]
    NotSchur { bound: f64 },
    #[error("scale factor {0} is outside [0, 1]")]
    BadScale(f64),
    #[error("{clause} violated: {detail}")]
    Definition { clause: Clause, detail: String },
    #[error("S and B share the zero {0}")]
    CommonZero(C64),
    #[error("undefined at pole {0}")]
    UndefinedAtPole(C64),
    #[error("overflow evaluating at {0}: |B| below 1e-300")]
    Overflow(C64),
    #[error("function spec: {0}")]
    Schema(String),
}

impl ModelError {
    pub(crate) fn clause(clause: Clause, detail: impl Into<String>) -> Self {
        ModelError::Definition {
            clause,
            detail: detail.into(),
        }
    }
}
