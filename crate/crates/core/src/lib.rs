//! Pick matrices of functions on the unit disk whose Pick matrices have a
//! bounded number of negative eigenvalues.
//!
//! The crate is organised bottom-up:
//!
//! - [`hermitian`]: inertia, Stein equations, Schur complements.
//! - [`model`]: Schur functions, Blaschke products and standard functions
//!   (meromorphic quotients `S/B` modified at finitely many jump points).
//! - [`divdiff`]: divided differences and the lower-triangular transform that
//!   turns clustered nodes into Taylor data.
//! - [`pick`]: Pick matrix assembly and negative-square profiles `k_n(f)`.
//! - [`realization`]: the J-unitary function `Θ` built from Pick data and
//!   state-space realizations of Blaschke products.
//! - [`analysis`]: plateau classification, witness placement, `N(f)` search
//!   and the Hindmarsh three-point test.

pub mod analysis;
pub mod divdiff;
pub mod hermitian;
pub mod model;
pub mod pick;
pub mod realization;
pub mod seed;

pub use num_complex::Complex64 as C64;

mod error;
pub use error::Error;
