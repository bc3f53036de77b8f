use serde::{Deserialize, Serialize};

use super::{HermitianMatrix, LinalgError};

/// How eigenvalues near zero are classified.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum TolerancePolicy {
    /// Fixed threshold `τ`.
    Absolute(f64),
    /// `τ = rel · max |λ|`.
    Relative(f64),
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy::Relative(1e-9)
    }
}

impl TolerancePolicy {
    /// Threshold for the given spectrum.
    pub fn threshold(&self, eigenvalues: &[f64]) -> f64 {
        match *self {
            TolerancePolicy::Absolute(t) => t,
            TolerancePolicy::Relative(r) => {
                r * eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()))
            }
        }
    }

    /// Threshold given an upper bound on `max |λ|`.
    pub fn threshold_for_scale(&self, scale: f64) -> f64 {
        match *self {
            TolerancePolicy::Absolute(t) => t,
            TolerancePolicy::Relative(r) => r * scale,
        }
    }
}

/// Eigenvalue sign counts `(negative, zero, positive)` with the threshold used.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Inertia {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
    pub tol_used: f64,
}

impl Inertia {
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.negative, self.zero, self.positive)
    }

    pub fn dim(&self) -> usize {
        self.negative + self.zero + self.positive
    }

    pub fn rank(&self) -> usize {
        self.negative + self.positive
    }

    /// Count-wise sum; keeps the larger threshold.
    pub fn add(&self, other: &Inertia) -> Inertia {
        Inertia {
            negative: self.negative + other.negative,
            zero: self.zero + other.zero,
            positive: self.positive + other.positive,
            tol_used: self.tol_used.max(other.tol_used),
        }
    }
}

/// Classifies a spectrum against the absolute threshold `tau`.
pub fn inertia_of_eigenvalues(eigenvalues: &[f64], tau: f64) -> Inertia {
    let mut out = Inertia {
        negative: 0,
        zero: 0,
        positive: 0,
        tol_used: tau,
    };
    for &v in eigenvalues {
        if v < -tau {
            out.negative += 1;
        } else if v > tau {
            out.positive += 1;
        } else {
            out.zero += 1;
        }
    }
    out
}

/// Inertia from a full Hermitian eigendecomposition.
pub fn inertia(m: &HermitianMatrix, policy: TolerancePolicy) -> Result<Inertia, LinalgError> {
    let ev = m.eigenvalues()?;
    Ok(inertia_of_eigenvalues(&ev, policy.threshold(&ev)))
}
