use serde::Serialize;

use super::{witness_plan, AnalysisError, WitnessPlan};
use crate::hermitian::{Inertia, TolerancePolicy};
use crate::model::StandardFunction;
use crate::pick::pick_inertia;
use crate::seed;

/// Default number of `ε ↦ ε/10` shrink steps.
pub const DEFAULT_SHRINK_ROUNDS: usize = 6;

#[derive(Clone, Debug, Serialize)]
pub struct WitnessVerification {
    pub plan: WitnessPlan,
    pub inertia: Inertia,
    /// `(ε, negative count)` for every plan tried.
    pub trajectory: Vec<(f64, usize)>,
}

/// Inertia of the Pick matrix on the plan nodes, conditioned per plan cluster.
pub fn plan_inertia(f: &StandardFunction, plan: &WitnessPlan) -> Result<Inertia, AnalysisError> {
    let pts = plan.points();
    if pts.is_empty() {
        return Ok(Inertia { negative: 0, zero: 0, positive: 0, tol_used: 0.0 });
    }
    Ok(pick_inertia(f, &pts, TolerancePolicy::default(), plan.epsilon)?.inertia)
}

/// Evaluates the plan and shrinks `ε` by 10 (with fresh angles) until the
/// Pick matrix carries `q + ℓ` negative squares.
pub fn verify_witness(
    f: &StandardFunction,
    plan: &WitnessPlan,
    shrink_rounds: usize,
) -> Result<WitnessVerification, AnalysisError> {
    let kappa = f.classify_counts().kappa;
    let mut trajectory = Vec::new();
    let mut current = plan.clone();
    for round in 0..=shrink_rounds {
        let inertia = plan_inertia(f, &current)?;
        trajectory.push((current.epsilon, inertia.negative));
        if inertia.negative > kappa {
            return Err(AnalysisError::AboveBound {
                count: inertia.negative,
                bound: kappa,
            });
        }
        if inertia.negative == kappa {
            return Ok(WitnessVerification { plan: current, inertia, trajectory });
        }
        if round < shrink_rounds {
            current = witness_plan(f, current.epsilon / 10.0, seed::derive(plan.seed, &[round as u64 + 1]))?;
        }
    }
    Err(AnalysisError::WitnessFailed { trajectory })
}
