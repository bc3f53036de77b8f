//! Plateau classification and the minimal witness size `N̂`.

use serde::Serialize;

use super::verify::{plan_inertia, verify_witness, DEFAULT_SHRINK_ROUNDS};
use super::{max_epsilon, witness_plan, AnalysisError, WitnessPlan};
use crate::hermitian::TolerancePolicy;
use crate::model::{PointConfig, StandardFunction};
use crate::pick::{kn_profile, kn_profile_with, pick_inertia, ProfileResult, Region, SearchBudget};
use crate::seed;
use crate::C64;

const PLAN_EPSILON: f64 = 1e-2;
const PLAN_SEEDS: u64 = 3;
const MAX_SUBSETS: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundCheck {
    /// `q̂ + ℓ̂ ≤ N̂ ≤ q̂ + 2ℓ̂`.
    Holds,
    Violated,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    /// `None` when no plateau was reached.
    pub kappa_hat: Option<usize>,
    pub n_first: Option<usize>,
    /// Smallest searched `n` with `best_count(n) == κ̂`.
    pub n_hat: Option<usize>,
    pub q_hat: usize,
    /// Jumps inside the region.
    pub l_hat: usize,
    pub bound_check: BoundCheck,
    /// `best_count(2κ̂) == κ̂`.
    pub double_kappa_check: Option<bool>,
    pub profile: ProfileResult,
}

impl ClassificationReport {
    pub fn is_conclusive(&self) -> bool {
        self.kappa_hat.is_some()
    }
}

/// Profiles `f` to `n = 2κ + 3` and reads `κ̂` off the first width-3 plateau.
pub fn plateau_classify(
    f: &StandardFunction,
    region: &Region,
    budget: SearchBudget,
    seed: u64,
) -> Result<ClassificationReport, AnalysisError> {
    plateau_classify_with(f, region, budget, seed, TolerancePolicy::default())
}

pub fn plateau_classify_with(
    f: &StandardFunction,
    region: &Region,
    budget: SearchBudget,
    seed: u64,
    policy: TolerancePolicy,
) -> Result<ClassificationReport, AnalysisError> {
    let region = region.validated()?;
    let counts = f.classify_counts();
    let n_max = 2 * counts.kappa + 3;
    let profile = kn_profile_with(f, n_max, &region, budget, seed, policy)?;
    let q_hat = counts.q;
    let l_hat = f.jumps().iter().filter(|j| region.contains(j.at.value())).count();

    let Some(plateau) = profile.plateau else {
        return Ok(ClassificationReport {
            kappa_hat: None,
            n_first: None,
            n_hat: None,
            q_hat,
            l_hat,
            bound_check: BoundCheck::Inconclusive,
            double_kappa_check: None,
            profile,
        });
    };
    let kappa = plateau.value;
    let n_hat = (0..=n_max).find(|&n| profile.best_count(n) == Some(kappa));
    let bound_check = match n_hat {
        Some(n) if q_hat + l_hat <= n && n <= q_hat + 2 * l_hat => BoundCheck::Holds,
        Some(_) => BoundCheck::Violated,
        None => BoundCheck::Inconclusive,
    };
    let double_kappa_check = profile.best_count(2 * kappa).map(|c| c == kappa);
    Ok(ClassificationReport {
        kappa_hat: Some(kappa),
        n_first: Some(plateau.first_n),
        n_hat,
        q_hat,
        l_hat,
        bound_check,
        double_kappa_check,
        profile,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NResult {
    pub n_hat: usize,
    pub witness: PointConfig,
    pub kappa: usize,
    /// `N̂ == q + ℓ`; otherwise `N̂` is only an upper bound.
    pub exact: bool,
}

fn subsets(m: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if out.len() >= MAX_SUBSETS {
            return;
        }
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < n - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, m, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, n, &mut Vec::new(), &mut out);
    out
}

fn plans(f: &StandardFunction, seed: u64) -> Result<Vec<WitnessPlan>, AnalysisError> {
    let eps0 = PLAN_EPSILON.min(0.9 * max_epsilon(f));
    let mut out = Vec::new();
    for round in 0..=DEFAULT_SHRINK_ROUNDS {
        let eps = eps0 / 10f64.powi(round as i32);
        for s in 0..PLAN_SEEDS {
            out.push(witness_plan(f, eps, seed::derive(seed, &[0x4e, round as u64, s]))?);
        }
    }
    Ok(out)
}

fn config(nodes: &[C64]) -> Result<PointConfig, AnalysisError> {
    PointConfig::from_values(nodes).map_err(|e| AnalysisError::Pick(e.into()))
}

/// Smallest `n ≤ q + 2ℓ` for which structured plans or the profile search
/// reach `q + ℓ` negative squares.
pub fn find_n(f: &StandardFunction, budget: SearchBudget, seed: u64) -> Result<NResult, AnalysisError> {
    let counts = f.classify_counts();
    let kappa = counts.kappa;
    let top = counts.q + 2 * counts.l;
    if kappa == 0 {
        return Ok(NResult { n_hat: 0, witness: PointConfig::empty(), kappa, exact: true });
    }
    let plans = plans(f, seed)?;
    let mut profile: Option<ProfileResult> = None;
    for n in kappa..=top {
        for plan in &plans {
            let pts = plan.points();
            for subset in subsets(pts.len(), n) {
                let nodes: Vec<C64> = subset.iter().map(|&i| pts[i]).collect();
                let pi = pick_inertia(f, &nodes, TolerancePolicy::default(), plan.epsilon)?;
                if pi.inertia.negative == kappa {
                    return Ok(NResult { n_hat: n, witness: config(&nodes)?, kappa, exact: n == kappa });
                }
            }
        }
        if profile.is_none() {
            profile = Some(kn_profile(f, top, &Region::WholeDisk, budget, seed::derive(seed, &[0x50]))?);
        }
        let entry = profile.as_ref().and_then(|p| p.per_n.iter().find(|e| e.n == n));
        if let Some(e) = entry.filter(|e| e.best_count == kappa) {
            return Ok(NResult { n_hat: n, witness: e.witness.clone(), kappa, exact: n == kappa });
        }
    }
    let v = verify_witness(f, &plans[0], DEFAULT_SHRINK_ROUNDS)?;
    debug_assert_eq!(plan_inertia(f, &v.plan)?.negative, kappa);
    Ok(NResult { n_hat: top, witness: config(&v.plan.points())?, kappa, exact: top == kappa })
}
