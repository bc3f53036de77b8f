//! Sampling test for positivity of all 3-node Pick matrices.

use rand::Rng;
use serde::Serialize;

use super::AnalysisError;
use crate::hermitian::{inertia, TolerancePolicy};
use crate::model::{SchurPart, StandardFunction};
use crate::pick::{pick_matrix_from_values, Region};
use crate::seed;
use crate::C64;

const POOL_SIZE: usize = 200;
const ADJACENT_RADII: [f64; 3] = [1e-2, 1e-3, 1e-4];
const ADJACENT_ANGLES: usize = 3;

/// Anything that can be evaluated at disk points.
pub trait DiskFunction: Sync {
    /// `None` where the function is undefined.
    fn value(&self, z: C64) -> Option<C64>;

    /// Points the sampler should always include (jumps, points next to poles).
    fn distinguished_points(&self) -> Vec<C64> {
        Vec::new()
    }
}

impl DiskFunction for StandardFunction {
    fn value(&self, z: C64) -> Option<C64> {
        self.eval(z).ok()
    }

    fn distinguished_points(&self) -> Vec<C64> {
        let mut out = Vec::new();
        let mut centers: Vec<C64> = self.poles().iter().map(|&(w, _)| w).collect();
        for j in self.jumps() {
            out.push(j.at.value());
            centers.push(j.at.value());
        }
        for c in centers {
            for (k, &r) in ADJACENT_RADII.iter().enumerate() {
                for a in 0..ADJACENT_ANGLES {
                    let t = 2.0 * std::f64::consts::PI * (a as f64 + 0.37 * k as f64) / ADJACENT_ANGLES as f64;
                    out.push(c + C64::from_polar(r, t));
                }
            }
        }
        out
    }
}

impl DiskFunction for SchurPart {
    fn value(&self, z: C64) -> Option<C64> {
        Some(self.eval(z))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum HindmarshOutcome {
    /// No sampled triple produced a negative eigenvalue.
    ConsistentWithSchur { triples_tested: usize },
    Violation { triple: [C64; 3], eigenvalue: f64, triples_tested: usize },
}

impl HindmarshOutcome {
    pub fn is_violation(&self) -> bool {
        matches!(self, HindmarshOutcome::Violation { .. })
    }
}

/// Tests `P_3(f; z_1, z_2, z_3)` for negative eigenvalues over `triples`
/// triples drawn from a pool of region samples plus the distinguished points
/// inside the region. Triples pairing two distinguished points come first.
pub fn hindmarsh_test(
    f: &dyn DiskFunction,
    region: &Region,
    triples: usize,
    seed: u64,
) -> Result<HindmarshOutcome, AnalysisError> {
    let region = region.validated()?;
    let mut rng = seed::rng(seed, &[0x48]);
    let special: Vec<(C64, C64)> = f
        .distinguished_points()
        .into_iter()
        .filter(|&z| region.contains(z))
        .filter_map(|z| f.value(z).map(|v| (z, v)))
        .collect();
    let mut pool = special.clone();
    for _ in 0..POOL_SIZE * 20 {
        if pool.len() >= POOL_SIZE + special.len() {
            break;
        }
        let z = region.sample(&mut rng);
        if pool.iter().any(|(w, _)| (w - z).norm() < 1e-9) {
            continue;
        }
        if let Some(v) = f.value(z) {
            if v.re.is_finite() && v.im.is_finite() {
                pool.push((z, v));
            }
        }
    }
    if pool.len() < 3 {
        return Err(AnalysisError::InsufficientPoints { found: pool.len() });
    }
    let s = special.len();
    let mut structured: Vec<[usize; 3]> = Vec::new();
    for a in 0..s {
        for b in a + 1..s {
            structured.push([a, b, 0]);
        }
    }
    for t in 0..triples {
        let idx = if t < structured.len() {
            let [a, b, _] = structured[t];
            let mut c = rng.random_range(0..pool.len());
            while c == a || c == b {
                c = rng.random_range(0..pool.len());
            }
            [a, b, c]
        } else {
            let v = rand::seq::index::sample(&mut rng, pool.len(), 3).into_vec();
            [v[0], v[1], v[2]]
        };
        let z: Vec<C64> = idx.iter().map(|&i| pool[i].0).collect();
        let w: Vec<C64> = idx.iter().map(|&i| pool[i].1).collect();
        let m = pick_matrix_from_values(&z, &w)?;
        let ev = m.eigenvalues().map_err(crate::pick::PickError::from)?;
        let tau = TolerancePolicy::default().threshold(&ev);
        if ev[0] < -tau {
            debug_assert!(inertia(&m, TolerancePolicy::default()).map(|i| i.negative > 0).unwrap_or(true));
            return Ok(HindmarshOutcome::Violation {
                triple: [z[0], z[1], z[2]],
                eigenvalue: ev[0],
                triples_tested: t + 1,
            });
        }
    }
    Ok(HindmarshOutcome::ConsistentWithSchur { triples_tested: triples })
}
