//! Structured witness placement: `q + 2ℓ` nodes whose Pick matrix attains
//! `q + ℓ` negative squares once `ε` is small enough.
//!
//! - every jump point is a node;
//! - each jump gets a companion on the circle of radius `ε/2` around it;
//! - a pole of multiplicity `r` gets `r` nodes at radii `ε/2 · (1, 1/2, …, 1/r)`.
//!
//! Angles are drawn from the seeded stream so clusters are not collinear.

use rand::Rng;
use serde::Serialize;

use super::AnalysisError;
use crate::model::StandardFunction;
use crate::seed;
use crate::C64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessPlan {
    pub epsilon: f64,
    pub seed: u64,
    pub jump_nodes: Vec<C64>,
    pub jump_companions: Vec<C64>,
    /// One cluster per distinct pole, `mult` points each.
    pub pole_clusters: Vec<Vec<C64>>,
}

impl WitnessPlan {
    /// Nodes in the order: pole clusters, then each jump followed by its companion.
    pub fn points(&self) -> Vec<C64> {
        let mut out: Vec<C64> = self.pole_clusters.iter().flatten().copied().collect();
        for (j, c) in self.jump_nodes.iter().zip(&self.jump_companions) {
            out.push(*j);
            out.push(*c);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.jump_nodes.len() + self.jump_companions.len() + self.pole_clusters.iter().map(Vec::len).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Distinct poles and jump points.
fn special_points(f: &StandardFunction) -> Vec<C64> {
    let mut pts: Vec<C64> = f.poles().iter().map(|&(w, _)| w).collect();
    for j in f.jumps() {
        let z = j.at.value();
        if !pts.contains(&z) {
            pts.push(z);
        }
    }
    pts
}

/// Supremum of admissible `ε`: a quarter of the smallest distance between
/// special points or from a special point to the unit circle.
pub fn max_epsilon(f: &StandardFunction) -> f64 {
    let pts = special_points(f);
    let mut d = f64::INFINITY;
    for (i, a) in pts.iter().enumerate() {
        d = d.min(1.0 - a.norm());
        for b in &pts[..i] {
            d = d.min((a - b).norm());
        }
    }
    d / 4.0
}

pub fn witness_plan(f: &StandardFunction, epsilon: f64, seed: u64) -> Result<WitnessPlan, AnalysisError> {
    let max = max_epsilon(f);
    if !(epsilon > 0.0 && epsilon < max) {
        return Err(AnalysisError::EpsilonTooLarge { epsilon, max });
    }
    let mut rng = seed::rng(seed, &[0x5749_544e, epsilon.to_bits()]);
    let tau = 2.0 * std::f64::consts::PI;
    let mut pole_clusters = Vec::new();
    for (w, r) in f.poles() {
        let base: f64 = rng.random::<f64>() * tau;
        let cluster = (1..=r)
            .map(|k| {
                let jitter: f64 = rng.random::<f64>() * 0.5;
                let angle = base + tau * (k as f64 - 1.0 + jitter) / r as f64;
                w + C64::from_polar(epsilon / 2.0 / k as f64, angle)
            })
            .collect();
        pole_clusters.push(cluster);
    }
    let mut jump_nodes = Vec::new();
    let mut jump_companions = Vec::new();
    for j in f.jumps() {
        let z = j.at.value();
        let angle: f64 = rng.random::<f64>() * tau;
        jump_nodes.push(z);
        jump_companions.push(z + C64::from_polar(epsilon / 2.0, angle));
    }
    Ok(WitnessPlan {
        epsilon,
        seed,
        jump_nodes,
        jump_companions,
        pole_clusters,
    })
}
