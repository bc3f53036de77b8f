//! Pick matrix assembly and inertia.
//!
//! Raw Pick matrices on clustered or near-pole nodes are badly scaled: the
//! negative eigenvalue of interest can sit far below `1e-9 · max |λ|`. The
//! inertia is therefore computed from a congruent matrix. Each defined node is
//! scaled by `B(z)`, which turns entries into `(B_i B̄_j - S_i S̄_j)/(1 - z_i z̄_j)`;
//! jump nodes keep scale 1. Nearby non-jump nodes are grouped into clusters
//! and the divided-difference transform `Φ` is applied per cluster. The
//! result `Y` solves `Y - T Y T* = y y* - c c*`, where `T` is lower bidiagonal
//! (the Jordan-like matrix of each cluster) and `y`, `c` hold divided
//! differences of `B` and `S`. Sylvester's law keeps the inertia unchanged.

use nalgebra::DMatrix;
use serde::Serialize;

use super::PickError;
use crate::divdiff::{phi_matrix_from_values, DividedDiffTable};
use crate::hermitian::{
    inertia, inertia_of_eigenvalues, solve_stein_bidiagonal, HermitianMatrix, Inertia, TolerancePolicy,
};
use crate::model::{PointConfig, StandardFunction};
use crate::C64;

/// Default single-linkage radius for clustering nodes.
pub const DEFAULT_LINK_RADIUS: f64 = 0.05;

#[derive(Clone, Debug)]
pub struct PickMatrixResult {
    pub matrix: HermitianMatrix,
    pub nodes: PointConfig,
    /// Inertia of the conditioned congruent matrix.
    pub inertia: Inertia,
    /// Inertia of `matrix` itself under the same policy.
    pub raw_inertia: Inertia,
    /// `max |λ| / min |λ|` of `matrix`.
    pub condition_estimate: f64,
}

/// Kernel `(1 - f_i f̄_j)/(1 - z_i z̄_j)` at the given values.
pub fn pick_matrix_from_values(z: &[C64], w: &[C64]) -> Result<HermitianMatrix, PickError> {
    let one = C64::new(1.0, 0.0);
    Ok(HermitianMatrix::from_fn(z.len(), |i, j| {
        (one - w[i] * w[j].conj()) / (one - z[i] * z[j].conj())
    })?)
}

/// Per-node data entering the conditioned matrix: `y = B`, `c = S` at defined
/// nodes, `y = 1`, `c = γ` at jumps.
#[derive(Clone, Copy, Debug)]
struct NodeData {
    z: C64,
    y: C64,
    c: C64,
    jump: bool,
}

fn node_data(f: &StandardFunction, nodes: &[C64]) -> Result<Vec<NodeData>, PickError> {
    nodes
        .iter()
        .enumerate()
        .map(|(index, &z)| {
            if let Some(g) = f.jump_at(z) {
                return Ok(NodeData { z, y: C64::new(1.0, 0.0), c: g, jump: true });
            }
            if f.is_undefined_at(z) {
                return Err(PickError::NodeAtPole { index, z });
            }
            let (s, b) = f.quotient_parts(z);
            if b.norm() < 1e-300 {
                return Err(PickError::NodeAtPole { index, z });
            }
            Ok(NodeData { z, y: b, c: s, jump: false })
        })
        .collect()
}

/// Single-linkage clusters of the non-jump nodes; jump nodes are singletons.
fn clusters(data: &[NodeData], link: f64) -> Vec<Vec<usize>> {
    let n = data.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut k = i;
        while p[k] != r {
            let next = p[k];
            p[k] = r;
            k = next;
        }
        r
    }
    for i in 0..n {
        if data[i].jump {
            continue;
        }
        for j in 0..i {
            if !data[j].jump && (data[i].z - data[j].z).norm() <= link {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_of[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_of[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }
    groups
}

/// Conditioned matrix, its eigenvalues and the estimated rounding floor.
#[derive(Clone, Debug)]
pub struct Conditioned {
    pub matrix: HermitianMatrix,
    pub eigenvalues: Vec<f64>,
    pub noise_floor: f64,
}

const NOISE_FACTOR: f64 = 8.0;

fn conditioned(f: &StandardFunction, nodes: &[C64], link: f64) -> Result<Conditioned, PickError> {
    let data = node_data(f, nodes)?;
    let groups = clusters(&data, link);
    let m = data.len();
    let mut diag = Vec::with_capacity(m);
    let mut sub = Vec::with_capacity(m.saturating_sub(1));
    let mut y = Vec::with_capacity(m);
    let mut c = Vec::with_capacity(m);
    let mut row_mag = Vec::with_capacity(m);
    for g in &groups {
        let z: Vec<C64> = g.iter().map(|&i| data[i].z).collect();
        let yv: Vec<C64> = g.iter().map(|&i| data[i].y).collect();
        let cv: Vec<C64> = g.iter().map(|&i| data[i].c).collect();
        let mag: Vec<f64> = g.iter().map(|&i| data[i].y.norm().max(data[i].c.norm())).collect();
        let phi = phi_matrix_from_values(&z).map_err(|_| PickError::Degenerate)?;
        y.extend(DividedDiffTable::from_values(&z, &yv).map_err(|_| PickError::Degenerate)?.top_row());
        c.extend(DividedDiffTable::from_values(&z, &cv).map_err(|_| PickError::Degenerate)?.top_row());
        for i in 0..z.len() {
            row_mag.push((0..=i).map(|j| phi.matrix()[(i, j)].norm() * mag[j]).sum::<f64>());
        }
        if !diag.is_empty() {
            sub.push(C64::new(0.0, 0.0));
        }
        for (k, &zk) in z.iter().enumerate() {
            diag.push(zk);
            if k > 0 {
                sub.push(C64::new(1.0, 0.0));
            }
        }
    }
    let rhs = DMatrix::from_fn(m, m, |i, j| y[i] * y[j].conj() - c[i] * c[j].conj());
    let ymat = solve_stein_bidiagonal(&diag, &sub, &rhs);
    let matrix = HermitianMatrix::new(ymat)?;
    let eigenvalues = matrix.eigenvalues()?;

    // Rounding in the divided differences propagated through the Stein recursion
    // with |T| in place of T.
    let eps = f64::EPSILON * NOISE_FACTOR;
    let eta = DMatrix::from_fn(m, m, |i, j| {
        C64::new(
            eps * (row_mag[i] * (y[j].norm() + c[j].norm()) + row_mag[j] * (y[i].norm() + c[i].norm())),
            0.0,
        )
    });
    let adiag: Vec<C64> = diag.iter().map(|z| C64::new(z.norm(), 0.0)).collect();
    let prop = solve_stein_bidiagonal(&adiag, &sub, &eta);
    let emax = prop.iter().map(|v| v.norm()).fold(0.0, f64::max);
    Ok(Conditioned {
        matrix,
        eigenvalues,
        noise_floor: 4.0 * m as f64 * emax,
    })
}

/// Inertia and the eigenvalues it was read from.
#[derive(Clone, Debug, Serialize)]
pub struct PickInertia {
    pub inertia: Inertia,
    pub eigenvalues: Vec<f64>,
}

impl PickInertia {
    /// Sum of the `count + 1` smallest eigenvalues over `max |λ|`; lower means
    /// closer to an additional negative square.
    pub fn score(&self) -> f64 {
        let scale = self.eigenvalues.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if scale == 0.0 {
            return 0.0;
        }
        let k = (self.inertia.negative + 1).min(self.eigenvalues.len());
        self.eigenvalues[..k].iter().sum::<f64>() / scale
    }
}

/// Inertia of the Pick matrix of `f` at `nodes` via the conditioned congruent
/// matrix; the threshold is the larger of the policy value and the rounding floor.
pub fn pick_inertia(
    f: &StandardFunction,
    nodes: &[C64],
    policy: TolerancePolicy,
    link_radius: f64,
) -> Result<PickInertia, PickError> {
    let cond = conditioned(f, nodes, link_radius)?;
    let tau = policy.threshold(&cond.eigenvalues).max(cond.noise_floor);
    Ok(PickInertia {
        inertia: inertia_of_eigenvalues(&cond.eigenvalues, tau),
        eigenvalues: cond.eigenvalues,
    })
}

/// The conditioned congruent matrix itself.
pub fn conditioned_pick(
    f: &StandardFunction,
    nodes: &[C64],
    link_radius: f64,
) -> Result<Conditioned, PickError> {
    conditioned(f, nodes, link_radius)
}

/// Raw Pick matrix with both inertias.
pub fn build_pick(
    f: &StandardFunction,
    nodes: &PointConfig,
    policy: TolerancePolicy,
) -> Result<PickMatrixResult, PickError> {
    let z = nodes.values();
    let data = node_data(f, &z)?;
    let w: Vec<C64> = data.iter().map(|d| if d.jump { d.c } else { d.c / d.y }).collect();
    let matrix = pick_matrix_from_values(&z, &w)?;
    let ev = matrix.eigenvalues()?;
    let big = ev.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let small = ev.iter().fold(f64::INFINITY, |a, v| a.min(v.abs()));
    let raw_inertia = inertia(&matrix, policy)?;
    let pi = pick_inertia(f, &z, policy, DEFAULT_LINK_RADIUS)?;
    Ok(PickMatrixResult {
        matrix,
        nodes: nodes.clone(),
        inertia: pi.inertia,
        raw_inertia,
        condition_estimate: if small > 0.0 { big / small } else { f64::INFINITY },
    })
}
