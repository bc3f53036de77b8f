//! Divided differences and the lower-triangular transform `Φ(𝒵)`.
//!
//! For ordered nodes `z_1, …, z_n` let `φ_i(z) = Π_{m≤i} (z - z_m)`. Then
//! `Φ_ij = 1/φ_i'(z_j)` for `i ≥ j` and `Φ v(𝒵)` is the vector of divided
//! differences `[z_1]_v, [z_1, z_2]_v, …`. With `D = diag(z)` and `J` the
//! lower bidiagonal matrix with the nodes on the diagonal and ones below it,
//! `Φ D = J Φ`, which is what turns Pick matrices on clustered nodes into
//! Stein solutions with a Jordan-like state matrix.

use nalgebra::DMatrix;
use serde::Serialize;
use thiserror::Error;

use crate::model::{ModelError, PointConfig, UnitDiskPoint};
use crate::C64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DivDiffError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("nodes {i} and {j} coincide")]
    Collision { i: usize, j: usize },
    #[error("evaluation failed at node {index}: {source}")]
    Evaluation { index: usize, source: ModelError },
    #[error("{got} values for {expected} nodes")]
    LengthMismatch { expected: usize, got: usize },
    #[error("radius schedule must be positive and strictly decreasing")]
    BadSchedule,
}

/// Minimum node distance for a [`PhiMatrix`] to be flagged well conditioned.
pub const WELL_CONDITIONED_SEPARATION: f64 = 1e-6;
/// Default radius schedule for [`cluster_limit_check`].
pub const DEFAULT_RADII: [f64; 3] = [1e-1, 1e-2, 1e-3];
/// Rotated copies averaged per radius in [`cluster_limit_check`].
pub const ROTATIONS: usize = 8;

#[derive(Clone, Debug)]
pub struct PhiMatrix {
    nodes: Vec<C64>,
    matrix: DMatrix<C64>,
    well_conditioned: bool,
}

fn check_distinct(z: &[C64]) -> Result<f64, DivDiffError> {
    let mut min = f64::INFINITY;
    for i in 0..z.len() {
        for j in 0..i {
            let d = (z[i] - z[j]).norm();
            if d == 0.0 {
                return Err(DivDiffError::Collision { i: j, j: i });
            }
            min = min.min(d);
        }
    }
    Ok(min)
}

/// `Φ` for raw node values; only exact coincidences are rejected.
pub fn phi_matrix_from_values(z: &[C64]) -> Result<PhiMatrix, DivDiffError> {
    let sep = check_distinct(z)?;
    let n = z.len();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let d = (0..=i)
                .filter(|&k| k != j)
                .fold(C64::new(1.0, 0.0), |acc, k| acc * (z[j] - z[k]));
            m[(i, j)] = d.inv();
        }
    }
    Ok(PhiMatrix {
        nodes: z.to_vec(),
        matrix: m,
        well_conditioned: sep >= WELL_CONDITIONED_SEPARATION,
    })
}

pub fn phi_matrix(nodes: &PointConfig) -> Result<PhiMatrix, DivDiffError> {
    phi_matrix_from_values(&nodes.values())
}

impl PhiMatrix {
    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn nodes(&self) -> &[C64] {
        &self.nodes
    }

    pub fn is_well_conditioned(&self) -> bool {
        self.well_conditioned
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let n = self.nodes.len();
        (0..n)
            .map(|i| (0..=i).map(|j| self.matrix[(i, j)] * v[j]).sum())
            .collect()
    }

    /// `J(𝒵)`: nodes on the diagonal, ones on the subdiagonal.
    pub fn jordan(&self) -> DMatrix<C64> {
        jordan_matrix(&self.nodes)
    }
}

pub fn jordan_matrix(z: &[C64]) -> DMatrix<C64> {
    let n = z.len();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            z[i]
        } else if i == j + 1 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Triangular table: `column(j)[i] = [z_i, …, z_{i+j}]_v`.
#[derive(Clone, Debug)]
pub struct DividedDiffTable {
    nodes: Vec<C64>,
    columns: Vec<Vec<C64>>,
}

impl DividedDiffTable {
    pub fn from_values(nodes: &[C64], values: &[C64]) -> Result<Self, DivDiffError> {
        if nodes.len() != values.len() {
            return Err(DivDiffError::LengthMismatch {
                expected: nodes.len(),
                got: values.len(),
            });
        }
        check_distinct(nodes)?;
        let n = nodes.len();
        let mut columns = vec![values.to_vec()];
        for j in 1..n {
            let prev = &columns[j - 1];
            let col = (0..n - j)
                .map(|i| (prev[i] - prev[i + 1]) / (nodes[i] - nodes[i + j]))
                .collect();
            columns.push(col);
        }
        Ok(Self {
            nodes: nodes.to_vec(),
            columns,
        })
    }

    pub fn values(&self) -> &[C64] {
        self.columns.first().map_or(&[], |c| c.as_slice())
    }

    pub fn column(&self, order: usize) -> &[C64] {
        &self.columns[order]
    }

    /// `[z_1]_v, [z_1, z_2]_v, …, [z_1, …, z_n]_v`.
    pub fn top_row(&self) -> Vec<C64> {
        self.columns.iter().map(|c| c[0]).collect()
    }

    pub fn nodes(&self) -> &[C64] {
        &self.nodes
    }
}

pub fn divided_diffs(
    nodes: &PointConfig,
    mut v: impl FnMut(C64) -> Result<C64, ModelError>,
) -> Result<DividedDiffTable, DivDiffError> {
    let z = nodes.values();
    let vals = z
        .iter()
        .enumerate()
        .map(|(index, &x)| v(x).map_err(|source| DivDiffError::Evaluation { index, source }))
        .collect::<Result<Vec<_>, _>>()?;
    DividedDiffTable::from_values(&z, &vals)
}

/// `‖Φ D - J Φ‖_∞`.
pub fn intertwining_residual(nodes: &PointConfig) -> Result<f64, DivDiffError> {
    let phi = phi_matrix(nodes)?;
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(nodes.values()));
    let r = phi.matrix() * d - phi.jordan() * phi.matrix();
    Ok(r.row_iter()
        .map(|row| row.iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max))
}

/// Taylor coefficients `v_0, …, v_{k-1}` at `center` from the trapezoid rule
/// on the circle of radius `r` (`v` analytic on the closed disk).
pub fn taylor_coefficients(v: impl Fn(C64) -> C64, center: C64, k: usize, r: f64) -> Vec<C64> {
    let n = 64.max(4 * k);
    let samples: Vec<(C64, C64)> = (0..n)
        .map(|m| {
            let w = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * m as f64 / n as f64);
            (w, v(center + w * r))
        })
        .collect();
    (0..k)
        .map(|j| {
            let s: C64 = samples.iter().map(|&(w, f)| f * w.powi(-(j as i32))).sum();
            s / (n as f64 * r.powi(j as i32))
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct RadiusError {
    pub radius: f64,
    /// Error of a single node configuration.
    pub raw_error: f64,
    /// Error of the mean over [`ROTATIONS`] rotated configurations.
    pub averaged_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClusterLimitReport {
    pub per_radius: Vec<RadiusError>,
    /// Raw errors are non-increasing along the schedule.
    pub decreasing: bool,
    /// Averaged error at the last radius.
    pub final_error: f64,
    pub loss_of_significance: bool,
}

fn cluster_nodes(center: C64, radius: f64, k: usize, offset: f64) -> Vec<C64> {
    (0..k)
        .map(|m| {
            let t = 2.0 * std::f64::consts::PI * m as f64 / k as f64 + offset;
            center + C64::from_polar(radius, t)
        })
        .collect()
}

fn max_err(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Compares `Φ v(𝒵)` on `k` nodes spread over circles of shrinking radius
/// around `center` with the Taylor coefficients `taylor[0..k]`.
pub fn cluster_limit_check(
    center: UnitDiskPoint,
    v: impl Fn(C64) -> C64,
    taylor: &[C64],
    radii: &[f64],
) -> Result<ClusterLimitReport, DivDiffError> {
    let k = taylor.len();
    if radii.is_empty() || radii.iter().any(|&r| !(r > 0.0)) || radii.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(DivDiffError::BadSchedule);
    }
    let c = center.value();
    let mut per_radius = Vec::with_capacity(radii.len());
    for &rho in radii {
        let mut mean = vec![C64::new(0.0, 0.0); k];
        let mut raw = 0.0;
        for rot in 0..ROTATIONS {
            let offset = 2.0 * std::f64::consts::PI * rot as f64 / ROTATIONS as f64 + 0.1;
            let z = cluster_nodes(c, rho, k, offset);
            let vals: Vec<C64> = z.iter().map(|&x| v(x)).collect();
            let top = DividedDiffTable::from_values(&z, &vals)?.top_row();
            if rot == 0 {
                raw = max_err(&top, taylor);
            }
            for (m, t) in mean.iter_mut().zip(&top) {
                *m += t / ROTATIONS as f64;
            }
        }
        per_radius.push(RadiusError {
            radius: rho,
            raw_error: raw,
            averaged_error: max_err(&mean, taylor),
        });
    }
    let decreasing = per_radius
        .windows(2)
        .all(|w| w[1].raw_error <= w[0].raw_error * (1.0 + 1e-9) + 1e-14);
    let final_error = per_radius.last().map_or(0.0, |r| r.averaged_error);
    Ok(ClusterLimitReport {
        per_radius,
        decreasing,
        final_error,
        loss_of_significance: k >= 4 && radii.iter().any(|&r| r < 1e-5),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BlaschkeProduct;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn cfg(v: &[C64]) -> PointConfig {
        PointConfig::from_values(v).unwrap()
    }

    #[test]
    fn single_node_phi() {
        let p = phi_matrix(&cfg(&[c(0.3, 0.2)])).unwrap();
        assert_eq!(p.matrix()[(0, 0)], c(1.0, 0.0));
        assert_eq!(intertwining_residual(&cfg(&[c(0.3, 0.2)])).unwrap(), 0.0);
    }

    #[test]
    fn two_node_phi() {
        let p = phi_matrix(&cfg(&[c(0.0, 0.0), c(0.5, 0.0)])).unwrap();
        let expected = [[1.0, 0.0], [-2.0, 2.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((p.matrix()[(i, j)] - c(expected[i][j], 0.0)).norm() < 1e-15);
            }
        }
        assert!(intertwining_residual(&cfg(&[c(0.0, 0.0), c(0.5, 0.0)])).unwrap() <= 1e-15);
    }

    #[test]
    fn square_divided_differences() {
        let nodes = cfg(&[c(0.0, 0.0), c(0.5, 0.0), c(0.25, 0.0)]);
        let t = divided_diffs(&nodes, |z| Ok(z * z)).unwrap();
        let top = t.top_row();
        assert!((top[1] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((top[2] - c(1.0, 0.0)).norm() < 1e-15);
        let phi = phi_matrix(&nodes).unwrap().apply(t.values());
        for (a, b) in phi.iter().zip(&top) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn constant_has_vanishing_differences() {
        let nodes = cfg(&[c(0.1, 0.0), c(-0.4, 0.3), c(0.2, -0.6), c(0.0, 0.5)]);
        let t = divided_diffs(&nodes, |_| Ok(c(0.7, -0.2))).unwrap();
        assert!(t.top_row()[1..].iter().all(|x| x.norm() == 0.0));
    }

    #[test]
    fn collisions_are_rejected() {
        assert!(matches!(
            phi_matrix_from_values(&[c(0.1, 0.0), c(0.1, 0.0)]),
            Err(DivDiffError::Collision { .. })
        ));
    }

    #[test]
    fn evaluation_errors_carry_the_index() {
        let nodes = cfg(&[c(0.1, 0.0), c(0.2, 0.0)]);
        let err = divided_diffs(&nodes, |z| {
            if z.re > 0.15 { Err(ModelError::UndefinedAtPole(z)) } else { Ok(z) }
        })
        .unwrap_err();
        assert!(matches!(err, DivDiffError::Evaluation { index: 1, .. }));
    }

    #[test]
    fn identity_limit() {
        let r = cluster_limit_check(
            UnitDiskPoint::from_re_im(0.0, 0.0).unwrap(),
            |z| z,
            &[c(0.0, 0.0), c(1.0, 0.0)],
            &DEFAULT_RADII,
        )
        .unwrap();
        assert!(r.decreasing);
        assert!(r.final_error < 1e-12);
    }

    #[test]
    fn geometric_series_limit() {
        let r = cluster_limit_check(
            UnitDiskPoint::from_re_im(0.0, 0.0).unwrap(),
            |z| (c(1.0, 0.0) - z).inv(),
            &[c(1.0, 0.0); 3],
            &DEFAULT_RADII,
        )
        .unwrap();
        assert!(r.decreasing);
        assert!(r.final_error <= 1e-6);
    }

    #[test]
    fn blaschke_zero_limit_vanishes() {
        let w = UnitDiskPoint::from_re_im(0.2, -0.3).unwrap();
        let b = BlaschkeProduct::from_zeros(vec![(w, 3)]).unwrap();
        let r = cluster_limit_check(w, |z| b.eval(z), &[c(0.0, 0.0); 3], &DEFAULT_RADII).unwrap();
        assert!(r.decreasing);
        assert!(r.final_error <= 1e-6);
    }

    #[test]
    fn loss_of_significance_flag() {
        let center = UnitDiskPoint::from_re_im(0.0, 0.0).unwrap();
        let coeffs = taylor_coefficients(|z| (c(1.0, 0.0) - z).inv(), c(0.0, 0.0), 4, 0.5);
        let r = cluster_limit_check(center, |z| (c(1.0, 0.0) - z).inv(), &coeffs, &[1e-3, 1e-6]).unwrap();
        assert!(r.loss_of_significance);
        assert!(matches!(
            cluster_limit_check(center, |z| z, &coeffs, &[1e-3, 1e-2]),
            Err(DivDiffError::BadSchedule)
        ));
    }

    #[test]
    fn trapezoid_taylor_coefficients() {
        let t = taylor_coefficients(|z| (c(1.0, 0.0) - z * 2.0).inv(), c(0.0, 0.0), 5, 0.25);
        for (j, x) in t.iter().enumerate() {
            assert!((x - c(2f64.powi(j as i32), 0.0)).norm() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn phi_reproduces_recursive_table(
            pts in prop::collection::vec((-0.9f64..0.9, -0.9f64..0.9), 1..7),
            coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..6),
        ) {
            let z: Vec<C64> = pts.iter().map(|&(a, b)| c(a, b) * 0.7).collect();
            for i in 0..z.len() { for j in 0..i { prop_assume!((z[i] - z[j]).norm() >= 1e-1); } }
            let p: Vec<C64> = coeffs.iter().map(|&(a, b)| c(a, b)).collect();
            let v = |x: C64| p.iter().rev().fold(c(0.0, 0.0), |acc, &a| acc * x + a) / (c(2.0, 0.0) - x);
            let vals: Vec<C64> = z.iter().map(|&x| v(x)).collect();
            let table = DividedDiffTable::from_values(&z, &vals).unwrap().top_row();
            let phi = phi_matrix_from_values(&z).unwrap().apply(&vals);
            for (a, b) in phi.iter().zip(&table) {
                prop_assert!((a - b).norm() <= 1e-12 * (1.0 + b.norm()) * 10f64.powi(z.len() as i32 - 1));
            }
        }

        #[test]
        fn intertwining_holds(pts in prop::collection::vec((-0.6f64..0.6, -0.6f64..0.6), 1..7)) {
            let z: Vec<C64> = pts.iter().map(|&(a, b)| c(a, b)).collect();
            for i in 0..z.len() { for j in 0..i { prop_assume!((z[i] - z[j]).norm() >= 1e-2); } }
            let nodes = cfg(&z);
            let phi = phi_matrix(&nodes).unwrap();
            let norm = phi.matrix().row_iter().map(|r| r.iter().map(|x| x.norm()).sum::<f64>()).fold(0.0, f64::max);
            let zmax = z.iter().map(|x| x.norm()).fold(0.0, f64::max);
            prop_assert!(intertwining_residual(&nodes).unwrap() <= 1e-12 * norm * zmax.max(1.0));
        }
    }
}
