//! `Θ(z) = I - (1-z) F*(I - zT*)⁻¹ P⁻¹ (I - T)⁻¹ F J` for `T = diag(z_i)`,
//! `F` with rows `(1, f(z_i))` and `P` the Pick matrix, which satisfies
//! `P - T P T* = F J F*`.

use nalgebra::{DMatrix, Matrix2, LU, Dyn};

use super::RealizationError;
use crate::hermitian::{stein_residual, HermitianMatrix};
use crate::model::{PointConfig, StandardFunction};
use crate::pick::pick_matrix_from_values;
use crate::C64;

/// Relative floor on the smallest `|eigenvalue|` of `P`.
pub const PICK_INVERTIBILITY: f64 = 1e-10;

pub fn signature_j() -> Matrix2<C64> {
    Matrix2::new(
        C64::new(1.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(-1.0, 0.0),
    )
}

#[derive(Clone, Debug)]
pub struct ThetaRealization {
    nodes: Vec<C64>,
    values: Vec<C64>,
    p: HermitianMatrix,
    p_lu: LU<C64, Dyn, Dyn>,
    f: DMatrix<C64>,
    stein_residual: f64,
}

fn norm2_inf(m: &Matrix2<C64>) -> f64 {
    (m[(0, 0)].norm() + m[(0, 1)].norm()).max(m[(1, 0)].norm() + m[(1, 1)].norm())
}

pub fn build_theta(f: &StandardFunction, nodes: &PointConfig) -> Result<ThetaRealization, RealizationError> {
    if nodes.is_empty() {
        return Err(RealizationError::NoNodes);
    }
    let z = nodes.values();
    let values = z.iter().map(|&x| f.eval(x)).collect::<Result<Vec<_>, _>>()?;
    let p = pick_matrix_from_values(&z, &values)?;
    let ev = p.eigenvalues()?;
    let big = ev.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let small = ev.iter().fold(f64::INFINITY, |a, v| a.min(v.abs()));
    let tol = PICK_INVERTIBILITY * big;
    if !(small > tol) {
        return Err(RealizationError::SingularPick { smallest: small, tol });
    }
    let n = z.len();
    let fm = DMatrix::from_fn(n, 2, |i, j| if j == 0 { C64::new(1.0, 0.0) } else { values[i] });
    let t = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(z.clone()));
    let j = DMatrix::from_fn(2, 2, |a, b| signature_j()[(a, b)]);
    let rhs = &fm * j * fm.adjoint();
    let residual = stein_residual(&t, p.as_matrix(), &rhs);
    let bound = 1e-11 * (1.0 + p.norm_inf());
    if residual > bound {
        return Err(RealizationError::SteinIdentity { residual, bound });
    }
    let p_lu = p.as_matrix().clone().lu();
    Ok(ThetaRealization {
        nodes: z,
        values,
        p,
        p_lu,
        f: fm,
        stein_residual: residual,
    })
}

impl ThetaRealization {
    pub fn nodes(&self) -> &[C64] {
        &self.nodes
    }

    pub fn node_values(&self) -> &[C64] {
        &self.values
    }

    pub fn pick(&self) -> &HermitianMatrix {
        &self.p
    }

    pub fn f_matrix(&self) -> &DMatrix<C64> {
        &self.f
    }

    /// `‖P - TPT* - FJF*‖_∞`.
    pub fn stein_residual(&self) -> f64 {
        self.stein_residual
    }

    pub fn p_inverse(&self) -> DMatrix<C64> {
        self.p_lu
            .try_inverse()
            .expect("P was checked to be invertible")
    }

    /// `F*(diag(a)) P⁻¹ (diag(b)) F` for diagonal scalings `a`, `b`.
    fn sandwich(&self, a: impl Fn(C64) -> C64, b: impl Fn(C64) -> C64) -> Matrix2<C64> {
        let n = self.nodes.len();
        let right = DMatrix::from_fn(n, 2, |i, k| b(self.nodes[i]) * self.f[(i, k)]);
        let v = self.p_lu.solve(&right).expect("P is invertible");
        let mut out = Matrix2::zeros();
        for r in 0..2 {
            for c in 0..2 {
                out[(r, c)] = (0..n)
                    .map(|i| self.f[(i, r)].conj() * a(self.nodes[i]) * v[(i, c)])
                    .sum();
            }
        }
        out
    }

    pub fn theta(&self, z: C64) -> Matrix2<C64> {
        let one = C64::new(1.0, 0.0);
        let w = self.sandwich(|t| (one - z * t.conj()).inv(), |t| (one - t).inv());
        Matrix2::identity() - w * signature_j() * (one - z)
    }

    /// `I + (1-z) F*(I - T*)⁻¹ P⁻¹ (zI - T)⁻¹ F J`.
    pub fn theta_inverse_formula(&self, z: C64) -> Matrix2<C64> {
        let one = C64::new(1.0, 0.0);
        let w = self.sandwich(|t| (one - t.conj()).inv(), |t| (z - t).inv());
        Matrix2::identity() + w * signature_j() * (one - z)
    }

    /// `‖J - Θ(z) J Θ(w)* - (1 - z w̄) F*(I - zT*)⁻¹ P⁻¹ (I - w̄T)⁻¹ F‖_∞`.
    pub fn kernel_residual(&self, z: C64, w: C64) -> f64 {
        let one = C64::new(1.0, 0.0);
        let j = signature_j();
        let lhs = j - self.theta(z) * j * self.theta(w).adjoint();
        let rhs = self.sandwich(|t| (one - z * t.conj()).inv(), |t| (one - w.conj() * t).inv())
            * (one - z * w.conj());
        norm2_inf(&(lhs - rhs))
    }

    /// `‖Θ(z) J Θ(z)* - J‖_∞`.
    pub fn j_unitarity_residual(&self, z: C64) -> f64 {
        let j = signature_j();
        let th = self.theta(z);
        norm2_inf(&(th * j * th.adjoint() - j))
    }

    /// `d(z) = θ21(z) f(z) - θ11(z)`.
    pub fn d(&self, z: C64, fz: C64) -> C64 {
        let th = self.theta(z);
        th[(1, 0)] * fz - th[(0, 0)]
    }

    /// `σ(z) = (θ12 - f θ22) / (θ21 f - θ11)`.
    pub fn extract_sigma(&self, f: &StandardFunction, z: C64) -> Result<C64, RealizationError> {
        let fz = f.eval(z)?;
        self.sigma_from_value(z, fz)
    }

    pub fn sigma_from_value(&self, z: C64, fz: C64) -> Result<C64, RealizationError> {
        let th = self.theta(z);
        let d = th[(1, 0)] * fz - th[(0, 0)];
        if d.norm() <= 1e-12 {
            return Err(RealizationError::Singularity { z, modulus: d.norm() });
        }
        Ok((th[(0, 1)] - fz * th[(1, 1)]) / d)
    }

    /// `F(z) = (θ11 σ + θ12) / (θ21 σ + θ22)`.
    pub fn reconstruct_f(&self, sigma: C64, z: C64) -> Result<C64, RealizationError> {
        let th = self.theta(z);
        let den = th[(1, 0)] * sigma + th[(1, 1)];
        if den.norm() <= 1e-12 {
            return Err(RealizationError::PoleOfF { z });
        }
        Ok((th[(0, 0)] * sigma + th[(0, 1)]) / den)
    }

    /// `[d_i (1 - σ_i σ̄_j)/(1 - ζ_i ζ̄_j) d̄_j]` at points off the nodes; equals the
    /// Schur complement of `P` in the Pick matrix on nodes and `ζ`, since
    /// `[1, -f(ζ)] Θ(ζ) = -d(ζ) [1, -σ(ζ)]`.
    pub fn sigma_kernel(&self, f: &StandardFunction, zetas: &[C64]) -> Result<DMatrix<C64>, RealizationError> {
        let one = C64::new(1.0, 0.0);
        let mut ds = Vec::with_capacity(zetas.len());
        let mut ss = Vec::with_capacity(zetas.len());
        for &z in zetas {
            let fz = f.eval(z)?;
            ds.push(self.d(z, fz));
            ss.push(self.sigma_from_value(z, fz)?);
        }
        let r = zetas.len();
        Ok(DMatrix::from_fn(r, r, |i, j| {
            ds[i] * (one - ss[i] * ss[j].conj()) / (one - zetas[i] * zetas[j].conj()) * ds[j].conj()
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{inertia, schur_complement, TolerancePolicy};
    use crate::model::{BlaschkeProduct, Jump, SchurPart, UnitDiskPoint};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn p(re: f64, im: f64) -> UnitDiskPoint {
        UnitDiskPoint::from_re_im(re, im).unwrap()
    }

    fn zero_fn() -> StandardFunction {
        StandardFunction::schur(SchurPart::constant(c(0.0, 0.0)).unwrap())
    }

    #[test]
    fn single_node_closed_form() {
        let th = build_theta(&zero_fn(), &PointConfig::from_values(&[c(0.0, 0.0)]).unwrap()).unwrap();
        for z in [c(0.3, 0.1), c(-0.5, 0.5), c(0.0, 0.0)] {
            let m = th.theta(z);
            let expected = Matrix2::new(z, c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
            assert!(norm2_inf(&(m - expected)) < 1e-15);
        }
        assert!(th.kernel_residual(c(0.0, 0.0), c(0.0, 0.0)) <= 1e-13);
        assert!(th.extract_sigma(&zero_fn(), c(0.4, 0.2)).unwrap().norm() < 1e-16);
        assert!(th.reconstruct_f(c(0.0, 0.0), c(0.4, 0.2)).unwrap().norm() < 1e-16);
    }

    #[test]
    fn theta_at_one_is_identity() {
        let f = StandardFunction::schur(SchurPart::polynomial(vec![c(0.2, 0.1), c(0.5, 0.0)]).unwrap());
        let nodes = PointConfig::from_values(&[c(0.1, 0.0), c(-0.3, 0.4), c(0.5, -0.5)]).unwrap();
        let th = build_theta(&f, &nodes).unwrap();
        assert!(norm2_inf(&(th.theta(c(1.0, 0.0)) - Matrix2::identity())) == 0.0);
    }

    #[test]
    fn jump_function_reconstructs_meromorphic_part() {
        let f = StandardFunction::new(
            SchurPart::constant(c(1.0, 0.0)).unwrap(),
            BlaschkeProduct::one(),
            vec![Jump { at: p(0.0, 0.0), value: c(0.0, 0.0) }],
            vec![],
        )
        .unwrap();
        let th = build_theta(&f, &PointConfig::from_values(&[c(0.0, 0.0), c(0.3, 0.0)]).unwrap()).unwrap();
        let z = c(0.7, 0.0);
        let s = th.extract_sigma(&f, z).unwrap();
        assert!((th.reconstruct_f(s, z).unwrap() - 1.0).norm() < 1e-10);
        for k in 0..32 {
            let e = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 32.0);
            assert!(th.j_unitarity_residual(e) <= 1e-10);
        }
    }

    #[test]
    fn singular_pick_is_rejected() {
        let f = StandardFunction::schur(SchurPart::constant(c(0.6, 0.8)).unwrap());
        let err = build_theta(&f, &PointConfig::from_values(&[c(0.1, 0.0)]).unwrap()).unwrap_err();
        assert!(matches!(err, RealizationError::SingularPick { .. }));
    }

    fn pole_jump_fn() -> StandardFunction {
        StandardFunction::new(
            SchurPart::polynomial(vec![c(0.3, 0.1), c(0.4, 0.0)]).unwrap(),
            BlaschkeProduct::factor(p(0.4, 0.2)),
            vec![Jump { at: p(-0.4, -0.1), value: c(0.5, -0.5) }],
            vec![p(0.4, 0.2)],
        )
        .unwrap()
    }

    #[test]
    fn symmetry_inverse_and_schur_complement_identity() {
        let f = pole_jump_fn();
        let nodes = PointConfig::from_values(&[
            c(0.42, 0.21),
            c(-0.4, -0.1),
            c(-0.38, -0.08),
            c(0.1, -0.6),
        ])
        .unwrap();
        let th = build_theta(&f, &nodes).unwrap();
        let pi = inertia(th.pick(), TolerancePolicy::default()).unwrap();
        assert_eq!(pi.negative, 2);
        for z in [c(0.2, 0.3), c(-0.7, 0.1), c(0.05, -0.2)] {
            let inv = th.theta(z).try_inverse().unwrap();
            assert!(norm2_inf(&(inv - th.theta_inverse_formula(z))) <= 1e-9);
        }
        let zetas = [c(0.2, 0.3), c(-0.7, 0.1), c(0.05, -0.2)];
        let mut all = nodes.values();
        all.extend(zetas);
        let vals: Vec<C64> = all.iter().map(|&z| f.eval(z).unwrap()).collect();
        let big = pick_matrix_from_values(&all, &vals).unwrap();
        let s = schur_complement(&big, 0..4, TolerancePolicy::default()).unwrap();
        assert!(s.is_additive());
        assert_eq!(s.total_inertia.negative, pi.negative + s.complement_inertia.negative);
        let k = th.sigma_kernel(&f, &zetas).unwrap();
        let diff = (s.complement.as_matrix() - &k).map(|x| x.norm()).max();
        assert!(diff <= 1e-9 * (1.0 + k.map(|x| x.norm()).max()), "{diff}");
    }
}
