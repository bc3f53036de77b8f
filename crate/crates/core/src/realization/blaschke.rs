//! `b(z) = 1 + (z - 1) E*(I - zA*)⁻¹ K⁻¹ (I - A)⁻¹ E` with `A` block diagonal of
//! lower Jordan blocks `J_r(w)`, `E` stacking first unit vectors and
//! `K - A K A* = E E*`. The result is the Blaschke product with `b(1) = 1`.

use nalgebra::{DMatrix, DVector, LU, Dyn};

use super::RealizationError;
use crate::hermitian::{inertia, solve_stein, HermitianMatrix, SteinData, TolerancePolicy};
use crate::model::UnitDiskPoint;
use crate::C64;

#[derive(Clone, Debug)]
pub struct BlaschkeRealization {
    a: DMatrix<C64>,
    e: DVector<C64>,
    k: HermitianMatrix,
    k_lu: LU<C64, Dyn, Dyn>,
    observable: bool,
}

pub fn realize_blaschke(zeros: &[(UnitDiskPoint, u32)]) -> Result<BlaschkeRealization, RealizationError> {
    let n: usize = zeros.iter().map(|&(_, m)| m as usize).sum();
    if n == 0 {
        return Err(RealizationError::NoNodes);
    }
    if zeros.iter().any(|&(_, m)| m == 0) {
        return Err(crate::model::ModelError::ZeroMultiplicity.into());
    }
    let mut a = DMatrix::zeros(n, n);
    let mut e = DVector::zeros(n);
    let mut off = 0;
    for &(w, r) in zeros {
        let r = r as usize;
        e[off] = C64::new(1.0, 0.0);
        for i in 0..r {
            a[(off + i, off + i)] = w.value();
            if i > 0 {
                a[(off + i, off + i - 1)] = C64::new(1.0, 0.0);
            }
        }
        off += r;
    }
    let rhs = HermitianMatrix::outer(e.as_slice());
    let k = solve_stein(&SteinData::new(a.clone(), rhs)?)?;
    let ki = inertia(&k, TolerancePolicy::Absolute(0.0))?;
    if ki.positive != n {
        return Err(RealizationError::NotPositiveDefinite);
    }
    // Observability of (E*, A*): rows E* A*^j.
    let mut obs = DMatrix::zeros(n, n);
    let mut row = e.adjoint();
    for j in 0..n {
        obs.set_row(j, &row);
        row *= a.adjoint();
    }
    let sv = obs.singular_values();
    let observable = sv.min() > 1e-14 * sv.max();
    let k_lu = k.as_matrix().clone().lu();
    Ok(BlaschkeRealization {
        a,
        e,
        k,
        k_lu,
        observable,
    })
}

impl BlaschkeRealization {
    pub fn a(&self) -> &DMatrix<C64> {
        &self.a
    }

    pub fn e(&self) -> &DVector<C64> {
        &self.e
    }

    pub fn gram(&self) -> &HermitianMatrix {
        &self.k
    }

    pub fn is_observable(&self) -> bool {
        self.observable
    }

    pub fn degree(&self) -> usize {
        self.e.len()
    }

    /// `E*(I - zA*)⁻¹ K⁻¹ (I - w̄A)⁻¹ E`.
    fn form(&self, z: C64, w: C64) -> C64 {
        let n = self.degree();
        let id = DMatrix::<C64>::identity(n, n);
        let right = (&id - &self.a * w.conj())
            .lu()
            .solve(&self.e)
            .expect("spectral radius below one");
        let mid = self.k_lu.solve(&right).expect("K is positive definite");
        let left = (&id - self.a.adjoint() * z)
            .lu()
            .solve(&mid)
            .expect("spectral radius below one");
        self.e.dotc(&left)
    }

    pub fn eval(&self, z: C64) -> C64 {
        let one = C64::new(1.0, 0.0);
        one + (z - one) * self.form(z, one)
    }

    /// `|1 - b(z) b(w)* - (1 - z w̄) E*(I - zA*)⁻¹ K⁻¹ (I - w̄A)⁻¹ E|`.
    pub fn kernel_residual(&self, z: C64, w: C64) -> f64 {
        let one = C64::new(1.0, 0.0);
        let lhs = one - self.eval(z) * self.eval(w).conj();
        let rhs = (one - z * w.conj()) * self.form(z, w);
        (lhs - rhs).norm()
    }

    /// Zeros inside the circle of radius `r`, by the argument principle.
    pub fn winding_number(&self, r: f64, samples: usize) -> i64 {
        let mut total = 0.0;
        let mut prev = self.eval(C64::new(r, 0.0));
        for k in 1..=samples {
            let z = C64::from_polar(r, 2.0 * std::f64::consts::PI * k as f64 / samples as f64);
            let cur = self.eval(z);
            total += (cur / prev).arg();
            prev = cur;
        }
        (total / (2.0 * std::f64::consts::PI)).round() as i64
    }
}
