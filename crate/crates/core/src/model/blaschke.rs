use serde::{Deserialize, Serialize};

use super::{ModelError, UnitDiskPoint};
use crate::C64;

/// Finite Blaschke product `phase · Π ((z - w)/(1 - conj(w) z))^m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeProduct {
    zeros: Vec<(UnitDiskPoint, u32)>,
    phase: C64,
}

fn merge(zeros: Vec<(UnitDiskPoint, u32)>) -> Result<Vec<(UnitDiskPoint, u32)>, ModelError> {
    let mut out: Vec<(UnitDiskPoint, u32)> = Vec::new();
    for (w, m) in zeros {
        if m == 0 {
            return Err(ModelError::ZeroMultiplicity);
        }
        match out.iter_mut().find(|(v, _)| v.value() == w.value()) {
            Some(slot) => slot.1 += m,
            None => out.push((w, m)),
        }
    }
    Ok(out)
}

impl BlaschkeProduct {
    /// Zeros with multiplicities and a unimodular constant. Repeated zeros merge.
    pub fn new(zeros: Vec<(UnitDiskPoint, u32)>, phase: C64) -> Result<Self, ModelError> {
        if (phase.norm() - 1.0).abs() > 1e-12 {
            return Err(ModelError::NotUnimodular(phase));
        }
        Ok(Self {
            zeros: merge(zeros)?,
            phase,
        })
    }

    /// Phase 1.
    pub fn from_zeros(zeros: Vec<(UnitDiskPoint, u32)>) -> Result<Self, ModelError> {
        Self::new(zeros, C64::new(1.0, 0.0))
    }

    /// Phase chosen so that `b(1) = 1`.
    pub fn normalized(zeros: Vec<(UnitDiskPoint, u32)>) -> Result<Self, ModelError> {
        let mut b = Self::from_zeros(zeros)?;
        let v = b.eval(C64::new(1.0, 0.0));
        b.phase = (v / v.norm()).inv();
        Ok(b)
    }

    /// Constant 1.
    pub fn one() -> Self {
        Self {
            zeros: Vec::new(),
            phase: C64::new(1.0, 0.0),
        }
    }

    /// Single factor `(z - w)/(1 - conj(w) z)`.
    pub fn factor(w: UnitDiskPoint) -> Self {
        Self {
            zeros: vec![(w, 1)],
            phase: C64::new(1.0, 0.0),
        }
    }

    pub fn zeros(&self) -> &[(UnitDiskPoint, u32)] {
        &self.zeros
    }

    pub fn phase(&self) -> C64 {
        self.phase
    }

    pub fn degree(&self) -> usize {
        self.zeros.iter().map(|&(_, m)| m as usize).sum()
    }

    /// Evaluates at any complex `z` with `conj(w) z ≠ 1` for every zero.
    pub fn eval(&self, z: C64) -> C64 {
        let one = C64::new(1.0, 0.0);
        self.zeros.iter().fold(self.phase, |acc, &(w, m)| {
            let w = w.value();
            acc * ((z - w) / (one - w.conj() * z)).powu(m)
        })
    }

    /// Multiplicity of `w` as a zero (exact match of the stored point).
    pub fn multiplicity_at(&self, w: C64) -> u32 {
        self.zeros
            .iter()
            .find(|(v, _)| v.value() == w)
            .map_or(0, |&(_, m)| m)
    }

    /// Product of two Blaschke products.
    pub fn mul(&self, other: &BlaschkeProduct) -> BlaschkeProduct {
        let mut zeros = self.zeros.clone();
        zeros.extend(other.zeros.iter().copied());
        BlaschkeProduct {
            zeros: merge(zeros).expect("multiplicities are positive"),
            phase: self.phase * other.phase,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::quasi_random_disk;
    use proptest::prelude::*;

    fn p(re: f64, im: f64) -> UnitDiskPoint {
        UnitDiskPoint::from_re_im(re, im).unwrap()
    }

    #[test]
    fn normalized_factor_at_half() {
        let b = BlaschkeProduct::normalized(vec![(p(0.5, 0.0), 1)]).unwrap();
        assert!((b.eval(C64::new(1.0, 0.0)) - 1.0).norm() < 1e-15);
        assert!((b.eval(C64::new(0.0, 0.0)) + 0.5).norm() < 1e-15);
    }

    #[test]
    fn normalization_removes_rotation() {
        let b = BlaschkeProduct::normalized(vec![(p(0.2, 0.6), 2), (p(-0.3, -0.1), 1)]).unwrap();
        assert!((b.eval(C64::new(1.0, 0.0)) - 1.0).norm() < 1e-14);
        assert!((b.phase().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn merges_repeated_zeros() {
        let b = BlaschkeProduct::from_zeros(vec![(p(0.5, 0.0), 1), (p(0.5, 0.0), 2)]).unwrap();
        assert_eq!(b.zeros().len(), 1);
        assert_eq!(b.degree(), 3);
        assert!(BlaschkeProduct::from_zeros(vec![(p(0.5, 0.0), 0)]).is_err());
        assert!(BlaschkeProduct::new(vec![], C64::new(0.5, 0.0)).is_err());
    }

    proptest! {
        #[test]
        fn inner_on_circle_contractive_inside(
            zs in prop::collection::vec((0.0f64..0.95, 0.0f64..6.3, 1u32..3), 1..4),
        ) {
            let zeros: Vec<_> = zs.iter().map(|&(r, t, m)| (p(r * t.cos(), r * t.sin()), m)).collect();
            let b = BlaschkeProduct::from_zeros(zeros).unwrap();
            for k in 0..100 {
                let t = 2.0 * std::f64::consts::PI * k as f64 / 100.0;
                prop_assert!((b.eval(C64::from_polar(1.0, t)).norm() - 1.0).abs() < 1e-12);
            }
            for z in quasi_random_disk(200, 0.999) {
                prop_assert!(b.eval(z).norm() < 1.0);
            }
        }
    }
}
