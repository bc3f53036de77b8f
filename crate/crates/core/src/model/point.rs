use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::C64;

/// Points with `|z| ≥ 1 - DISK_MARGIN` are rejected.
pub const DISK_MARGIN: f64 = 1e-14;
/// Minimum pairwise distance within a [`PointConfig`].
pub const MIN_SEPARATION: f64 = 1e-12;

/// A point of the open unit disk.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "C64", into = "C64")]
pub struct UnitDiskPoint(C64);

impl UnitDiskPoint {
    pub fn new(z: C64) -> Result<Self, ModelError> {
        if z.re.is_finite() && z.im.is_finite() && z.norm() < 1.0 - DISK_MARGIN {
            Ok(Self(z))
        } else {
            Err(ModelError::OutsideDisk(z))
        }
    }

    pub fn from_re_im(re: f64, im: f64) -> Result<Self, ModelError> {
        Self::new(C64::new(re, im))
    }

    pub fn value(&self) -> C64 {
        self.0
    }
}

impl TryFrom<C64> for UnitDiskPoint {
    type Error = ModelError;
    fn try_from(z: C64) -> Result<Self, ModelError> {
        Self::new(z)
    }
}

impl From<UnitDiskPoint> for C64 {
    fn from(p: UnitDiskPoint) -> C64 {
        p.0
    }
}

/// Ordered list of pairwise distinct disk points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointConfig {
    points: Vec<UnitDiskPoint>,
    min_separation: f64,
}

impl PointConfig {
    pub fn new(points: Vec<UnitDiskPoint>) -> Result<Self, ModelError> {
        let mut min_sep = f64::INFINITY;
        for i in 0..points.len() {
            for j in 0..i {
                let d = (points[i].0 - points[j].0).norm();
                if d < MIN_SEPARATION {
                    return Err(ModelError::NotDistinct { i: j, j: i, distance: d });
                }
                min_sep = min_sep.min(d);
            }
        }
        Ok(Self {
            points,
            min_separation: min_sep,
        })
    }

    pub fn from_values(values: &[C64]) -> Result<Self, ModelError> {
        let pts = values
            .iter()
            .map(|&z| UnitDiskPoint::new(z))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(pts)
    }

    pub fn empty() -> Self {
        Self {
            points: Vec::new(),
            min_separation: f64::INFINITY,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[UnitDiskPoint] {
        &self.points
    }

    pub fn values(&self) -> Vec<C64> {
        self.points.iter().map(|p| p.0).collect()
    }

    /// Minimum pairwise distance, `+∞` for fewer than two points.
    pub fn min_separation(&self) -> f64 {
        self.min_separation
    }

    /// Copy with the points reordered by `perm`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            points: perm.iter().map(|&i| self.points[i]).collect(),
            min_separation: self.min_separation,
        }
    }

    pub fn with_point(&self, p: UnitDiskPoint) -> Result<Self, ModelError> {
        let mut pts = self.points.clone();
        pts.push(p);
        Self::new(pts)
    }
}

impl<'de> Deserialize<'de> for PointConfig {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            points: Vec<UnitDiskPoint>,
        }
        let raw = Raw::deserialize(d)?;
        PointConfig::new(raw.points).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_boundary_and_outside() {
        assert!(UnitDiskPoint::from_re_im(1.0, 0.0).is_err());
        assert!(UnitDiskPoint::from_re_im(1.0 - 1e-15, 0.0).is_err());
        assert!(UnitDiskPoint::from_re_im(0.0, 0.999).is_ok());
        assert!(UnitDiskPoint::from_re_im(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn separation_is_enforced() {
        let a = C64::new(0.1, 0.0);
        assert!(PointConfig::from_values(&[a, a + C64::new(1e-13, 0.0)]).is_err());
        let pc = PointConfig::from_values(&[a, a + C64::new(1e-6, 0.0)]).unwrap();
        assert!((pc.min_separation() - 1e-6).abs() < 1e-15);
    }
}
