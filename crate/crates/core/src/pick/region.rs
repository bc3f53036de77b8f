use rand::Rng;
use serde::{Deserialize, Serialize};

use super::PickError;
use crate::C64;

/// Largest modulus of randomly sampled whole-disk nodes.
pub const WHOLE_DISK_SAMPLE_RADIUS: f64 = 0.95;

/// Subset of the disk that nodes are drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    WholeDisk,
    Disk {
        center: C64,
        radius: f64,
    },
    /// `r_min ≤ |z| ≤ r_max`, `theta_min ≤ arg z ≤ theta_max` (radians, `theta_max - theta_min ≤ 2π`).
    AnnulusSector {
        r_min: f64,
        r_max: f64,
        theta_min: f64,
        theta_max: f64,
    },
}

fn angle_in(t: f64, lo: f64, hi: f64) -> bool {
    let two_pi = 2.0 * std::f64::consts::PI;
    let d = (t - lo).rem_euclid(two_pi);
    d <= hi - lo + 1e-15
}

impl Region {
    pub fn disk(center: C64, radius: f64) -> Result<Self, PickError> {
        Region::Disk { center, radius }.validated()
    }

    pub fn annulus_sector(r_min: f64, r_max: f64, theta_min: f64, theta_max: f64) -> Result<Self, PickError> {
        Region::AnnulusSector {
            r_min,
            r_max,
            theta_min,
            theta_max,
        }
        .validated()
    }

    /// Checks that the closure lies in the open disk and the region is nonempty.
    pub fn validated(self) -> Result<Self, PickError> {
        let bad = |m: String| Err(PickError::BadRegion(m));
        match self {
            Region::WholeDisk => Ok(self),
            Region::Disk { center, radius } => {
                if !(radius > 0.0) || !center.re.is_finite() || !center.im.is_finite() {
                    return bad(format!("disk radius {radius} must be positive"));
                }
                if center.norm() + radius >= 1.0 {
                    return bad(format!("closure of disk({center}, {radius}) meets the unit circle"));
                }
                Ok(self)
            }
            Region::AnnulusSector {
                r_min,
                r_max,
                theta_min,
                theta_max,
            } => {
                if !(0.0 <= r_min && r_min < r_max && r_max < 1.0) {
                    return bad(format!("radii must satisfy 0 <= {r_min} < {r_max} < 1"));
                }
                let span = theta_max - theta_min;
                if !(span > 0.0 && span <= 2.0 * std::f64::consts::PI) {
                    return bad(format!("angle span {span} must lie in (0, 2π]"));
                }
                Ok(self)
            }
        }
    }

    pub fn contains(&self, z: C64) -> bool {
        match *self {
            Region::WholeDisk => z.norm() < 1.0,
            Region::Disk { center, radius } => (z - center).norm() <= radius,
            Region::AnnulusSector {
                r_min,
                r_max,
                theta_min,
                theta_max,
            } => {
                let r = z.norm();
                r >= r_min && r <= r_max && (r == 0.0 || angle_in(z.arg(), theta_min, theta_max))
            }
        }
    }

    /// Uniform sample; whole-disk samples stay within [`WHOLE_DISK_SAMPLE_RADIUS`].
    pub fn sample(&self, rng: &mut impl Rng) -> C64 {
        let u: f64 = rng.random();
        let t: f64 = rng.random();
        match *self {
            Region::WholeDisk => {
                C64::from_polar(WHOLE_DISK_SAMPLE_RADIUS * u.sqrt(), 2.0 * std::f64::consts::PI * t)
            }
            Region::Disk { center, radius } => {
                center + C64::from_polar(radius * u.sqrt(), 2.0 * std::f64::consts::PI * t)
            }
            Region::AnnulusSector {
                r_min,
                r_max,
                theta_min,
                theta_max,
            } => {
                let r = (r_min * r_min + u * (r_max * r_max - r_min * r_min)).sqrt();
                C64::from_polar(r, theta_min + t * (theta_max - theta_min))
            }
        }
    }

    /// Characteristic length of the region.
    pub fn scale(&self) -> f64 {
        match *self {
            Region::WholeDisk => 1.0,
            Region::Disk { radius, .. } => radius,
            Region::AnnulusSector {
                r_min,
                r_max,
                theta_min,
                theta_max,
            } => (r_max - r_min).max(r_max * (theta_max - theta_min)).min(1.0),
        }
    }

    /// Regions this small are conditioned as a single cluster.
    pub fn is_small(&self) -> bool {
        matches!(*self, Region::Disk { radius, .. } if 2.0 * radius <= 0.25)
    }

    /// Parses `whole`, `disk,RE,IM,R` or `annulus,RMIN,RMAX,TMIN,TMAX`.
    pub fn parse(text: &str) -> Result<Self, PickError> {
        let mut parts = text.split(',').map(str::trim);
        let kind = parts.next().unwrap_or("");
        let nums: Vec<f64> = parts
            .map(|p| p.parse::<f64>().map_err(|_| PickError::BadRegion(format!("bad number '{p}'"))))
            .collect::<Result<_, _>>()?;
        let want = |k: usize| {
            if nums.len() == k {
                Ok(())
            } else {
                Err(PickError::BadRegion(format!("{kind} expects {k} parameters, got {}", nums.len())))
            }
        };
        match kind {
            "whole" | "whole-disk" | "whole_disk" => {
                want(0)?;
                Ok(Region::WholeDisk)
            }
            "disk" => {
                want(3)?;
                Region::disk(C64::new(nums[0], nums[1]), nums[2])
            }
            "annulus" | "annulus-sector" | "annulus_sector" => {
                want(4)?;
                Region::annulus_sector(nums[0], nums[1], nums[2], nums[3])
            }
            other => Err(PickError::BadRegion(format!("unknown region kind '{other}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;

    #[test]
    fn validation() {
        assert!(Region::disk(C64::new(0.5, 0.0), 0.5).is_err());
        assert!(Region::disk(C64::new(0.5, 0.0), 0.4).is_ok());
        assert!(Region::annulus_sector(0.2, 1.0, 0.0, 1.0).is_err());
        assert!(Region::annulus_sector(0.2, 0.9, 0.0, 7.0).is_err());
    }

    #[test]
    fn samples_stay_inside() {
        let regions = [
            Region::WholeDisk,
            Region::disk(C64::new(-0.5, 0.0), 0.3).unwrap(),
            Region::annulus_sector(0.3, 0.6, 2.0, 4.0).unwrap(),
            Region::annulus_sector(0.3, 0.6, -1.0, 1.0).unwrap(),
        ];
        let mut rng = seed::rng(1, &[]);
        for r in regions {
            for _ in 0..1000 {
                let z = r.sample(&mut rng);
                assert!(r.contains(z), "{r:?} {z}");
                assert!(z.norm() < 1.0);
            }
        }
    }

    #[test]
    fn parses_cli_forms() {
        assert_eq!(Region::parse("whole").unwrap(), Region::WholeDisk);
        assert_eq!(
            Region::parse("disk,-0.5,0,0.3").unwrap(),
            Region::Disk { center: C64::new(-0.5, 0.0), radius: 0.3 }
        );
        assert!(Region::parse("disk,0,0").is_err());
        assert!(Region::parse("square,0").is_err());
    }
}
