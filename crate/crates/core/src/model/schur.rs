use super::{BlaschkeProduct, ModelError};
use crate::C64;

/// Slack allowed above 1 for Schur bounds and sampled values.
pub const SUP_SLACK: f64 = 1e-12;
const CIRCLE_SAMPLES: usize = 4096;
const DISK_CHECKS: usize = 1000;

/// `n` sunflower (golden-angle) points filling the disk of radius `r_max`.
pub fn quasi_random_disk(n: usize, r_max: f64) -> Vec<C64> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let r = r_max * ((k as f64 + 0.5) / n as f64).sqrt();
            C64::from_polar(r, golden * k as f64)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Expr {
    Constant(C64),
    /// Coefficients in ascending degree.
    Poly(Vec<C64>),
    Blaschke(BlaschkeProduct),
    Product(Vec<SchurPart>),
    Scale(f64, Box<SchurPart>),
}

/// Analytic self-map of the disk into its closure, from a closed grammar
/// whose supremum on the disk can be certified.
#[derive(Clone, Debug, PartialEq)]
pub struct SchurPart {
    expr: Expr,
    bound: f64,
}

fn horner(c: &[C64], z: C64) -> C64 {
    c.iter().rev().fold(C64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

/// Upper bound for `sup_{|z|<1} |p(z)|`: the smaller of the coefficient sum and
/// the circle-sample maximum inflated by the Bernstein derivative bound.
fn poly_sup_bound(c: &[C64]) -> f64 {
    let coeff_sum: f64 = c.iter().map(|a| a.norm()).sum();
    let d = c.len().saturating_sub(1) as f64;
    let slack = d * std::f64::consts::PI / CIRCLE_SAMPLES as f64;
    if slack >= 1.0 {
        return coeff_sum;
    }
    let sampled = (0..CIRCLE_SAMPLES)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / CIRCLE_SAMPLES as f64;
            horner(c, C64::from_polar(1.0, t)).norm()
        })
        .fold(0.0, f64::max);
    coeff_sum.min(sampled / (1.0 - slack))
}

impl SchurPart {
    fn checked(expr: Expr, bound: f64) -> Result<Self, ModelError> {
        if !(bound <= 1.0 + SUP_SLACK) {
            return Err(ModelError::NotSchur { bound });
        }
        let s = Self { expr, bound };
        for z in quasi_random_disk(DISK_CHECKS, 0.999) {
            let v = s.eval(z).norm();
            if !(v <= 1.0 + SUP_SLACK) {
                return Err(ModelError::NotSchur { bound: v });
            }
        }
        Ok(s)
    }

    pub fn constant(c: C64) -> Result<Self, ModelError> {
        Self::checked(Expr::Constant(c), c.norm())
    }

    /// `Σ c_k z^k`, certified by [`poly_sup_bound`].
    pub fn polynomial(coeffs: Vec<C64>) -> Result<Self, ModelError> {
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(ModelError::NotSchur { bound: f64::NAN });
        }
        let bound = poly_sup_bound(&coeffs);
        Self::checked(Expr::Poly(coeffs), bound)
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut c = vec![C64::new(0.0, 0.0); n + 1];
        c[n] = C64::new(1.0, 0.0);
        Self {
            expr: Expr::Poly(c),
            bound: 1.0,
        }
    }

    pub fn blaschke(b: BlaschkeProduct) -> Self {
        Self {
            expr: Expr::Blaschke(b),
            bound: 1.0,
        }
    }

    pub fn product(factors: Vec<SchurPart>) -> Result<Self, ModelError> {
        let bound = factors.iter().map(|f| f.bound).product();
        Self::checked(Expr::Product(factors), bound)
    }

    /// `r · inner` with `0 ≤ r ≤ 1`.
    pub fn scale(r: f64, inner: SchurPart) -> Result<Self, ModelError> {
        if !(0.0..=1.0).contains(&r) {
            return Err(ModelError::BadScale(r));
        }
        let bound = r * inner.bound;
        Self::checked(Expr::Scale(r, Box::new(inner)), bound)
    }

    /// Certified upper bound for the supremum on the disk.
    pub fn sup_bound(&self) -> f64 {
        self.bound
    }

    pub(crate) fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn eval(&self, z: C64) -> C64 {
        match &self.expr {
            Expr::Constant(c) => *c,
            Expr::Poly(c) => horner(c, z),
            Expr::Blaschke(b) => b.eval(z),
            Expr::Product(fs) => fs.iter().fold(C64::new(1.0, 0.0), |acc, f| acc * f.eval(z)),
            Expr::Scale(r, inner) => inner.eval(z) * *r,
        }
    }
}
