#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use skappa::model::{BlaschkeProduct, Jump, SchurPart, StandardFunction, UnitDiskPoint};
use skappa::C64;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn pt(z: C64) -> UnitDiskPoint {
    UnitDiskPoint::new(z).unwrap()
}

pub fn disk_point(rng: &mut ChaCha8Rng, r_max: f64) -> C64 {
    let r = r_max * rng.random::<f64>().sqrt();
    C64::from_polar(r, 2.0 * std::f64::consts::PI * rng.random::<f64>())
}

pub fn unit(rng: &mut ChaCha8Rng) -> C64 {
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI * rng.random::<f64>())
}

/// Points in `|z| ≤ r_max`, pairwise at least `sep` apart and away from `avoid`.
pub fn separated_points(rng: &mut ChaCha8Rng, n: usize, r_max: f64, sep: f64, avoid: &[C64]) -> Vec<C64> {
    let mut out: Vec<C64> = Vec::with_capacity(n);
    while out.len() < n {
        let z = disk_point(rng, r_max);
        if out.iter().chain(avoid).all(|w| (w - z).norm() >= sep) {
            out.push(z);
        }
    }
    out
}

/// A random Schur part: a polynomial with `Σ|c_k| < 1`, optionally times a
/// Blaschke factor.
pub fn random_schur(rng: &mut ChaCha8Rng) -> SchurPart {
    let deg = rng.random_range(0..=3);
    let raw: Vec<C64> = (0..=deg).map(|_| disk_point(rng, 1.0)).collect();
    let total: f64 = raw.iter().map(|x| x.norm()).sum();
    let target = rng.random_range(0.5..0.95);
    let coeffs: Vec<C64> = raw.iter().map(|x| x * (target / total)).collect();
    let poly = SchurPart::polynomial(coeffs).unwrap();
    if rng.random_bool(0.3) {
        let w = pt(disk_point(rng, 0.7));
        SchurPart::product(vec![poly, SchurPart::blaschke(BlaschkeProduct::factor(w))]).unwrap()
    } else {
        poly
    }
}

/// Multiplicities summing to `total`.
pub fn random_partition(rng: &mut ChaCha8Rng, total: u32) -> Vec<u32> {
    let mut left = total;
    let mut out = Vec::new();
    while left > 0 {
        let m = rng.random_range(1..=left);
        out.push(m);
        left -= m;
    }
    out
}

/// `S/B` with `deg B = kappa`, `|S| ≥ 0.05` at every zero of `B`.
pub fn random_krein_langer(rng: &mut ChaCha8Rng, kappa: u32) -> StandardFunction {
    loop {
        let mults = random_partition(rng, kappa);
        let zeros = separated_points(rng, mults.len(), 0.8, 0.15, &[]);
        let s = random_schur(rng);
        if zeros.iter().any(|&w| s.eval(w).norm() < 0.05) {
            continue;
        }
        let b = BlaschkeProduct::from_zeros(zeros.iter().zip(&mults).map(|(&w, &m)| (pt(w), m)).collect()).unwrap();
        if let Ok(f) = StandardFunction::krein_langer_quotient(s, b) {
            return f;
        }
    }
}

/// Standard function with `q` poles and `l` jumps; with `coincide` the first
/// jump sits on a pole.
pub fn random_standard(rng: &mut ChaCha8Rng, q: u32, l: usize, coincide: bool) -> StandardFunction {
    loop {
        let mults = random_partition(rng, q);
        let pts = separated_points(rng, mults.len() + l, 0.8, 0.15, &[]);
        let (poles, jump_pts) = pts.split_at(mults.len());
        let mut jump_pts = jump_pts.to_vec();
        if coincide && !poles.is_empty() && l > 0 {
            jump_pts[0] = poles[0];
        }
        let s = random_schur(rng);
        if poles.iter().any(|&w| s.eval(w).norm() < 0.05) {
            continue;
        }
        let b = BlaschkeProduct::from_zeros(poles.iter().zip(&mults).map(|(&w, &m)| (pt(w), m)).collect()).unwrap();
        let jumps: Vec<Jump> = jump_pts
            .iter()
            .map(|&z| {
                let base = if poles.contains(&z) { c(0.0, 0.0) } else { s.eval(z) / b.eval(z) };
                let mut v = disk_point(rng, 1.5);
                if (v - base).norm() < 0.3 {
                    v = base + unit(rng) * 0.5;
                }
                Jump { at: pt(z), value: v }
            })
            .collect();
        let undefined: Vec<UnitDiskPoint> = poles.iter().filter(|w| !jump_pts.contains(w)).map(|&w| pt(w)).collect();
        if let Ok(f) = StandardFunction::new(s, b, jumps, undefined) {
            return f;
        }
    }
}

/// `1` with the value `a` at the origin.
pub fn small_jump(a: f64) -> StandardFunction {
    StandardFunction::new(
        SchurPart::constant(c(1.0, 0.0)).unwrap(),
        BlaschkeProduct::one(),
        vec![Jump { at: pt(c(0.0, 0.0)), value: c(a, 0.0) }],
        vec![],
    )
    .unwrap()
}
