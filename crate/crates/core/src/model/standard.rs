use serde::{Deserialize, Serialize};

use super::{BlaschkeProduct, Clause, ModelError, SchurPart, UnitDiskPoint, MIN_SEPARATION};
use crate::C64;

/// `|S(w)|` at a zero `w` of `B` must exceed this.
pub const COMMON_ZERO_TOL: f64 = 1e-10;
/// A jump value must differ from `S/B` by more than this.
pub const JUMP_MARGIN: f64 = 1e-12;

/// Point where the assigned value replaces `S/B`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Jump {
    pub at: UnitDiskPoint,
    pub value: C64,
}

/// `(q, ℓ, κ)`: pole count with multiplicity, jump count, and `κ = q + ℓ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub q: usize,
    pub l: usize,
    pub kappa: usize,
}

/// `f = S/B` on the disk minus the undefined poles, with `f(z_j) = γ_j` at jumps.
#[derive(Clone, Debug, PartialEq)]
pub struct StandardFunction {
    schur: SchurPart,
    blaschke: BlaschkeProduct,
    jumps: Vec<Jump>,
    undefined: Vec<UnitDiskPoint>,
}

impl StandardFunction {
    pub fn new(
        schur: SchurPart,
        blaschke: BlaschkeProduct,
        jumps: Vec<Jump>,
        undefined_poles: Vec<UnitDiskPoint>,
    ) -> Result<Self, ModelError> {
        let mut all: Vec<C64> = jumps.iter().map(|j| j.at.value()).collect();
        all.extend(undefined_poles.iter().map(|w| w.value()));
        for i in 0..all.len() {
            for k in 0..i {
                if (all[i] - all[k]).norm() < MIN_SEPARATION {
                    return Err(ModelError::clause(
                        Clause::Distinct,
                        format!("{} appears twice among jumps and undefined poles", all[i]),
                    ));
                }
            }
        }
        for w in &undefined_poles {
            if blaschke.multiplicity_at(w.value()) == 0 {
                return Err(ModelError::clause(
                    Clause::Poles,
                    format!("undefined pole {} is not a zero of B", w.value()),
                ));
            }
        }
        for &(w, _) in blaschke.zeros() {
            let w = w.value();
            let covered = undefined_poles.iter().any(|u| u.value() == w)
                || jumps.iter().any(|j| j.at.value() == w);
            if !covered {
                return Err(ModelError::clause(
                    Clause::Poles,
                    format!("zero {w} of B is neither an undefined pole nor a jump"),
                ));
            }
            let s = schur.eval(w).norm();
            if s <= COMMON_ZERO_TOL {
                return Err(ModelError::clause(
                    Clause::Poles,
                    format!("S and B share the zero {w} (|S| = {s:e})"),
                ));
            }
        }
        for j in &jumps {
            let z = j.at.value();
            if blaschke.multiplicity_at(z) == 0 {
                let base = schur.eval(z) / blaschke.eval(z);
                if (j.value - base).norm() <= JUMP_MARGIN {
                    return Err(ModelError::clause(
                        Clause::GenuineJump,
                        format!("value at {z} equals S/B = {base}"),
                    ));
                }
            }
        }
        Ok(Self {
            schur,
            blaschke,
            jumps,
            undefined: undefined_poles,
        })
    }

    /// `S/B` with every zero of `B` an undefined pole and no jumps.
    pub fn krein_langer_quotient(s: SchurPart, b: BlaschkeProduct) -> Result<Self, ModelError> {
        for &(w, _) in b.zeros() {
            if s.eval(w.value()).norm() <= COMMON_ZERO_TOL {
                return Err(ModelError::CommonZero(w.value()));
            }
        }
        let undefined = b.zeros().iter().map(|&(w, _)| w).collect();
        Self::new(s, b, Vec::new(), undefined)
    }

    /// A Schur function with no poles or jumps.
    pub fn schur(s: SchurPart) -> Self {
        Self {
            schur: s,
            blaschke: BlaschkeProduct::one(),
            jumps: Vec::new(),
            undefined: Vec::new(),
        }
    }

    pub fn schur_part(&self) -> &SchurPart {
        &self.schur
    }

    pub fn blaschke(&self) -> &BlaschkeProduct {
        &self.blaschke
    }

    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    pub fn undefined_poles(&self) -> &[UnitDiskPoint] {
        &self.undefined
    }

    /// Distinct poles with multiplicities.
    pub fn poles(&self) -> Vec<(C64, u32)> {
        self.blaschke
            .zeros()
            .iter()
            .map(|&(w, m)| (w.value(), m))
            .collect()
    }

    pub fn classify_counts(&self) -> Counts {
        let q = self.blaschke.degree();
        let l = self.jumps.len();
        Counts { q, l, kappa: q + l }
    }

    pub fn jump_at(&self, z: C64) -> Option<C64> {
        self.jumps.iter().find(|j| j.at.value() == z).map(|j| j.value)
    }

    pub fn is_undefined_at(&self, z: C64) -> bool {
        self.undefined.iter().any(|w| w.value() == z)
    }

    /// `(S(z), B(z))`.
    pub fn quotient_parts(&self, z: C64) -> (C64, C64) {
        (self.schur.eval(z), self.blaschke.eval(z))
    }

    /// `S(z)/B(z)` ignoring jumps.
    pub fn meromorphic(&self, z: C64) -> Result<C64, ModelError> {
        let (s, b) = self.quotient_parts(z);
        if b.norm() < 1e-300 {
            return Err(ModelError::Overflow(z));
        }
        Ok(s / b)
    }

    /// `γ_j` at a stored jump node, undefined at a pole in `𝒲`, otherwise `S/B`.
    pub fn eval(&self, z: C64) -> Result<C64, ModelError> {
        if let Some(g) = self.jump_at(z) {
            return Ok(g);
        }
        if self.is_undefined_at(z) {
            return Err(ModelError::UndefinedAtPole(z));
        }
        self.meromorphic(z)
    }
}
