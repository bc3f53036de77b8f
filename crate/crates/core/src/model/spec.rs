//! JSON document form of a [`StandardFunction`].
//!
//! ```json
//! {
//!   "spec_version": 1,
//!   "schur": {"kind": "constant", "value": [1.0, 0.0]},
//!   "blaschke": [{"zero": [0.5, 0.0], "mult": 1}],
//!   "jumps": [{"at": [0.0, 0.0], "value": [0.0, 0.0]}],
//!   "undefined_poles": [[0.5, 0.0]]
//! }
//! ```
//!
//! Schur nodes: `constant {value}`, `poly {coeffs}` (ascending degree),
//! `blaschke {zeros, phase?}`, `product {factors}`, `scale {r, inner}`.
//! The denominator may carry an optional `blaschke_phase` (default `[1, 0]`).

use serde::{Deserialize, Serialize};

use super::schur::Expr;
use super::{BlaschkeProduct, Jump, ModelError, SchurPart, StandardFunction, UnitDiskPoint};
use crate::C64;

pub const SPEC_VERSION: u32 = 1;

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZeroSpec {
    pub zero: C64,
    pub mult: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JumpSpec {
    pub at: C64,
    pub value: C64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SchurSpec {
    Constant {
        value: C64,
    },
    Poly {
        coeffs: Vec<C64>,
    },
    Blaschke {
        zeros: Vec<ZeroSpec>,
        #[serde(default = "one")]
        phase: C64,
    },
    Product {
        factors: Vec<SchurSpec>,
    },
    Scale {
        r: f64,
        inner: Box<SchurSpec>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    pub spec_version: u32,
    pub schur: SchurSpec,
    #[serde(default)]
    pub blaschke: Vec<ZeroSpec>,
    #[serde(default = "one")]
    pub blaschke_phase: C64,
    #[serde(default)]
    pub jumps: Vec<JumpSpec>,
    #[serde(default)]
    pub undefined_poles: Vec<C64>,
}

fn zeros_of(z: &[ZeroSpec]) -> Result<Vec<(UnitDiskPoint, u32)>, ModelError> {
    z.iter()
        .map(|z| Ok((UnitDiskPoint::new(z.zero)?, z.mult)))
        .collect()
}

fn zeros_spec(b: &BlaschkeProduct) -> Vec<ZeroSpec> {
    b.zeros()
        .iter()
        .map(|&(w, m)| ZeroSpec {
            zero: w.value(),
            mult: m,
        })
        .collect()
}

impl SchurSpec {
    pub fn build(&self) -> Result<SchurPart, ModelError> {
        match self {
            SchurSpec::Constant { value } => SchurPart::constant(*value),
            SchurSpec::Poly { coeffs } => SchurPart::polynomial(coeffs.clone()),
            SchurSpec::Blaschke { zeros, phase } => {
                Ok(SchurPart::blaschke(BlaschkeProduct::new(zeros_of(zeros)?, *phase)?))
            }
            SchurSpec::Product { factors } => {
                SchurPart::product(factors.iter().map(|f| f.build()).collect::<Result<_, _>>()?)
            }
            SchurSpec::Scale { r, inner } => SchurPart::scale(*r, inner.build()?),
        }
    }

    pub fn from_part(s: &SchurPart) -> Self {
        match s.expr() {
            Expr::Constant(c) => SchurSpec::Constant { value: *c },
            Expr::Poly(c) => SchurSpec::Poly { coeffs: c.clone() },
            Expr::Blaschke(b) => SchurSpec::Blaschke {
                zeros: zeros_spec(b),
                phase: b.phase(),
            },
            Expr::Product(fs) => SchurSpec::Product {
                factors: fs.iter().map(SchurSpec::from_part).collect(),
            },
            Expr::Scale(r, inner) => SchurSpec::Scale {
                r: *r,
                inner: Box::new(SchurSpec::from_part(inner)),
            },
        }
    }
}

impl FunctionSpec {
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        serde_json::from_str(text).map_err(|e| ModelError::Schema(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn build(&self) -> Result<StandardFunction, ModelError> {
        if self.spec_version != SPEC_VERSION {
            return Err(ModelError::Schema(format!(
                "unsupported spec_version {} (expected {SPEC_VERSION})",
                self.spec_version
            )));
        }
        let schur = self.schur.build()?;
        let b = BlaschkeProduct::new(zeros_of(&self.blaschke)?, self.blaschke_phase)?;
        let jumps = self
            .jumps
            .iter()
            .map(|j| {
                Ok(Jump {
                    at: UnitDiskPoint::new(j.at)?,
                    value: j.value,
                })
            })
            .collect::<Result<Vec<_>, ModelError>>()?;
        let undefined = self
            .undefined_poles
            .iter()
            .map(|&w| UnitDiskPoint::new(w))
            .collect::<Result<Vec<_>, _>>()?;
        StandardFunction::new(schur, b, jumps, undefined)
    }

    pub fn from_function(f: &StandardFunction) -> Self {
        Self {
            spec_version: SPEC_VERSION,
            schur: SchurSpec::from_part(f.schur_part()),
            blaschke: zeros_spec(f.blaschke()),
            blaschke_phase: f.blaschke().phase(),
            jumps: f
                .jumps()
                .iter()
                .map(|j| JumpSpec {
                    at: j.at.value(),
                    value: j.value,
                })
                .collect(),
            undefined_poles: f.undefined_poles().iter().map(|w| w.value()).collect(),
        }
    }
}

impl StandardFunction {
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        FunctionSpec::from_json(text)?.build()
    }

    pub fn to_json(&self) -> String {
        FunctionSpec::from_function(self).to_json()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Clause;

    const JUMP: &str = r#"{
        "spec_version": 1,
        "schur": {"kind": "constant", "value": [1.0, 0.0]},
        "jumps": [{"at": [0.0, 0.0], "value": [0.0, 0.0]}]
    }"#;

    #[test]
    fn round_trip_jump_function() {
        let f = StandardFunction::from_json(JUMP).unwrap();
        let g = StandardFunction::from_json(&f.to_json()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn round_trip_nested_tree() {
        let text = r#"{
            "spec_version": 1,
            "schur": {"kind": "scale", "r": 0.9, "inner": {"kind": "product", "factors": [
                {"kind": "poly", "coeffs": [[0.0, 0.0], [1.0, 0.0]]},
                {"kind": "blaschke", "zeros": [{"zero": [-0.2, 0.3], "mult": 2}]}
            ]}},
            "blaschke": [{"zero": [0.5, 0.0], "mult": 1}],
            "undefined_poles": [[0.5, 0.0]]
        }"#;
        let f = StandardFunction::from_json(text).unwrap();
        assert_eq!(f.classify_counts().kappa, 1);
        assert_eq!(StandardFunction::from_json(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn rejects_non_genuine_jump() {
        let text = r#"{
            "spec_version": 1,
            "schur": {"kind": "constant", "value": [1.0, 0.0]},
            "jumps": [{"at": [0.3, 0.0], "value": [1.0, 0.0]}]
        }"#;
        assert!(matches!(
            StandardFunction::from_json(text),
            Err(ModelError::Definition { clause: Clause::GenuineJump, .. })
        ));
    }

    #[test]
    fn rejects_shared_zero() {
        let text = r#"{
            "spec_version": 1,
            "schur": {"kind": "blaschke", "zeros": [{"zero": [0.5, 0.0], "mult": 1}]},
            "blaschke": [{"zero": [0.5, 0.0], "mult": 1}],
            "undefined_poles": [[0.5, 0.0]]
        }"#;
        assert!(matches!(
            StandardFunction::from_json(text),
            Err(ModelError::Definition { clause: Clause::Poles, .. })
        ));
    }

    #[test]
    fn rejects_bad_schema() {
        assert!(matches!(
            StandardFunction::from_json(r#"{"spec_version": 1}"#),
            Err(ModelError::Schema(_))
        ));
        assert!(matches!(
            StandardFunction::from_json(&JUMP.replace("\"spec_version\": 1", "\"spec_version\": 2")),
            Err(ModelError::Schema(_))
        ));
        assert!(matches!(
            StandardFunction::from_json(&JUMP.replace("\"constant\"", "\"wavelet\"")),
            Err(ModelError::Schema(_))
        ));
    }
}
