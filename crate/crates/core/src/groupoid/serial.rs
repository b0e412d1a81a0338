//! JSON wire format for groupoids.
//!
//! ```json
//! {
//!   "objects": ["x", "y"],
//!   "morphisms": [{"id": "f", "src": "x", "tgt": "y"}],
//!   "identities": {"x": "idx"},
//!   "compose": [["f", "g", "fg"]],
//!   "inverses": {"f": "finv"}
//! }
//! ```
//!
//! Composition triples must be exhaustive: every defined pair is listed.
//! Unknown fields are rejected. Field order is irrelevant on input; output
//! is canonical (sorted ids, sorted triples).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupoid::FiniteGroupoid;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SerializedGroupoid {
    pub objects: Vec<String>,
    pub morphisms: Vec<SerializedMorphism>,
    pub identities: BTreeMap<String, String>,
    pub compose: Vec<[String; 3]>,
    pub inverses: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SerializedMorphism {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

impl SerializedGroupoid {
    pub fn from_json(raw: &str) -> Result<Self> {
        serde_json::from_str(raw).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialization cannot fail")
    }
}

/// Parses and certifies a serialized groupoid description.
pub fn validate_groupoid(name: &str, raw: &str) -> Result<FiniteGroupoid> {
    let s = SerializedGroupoid::from_json(raw)?;
    finite_groupoid_from_serialized(name, &s)
}

pub fn finite_groupoid_from_serialized(
    name: &str,
    s: &SerializedGroupoid,
) -> Result<FiniteGroupoid> {
    FiniteGroupoid::validate(
        name,
        s.objects.clone(),
        s.morphisms
            .iter()
            .map(|m| (m.id.clone(), m.src.clone(), m.tgt.clone()))
            .collect(),
        s.identities
            .iter()
            .map(|(a, b)| (a.clone(), b.clone()))
            .collect(),
        s.compose
            .iter()
            .map(|[a, b, c]| (a.clone(), b.clone(), c.clone()))
            .collect(),
        s.inverses
            .iter()
            .map(|(a, b)| (a.clone(), b.clone()))
            .collect(),
    )
}

impl FiniteGroupoid {
    /// Canonical serialized form: ids sorted, all defined compositions
    /// listed in (left, right) order.
    pub fn to_serialized(&self) -> SerializedGroupoid {
        let morphisms = self
            .morphism_ids()
            .iter()
            .enumerate()
            .map(|(f, id)| SerializedMorphism {
                id: id.clone(),
                src: self.object_ids()[self.src(f)].clone(),
                tgt: self.object_ids()[self.tgt(f)].clone(),
            })
            .collect();
        let identities = self
            .object_ids()
            .iter()
            .enumerate()
            .map(|(o, id)| (id.clone(), self.morphism_ids()[self.identity(o)].clone()))
            .collect();
        let mut compose = Vec::new();
        for x in 0..self.morphism_count() {
            for y in 0..self.morphism_count() {
                if let Some(z) = self.compose(x, y) {
                    compose.push([
                        self.morphism_ids()[x].clone(),
                        self.morphism_ids()[y].clone(),
                        self.morphism_ids()[z].clone(),
                    ]);
                }
            }
        }
        let inverses = self
            .morphism_ids()
            .iter()
            .enumerate()
            .map(|(f, id)| (id.clone(), self.morphism_ids()[self.inverse(f)].clone()))
            .collect();
        SerializedGroupoid {
            objects: self.object_ids().to_vec(),
            morphisms,
            identities,
            compose,
            inverses,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::cyclic_group;

    #[test]
    fn round_trip_z2() {
        let z2 = cyclic_group(2);
        let json = z2.to_serialized().to_json();
        let back = validate_groupoid("z2", &json).unwrap();
        assert_eq!(z2, back);
    }

    #[test]
    fn serialized_cover_groupoid_validates() {
        // the 6-morphism cover groupoid survives the full exhaustive
        // axiom check when fed back through the wire format
        let cech = crate::fixtures::cech_cover_groupoid();
        let back = validate_groupoid("cech", &cech.to_serialized().to_json()).unwrap();
        assert_eq!((back.object_count(), back.morphism_count()), (4, 6));
        assert_eq!(cech, back);
    }

    #[test]
    fn unknown_fields_rejected() {
        let raw =
            r#"{"objects":[],"morphisms":[],"identities":{},"compose":[],"inverses":{},"extra":1}"#;
        let err = validate_groupoid("x", raw).unwrap_err();
        assert_eq!(err.reason(), "parse_error");
    }

    #[test]
    fn missing_reference_rejected() {
        let raw = r#"{"objects":["x"],"morphisms":[{"id":"f","src":"x","tgt":"nope"}],
                      "identities":{"x":"f"},"compose":[["f","f","f"]],"inverses":{"f":"f"}}"#;
        let err = validate_groupoid("x", raw).unwrap_err();
        assert_eq!(err.reason(), "parse_error");
    }
}
