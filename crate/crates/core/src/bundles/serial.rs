//! JSON wire format for bundles.
//!
//! ```json
//! {
//!   "base": {"vertices": ["v0", "v1"], "simplices": [["v0", "v1"]]},
//!   "groupoid": { ... inline groupoid ... } | "path/to/groupoid.json",
//!   "h": {"v0": "x", "v1": "y"},
//!   "gamma": {"v0,v1": "f"}
//! }
//! ```
//!
//! Edge keys are `"u,v"` with `u < v` in the base order, so vertex names
//! must not contain commas. `h`/`gamma` may be omitted to describe a bare
//! base + groupoid pair (used by enumeration).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bundles::{validate_bundle, CocycleBundle, ConcordanceCertificate};
use crate::error::{Error, Result};
use crate::groupoid::{finite_groupoid_from_serialized, FiniteGroupoid, SerializedGroupoid};
use crate::simplicial::OrderedSimplicialComplex;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SerializedBase {
    pub vertices: Vec<String>,
    pub simplices: Vec<Vec<String>>,
}

impl SerializedBase {
    pub fn to_complex(&self) -> Result<OrderedSimplicialComplex> {
        for v in &self.vertices {
            if v.contains(',') {
                return Err(Error::Parse(format!(
                    "vertex name `{v}` contains a comma, which edge keys reserve"
                )));
            }
        }
        OrderedSimplicialComplex::new(self.vertices.clone(), &self.simplices)
    }

    pub fn from_complex(k: &OrderedSimplicialComplex) -> Self {
        let mut simplices = Vec::new();
        for d in 0..=k.dim() {
            for tuple in k.simplices_of_dim(d) {
                simplices.push(k.simplex_names(tuple));
            }
        }
        SerializedBase {
            vertices: k.vertex_names().to_vec(),
            simplices,
        }
    }
}

/// Inline groupoid tables or a path to a groupoid file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupoidRef {
    Inline(SerializedGroupoid),
    Path(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SerializedBundle {
    pub base: SerializedBase,
    pub groupoid: GroupoidRef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<BTreeMap<String, String>>,
}

impl SerializedBundle {
    pub fn from_json(raw: &str) -> Result<Self> {
        serde_json::from_str(raw).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialization cannot fail")
    }

    /// Resolves the groupoid reference; `load` is consulted for path refs.
    pub fn resolve_groupoid(
        &self,
        load: &dyn Fn(&str) -> Result<FiniteGroupoid>,
    ) -> Result<FiniteGroupoid> {
        match &self.groupoid {
            GroupoidRef::Inline(s) => finite_groupoid_from_serialized("inline", s),
            GroupoidRef::Path(p) => load(p),
        }
    }

    pub fn base_complex(&self) -> Result<OrderedSimplicialComplex> {
        self.base.to_complex()
    }

    /// Builds and validates the cocycle bundle described by this file.
    pub fn to_bundle(
        &self,
        load: &dyn Fn(&str) -> Result<FiniteGroupoid>,
    ) -> Result<CocycleBundle> {
        let base = self.base_complex()?;
        let groupoid = self.resolve_groupoid(load)?;
        let h = self
            .h
            .as_ref()
            .ok_or_else(|| Error::Parse("bundle file has no `h` field".into()))?;
        let gamma_raw = self
            .gamma
            .as_ref()
            .ok_or_else(|| Error::Parse("bundle file has no `gamma` field".into()))?;
        let mut gamma = BTreeMap::new();
        for (key, m) in gamma_raw {
            let (u, v) = key.split_once(',').ok_or_else(|| {
                Error::Parse(format!("edge key `{key}` is not of the form `u,v`"))
            })?;
            gamma.insert((u.to_string(), v.to_string()), m.clone());
        }
        validate_bundle(base, groupoid, h, &gamma)
    }

    /// Serializes a bundle with its groupoid inlined.
    pub fn from_bundle(b: &CocycleBundle) -> Self {
        SerializedBundle {
            base: SerializedBase::from_complex(b.base()),
            groupoid: GroupoidRef::Inline(b.groupoid().to_serialized()),
            h: Some(b.h_by_name()),
            gamma: Some(
                b.gamma_by_name()
                    .into_iter()
                    .map(|((u, v), m)| (format!("{u},{v}"), m))
                    .collect(),
            ),
        }
    }
}

/// Serialized concordance certificate: the full prism cocycle plus both
/// end identification families.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SerializedCertificate {
    pub prism: SerializedBundle,
    pub beta0: BTreeMap<String, String>,
    pub beta1: BTreeMap<String, String>,
}

impl SerializedCertificate {
    pub fn from_certificate(c: &ConcordanceCertificate) -> Self {
        SerializedCertificate {
            prism: SerializedBundle::from_bundle(&c.bundle),
            beta0: c.beta0.clone(),
            beta1: c.beta1.clone(),
        }
    }
}
