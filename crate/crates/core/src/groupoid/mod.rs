//! Finite groupoids: object and morphism tables with source, target,
//! identity, composition and inverse data, validated exhaustively.
//!
//! The composition convention is diagrammatic throughout the crate:
//! `compose(x, y)` is defined exactly when `tgt(x) = src(y)`, and denotes
//! "x followed by y". Every table, cocycle and nerve string uses this one
//! order.

mod arrow;
mod constructors;
mod functor;
mod serial;

pub use arrow::{arrow_groupoid, arrow_pair_id, comma_over_object, ArrowGroupoid};
pub use constructors::{action_groupoid, cech_groupoid, groupoid_from_group, trivial_groupoid};
pub use functor::{
    is_weak_equivalence, GroupoidFunctor, NaturalTransformation, WeakEquivalenceReport,
};
pub use serial::{finite_groupoid_from_serialized, validate_groupoid, SerializedGroupoid};

use std::collections::HashMap;

use crate::error::{Error, Result};

/// A finite groupoid with fully tabulated structure maps.
///
/// Objects and morphisms are identified by opaque strings; internally both
/// are kept sorted lexicographically, which fixes the enumeration order of
/// everything computed downstream (nerves, chains, reports).
///
/// Invariants certified by [`FiniteGroupoid::validate`]:
/// - `compose(x, y)` is defined iff `tgt(x) = src(y)` (diagrammatic order);
/// - `src(compose(x,y)) = src(x)` and `tgt(compose(x,y)) = tgt(y)`;
/// - composition is associative on all defined triples;
/// - `identity(o)` is a two-sided unit with `src = tgt = o`;
/// - `compose(x, inverse(x)) = identity(src(x))` and
///   `compose(inverse(x), x) = identity(tgt(x))`.
#[derive(Debug, Clone)]
pub struct FiniteGroupoid {
    name: String,
    objects: Vec<String>,
    morphisms: Vec<String>,
    src: Vec<usize>,
    tgt: Vec<usize>,
    identity: Vec<usize>,
    inverse: Vec<usize>,
    // compose[x * m + y] = Some(xy) iff tgt(x) = src(y), with m = morphism count
    compose: Vec<Option<usize>>,
}

// equality is structural; the display name does not participate
impl PartialEq for FiniteGroupoid {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.src == other.src
            && self.tgt == other.tgt
            && self.identity == other.identity
            && self.inverse == other.inverse
            && self.compose == other.compose
    }
}

impl Eq for FiniteGroupoid {}

impl FiniteGroupoid {
    /// Builds and certifies a groupoid from raw tables keyed by id strings.
    ///
    /// `compose` must list every defined pair exactly once. The first
    /// violated axiom is reported with its witnessing morphisms.
    pub fn validate(
        name: &str,
        objects: Vec<String>,
        morphisms: Vec<(String, String, String)>,
        identities: Vec<(String, String)>,
        compose: Vec<(String, String, String)>,
        inverses: Vec<(String, String)>,
    ) -> Result<Self> {
        let mut object_ids = objects;
        object_ids.sort();
        if object_ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Parse("duplicate object id".into()));
        }
        let obj_index: HashMap<&str, usize> = object_ids
            .iter()
            .enumerate()
            .map(|(i, o)| (o.as_str(), i))
            .collect();

        let mut mor_rows = morphisms;
        mor_rows.sort_by(|a, b| a.0.cmp(&b.0));
        if mor_rows.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Parse("duplicate morphism id".into()));
        }
        let mor_ids: Vec<String> = mor_rows.iter().map(|r| r.0.clone()).collect();
        let mor_index: HashMap<&str, usize> = mor_ids
            .iter()
            .enumerate()
            .map(|(i, m)| (m.as_str(), i))
            .collect();

        let look_obj = |id: &str| -> Result<usize> {
            obj_index
                .get(id)
                .copied()
                .ok_or_else(|| Error::Parse(format!("unknown object `{id}`")))
        };
        let look_mor = |id: &str| -> Result<usize> {
            mor_index
                .get(id)
                .copied()
                .ok_or_else(|| Error::Parse(format!("unknown morphism `{id}`")))
        };

        let mut src = Vec::with_capacity(mor_rows.len());
        let mut tgt = Vec::with_capacity(mor_rows.len());
        for (_, s, t) in &mor_rows {
            src.push(look_obj(s)?);
            tgt.push(look_obj(t)?);
        }

        let mut identity = vec![usize::MAX; object_ids.len()];
        for (o, m) in &identities {
            let oi = look_obj(o)?;
            if identity[oi] != usize::MAX {
                return Err(Error::Parse(format!("object `{o}` has two identities")));
            }
            identity[oi] = look_mor(m)?;
        }
        if let Some(oi) = identity.iter().position(|&m| m == usize::MAX) {
            return Err(Error::Parse(format!(
                "object `{}` has no identity morphism",
                object_ids[oi]
            )));
        }

        let m = mor_ids.len();
        let mut table = vec![None; m * m];
        for (x, y, z) in &compose {
            let (xi, yi, zi) = (look_mor(x)?, look_mor(y)?, look_mor(z)?);
            if table[xi * m + yi].is_some() {
                return Err(Error::Parse(format!("composition ({x},{y}) listed twice")));
            }
            table[xi * m + yi] = Some(zi);
        }

        let mut inverse = vec![usize::MAX; m];
        for (x, y) in &inverses {
            let xi = look_mor(x)?;
            if inverse[xi] != usize::MAX {
                return Err(Error::Parse(format!("morphism `{x}` has two inverses")));
            }
            inverse[xi] = look_mor(y)?;
        }
        if let Some(xi) = inverse.iter().position(|&v| v == usize::MAX) {
            return Err(Error::Parse(format!(
                "morphism `{}` has no inverse",
                mor_ids[xi]
            )));
        }

        let g = FiniteGroupoid {
            name: name.to_string(),
            objects: object_ids,
            morphisms: mor_ids,
            src,
            tgt,
            identity,
            inverse,
            compose: table,
        };
        g.check_axioms()?;
        Ok(g)
    }

    /// Exhaustive axiom check; reports the first violation.
    fn check_axioms(&self) -> Result<()> {
        let m = self.morphisms.len();

        // domain of definition
        for x in 0..m {
            for y in 0..m {
                let defined = self.compose[x * m + y].is_some();
                let composable = self.tgt[x] == self.src[y];
                if defined && !composable {
                    return Err(self.axiom("composition defined on non-composable pair", &[x, y]));
                }
                if !defined && composable {
                    return Err(self.axiom("composable pair has no composite", &[x, y]));
                }
                if let Some(z) = self.compose[x * m + y] {
                    if self.src[z] != self.src[x] || self.tgt[z] != self.tgt[y] {
                        return Err(self.axiom("composite has wrong endpoints", &[x, y, z]));
                    }
                }
            }
        }

        // identities
        for (o, &e) in self.identity.iter().enumerate() {
            if self.src[e] != o || self.tgt[e] != o {
                return Err(self.axiom("identity has wrong endpoints", &[e]));
            }
        }
        for x in 0..m {
            let e_src = self.identity[self.src[x]];
            let e_tgt = self.identity[self.tgt[x]];
            if self.compose[e_src * m + x] != Some(x) {
                return Err(self.axiom("left unit law", &[e_src, x]));
            }
            if self.compose[x * m + e_tgt] != Some(x) {
                return Err(self.axiom("right unit law", &[x, e_tgt]));
            }
        }

        // inverses
        for x in 0..m {
            let xi = self.inverse[x];
            if self.src[xi] != self.tgt[x] || self.tgt[xi] != self.src[x] {
                return Err(self.axiom("inverse has wrong endpoints", &[x, xi]));
            }
            if self.compose[x * m + xi] != Some(self.identity[self.src[x]]) {
                return Err(self.axiom("inverse law x·x⁻¹ = id", &[x, xi]));
            }
            if self.compose[xi * m + x] != Some(self.identity[self.tgt[x]]) {
                return Err(self.axiom("inverse law x⁻¹·x = id", &[xi, x]));
            }
        }

        // associativity over all defined triples
        for x in 0..m {
            for y in 0..m {
                let Some(xy) = self.compose[x * m + y] else {
                    continue;
                };
                for z in 0..m {
                    let Some(yz) = self.compose[y * m + z] else {
                        continue;
                    };
                    if self.compose[xy * m + z] != Some(self.compose[x * m + yz].unwrap()) {
                        return Err(self.axiom("associativity", &[x, y, z]));
                    }
                }
            }
        }
        Ok(())
    }

    fn axiom(&self, axiom: &'static str, witness: &[usize]) -> Error {
        let names: Vec<&str> = witness
            .iter()
            .map(|&i| self.morphisms[i].as_str())
            .collect();
        Error::Axiom {
            axiom,
            witness: names.join(", "),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn object_ids(&self) -> &[String] {
        &self.objects
    }

    pub fn morphism_ids(&self) -> &[String] {
        &self.morphisms
    }

    pub fn object_index(&self, id: &str) -> Option<usize> {
        self.objects.binary_search_by(|o| o.as_str().cmp(id)).ok()
    }

    pub fn morphism_index(&self, id: &str) -> Option<usize> {
        self.morphisms.binary_search_by(|f| f.as_str().cmp(id)).ok()
    }

    pub fn src(&self, f: usize) -> usize {
        self.src[f]
    }

    pub fn tgt(&self, f: usize) -> usize {
        self.tgt[f]
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identity[o]
    }

    pub fn inverse(&self, f: usize) -> usize {
        self.inverse[f]
    }

    /// `compose(x, y)` in diagrammatic order; `None` when `tgt(x) ≠ src(y)`.
    pub fn compose(&self, x: usize, y: usize) -> Option<usize> {
        self.compose[x * self.morphisms.len() + y]
    }

    /// Composite of a nonempty composable chain, left to right.
    pub fn compose_chain(&self, fs: &[usize]) -> Option<usize> {
        let mut acc = *fs.first()?;
        for &f in &fs[1..] {
            acc = self.compose(acc, f)?;
        }
        Some(acc)
    }

    /// Morphism indices with a given source object, ascending.
    pub fn morphisms_from(&self, o: usize) -> Vec<usize> {
        (0..self.morphisms.len())
            .filter(|&f| self.src[f] == o)
            .collect()
    }

    /// Morphism indices `x → y`, ascending.
    pub fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.morphisms.len())
            .filter(|&f| self.src[f] == x && self.tgt[f] == y)
            .collect()
    }

    /// Partition of objects into isomorphism classes, via union-find over
    /// the morphism set. Returns the class representative per object.
    pub fn iso_class_reps(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.objects.len()).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for f in 0..self.morphisms.len() {
            let (a, b) = (
                find(&mut parent, self.src[f]),
                find(&mut parent, self.tgt[f]),
            );
            if a != b {
                // smaller index wins, keeping representatives canonical
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi] = lo;
            }
        }
        (0..self.objects.len())
            .map(|o| find(&mut parent, o))
            .collect()
    }
}
