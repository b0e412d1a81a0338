//! The arrow groupoid of a groupoid: objects are the arrows of `X`, and a
//! morphism from `γ: x → y` to `γ': x' → y` is the unique `δ: x → x'` with
//! `δ·γ' = γ`. Arrows with different targets have no morphisms between them.
//!
//! Its classifying space is the universal total object over the classifying
//! space of `X`; the projection sends `γ` to its source and `δ` to itself,
//! while `ζ` remembers the common target.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::groupoid::{FiniteGroupoid, GroupoidFunctor};

/// Arrow groupoid together with its projection functor and target map.
#[derive(Debug, Clone)]
pub struct ArrowGroupoid {
    /// The groupoid whose objects are the arrows of the original one.
    pub groupoid: FiniteGroupoid,
    /// Projection to the original groupoid: `γ ↦ src(γ)` on objects, the
    /// underlying `δ` on morphisms.
    pub projection: GroupoidFunctor,
    /// Target assignment `ζ`: arrow-object id ↦ object id of the original
    /// groupoid.
    pub zeta: BTreeMap<String, String>,
}

impl ArrowGroupoid {
    /// `ζ` as a functor into the trivial groupoid on the objects of `X`
    /// (every morphism goes to an identity).
    pub fn zeta_functor(&self, original: &FiniteGroupoid) -> Result<GroupoidFunctor> {
        let target = crate::groupoid::trivial_groupoid(&original.object_ids().to_vec())?;
        let object_map = self.zeta.clone();
        let mut morphism_map = BTreeMap::new();
        for mid in self.groupoid.morphism_ids() {
            let f = self.groupoid.morphism_index(mid).unwrap();
            let tgt_obj = &self.groupoid.object_ids()[self.groupoid.tgt(f)];
            let zeta_val = &self.zeta[tgt_obj];
            morphism_map.insert(mid.clone(), format!("id#{zeta_val}"));
        }
        GroupoidFunctor::new(self.groupoid.clone(), target, object_map, morphism_map)
    }
}

/// Collision-free id for the unique arrow-groupoid morphism `γ → γ'`.
pub fn arrow_pair_id(gamma: &str, gamma2: &str) -> String {
    serde_json::to_string(&[gamma, gamma2]).expect("id serialization cannot fail")
}

fn pair_id(x: &FiniteGroupoid, gamma: usize, gamma2: usize) -> String {
    arrow_pair_id(&x.morphism_ids()[gamma], &x.morphism_ids()[gamma2])
}

/// Builds the arrow groupoid `X↓X` of a valid groupoid.
///
/// Between arrows `γ, γ'` with equal target there is exactly one morphism,
/// carried by `δ = γ·(γ')⁻¹`; the result is validated like any groupoid.
pub fn arrow_groupoid(x: &FiniteGroupoid) -> Result<ArrowGroupoid> {
    let m = x.morphism_count();
    let objects: Vec<String> = x.morphism_ids().to_vec();

    let mut morphisms = Vec::new();
    let mut identities = Vec::new();
    let mut compose = Vec::new();
    let mut inverses = Vec::new();
    for g in 0..m {
        identities.push((objects[g].clone(), pair_id(x, g, g)));
        for g2 in 0..m {
            if x.tgt(g) != x.tgt(g2) {
                continue;
            }
            morphisms.push((pair_id(x, g, g2), objects[g].clone(), objects[g2].clone()));
            inverses.push((pair_id(x, g, g2), pair_id(x, g2, g)));
            for g3 in 0..m {
                if x.tgt(g2) == x.tgt(g3) {
                    compose.push((pair_id(x, g, g2), pair_id(x, g2, g3), pair_id(x, g, g3)));
                }
            }
        }
    }
    let groupoid = FiniteGroupoid::validate(
        &format!("{}↓{}", x.name(), x.name()),
        objects,
        morphisms,
        identities,
        compose,
        inverses,
    )?;

    // p: γ ↦ src(γ) on objects; (γ, γ') ↦ γ·(γ')⁻¹ on morphisms
    let mut object_map = BTreeMap::new();
    let mut zeta = BTreeMap::new();
    for g in 0..m {
        object_map.insert(
            x.morphism_ids()[g].clone(),
            x.object_ids()[x.src(g)].clone(),
        );
        zeta.insert(
            x.morphism_ids()[g].clone(),
            x.object_ids()[x.tgt(g)].clone(),
        );
    }
    let mut morphism_map = BTreeMap::new();
    for g in 0..m {
        for g2 in 0..m {
            if x.tgt(g) == x.tgt(g2) {
                let delta = x.compose(g, x.inverse(g2)).unwrap();
                morphism_map.insert(pair_id(x, g, g2), x.morphism_ids()[delta].clone());
            }
        }
    }
    let projection = GroupoidFunctor::new(groupoid.clone(), x.clone(), object_map, morphism_map)?;

    Ok(ArrowGroupoid {
        groupoid,
        projection,
        zeta,
    })
}

/// Full subgroupoid of the arrow groupoid on arrows with target `y`.
///
/// Always has `identity(y)` as a terminal object: every arrow admits exactly
/// one morphism to it. The terminal property is asserted before returning.
pub fn comma_over_object(x: &FiniteGroupoid, y: &str) -> Result<FiniteGroupoid> {
    let yi = x
        .object_index(y)
        .ok_or_else(|| Error::UnknownObject(y.to_string()))?;
    let arrow = arrow_groupoid(x)?;
    let keep: Vec<usize> = (0..x.morphism_count())
        .filter(|&g| x.tgt(g) == yi)
        .collect();
    let keep_ids: Vec<String> = keep.iter().map(|&g| x.morphism_ids()[g].clone()).collect();

    let a = &arrow.groupoid;
    let objects = keep_ids.clone();
    let mut morphisms = Vec::new();
    let mut identities = Vec::new();
    let mut compose = Vec::new();
    let mut inverses = Vec::new();
    let in_fiber = |id: &str| keep_ids.iter().any(|k| k == id);
    for f in 0..a.morphism_count() {
        let s = &a.object_ids()[a.src(f)];
        let t = &a.object_ids()[a.tgt(f)];
        if !in_fiber(s) || !in_fiber(t) {
            continue;
        }
        let fid = a.morphism_ids()[f].clone();
        morphisms.push((fid.clone(), s.clone(), t.clone()));
        inverses.push((fid.clone(), a.morphism_ids()[a.inverse(f)].clone()));
        for g in 0..a.morphism_count() {
            if let Some(fg) = a.compose(f, g) {
                let gt = &a.object_ids()[a.tgt(g)];
                if in_fiber(gt) {
                    compose.push((
                        fid.clone(),
                        a.morphism_ids()[g].clone(),
                        a.morphism_ids()[fg].clone(),
                    ));
                }
            }
        }
    }
    for oid in &keep_ids {
        let o = a.object_index(oid).unwrap();
        identities.push((oid.clone(), a.morphism_ids()[a.identity(o)].clone()));
    }
    let comma = FiniteGroupoid::validate(
        &format!("{}↓{y}", x.name()),
        objects,
        morphisms,
        identities,
        compose,
        inverses,
    )?;

    // terminal object: exactly one morphism from each object to identity(y)
    let terminal_id = &x.morphism_ids()[x.identity(yi)];
    let terminal = comma.object_index(terminal_id).unwrap();
    for o in 0..comma.object_count() {
        let homs = comma.hom(o, terminal);
        if homs.len() != 1 {
            return Err(Error::Axiom {
                axiom: "comma groupoid terminal object",
                witness: format!(
                    "object `{}` has {} morphisms to `{terminal_id}`",
                    comma.object_ids()[o],
                    homs.len()
                ),
            });
        }
    }
    Ok(comma)
}
