//! Functors and natural transformations between finite groupoids, plus the
//! finite weak-equivalence criterion (essentially surjective + fully
//! faithful).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupoid::FiniteGroupoid;

/// A functor between finite groupoids, validated to preserve sources,
/// targets, identities and every defined composition.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupoidFunctor {
    source: FiniteGroupoid,
    target: FiniteGroupoid,
    // index-level maps, total on the source
    object_map: Vec<usize>,
    morphism_map: Vec<usize>,
}

impl GroupoidFunctor {
    pub fn new(
        source: FiniteGroupoid,
        target: FiniteGroupoid,
        object_map: BTreeMap<String, String>,
        morphism_map: BTreeMap<String, String>,
    ) -> Result<Self> {
        let mut objs = vec![usize::MAX; source.object_count()];
        for (a, b) in &object_map {
            let ai = source
                .object_index(a)
                .ok_or_else(|| Error::BadFunctor(format!("unknown source object `{a}`")))?;
            objs[ai] = target
                .object_index(b)
                .ok_or_else(|| Error::BadFunctor(format!("unknown target object `{b}`")))?;
        }
        if let Some(ai) = objs.iter().position(|&v| v == usize::MAX) {
            return Err(Error::BadFunctor(format!(
                "object `{}` has no image",
                source.object_ids()[ai]
            )));
        }
        let mut mors = vec![usize::MAX; source.morphism_count()];
        for (a, b) in &morphism_map {
            let ai = source
                .morphism_index(a)
                .ok_or_else(|| Error::BadFunctor(format!("unknown source morphism `{a}`")))?;
            mors[ai] = target
                .morphism_index(b)
                .ok_or_else(|| Error::BadFunctor(format!("unknown target morphism `{b}`")))?;
        }
        if let Some(ai) = mors.iter().position(|&v| v == usize::MAX) {
            return Err(Error::BadFunctor(format!(
                "morphism `{}` has no image",
                source.morphism_ids()[ai]
            )));
        }

        let f = GroupoidFunctor {
            source,
            target,
            object_map: objs,
            morphism_map: mors,
        };
        f.check_laws()?;
        Ok(f)
    }

    /// The identity functor.
    pub fn identity(g: &FiniteGroupoid) -> Self {
        GroupoidFunctor {
            source: g.clone(),
            target: g.clone(),
            object_map: (0..g.object_count()).collect(),
            morphism_map: (0..g.morphism_count()).collect(),
        }
    }

    /// `self` followed by `next`; endpoints must agree structurally.
    pub fn then(&self, next: &GroupoidFunctor) -> Result<GroupoidFunctor> {
        if self.target != next.source {
            return Err(Error::BadFunctor(
                "composition endpoints do not match".into(),
            ));
        }
        Ok(GroupoidFunctor {
            source: self.source.clone(),
            target: next.target.clone(),
            object_map: self
                .object_map
                .iter()
                .map(|&o| next.object_map[o])
                .collect(),
            morphism_map: self
                .morphism_map
                .iter()
                .map(|&f| next.morphism_map[f])
                .collect(),
        })
    }

    fn check_laws(&self) -> Result<()> {
        let s = &self.source;
        let t = &self.target;
        for f in 0..s.morphism_count() {
            let ff = self.morphism_map[f];
            if t.src(ff) != self.object_map[s.src(f)] || t.tgt(ff) != self.object_map[s.tgt(f)] {
                return Err(Error::BadFunctor(format!(
                    "image of `{}` has wrong endpoints",
                    s.morphism_ids()[f]
                )));
            }
        }
        for o in 0..s.object_count() {
            if self.morphism_map[s.identity(o)] != t.identity(self.object_map[o]) {
                return Err(Error::BadFunctor(format!(
                    "identity of `{}` not preserved",
                    s.object_ids()[o]
                )));
            }
        }
        for x in 0..s.morphism_count() {
            for y in 0..s.morphism_count() {
                if let Some(xy) = s.compose(x, y) {
                    let lhs = self.morphism_map[xy];
                    let rhs = t
                        .compose(self.morphism_map[x], self.morphism_map[y])
                        .ok_or_else(|| {
                            Error::BadFunctor(format!(
                                "images of `{}`, `{}` are not composable",
                                s.morphism_ids()[x],
                                s.morphism_ids()[y]
                            ))
                        })?;
                    if lhs != rhs {
                        return Err(Error::BadFunctor(format!(
                            "composition of `{}`, `{}` not preserved",
                            s.morphism_ids()[x],
                            s.morphism_ids()[y]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &FiniteGroupoid {
        &self.source
    }

    pub fn target(&self) -> &FiniteGroupoid {
        &self.target
    }

    pub fn apply_object(&self, o: usize) -> usize {
        self.object_map[o]
    }

    pub fn apply_morphism(&self, f: usize) -> usize {
        self.morphism_map[f]
    }
}

/// A natural transformation `T: F ⟹ G` between parallel functors, given by a
/// component morphism `T_x: F(x) → G(x)` per source object.
///
/// Validation checks endpoints and the naturality square
/// `compose(F(f), T_y) = compose(T_x, G(f))` for every `f: x → y`.
#[derive(Debug, Clone)]
pub struct NaturalTransformation {
    source_functor: GroupoidFunctor,
    target_functor: GroupoidFunctor,
    components: Vec<usize>,
}

impl NaturalTransformation {
    pub fn new(
        source_functor: GroupoidFunctor,
        target_functor: GroupoidFunctor,
        components: BTreeMap<String, String>,
    ) -> Result<Self> {
        if source_functor.source != target_functor.source
            || source_functor.target != target_functor.target
        {
            return Err(Error::BadNaturalTransformation(
                "functors do not share endpoints".into(),
            ));
        }
        let dom = &source_functor.source;
        let cod = &source_functor.target;
        let mut comps = vec![usize::MAX; dom.object_count()];
        for (o, t) in &components {
            let oi = dom
                .object_index(o)
                .ok_or_else(|| Error::BadNaturalTransformation(format!("unknown object `{o}`")))?;
            comps[oi] = cod.morphism_index(t).ok_or_else(|| {
                Error::BadNaturalTransformation(format!("unknown component morphism `{t}`"))
            })?;
        }
        if let Some(oi) = comps.iter().position(|&v| v == usize::MAX) {
            return Err(Error::BadNaturalTransformation(format!(
                "object `{}` has no component",
                dom.object_ids()[oi]
            )));
        }
        let t = NaturalTransformation {
            source_functor,
            target_functor,
            components: comps,
        };
        t.check_laws()?;
        Ok(t)
    }

    fn check_laws(&self) -> Result<()> {
        let dom = &self.source_functor.source;
        let cod = &self.source_functor.target;
        for o in 0..dom.object_count() {
            let c = self.components[o];
            if cod.src(c) != self.source_functor.object_map[o]
                || cod.tgt(c) != self.target_functor.object_map[o]
            {
                return Err(Error::BadNaturalTransformation(format!(
                    "component at `{}` has wrong endpoints",
                    dom.object_ids()[o]
                )));
            }
        }
        for f in 0..dom.morphism_count() {
            let (x, y) = (dom.src(f), dom.tgt(f));
            let lhs = cod
                .compose(self.source_functor.morphism_map[f], self.components[y])
                .unwrap();
            let rhs = cod
                .compose(self.components[x], self.target_functor.morphism_map[f])
                .unwrap();
            if lhs != rhs {
                return Err(Error::BadNaturalTransformation(format!(
                    "naturality fails at `{}`",
                    dom.morphism_ids()[f]
                )));
            }
        }
        Ok(())
    }

    pub fn source_functor(&self) -> &GroupoidFunctor {
        &self.source_functor
    }

    pub fn target_functor(&self) -> &GroupoidFunctor {
        &self.target_functor
    }

    pub fn component(&self, o: usize) -> usize {
        self.components[o]
    }

    /// True when every component is an identity morphism.
    pub fn is_identity_transformation(&self) -> bool {
        let cod = &self.source_functor.target;
        self.components
            .iter()
            .enumerate()
            .all(|(_, &c)| cod.identity(cod.src(c)) == c && cod.src(c) == cod.tgt(c))
    }
}

/// Outcome of the weak-equivalence test, with a finite witness on failure.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeakEquivalenceReport {
    pub is_weak_equivalence: bool,
    /// Iso class of the target missed by essential surjectivity, if any.
    pub missed_object: Option<String>,
    /// Hom-set with a cardinality or injectivity mismatch:
    /// (source pair, hom size in source, hom size in target).
    pub hom_mismatch: Option<(String, String, usize, usize)>,
}

/// Finite criterion for a functor to induce an equivalence: every target
/// object is isomorphic to an image object, and every hom-set maps
/// bijectively. Isomorphism closure is computed by union-find over the
/// target's morphisms.
pub fn is_weak_equivalence(f: &GroupoidFunctor) -> WeakEquivalenceReport {
    let src = &f.source;
    let tgt = &f.target;

    let reps = tgt.iso_class_reps();
    let hit: BTreeSet<usize> = (0..src.object_count())
        .map(|o| reps[f.object_map[o]])
        .collect();
    for o in 0..tgt.object_count() {
        if !hit.contains(&reps[o]) {
            return WeakEquivalenceReport {
                is_weak_equivalence: false,
                missed_object: Some(tgt.object_ids()[o].clone()),
                hom_mismatch: None,
            };
        }
    }

    for x in 0..src.object_count() {
        for y in 0..src.object_count() {
            let dom_hom = src.hom(x, y);
            let cod_hom = tgt.hom(f.object_map[x], f.object_map[y]);
            let images: BTreeSet<usize> = dom_hom.iter().map(|&m| f.morphism_map[m]).collect();
            if images.len() != dom_hom.len() || dom_hom.len() != cod_hom.len() {
                return WeakEquivalenceReport {
                    is_weak_equivalence: false,
                    missed_object: None,
                    hom_mismatch: Some((
                        src.object_ids()[x].clone(),
                        src.object_ids()[y].clone(),
                        dom_hom.len(),
                        cod_hom.len(),
                    )),
                };
            }
        }
    }

    WeakEquivalenceReport {
        is_weak_equivalence: true,
        missed_object: None,
        hom_mismatch: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{cyclic_group, free_z2_action_groupoid, point_functor};
    use crate::groupoid::{cech_groupoid, trivial_groupoid};

    #[test]
    fn quotient_of_free_action_is_weak_equivalence() {
        let g = free_z2_action_groupoid();
        let f = point_functor(&g).unwrap();
        assert!(is_weak_equivalence(&f).is_weak_equivalence);
    }

    #[test]
    fn cech_forgetful_is_weak_equivalence() {
        let strs = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let cech = cech_groupoid(
            &strs(&["1", "2", "3"]),
            &[strs(&["1", "2"]), strs(&["2", "3"])],
        )
        .unwrap();
        let triv = trivial_groupoid(&strs(&["1", "2", "3"])).unwrap();
        // forget the cover index
        let mut object_map = BTreeMap::new();
        let mut morphism_map = BTreeMap::new();
        for oid in cech.object_ids() {
            let point = oid.split('#').next().unwrap().to_string();
            object_map.insert(oid.clone(), point);
        }
        for mid in cech.morphism_ids() {
            let point = mid.split('#').next().unwrap().to_string();
            morphism_map.insert(mid.clone(), format!("id#{point}"));
        }
        let f = GroupoidFunctor::new(cech, triv, object_map, morphism_map).unwrap();
        assert!(is_weak_equivalence(&f).is_weak_equivalence);
    }

    #[test]
    fn z2_to_point_is_not_faithful() {
        let z2 = cyclic_group(2);
        let f = point_functor(&z2).unwrap();
        let report = is_weak_equivalence(&f);
        assert!(!report.is_weak_equivalence);
        let (_, _, dom, cod) = report.hom_mismatch.unwrap();
        assert_eq!((dom, cod), (2, 1));
    }

    #[test]
    fn identity_is_weak_equivalence() {
        let z2 = cyclic_group(2);
        assert!(is_weak_equivalence(&GroupoidFunctor::identity(&z2)).is_weak_equivalence);
    }

    #[test]
    fn functor_must_preserve_composition() {
        let z2 = cyclic_group(2);
        // swap e and g on morphisms: not a functor (identity not preserved)
        let mut object_map = BTreeMap::new();
        object_map.insert("*".to_string(), "*".to_string());
        let mut morphism_map = BTreeMap::new();
        morphism_map.insert("e".to_string(), "g".to_string());
        morphism_map.insert("g".to_string(), "e".to_string());
        assert!(GroupoidFunctor::new(z2.clone(), z2, object_map, morphism_map).is_err());
    }
}
