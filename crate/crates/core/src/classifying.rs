//! Nerves of groupoids and the observables attached to them: homology of
//! the classifying space, the universal total object built from the arrow
//! groupoid, its section/retraction data, and the Morita-invariance check.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groupoid::{
    arrow_groupoid, is_weak_equivalence, trivial_groupoid, ArrowGroupoid, FiniteGroupoid,
    GroupoidFunctor, NaturalTransformation,
};
use crate::simplicial::chain::chain_complex;
use crate::simplicial::homology::{homology, HomologyProfile};
use crate::simplicial::homotopy::{induced_map, mapping_cone, InducedNerveMap};
use crate::simplicial::{simplex_label, SemiSimplicialSet};

/// The truncated nerve: level-n simplices are composable strings
/// `(f_1,…,f_n)` with `tgt(f_i) = src(f_{i+1})`, including identity
/// (degenerate) strings. `d_0` drops the first morphism, `d_n` the last,
/// and inner faces compose adjacent entries.
pub fn nerve(x: &FiniteGroupoid, truncation: usize) -> Result<SemiSimplicialSet> {
    let mut levels: Vec<Vec<(String, Vec<String>)>> = Vec::with_capacity(truncation + 1);
    levels.push(
        x.object_ids()
            .iter()
            .map(|o| (o.clone(), Vec::new()))
            .collect(),
    );

    // strings by morphism indices, extended level by level
    let mut strings: Vec<Vec<usize>> = vec![Vec::new()];
    for n in 1..=truncation {
        let mut next = Vec::new();
        for s in &strings {
            let extendable = if n == 1 {
                (0..x.morphism_count()).collect::<Vec<_>>()
            } else {
                x.morphisms_from(x.tgt(*s.last().unwrap()))
            };
            for f in extendable {
                let mut t = s.clone();
                t.push(f);
                next.push(t);
            }
        }
        let entries = next
            .iter()
            .map(|s| {
                let label = string_label(x, s);
                let mut faces = Vec::with_capacity(n + 1);
                for i in 0..=n {
                    faces.push(face_label(x, s, i));
                }
                (label, faces)
            })
            .collect();
        levels.push(entries);
        strings = next;
    }
    SemiSimplicialSet::build(levels, false)
}

fn string_label(x: &FiniteGroupoid, s: &[usize]) -> String {
    let parts: Vec<String> = s.iter().map(|&f| x.morphism_ids()[f].clone()).collect();
    simplex_label(&parts)
}

fn face_label(x: &FiniteGroupoid, s: &[usize], i: usize) -> String {
    let n = s.len();
    if n == 1 {
        // faces of (f) are objects: d_0 = tgt, d_1 = src
        let o = if i == 0 { x.tgt(s[0]) } else { x.src(s[0]) };
        return x.object_ids()[o].clone();
    }
    let face: Vec<usize> = if i == 0 {
        s[1..].to_vec()
    } else if i == n {
        s[..n - 1].to_vec()
    } else {
        let mut t = Vec::with_capacity(n - 1);
        t.extend_from_slice(&s[..i - 1]);
        t.push(x.compose(s[i - 1], s[i]).expect("string is composable"));
        t.extend_from_slice(&s[i + 1..]);
        t
    };
    string_label(x, &face)
}

/// Chains on nondegenerate strings only (every entry a non-identity), with
/// faces that land on degenerate strings projected to zero.
///
/// The thick realization keeps degenerate strings as honest cells, so this
/// smaller complex is an independent route to the same homology; their
/// agreement is a cross-check the test suites exercise, never an
/// assumption.
pub fn normalized_nerve_chain(
    x: &FiniteGroupoid,
    truncation: usize,
) -> Result<crate::simplicial::chain::ChainComplex> {
    use crate::simplicial::chain::SparseIntMatrix;

    let is_identity = |f: usize| x.identity(x.src(f)) == f && x.src(f) == x.tgt(f);
    // level 0 stands for objects; strings are stored from level 1 on
    let mut ranks = vec![x.object_count()];
    let mut string_levels: Vec<Vec<Vec<usize>>> = Vec::new();
    for n in 1..=truncation {
        let prev: Vec<Vec<usize>> = if n == 1 {
            vec![Vec::new()]
        } else {
            string_levels[n - 2].clone()
        };
        let mut next = Vec::new();
        for s in &prev {
            let from = if n == 1 {
                (0..x.morphism_count()).collect::<Vec<_>>()
            } else {
                x.morphisms_from(x.tgt(*s.last().unwrap()))
            };
            for f in from {
                if is_identity(f) {
                    continue;
                }
                let mut t = s.clone();
                t.push(f);
                next.push(t);
            }
        }
        next.sort();
        ranks.push(next.len());
        string_levels.push(next);
    }

    let mut boundaries = Vec::new();
    for n in 1..=truncation {
        let rows = ranks[n - 1];
        let cols = ranks[n];
        let mut m = SparseIntMatrix::zero(rows, cols);
        let index_of = |level: usize, s: &[usize]| -> Option<usize> {
            string_levels[level - 1]
                .binary_search_by(|t| t.as_slice().cmp(s))
                .ok()
        };
        for (col, s) in string_levels[n - 1].iter().enumerate() {
            for i in 0..=n {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                if n == 1 {
                    let o = if i == 0 { x.tgt(s[0]) } else { x.src(s[0]) };
                    m.add_entry(o, col, sign);
                    continue;
                }
                let face: Vec<usize> = if i == 0 {
                    s[1..].to_vec()
                } else if i == n {
                    s[..n - 1].to_vec()
                } else {
                    let mut t = Vec::with_capacity(n - 1);
                    t.extend_from_slice(&s[..i - 1]);
                    t.push(x.compose(s[i - 1], s[i]).expect("composable string"));
                    t.extend_from_slice(&s[i + 1..]);
                    t
                };
                if face.iter().any(|&f| is_identity(f)) {
                    continue;
                }
                let row = index_of(n - 1, &face).expect("nondegenerate face exists");
                m.add_entry(row, col, sign);
            }
        }
        boundaries.push(m);
    }
    crate::simplicial::chain::ChainComplex::new(ranks, boundaries, false)
}

/// Homology of a classifying space, with the truncation and level counts
/// that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyingSpaceReport {
    pub groupoid: String,
    pub truncation: usize,
    pub level_counts: Vec<usize>,
    pub homology: HomologyProfile,
}

fn resolve_truncation(k_max: usize, truncation: Option<usize>) -> Result<usize> {
    let t = truncation.unwrap_or(k_max + 1);
    if t < k_max + 1 {
        return Err(Error::TruncationTooShallow {
            k_max,
            needed: k_max + 1,
            available: t,
        });
    }
    Ok(t)
}

/// Exact homology of `B X` through degree `k_max`.
pub fn classifying_homology(
    x: &FiniteGroupoid,
    k_max: usize,
    truncation: Option<usize>,
) -> Result<ClassifyingSpaceReport> {
    let t = resolve_truncation(k_max, truncation)?;
    let n = nerve(x, t)?;
    let c = chain_complex(&n)?;
    Ok(ClassifyingSpaceReport {
        groupoid: x.name().to_string(),
        truncation: t,
        level_counts: n.level_sizes(),
        homology: homology(&c, k_max)?,
    })
}

/// The universal total object report: homology of the classifying space of
/// the arrow groupoid, plus the level-0 target assignment (the vertex part
/// of the projection to the object set).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UniversalTotalReport {
    pub report: ClassifyingSpaceReport,
    /// vertex of the total object ↦ object of the original groupoid
    pub zeta: BTreeMap<String, String>,
}

pub fn universal_total(
    x: &FiniteGroupoid,
    k_max: usize,
    truncation: Option<usize>,
) -> Result<UniversalTotalReport> {
    let arrow = arrow_groupoid(x)?;
    let mut report = classifying_homology(&arrow.groupoid, k_max, truncation)?;
    report.groupoid = format!("{}↓{}", x.name(), x.name());
    Ok(UniversalTotalReport {
        report,
        zeta: arrow.zeta.clone(),
    })
}

/// Section and retraction data of the universal total object.
///
/// `sigma` embeds the object set via identity arrows; `retraction` is the
/// natural transformation from the identity to `sigma ∘ zeta` whose
/// component at an arrow `γ` is `γ` itself, viewed as the unique morphism
/// to the identity arrow on its target.
#[derive(Debug, Clone)]
pub struct UnitSection {
    pub arrow: ArrowGroupoid,
    pub objects_groupoid: FiniteGroupoid,
    pub sigma: GroupoidFunctor,
    pub retraction: NaturalTransformation,
}

pub fn unit_section(x: &FiniteGroupoid) -> Result<UnitSection> {
    let arrow = arrow_groupoid(x)?;
    let objects_groupoid = trivial_groupoid(&x.object_ids().to_vec())?;

    // σ: x ↦ (id_x), id#x ↦ identity of (id_x)
    let mut object_map = BTreeMap::new();
    let mut morphism_map = BTreeMap::new();
    for (o, oid) in x.object_ids().iter().enumerate() {
        let id_arrow = x.morphism_ids()[x.identity(o)].clone();
        object_map.insert(oid.clone(), id_arrow.clone());
        let arrow_obj = arrow.groupoid.object_index(&id_arrow).unwrap();
        let arrow_identity = arrow.groupoid.identity(arrow_obj);
        morphism_map.insert(
            format!("id#{oid}"),
            arrow.groupoid.morphism_ids()[arrow_identity].clone(),
        );
    }
    let sigma = GroupoidFunctor::new(
        objects_groupoid.clone(),
        arrow.groupoid.clone(),
        object_map,
        morphism_map,
    )?;

    // ζ∘σ = id on objects
    for oid in x.object_ids() {
        let o = objects_groupoid.object_index(oid).unwrap();
        let image = sigma.apply_object(o);
        let image_id = &arrow.groupoid.object_ids()[image];
        if arrow.zeta[image_id] != *oid {
            return Err(Error::Axiom {
                axiom: "ζ∘σ = id",
                witness: oid.clone(),
            });
        }
    }

    // T: id ⟹ σ∘ζ with component γ ↦ (γ → id_{ζγ})
    let zeta_f = arrow.zeta_functor(x)?;
    let sigma_zeta = zeta_f.then(&sigma)?;
    let mut components = BTreeMap::new();
    for gamma_id in arrow.groupoid.object_ids() {
        let zeta_val = &arrow.zeta[gamma_id];
        let o = x.object_index(zeta_val).unwrap();
        let id_arrow = &x.morphism_ids()[x.identity(o)];
        components.insert(
            gamma_id.clone(),
            crate::groupoid::arrow_pair_id(gamma_id, id_arrow),
        );
    }
    let retraction = NaturalTransformation::new(
        GroupoidFunctor::identity(&arrow.groupoid),
        sigma_zeta,
        components,
    )?;

    // T∘σ is the identity transformation
    for (o, oid) in x.object_ids().iter().enumerate() {
        let _ = oid;
        let sigma_obj = sigma.apply_object(o);
        let comp = retraction.component(sigma_obj);
        let expected = arrow.groupoid.identity(sigma_obj);
        if comp != expected {
            return Err(Error::Axiom {
                axiom: "T∘σ = id",
                witness: arrow.groupoid.object_ids()[sigma_obj].clone(),
            });
        }
    }

    Ok(UnitSection {
        arrow,
        objects_groupoid,
        sigma,
        retraction,
    })
}

/// Result of the Morita-invariance check for a weak equivalence.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MoritaReport {
    pub invariant: bool,
    pub k_max: usize,
    pub source: ClassifyingSpaceReport,
    pub target: ClassifyingSpaceReport,
    /// Chain ranks of the mapping cone per degree.
    pub cone_ranks: Vec<usize>,
    /// Cone homology through `k_max`; all-zero certifies the induced map is
    /// an isomorphism on every computed degree.
    pub cone_homology: HomologyProfile,
}

/// Checks that a weak equivalence preserves the homology of the
/// classifying space: equal profiles through `k_max`, and the induced map
/// an isomorphism, certified by acyclicity of its mapping cone.
pub fn morita_invariance_check(f: &GroupoidFunctor, k_max: usize) -> Result<MoritaReport> {
    let we = is_weak_equivalence(f);
    if !we.is_weak_equivalence {
        let detail = match (&we.missed_object, &we.hom_mismatch) {
            (Some(o), _) => format!("object `{o}` not hit up to isomorphism"),
            (_, Some((x, y, a, b))) => {
                format!("hom({x},{y}) has {a} elements, image hom has {b}")
            }
            _ => "unknown".to_string(),
        };
        return Err(Error::NotAWeakEquivalence(detail));
    }

    let truncation = k_max + 1;
    let ind: InducedNerveMap = induced_map(f, truncation)?;
    let source = ClassifyingSpaceReport {
        groupoid: f.source().name().to_string(),
        truncation,
        level_counts: ind.map.source().level_sizes(),
        homology: homology(&ind.source_chain, k_max)?,
    };
    let target = ClassifyingSpaceReport {
        groupoid: f.target().name().to_string(),
        truncation,
        level_counts: ind.map.target().level_sizes(),
        homology: homology(&ind.target_chain, k_max)?,
    };
    for (a, b) in source.homology.degrees.iter().zip(&target.homology.degrees) {
        if a != b {
            return Err(Error::InvarianceFailed {
                degree: a.k,
                detail: "homology profiles differ".into(),
            });
        }
    }

    let cone = mapping_cone(&ind.matrices, &ind.source_chain, &ind.target_chain)?;
    let cone_homology = homology(&cone, k_max)?;
    if let Some(d) = cone_homology
        .degrees
        .iter()
        .find(|d| d.betti != 0 || !d.torsion.is_empty())
    {
        return Err(Error::InvarianceFailed {
            degree: d.k,
            detail: "mapping cone is not acyclic".into(),
        });
    }

    Ok(MoritaReport {
        invariant: true,
        k_max,
        source,
        target,
        cone_ranks: cone.ranks().to_vec(),
        cone_homology,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{
        cech_cover_groupoid, cech_forgetful_functor, cyclic_group, free_z2_action_groupoid,
        point_functor, symmetric_group_3,
    };

    #[test]
    fn nerve_counts() {
        let t = trivial_groupoid(&["1".into(), "2".into(), "3".into()]).unwrap();
        assert_eq!(nerve(&t, 2).unwrap().level_sizes(), vec![3, 3, 3]);

        let z2 = cyclic_group(2);
        assert_eq!(nerve(&z2, 3).unwrap().level_sizes(), vec![1, 2, 4, 8]);

        let cech = cech_cover_groupoid();
        assert_eq!(nerve(&cech, 1).unwrap().level_sizes(), vec![4, 6]);
    }

    #[test]
    fn nerve_count_recursion() {
        // |N_{n+1}| = Σ over level-n strings of out-degree of the endpoint
        let s3 = symmetric_group_3();
        let n = nerve(&s3, 3).unwrap();
        for level in 1..3 {
            let mut expected = 0usize;
            for s in 0..n.level_size(level) {
                let parts =
                    crate::simplicial::homotopy::decode_string_label(n.label(level, s), level);
                let last = s3.morphism_index(parts.last().unwrap()).unwrap();
                expected += s3.morphisms_from(s3.tgt(last)).len();
            }
            assert_eq!(n.level_size(level + 1), expected);
        }
    }

    #[test]
    fn trivial_nerve_strings_are_degenerate() {
        let t = trivial_groupoid(&["1".into(), "2".into(), "3".into()]).unwrap();
        let n = nerve(&t, 2).unwrap();
        for s in 0..n.level_size(2) {
            let parts = crate::simplicial::homotopy::decode_string_label(n.label(2, s), 2);
            assert!(parts.iter().all(|p| p.starts_with("id#")));
        }
    }

    #[test]
    fn free_action_classifying_space_is_a_point() {
        let g = free_z2_action_groupoid();
        let r = classifying_homology(&g, 3, None).unwrap();
        let pt = trivial_groupoid(&["pt".into()]).unwrap();
        let r_pt = classifying_homology(&pt, 3, None).unwrap();
        assert_eq!(r.homology, r_pt.homology);
    }

    #[test]
    fn s3_first_homology_is_z2() {
        let s3 = symmetric_group_3();
        let r = classifying_homology(&s3, 1, None).unwrap();
        assert_eq!(r.homology.degrees[1].betti, 0);
        assert_eq!(r.homology.degrees[1].torsion, vec![2]);
    }

    #[test]
    fn universal_total_of_z2_is_contractible() {
        let z2 = cyclic_group(2);
        let r = universal_total(&z2, 3, None).unwrap();
        assert!(r.report.homology.is_acyclic_with_components(1));
        // ζ sends both vertices to the unique object
        assert_eq!(r.zeta.len(), 2);
        assert!(r.zeta.values().all(|v| v == "*"));
    }

    #[test]
    fn universal_total_of_trivial_groupoid() {
        let t = trivial_groupoid(&["1".into(), "2".into()]).unwrap();
        let r = universal_total(&t, 1, None).unwrap();
        assert_eq!(r.report.homology.degrees[0].betti, 2);
    }

    #[test]
    fn unit_section_identities() {
        for g in [
            cyclic_group(2),
            symmetric_group_3(),
            trivial_groupoid(&["1".into(), "2".into()]).unwrap(),
        ] {
            let u = unit_section(&g).unwrap();
            // both functor composites were asserted inside; sanity-check σ
            assert_eq!(u.sigma.source().object_count(), g.object_count());
        }
    }

    #[test]
    fn morita_check_on_quotient_functor() {
        let g = free_z2_action_groupoid();
        let f = point_functor(&g).unwrap();
        let r = morita_invariance_check(&f, 3).unwrap();
        assert!(r.invariant);
        assert!(r.cone_homology.is_trivial());
    }

    #[test]
    fn morita_check_on_cech_forgetful() {
        let f = cech_forgetful_functor();
        let r = morita_invariance_check(&f, 2).unwrap();
        assert_eq!(
            r.source.homology,
            HomologyProfile::from_parts(&[(3, &[]), (0, &[]), (0, &[])])
        );
    }

    #[test]
    fn morita_rejects_non_equivalence() {
        let z2 = cyclic_group(2);
        let f = point_functor(&z2).unwrap();
        let err = morita_invariance_check(&f, 2).unwrap_err();
        assert_eq!(err.reason(), "not_a_weak_equivalence");
    }

    #[test]
    fn normalized_chain_ranks_for_z2() {
        let z2 = cyclic_group(2);
        let c = normalized_nerve_chain(&z2, 4).unwrap();
        // only the all-r1 string survives at each level
        assert_eq!(c.ranks(), &[1, 1, 1, 1, 1]);
    }

    #[test]
    fn normalized_agrees_with_unnormalized() {
        use crate::simplicial::chain::chain_complex;
        use crate::simplicial::homology::homology;
        for g in [cyclic_group(2), cyclic_group(3), symmetric_group_3()] {
            let unnorm = chain_complex(&nerve(&g, 4).unwrap()).unwrap();
            let norm = normalized_nerve_chain(&g, 4).unwrap();
            assert_eq!(
                homology(&unnorm, 3).unwrap(),
                homology(&norm, 3).unwrap(),
                "normalization mismatch for {}",
                g.name()
            );
        }
    }
}
