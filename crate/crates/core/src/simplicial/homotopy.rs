//! Chain-level machinery on top of nerves: induced maps of functors, the
//! prism chain homotopy attached to a natural transformation, and mapping
//! cones.
//!
//! The prism operator realizes, in exact integer chains, the fact that a
//! natural transformation makes the two induced maps homotopic. For a
//! string (f_1,…,f_n) with vertices x_0,…,x_n it is
//!
//! ```text
//! P(f_1,…,f_n) = Σ_i (−1)^i (F f_1,…,F f_i, T_{x_i}, G f_{i+1},…,G f_n)
//! ```
//!
//! and satisfies `∂P + P∂ = G# − F#` degreewise; the identity is verified
//! matrix-exactly, never assumed.

use crate::classifying::nerve;
use crate::error::{Error, Result};
use crate::groupoid::{GroupoidFunctor, NaturalTransformation};
use crate::simplicial::chain::{chain_complex, ChainComplex, SparseIntMatrix};
use crate::simplicial::{simplex_label, SemiSimplicialSet, SimplicialMap};

/// The nerve map of a functor, with its chain-map matrices.
#[derive(Debug, Clone)]
pub struct InducedNerveMap {
    pub map: SimplicialMap,
    pub source_chain: ChainComplex,
    pub target_chain: ChainComplex,
    /// One 0/1 matrix per level, single entry per column.
    pub matrices: Vec<SparseIntMatrix>,
}

/// Sends each string through the functor: `(f_1,…,f_n) ↦ (F f_1,…,F f_n)`.
pub fn induced_map(f: &GroupoidFunctor, truncation: usize) -> Result<InducedNerveMap> {
    let source = nerve(f.source(), truncation)?;
    let target = nerve(f.target(), truncation)?;

    let src_g = f.source();
    let tgt_g = f.target();
    let mut assignments = Vec::with_capacity(truncation + 1);
    // level 0: objects
    assignments.push(
        (0..source.level_size(0))
            .map(|s| {
                let oid = source.label(0, s);
                let o = src_g.object_index(oid).expect("nerve label is an object");
                (
                    oid.to_string(),
                    tgt_g.object_ids()[f.apply_object(o)].clone(),
                )
            })
            .collect::<Vec<_>>(),
    );
    for n in 1..=truncation {
        let mut level = Vec::with_capacity(source.level_size(n));
        for s in 0..source.level_size(n) {
            let parts = decode_string_label(source.label(n, s), n);
            let image: Vec<String> = parts
                .iter()
                .map(|mid| {
                    let m = src_g
                        .morphism_index(mid)
                        .expect("nerve label is a morphism");
                    tgt_g.morphism_ids()[f.apply_morphism(m)].clone()
                })
                .collect();
            level.push((source.label(n, s).to_string(), simplex_label(&image)));
        }
        assignments.push(level);
    }
    let map = SimplicialMap::new(source, target, &assignments)?;
    let source_chain = chain_complex(map.source())?;
    let target_chain = chain_complex(map.target())?;
    let matrices = chain_map_matrices(&map);
    check_chain_map(&matrices, &source_chain, &target_chain)?;
    Ok(InducedNerveMap {
        map,
        source_chain,
        target_chain,
        matrices,
    })
}

/// Decodes a simplex label back into its component ids, given how many
/// components it has (n for a level-n nerve string, n+1 for a level-n
/// ordered simplex).
pub fn decode_string_label(label: &str, parts: usize) -> Vec<String> {
    if parts <= 1 {
        vec![label.to_string()]
    } else {
        serde_json::from_str(label).expect("multi-part simplex labels are JSON arrays")
    }
}

/// The 0/1 matrices of a simplicial map, one per level.
pub fn chain_map_matrices(map: &SimplicialMap) -> Vec<SparseIntMatrix> {
    (0..=map.source().top_level())
        .map(|n| {
            let mut m =
                SparseIntMatrix::zero(map.target().level_size(n), map.source().level_size(n));
            for s in 0..map.source().level_size(n) {
                m.add_entry(map.apply(n, s), s, 1);
            }
            m
        })
        .collect()
}

/// Asserts that levelwise matrices commute with the boundaries.
pub fn check_chain_map(
    matrices: &[SparseIntMatrix],
    source: &ChainComplex,
    target: &ChainComplex,
) -> Result<()> {
    for n in 1..matrices.len() {
        let lhs = target.boundary(n).mul(&matrices[n]);
        let rhs = matrices[n - 1].mul(&source.boundary(n));
        if lhs != rhs {
            return Err(Error::BadSimplicialMap(format!(
                "chain map does not commute with d at degree {n}"
            )));
        }
    }
    Ok(())
}

/// The prism chain homotopy of a natural transformation, verified to
/// satisfy `∂P + P∂ = G# − F#` in every degree below the truncation.
#[derive(Debug, Clone)]
pub struct PrismHomotopy {
    pub truncation: usize,
    pub f_map: InducedNerveMap,
    pub g_map: InducedNerveMap,
    /// `prism[n] : C_n(source nerve) → C_{n+1}(target nerve)` for
    /// `n = 0..truncation`.
    pub prism: Vec<SparseIntMatrix>,
}

pub fn nat_trans_chain_homotopy(
    t: &NaturalTransformation,
    truncation: usize,
) -> Result<PrismHomotopy> {
    assert!(truncation >= 2, "prism operator needs truncation ≥ 2");
    let f = t.source_functor();
    let g = t.target_functor();
    let f_map = induced_map(f, truncation)?;
    let g_map = induced_map(g, truncation)?;
    let source = f_map.map.source().clone();
    let target = f_map.map.target().clone();

    let src_g = f.source();
    let tgt_g = f.target();
    let mor_id = |m: usize| tgt_g.morphism_ids()[m].clone();

    let mut prism = Vec::with_capacity(truncation);
    for n in 0..truncation {
        let mut p = SparseIntMatrix::zero(target.level_size(n + 1), source.level_size(n));
        for s in 0..source.level_size(n) {
            // vertices x_0..x_n of the string
            let (parts, objects) = string_vertices(src_g, &source, n, s);
            for i in 0..=n {
                let mut image: Vec<String> = Vec::with_capacity(n + 1);
                for part in parts.iter().take(i) {
                    image.push(mor_id(f.apply_morphism(*part)));
                }
                image.push(mor_id(t.component(objects[i])));
                for part in parts.iter().skip(i) {
                    image.push(mor_id(g.apply_morphism(*part)));
                }
                let label = simplex_label(&image);
                let row = target
                    .index_of(n + 1, &label)
                    .expect("prism string is a composable string of the target nerve");
                let sign = if i % 2 == 0 { 1 } else { -1 };
                p.add_entry(row, s, sign);
            }
        }
        prism.push(p);
    }

    // ∂P + P∂ = G# − F#, degree by degree
    let h = PrismHomotopy {
        truncation,
        f_map,
        g_map,
        prism,
    };
    h.verify()?;
    Ok(h)
}

impl PrismHomotopy {
    fn verify(&self) -> Result<()> {
        let target_chain = &self.f_map.target_chain;
        let source_chain = &self.f_map.source_chain;
        for n in 0..self.truncation {
            let mut lhs = target_chain.boundary(n + 1).mul(&self.prism[n]);
            if n > 0 {
                lhs = lhs.add(&self.prism[n - 1].mul(&source_chain.boundary(n)));
            }
            let rhs = self.g_map.matrices[n].sub(&self.f_map.matrices[n]);
            if lhs != rhs {
                return Err(Error::HomotopyIdentityFailed(n));
            }
        }
        Ok(())
    }
}

/// Morphism indices and vertex-object indices of a nerve string.
fn string_vertices(
    groupoid: &crate::groupoid::FiniteGroupoid,
    nerve_set: &SemiSimplicialSet,
    n: usize,
    s: usize,
) -> (Vec<usize>, Vec<usize>) {
    if n == 0 {
        let o = groupoid
            .object_index(nerve_set.label(0, s))
            .expect("level-0 label is an object");
        return (Vec::new(), vec![o]);
    }
    let parts: Vec<usize> = decode_string_label(nerve_set.label(n, s), n)
        .iter()
        .map(|mid| {
            groupoid
                .morphism_index(mid)
                .expect("label component is a morphism")
        })
        .collect();
    let mut objects = Vec::with_capacity(n + 1);
    objects.push(groupoid.src(parts[0]));
    for &f in &parts {
        objects.push(groupoid.tgt(f));
    }
    (parts, objects)
}

/// Mapping cone of a chain map `f: A → B`: `Cone_n = A_{n−1} ⊕ B_n` with
/// `∂(a, b) = (−∂a, f(a) + ∂b)`. Acyclicity of the cone through a range of
/// degrees certifies that `f` is a homology isomorphism below that range
/// and a surjection at its edge.
pub fn mapping_cone(
    f: &[SparseIntMatrix],
    a: &ChainComplex,
    b: &ChainComplex,
) -> Result<ChainComplex> {
    let top = b.top_degree().min(a.top_degree() + 1);
    let mut ranks = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let a_part = if n == 0 { 0 } else { a.rank(n - 1) };
        ranks.push(a_part + b.rank(n));
    }
    let mut boundaries = Vec::with_capacity(top);
    for n in 1..=top {
        let a_rows = if n >= 2 { a.rank(n - 2) } else { 0 };
        let a_cols = a.rank(n - 1);
        let b_rows = b.rank(n - 1);
        let b_cols = b.rank(n);
        let neg_da = if n >= 2 {
            Some(a.boundary(n - 1).negated())
        } else {
            None
        };
        let fb = &f[n - 1];
        let db = b.boundary(n);
        boundaries.push(SparseIntMatrix::block2x2(
            neg_da.as_ref(),
            None,
            Some(fb),
            Some(&db),
            a_rows,
            a_cols,
            b_rows,
            b_cols,
        ));
    }
    ChainComplex::new(ranks, boundaries, a.is_complete() && b.is_complete())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{
        cyclic_group, free_z2_action_groupoid, point_functor, symmetric_group_3,
    };
    use crate::groupoid::{GroupoidFunctor, NaturalTransformation};
    use crate::simplicial::homology::homology;
    use std::collections::BTreeMap;

    #[test]
    fn identity_functor_induces_identity() {
        let z2 = cyclic_group(2);
        let ind = induced_map(&GroupoidFunctor::identity(&z2), 3).unwrap();
        for (n, m) in ind.matrices.iter().enumerate() {
            assert_eq!(
                m,
                &SparseIntMatrix::identity(ind.map.source().level_size(n))
            );
        }
    }

    #[test]
    fn quotient_functor_surjective_at_level_zero() {
        let g = free_z2_action_groupoid();
        let f = point_functor(&g).unwrap();
        let ind = induced_map(&f, 2).unwrap();
        assert_eq!(ind.map.source().level_size(0), 2);
        assert_eq!(ind.map.target().level_size(0), 1);
        // both vertices land on the unique target vertex
        assert_eq!(ind.map.apply(0, 0), ind.map.apply(0, 1));
    }

    #[test]
    fn identity_transformation_prism_identity_holds() {
        let z2 = cyclic_group(2);
        let id = GroupoidFunctor::identity(&z2);
        let mut comps = BTreeMap::new();
        comps.insert("*".to_string(), "r0".to_string());
        let t = NaturalTransformation::new(id.clone(), id, comps).unwrap();
        let h = nat_trans_chain_homotopy(&t, 3).unwrap();
        // F = G, so ∂P + P∂ = 0; verified inside, spot-check degree 0
        assert!(h.g_map.matrices[0].sub(&h.f_map.matrices[0]).is_zero());
    }

    #[test]
    fn conjugation_on_abelian_group_is_trivial_homotopy() {
        // conjugation by the nonidentity element of Z/2: F = G = id, with
        // T_* = r1; the identity ∂P + P∂ = 0 must still verify
        let z2 = cyclic_group(2);
        let id = GroupoidFunctor::identity(&z2);
        let mut comps = BTreeMap::new();
        comps.insert("*".to_string(), "r1".to_string());
        let t = NaturalTransformation::new(id.clone(), id, comps).unwrap();
        let h = nat_trans_chain_homotopy(&t, 3).unwrap();
        for n in 0..3 {
            assert!(h.g_map.matrices[n].sub(&h.f_map.matrices[n]).is_zero());
        }
    }

    #[test]
    fn conjugation_by_transposition_on_s3() {
        // F = id, G = conjugation by a transposition; homotopy through
        // degree 3 verifies, hence equal induced maps on homology
        let s3 = symmetric_group_3();
        let c = s3.morphism_index("021").unwrap();
        let id = GroupoidFunctor::identity(&s3);
        let mut morphism_map = BTreeMap::new();
        for (i, mid) in s3.morphism_ids().iter().enumerate() {
            // x ↦ c⁻¹ x c in diagrammatic order
            let conj = s3
                .compose(s3.inverse(c), s3.compose(i, c).unwrap())
                .unwrap();
            morphism_map.insert(mid.clone(), s3.morphism_ids()[conj].clone());
        }
        let mut object_map = BTreeMap::new();
        object_map.insert("*".to_string(), "*".to_string());
        let conj_functor =
            GroupoidFunctor::new(s3.clone(), s3.clone(), object_map, morphism_map).unwrap();
        let mut comps = BTreeMap::new();
        comps.insert("*".to_string(), "021".to_string());
        let t = NaturalTransformation::new(id, conj_functor, comps).unwrap();
        let h = nat_trans_chain_homotopy(&t, 3).unwrap();

        // the two induced maps agree on H_1 and H_2: their difference sends
        // every cycle to a boundary (difference = ∂∘P on kernels); certify
        // via cone of (G# − F#)… simpler: profiles of both targets match
        // and the verified identity already forces equality on homology.
        assert_eq!(h.truncation, 3);
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let z2 = cyclic_group(2);
        let ind = induced_map(&GroupoidFunctor::identity(&z2), 3).unwrap();
        let cone = mapping_cone(&ind.matrices, &ind.source_chain, &ind.target_chain).unwrap();
        let h = homology(&cone, 2).unwrap();
        assert!(h.is_trivial());
    }
}
