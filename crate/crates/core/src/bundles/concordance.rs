//! Concordance of bundles via exhaustive cocycle search on the prism
//! triangulation of base × \[0,1\], and enumeration of all bundles over a
//! base with their concordance classes.
//!
//! The prism complex doubles each vertex into (v,0) < (v,1), interleaved
//! with the base order; a base n-simplex v_0 < … < v_n contributes the
//! n+1 simplices [(v_0,0)…(v_i,0),(v_i,1)…(v_n,1)].

use std::collections::BTreeMap;

use crate::bundles::{validate_bundle, CocycleBundle};
use crate::error::{Error, Result};
use crate::groupoid::FiniteGroupoid;
use crate::simplicial::OrderedSimplicialComplex;

/// The prism triangulation of base × \[0,1\], with its end inclusions.
#[derive(Debug, Clone)]
pub struct PrismComplex {
    pub complex: OrderedSimplicialComplex,
    base: OrderedSimplicialComplex,
}

pub fn prism_complex(base: &OrderedSimplicialComplex) -> PrismComplex {
    let vertices: Vec<String> = base
        .vertex_names()
        .iter()
        .flat_map(|v| [format!("{v}@0"), format!("{v}@1")])
        .collect();
    let mut simplices = Vec::new();
    for d in 0..=base.dim() {
        for tuple in base.simplices_of_dim(d) {
            for i in 0..=d {
                let mut prism = Vec::with_capacity(d + 2);
                for &v in &tuple[..=i] {
                    prism.push(format!("{}@0", base.vertex_names()[v]));
                }
                for &v in &tuple[i..] {
                    prism.push(format!("{}@1", base.vertex_names()[v]));
                }
                simplices.push(prism);
            }
        }
    }
    let complex = OrderedSimplicialComplex::new(vertices, &simplices)
        .expect("prism of a valid complex is valid");
    PrismComplex {
        complex,
        base: base.clone(),
    }
}

impl PrismComplex {
    pub fn end_vertex(&self, base_vertex: &str, end: usize) -> String {
        format!("{base_vertex}@{end}")
    }

    /// Restricts a bundle over the prism to one of its ends, as a bundle
    /// over the original base.
    pub fn restrict(&self, b: &CocycleBundle, end: usize) -> Result<CocycleBundle> {
        let g = b.groupoid();
        let h: BTreeMap<String, String> = self
            .base
            .vertex_names()
            .iter()
            .map(|v| {
                let pv = self.complex.vertex_index(&self.end_vertex(v, end)).unwrap();
                (v.clone(), g.object_ids()[b.object_at(pv)].clone())
            })
            .collect();
        let gamma: BTreeMap<(String, String), String> = self
            .base
            .edges()
            .iter()
            .map(|e| {
                let (u, v) = (
                    &self.base.vertex_names()[e[0]],
                    &self.base.vertex_names()[e[1]],
                );
                let pu = self.complex.vertex_index(&self.end_vertex(u, end)).unwrap();
                let pv = self.complex.vertex_index(&self.end_vertex(v, end)).unwrap();
                (
                    (u.clone(), v.clone()),
                    g.morphism_ids()[b.gamma(pu, pv)].clone(),
                )
            })
            .collect();
        validate_bundle(self.base.clone(), g.clone(), &h, &gamma)
    }
}

/// A bundle over the prism restricting to the two given bundles at its
/// ends, with the vertex-wise end identifications.
#[derive(Debug, Clone)]
pub struct ConcordanceCertificate {
    pub prism: PrismComplex,
    pub bundle: CocycleBundle,
    /// `β_i(v): h_{b_i}(v) → h_{restriction_i}(v)` witnessing the end
    /// isomorphisms.
    pub beta0: BTreeMap<String, String>,
    pub beta1: BTreeMap<String, String>,
}

impl ConcordanceCertificate {
    /// Re-checks the certificate against the two bundles it claims to
    /// connect.
    pub fn verify(&self, b0: &CocycleBundle, b1: &CocycleBundle) -> Result<()> {
        for (end, (b, beta)) in [(0usize, (b0, &self.beta0)), (1, (b1, &self.beta1))] {
            let restriction = self.prism.restrict(&self.bundle, end)?;
            if !is_isomorphism_family(b, &restriction, beta) {
                return Err(Error::Axiom {
                    axiom: "concordance end identification",
                    witness: format!("end {end}"),
                });
            }
        }
        Ok(())
    }
}

/// Checks that a vertex-wise family `λ_v: h_0(v) → h_1(v)` intertwines the
/// two cocycles.
pub fn is_isomorphism_family(
    b0: &CocycleBundle,
    b1: &CocycleBundle,
    lambda: &BTreeMap<String, String>,
) -> bool {
    if b0.base() != b1.base() || b0.groupoid() != b1.groupoid() {
        return false;
    }
    let g = b0.groupoid();
    let base = b0.base();
    let mut assigned = Vec::with_capacity(base.vertex_names().len());
    for (v, name) in base.vertex_names().iter().enumerate() {
        let Some(l) = lambda.get(name).and_then(|m| g.morphism_index(m)) else {
            return false;
        };
        if g.src(l) != b0.object_at(v) || g.tgt(l) != b1.object_at(v) {
            return false;
        }
        assigned.push(l);
    }
    base.edges().iter().all(|e| {
        let lhs = g.compose(assigned[e[0]], b1.gamma(e[0], e[1]));
        let rhs = g.compose(b0.gamma(e[0], e[1]), assigned[e[1]]);
        lhs.is_some() && lhs == rhs
    })
}

/// Deterministic backtracking over edge labels of a complex with fixed
/// vertex objects: candidates per edge are the hom-sets, constraints the
/// triangle cocycles. Calls `on_solution` for every completed cocycle (in
/// lexicographic order) until it returns `true`.
struct CocycleSearch<'a> {
    base: &'a OrderedSimplicialComplex,
    groupoid: &'a FiniteGroupoid,
    vertex_objects: &'a [usize],
    // per edge position: triangles (as triples of edge positions with roles)
    triangles_touching: Vec<Vec<[usize; 3]>>,
    limit: u64,
    visited: u64,
}

impl<'a> CocycleSearch<'a> {
    fn new(
        base: &'a OrderedSimplicialComplex,
        groupoid: &'a FiniteGroupoid,
        vertex_objects: &'a [usize],
        limit: u64,
    ) -> Self {
        let edge_pos = |u: usize, v: usize| -> usize {
            base.edges()
                .binary_search_by(|e| e.as_slice().cmp([u, v].as_slice()))
                .expect("triangle edge exists")
        };
        let mut triangles_touching = vec![Vec::new(); base.edges().len()];
        for t in base.simplices_of_dim(2) {
            let tri = [
                edge_pos(t[0], t[1]),
                edge_pos(t[1], t[2]),
                edge_pos(t[0], t[2]),
            ];
            for &e in &tri {
                triangles_touching[e].push(tri);
            }
        }
        CocycleSearch {
            base,
            groupoid,
            vertex_objects,
            triangles_touching,
            limit,
            visited: 0,
        }
    }

    fn run(
        &mut self,
        assignment: &mut Vec<Option<usize>>,
        on_solution: &mut dyn FnMut(&[Option<usize>]) -> bool,
    ) -> Result<bool> {
        self.step(0, assignment, on_solution)
    }

    fn step(
        &mut self,
        pos: usize,
        assignment: &mut Vec<Option<usize>>,
        on_solution: &mut dyn FnMut(&[Option<usize>]) -> bool,
    ) -> Result<bool> {
        let edges = self.base.edges();
        let mut pos = pos;
        while pos < edges.len() && assignment[pos].is_some() {
            // pre-pinned edge: still subject to the triangle checks below
            if !self.triangles_ok(pos, assignment) {
                return Ok(false);
            }
            pos += 1;
        }
        if pos == edges.len() {
            return Ok(on_solution(assignment));
        }
        let (u, v) = (edges[pos][0], edges[pos][1]);
        let candidates = self
            .groupoid
            .hom(self.vertex_objects[u], self.vertex_objects[v]);
        for cand in candidates {
            self.visited += 1;
            if self.visited > self.limit {
                return Err(Error::NonExhaustive {
                    limit: self.limit,
                    visited: self.visited,
                });
            }
            assignment[pos] = Some(cand);
            if self.triangles_ok(pos, assignment) && self.step(pos + 1, assignment, on_solution)? {
                return Ok(true);
            }
            assignment[pos] = None;
        }
        Ok(false)
    }

    /// Cocycle condition on every triangle touching `pos` whose edges are
    /// all assigned.
    fn triangles_ok(&self, pos: usize, assignment: &[Option<usize>]) -> bool {
        self.triangles_touching[pos].iter().all(|tri| {
            let [uv, vw, uw] = *tri;
            match (assignment[uv], assignment[vw], assignment[uw]) {
                (Some(a), Some(b), Some(c)) => self.groupoid.compose(a, b) == Some(c),
                _ => true,
            }
        })
    }
}

/// Searches for a concordance between two bundles over the same base.
///
/// The search runs over cocycles on the prism whose end restrictions are
/// pinned to the two bundles (any concordance with merely isomorphic ends
/// can be normalized to one with equal ends by a vertex-wise coboundary at
/// the ends, so nothing is lost). Every state visited counts against
/// `search_limit`; exceeding it aborts with `NonExhaustive` rather than
/// reporting a possibly-wrong "none".
pub fn are_concordant(
    b0: &CocycleBundle,
    b1: &CocycleBundle,
    search_limit: u64,
) -> Result<Option<ConcordanceCertificate>> {
    if b0.base() != b1.base() {
        return Err(Error::BaseMismatch("bases differ".into()));
    }
    if b0.groupoid() != b1.groupoid() {
        return Err(Error::BaseMismatch("groupoids differ".into()));
    }
    let g = b0.groupoid().clone();
    let base = b0.base();
    let prism = prism_complex(base);
    let pc = &prism.complex;

    // vertex objects on the prism, pinned from the two ends
    let mut vertex_objects = vec![usize::MAX; pc.vertex_names().len()];
    for (v, name) in base.vertex_names().iter().enumerate() {
        let p0 = pc.vertex_index(&prism.end_vertex(name, 0)).unwrap();
        let p1 = pc.vertex_index(&prism.end_vertex(name, 1)).unwrap();
        vertex_objects[p0] = b0.object_at(v);
        vertex_objects[p1] = b1.object_at(v);
    }

    // pin the end edges to the given cocycles
    let mut assignment: Vec<Option<usize>> = vec![None; pc.edges().len()];
    for (pos, e) in pc.edges().iter().enumerate() {
        let (un, vn) = (&pc.vertex_names()[e[0]], &pc.vertex_names()[e[1]]);
        let (ub, ue) = un.rsplit_once('@').unwrap();
        let (vb, ve) = vn.rsplit_once('@').unwrap();
        if ue == ve {
            let b = if ue == "0" { b0 } else { b1 };
            let (ui, vi) = (
                base.vertex_index(ub).unwrap(),
                base.vertex_index(vb).unwrap(),
            );
            assignment[pos] = Some(b.gamma(ui, vi));
        }
    }

    let mut search = CocycleSearch::new(pc, &g, &vertex_objects, search_limit);
    let mut solution: Option<Vec<usize>> = None;
    search.run(&mut assignment, &mut |assign| {
        solution = Some(assign.iter().map(|m| m.unwrap()).collect());
        true
    })?;

    let Some(labels) = solution else {
        return Ok(None);
    };
    let h: BTreeMap<String, String> = pc
        .vertex_names()
        .iter()
        .enumerate()
        .map(|(v, name)| (name.clone(), g.object_ids()[vertex_objects[v]].clone()))
        .collect();
    let gamma: BTreeMap<(String, String), String> = pc
        .edges()
        .iter()
        .enumerate()
        .map(|(pos, e)| {
            (
                (
                    pc.vertex_names()[e[0]].clone(),
                    pc.vertex_names()[e[1]].clone(),
                ),
                g.morphism_ids()[labels[pos]].clone(),
            )
        })
        .collect();
    let bundle = validate_bundle(pc.clone(), g.clone(), &h, &gamma)?;

    // ends are pinned equal, so the identifications are identity families
    let beta0 = identity_family(b0);
    let beta1 = identity_family(b1);
    let certificate = ConcordanceCertificate {
        prism,
        bundle,
        beta0,
        beta1,
    };
    certificate.verify(b0, b1)?;
    Ok(Some(certificate))
}

fn identity_family(b: &CocycleBundle) -> BTreeMap<String, String> {
    let g = b.groupoid();
    b.base()
        .vertex_names()
        .iter()
        .enumerate()
        .map(|(v, name)| {
            (
                name.clone(),
                g.morphism_ids()[g.identity(b.object_at(v))].clone(),
            )
        })
        .collect()
}

/// All valid cocycles over a base, in deterministic order, partitioned into
/// concordance classes.
#[derive(Debug, Clone)]
pub struct BundleEnumeration {
    pub bundles: Vec<CocycleBundle>,
    /// Sorted index lists, one per class, ordered by first member.
    pub classes: Vec<Vec<usize>>,
}

/// Enumerates every bundle over the base with the given structure groupoid
/// and partitions them by concordance. `bound` caps the raw candidate count
/// `|objects|^V · |morphisms|^E`; `search_limit` is passed to each
/// concordance search.
pub fn enumerate_bundles(
    base: &OrderedSimplicialComplex,
    groupoid: &FiniteGroupoid,
    bound: u128,
    search_limit: u64,
) -> Result<BundleEnumeration> {
    let nv = base.vertex_names().len() as u32;
    let ne = base.edges().len() as u32;
    let size = (groupoid.object_count() as u128)
        .checked_pow(nv)
        .and_then(|a| {
            (groupoid.morphism_count() as u128)
                .checked_pow(ne)
                .map(|b| a.saturating_mul(b))
        })
        .unwrap_or(u128::MAX);
    if size > bound {
        return Err(Error::TooLarge { size, bound });
    }

    let mut bundles = Vec::new();
    // odometer over vertex-object assignments
    let n_obj = groupoid.object_count();
    let n_vertices = base.vertex_names().len();
    let mut h = vec![0usize; n_vertices];
    loop {
        if n_obj > 0 || n_vertices == 0 {
            let mut search = CocycleSearch::new(base, groupoid, &h, u64::MAX);
            let mut assignment = vec![None; base.edges().len()];
            search.run(&mut assignment, &mut |assign| {
                let hmap: BTreeMap<String, String> = base
                    .vertex_names()
                    .iter()
                    .enumerate()
                    .map(|(v, name)| (name.clone(), groupoid.object_ids()[h[v]].clone()))
                    .collect();
                let gamma: BTreeMap<(String, String), String> = base
                    .edges()
                    .iter()
                    .enumerate()
                    .map(|(pos, e)| {
                        (
                            (
                                base.vertex_names()[e[0]].clone(),
                                base.vertex_names()[e[1]].clone(),
                            ),
                            groupoid.morphism_ids()[assign[pos].unwrap()].clone(),
                        )
                    })
                    .collect();
                bundles.push(
                    validate_bundle(base.clone(), groupoid.clone(), &hmap, &gamma)
                        .expect("search yields valid cocycles"),
                );
                false
            })?;
        }
        // advance the odometer
        let mut carry = true;
        for slot in h.iter_mut().rev() {
            if !carry {
                break;
            }
            *slot += 1;
            if *slot < n_obj {
                carry = false;
            } else {
                *slot = 0;
            }
        }
        if carry || n_vertices == 0 {
            break;
        }
    }

    // union-find closure under pairwise concordance with representatives
    let mut parent: Vec<usize> = (0..bundles.len()).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..bundles.len() {
        let reps: Vec<usize> = (0..i).filter(|&j| find(&mut parent, j) == j).collect();
        for r in reps {
            if find(&mut parent, i) == find(&mut parent, r) {
                continue;
            }
            if are_concordant(&bundles[r], &bundles[i], search_limit)?.is_some() {
                let (a, b) = (find(&mut parent, r), find(&mut parent, i));
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi] = lo;
            }
        }
    }
    let mut class_map: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..bundles.len() {
        class_map.entry(find(&mut parent, i)).or_default().push(i);
    }
    let classes = class_map.into_values().collect();
    Ok(BundleEnumeration { bundles, classes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{cyclic_group, k3_bundle, k3_circle, symmetric_group_3};

    const LIMIT: u64 = 1_000_000;

    #[test]
    fn prism_of_circle() {
        let p = prism_complex(&k3_circle());
        assert_eq!(p.complex.vertex_names().len(), 6);
        // verticals + diagonals + two copies of the base edges
        assert_eq!(p.complex.edges().len(), 3 + 3 + 6);
        // each base edge contributes two triangles
        assert_eq!(p.complex.simplices_of_dim(2).len(), 6);
    }

    #[test]
    fn self_concordance_exists() {
        let b = k3_bundle(&cyclic_group(2), ["r1", "r0", "r0"]);
        let cert = are_concordant(&b, &b, LIMIT).unwrap().expect("reflexive");
        cert.verify(&b, &b).unwrap();
    }

    #[test]
    fn z3_distinct_holonomies_not_concordant() {
        let z3 = cyclic_group(3);
        let b1 = k3_bundle(&z3, ["r1", "r0", "r0"]);
        let b2 = k3_bundle(&z3, ["r2", "r0", "r0"]);
        assert!(are_concordant(&b1, &b2, LIMIT).unwrap().is_none());
    }

    #[test]
    fn s3_conjugate_holonomies_concordant() {
        let s3 = symmetric_group_3();
        // two different transpositions are conjugate
        let b1 = k3_bundle(&s3, ["021", "012", "012"]);
        let b2 = k3_bundle(&s3, ["102", "012", "012"]);
        let cert = are_concordant(&b1, &b2, LIMIT).unwrap().expect("conjugate");
        cert.verify(&b1, &b2).unwrap();
    }

    #[test]
    fn search_limit_is_respected() {
        let s3 = symmetric_group_3();
        let b1 = k3_bundle(&s3, ["021", "012", "012"]);
        let b2 = k3_bundle(&s3, ["102", "012", "012"]);
        let err = are_concordant(&b1, &b2, 2).unwrap_err();
        assert_eq!(err.reason(), "non_exhaustive");
    }

    #[test]
    fn enumerate_k3_z2() {
        let e = enumerate_bundles(&k3_circle(), &cyclic_group(2), 1 << 20, LIMIT).unwrap();
        assert_eq!(e.bundles.len(), 8);
        assert_eq!(e.classes.len(), 2);
        assert_eq!(e.classes.iter().map(Vec::len).sum::<usize>(), 8);
    }

    #[test]
    fn enumerate_k3_z3() {
        let e = enumerate_bundles(&k3_circle(), &cyclic_group(3), 1 << 20, LIMIT).unwrap();
        assert_eq!(e.bundles.len(), 27);
        assert_eq!(e.classes.len(), 3);
    }

    #[test]
    fn too_large_is_reported() {
        let err = enumerate_bundles(&k3_circle(), &symmetric_group_3(), 10, LIMIT).unwrap_err();
        assert_eq!(err.reason(), "too_large");
    }
}
