//! Principal groupoid bundles over finite ordered simplicial complexes, in
//! cocycle form: an object per vertex and a morphism per increasing edge,
//! with the triangle cocycle condition. Decreasing traversal uses the
//! inverse, so edge data is stored once.
//!
//! Checks stop at 2-simplices: composable strings are determined by levels
//! ≤ 2, so higher coherence is automatic — and re-asserted anyway by the
//! face-commutation test of the classifying map wherever 3-simplices exist.

mod concordance;
mod serial;
mod torsor;

pub use concordance::{
    are_concordant, enumerate_bundles, is_isomorphism_family, prism_complex, BundleEnumeration,
    ConcordanceCertificate, PrismComplex,
};
pub use serial::{GroupoidRef, SerializedBase, SerializedBundle, SerializedCertificate};
pub use torsor::{bundle_from_torsor, total_space, TorsorPresentation};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::groupoid::FiniteGroupoid;
use crate::simplicial::{
    delta_set_from_complex, simplex_label, OrderedSimplicialComplex, SimplicialMap,
};

/// A principal bundle in cocycle form.
///
/// Invariants, checked by [`validate_bundle`]:
/// - `src(γ_uv) = h(u)` and `tgt(γ_uv) = h(v)` on every increasing edge;
/// - `compose(γ_uv, γ_vw) = γ_uw` on every 2-simplex `u < v < w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleBundle {
    base: OrderedSimplicialComplex,
    groupoid: FiniteGroupoid,
    // per vertex index → object index
    vertex_objects: Vec<usize>,
    // aligned with base.edges() → morphism index
    edge_morphisms: Vec<usize>,
}

/// Checks the cocycle data and assembles a bundle.
pub fn validate_bundle(
    base: OrderedSimplicialComplex,
    groupoid: FiniteGroupoid,
    h: &BTreeMap<String, String>,
    gamma: &BTreeMap<(String, String), String>,
) -> Result<CocycleBundle> {
    let mut vertex_objects = Vec::with_capacity(base.vertex_names().len());
    for v in base.vertex_names() {
        let oid = h
            .get(v)
            .ok_or_else(|| Error::Parse(format!("vertex `{v}` has no object assigned")))?;
        let o = groupoid
            .object_index(oid)
            .ok_or_else(|| Error::UnknownObject(oid.clone()))?;
        vertex_objects.push(o);
    }
    for v in h.keys() {
        if base.vertex_index(v).is_none() {
            return Err(Error::Parse(format!("`{v}` is not a vertex of the base")));
        }
    }

    let mut edge_morphisms = Vec::with_capacity(base.edges().len());
    for e in base.edges() {
        let (u, v) = (&base.vertex_names()[e[0]], &base.vertex_names()[e[1]]);
        let mid = gamma
            .get(&(u.clone(), v.clone()))
            .ok_or_else(|| Error::Parse(format!("edge ({u},{v}) has no morphism assigned")))?;
        let m = groupoid
            .morphism_index(mid)
            .ok_or_else(|| Error::Parse(format!("unknown morphism `{mid}`")))?;
        edge_morphisms.push(m);
    }
    for (u, v) in gamma.keys() {
        let (ui, vi) = match (base.vertex_index(u), base.vertex_index(v)) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::Parse(format!(
                    "edge key ({u},{v}) names unknown vertices"
                )))
            }
        };
        if ui >= vi || !base.contains(&[ui, vi]) {
            return Err(Error::Parse(format!(
                "edge key ({u},{v}) is not an increasing edge of the base"
            )));
        }
    }

    let bundle = CocycleBundle {
        base,
        groupoid,
        vertex_objects,
        edge_morphisms,
    };
    bundle.check_invariants()?;
    Ok(bundle)
}

impl CocycleBundle {
    fn check_invariants(&self) -> Result<()> {
        let g = &self.groupoid;
        for (i, e) in self.base.edges().iter().enumerate() {
            let m = self.edge_morphisms[i];
            if g.src(m) != self.vertex_objects[e[0]] || g.tgt(m) != self.vertex_objects[e[1]] {
                return Err(Error::SourceTargetMismatch {
                    u: self.base.vertex_names()[e[0]].clone(),
                    v: self.base.vertex_names()[e[1]].clone(),
                    morphism: g.morphism_ids()[m].clone(),
                    detail: format!(
                        "expected {} → {}",
                        g.object_ids()[self.vertex_objects[e[0]]],
                        g.object_ids()[self.vertex_objects[e[1]]]
                    ),
                });
            }
        }
        for t in self.base.simplices_of_dim(2) {
            let (u, v, w) = (t[0], t[1], t[2]);
            let uv = self.gamma(u, v);
            let vw = self.gamma(v, w);
            let uw = self.gamma(u, w);
            if self.groupoid.compose(uv, vw) != Some(uw) {
                return Err(Error::CocycleViolation(
                    self.base.vertex_names()[u].clone(),
                    self.base.vertex_names()[v].clone(),
                    self.base.vertex_names()[w].clone(),
                ));
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &OrderedSimplicialComplex {
        &self.base
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.groupoid
    }

    /// Object index at a vertex index.
    pub fn object_at(&self, v: usize) -> usize {
        self.vertex_objects[v]
    }

    /// Morphism index on the increasing edge `u < v` (must exist).
    pub fn gamma(&self, u: usize, v: usize) -> usize {
        let pos = self
            .base
            .edges()
            .binary_search_by(|e| e.as_slice().cmp([u, v].as_slice()))
            .expect("gamma called on a non-edge");
        self.edge_morphisms[pos]
    }

    /// Morphism transporting along the step `a → b` in either direction.
    pub fn transport(&self, a: usize, b: usize) -> Option<usize> {
        if a < b && self.base.contains(&[a, b]) {
            Some(self.gamma(a, b))
        } else if b < a && self.base.contains(&[b, a]) {
            Some(self.groupoid.inverse(self.gamma(b, a)))
        } else {
            None
        }
    }

    /// The vertex-object assignment keyed by names, for reports.
    pub fn h_by_name(&self) -> BTreeMap<String, String> {
        self.base
            .vertex_names()
            .iter()
            .enumerate()
            .map(|(v, name)| {
                (
                    name.clone(),
                    self.groupoid.object_ids()[self.vertex_objects[v]].clone(),
                )
            })
            .collect()
    }

    /// The edge assignment keyed by name pairs, for reports.
    pub fn gamma_by_name(&self) -> BTreeMap<(String, String), String> {
        self.base
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| {
                (
                    (
                        self.base.vertex_names()[e[0]].clone(),
                        self.base.vertex_names()[e[1]].clone(),
                    ),
                    self.groupoid.morphism_ids()[self.edge_morphisms[i]].clone(),
                )
            })
            .collect()
    }

    /// The everywhere-trivial bundle over a base: a constant object and
    /// identity edges. The groupoid must have at least one object.
    pub fn trivial(base: OrderedSimplicialComplex, groupoid: FiniteGroupoid) -> Result<Self> {
        let o = groupoid
            .object_ids()
            .first()
            .ok_or_else(|| Error::Parse("trivial bundle needs an object".into()))?
            .clone();
        let id = groupoid.morphism_ids()[groupoid.identity(0)].clone();
        let h = base
            .vertex_names()
            .iter()
            .map(|v| (v.clone(), o.clone()))
            .collect();
        let gamma = base
            .edges()
            .iter()
            .map(|e| {
                (
                    (
                        base.vertex_names()[e[0]].clone(),
                        base.vertex_names()[e[1]].clone(),
                    ),
                    id.clone(),
                )
            })
            .collect();
        validate_bundle(base, groupoid, &h, &gamma)
    }
}

/// The classifying map of a bundle: the simplicial map from the base to the
/// nerve sending a simplex to its string of edge morphisms. Face
/// commutation is equivalent to the cocycle condition and is verified.
pub fn classifying_map(b: &CocycleBundle, truncation: usize) -> Result<SimplicialMap> {
    if truncation < b.base.dim() {
        return Err(Error::BadSimplicialMap(format!(
            "truncation {truncation} below base dimension {}",
            b.base.dim()
        )));
    }
    let source = delta_set_from_complex(&b.base);
    let target = crate::classifying::nerve(&b.groupoid, truncation)?;

    let mut assignments = Vec::with_capacity(source.top_level() + 1);
    for n in 0..=source.top_level() {
        let mut level = Vec::with_capacity(source.level_size(n));
        for tuple in b.base.simplices_of_dim(n) {
            let from = simplex_label(&b.base.simplex_names(tuple));
            let to = if n == 0 {
                b.groupoid.object_ids()[b.vertex_objects[tuple[0]]].clone()
            } else {
                let parts: Vec<String> = tuple
                    .windows(2)
                    .map(|w| b.groupoid.morphism_ids()[b.gamma(w[0], w[1])].clone())
                    .collect();
                simplex_label(&parts)
            };
            level.push((from, to));
        }
        assignments.push(level);
    }
    SimplicialMap::new(source, target, &assignments)
}

/// Searches for a vertex-wise isomorphism `λ_v: h_0(v) → h_1(v)` with
/// `compose(λ_u, γ¹_uv) = compose(γ⁰_uv, λ_v)` on every edge, by
/// deterministic backtracking per connected component of the 1-skeleton.
pub fn are_isomorphic(
    b0: &CocycleBundle,
    b1: &CocycleBundle,
) -> Result<Option<BTreeMap<String, String>>> {
    if b0.base != b1.base {
        return Err(Error::BaseMismatch("bases differ".into()));
    }
    if b0.groupoid != b1.groupoid {
        return Err(Error::BaseMismatch("groupoids differ".into()));
    }
    let g = &b0.groupoid;
    let nv = b0.base.vertex_names().len();

    // connected components of the 1-skeleton
    let mut parent: Vec<usize> = (0..nv).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in b0.base.edges() {
        let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            parent[hi] = lo;
        }
    }

    let mut lambda = vec![usize::MAX; nv];
    let roots: Vec<usize> = (0..nv).filter(|&v| find(&mut parent, v) == v).collect();
    for &root in &roots {
        let members: Vec<usize> = (0..nv).filter(|&v| find(&mut parent, v) == root).collect();
        let mut found = false;
        'candidates: for cand in g.hom(b0.vertex_objects[root], b1.vertex_objects[root]) {
            // propagate along edges in breadth-first order
            let mut assign = vec![usize::MAX; nv];
            assign[root] = cand;
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for e in b0.base.edges() {
                    let (a, b) = (e[0], e[1]);
                    let (known, unknown, forward) = if a == v && assign[b] == usize::MAX {
                        (a, b, true)
                    } else if b == v && assign[a] == usize::MAX {
                        (b, a, false)
                    } else {
                        continue;
                    };
                    let value = if forward {
                        // λ_v = (γ⁰_uv)⁻¹ · λ_u · γ¹_uv
                        g.compose(
                            g.compose(g.inverse(b0.gamma(known, unknown)), assign[known])
                                .unwrap(),
                            b1.gamma(known, unknown),
                        )
                        .unwrap()
                    } else {
                        // λ_u = γ⁰_uv · λ_v · (γ¹_uv)⁻¹
                        g.compose(
                            g.compose(b0.gamma(unknown, known), assign[known]).unwrap(),
                            g.inverse(b1.gamma(unknown, known)),
                        )
                        .unwrap()
                    };
                    assign[unknown] = value;
                    queue.push_back(unknown);
                }
            }
            // verify every edge of the component
            for e in b0.base.edges() {
                if find(&mut parent, e[0]) != root {
                    continue;
                }
                let lhs = g.compose(assign[e[0]], b1.gamma(e[0], e[1]));
                let rhs = g.compose(b0.gamma(e[0], e[1]), assign[e[1]]);
                if lhs.is_none() || lhs != rhs {
                    continue 'candidates;
                }
            }
            for &v in &members {
                lambda[v] = assign[v];
            }
            found = true;
            break;
        }
        if !found {
            return Ok(None);
        }
    }

    Ok(Some(
        (0..nv)
            .map(|v| {
                (
                    b0.base.vertex_names()[v].clone(),
                    g.morphism_ids()[lambda[v]].clone(),
                )
            })
            .collect(),
    ))
}

/// An order-respecting vertex map of base complexes; every simplex must
/// land on a simplex (collapses allowed).
#[derive(Debug, Clone)]
pub struct BaseVertexMap {
    source: OrderedSimplicialComplex,
    target: OrderedSimplicialComplex,
    map: Vec<usize>,
}

impl BaseVertexMap {
    pub fn new(
        source: OrderedSimplicialComplex,
        target: OrderedSimplicialComplex,
        assignment: &BTreeMap<String, String>,
    ) -> Result<Self> {
        let mut map = Vec::with_capacity(source.vertex_names().len());
        for v in source.vertex_names() {
            let img = assignment
                .get(v)
                .ok_or_else(|| Error::NotSimplicial(format!("vertex `{v}` has no image")))?;
            let t = target
                .vertex_index(img)
                .ok_or_else(|| Error::NotSimplicial(format!("unknown target vertex `{img}`")))?;
            map.push(t);
        }
        let m = BaseVertexMap {
            source,
            target,
            map,
        };
        m.check()?;
        Ok(m)
    }

    fn check(&self) -> Result<()> {
        for d in 0..=self.source.dim() {
            for s in self.source.simplices_of_dim(d) {
                let images: Vec<usize> = s.iter().map(|&v| self.map[v]).collect();
                if images.windows(2).any(|w| w[0] > w[1]) {
                    return Err(Error::NotSimplicial(format!(
                        "map reverses the order on simplex {:?}",
                        self.source.simplex_names(s)
                    )));
                }
                let mut dedup = images.clone();
                dedup.dedup();
                if !self.target.contains(&dedup) {
                    return Err(Error::NotSimplicial(format!(
                        "image of simplex {:?} is not a simplex",
                        self.source.simplex_names(s)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &OrderedSimplicialComplex {
        &self.source
    }

    pub fn target(&self) -> &OrderedSimplicialComplex {
        &self.target
    }

    pub fn apply(&self, v: usize) -> usize {
        self.map[v]
    }
}

/// Pulls a bundle back along a base map; collapsed edges receive identity
/// morphisms.
pub fn pullback_bundle(b: &CocycleBundle, f: &BaseVertexMap) -> Result<CocycleBundle> {
    if f.target != b.base {
        return Err(Error::BaseMismatch(
            "map target is not the bundle base".into(),
        ));
    }
    let g = &b.groupoid;
    let h = f
        .source
        .vertex_names()
        .iter()
        .enumerate()
        .map(|(v, name)| {
            (
                name.clone(),
                g.object_ids()[b.vertex_objects[f.apply(v)]].clone(),
            )
        })
        .collect();
    let gamma = f
        .source
        .edges()
        .iter()
        .map(|e| {
            let (u, v) = (e[0], e[1]);
            let (fu, fv) = (f.apply(u), f.apply(v));
            let m = if fu == fv {
                g.identity(b.vertex_objects[fu])
            } else {
                b.gamma(fu, fv)
            };
            (
                (
                    f.source.vertex_names()[u].clone(),
                    f.source.vertex_names()[v].clone(),
                ),
                g.morphism_ids()[m].clone(),
            )
        })
        .collect();
    validate_bundle(f.source.clone(), b.groupoid.clone(), &h, &gamma)
}

/// Ordered composite of edge morphisms around a closed vertex loop;
/// backward steps use inverses. A single-vertex loop yields the identity.
pub fn holonomy(b: &CocycleBundle, path: &[String]) -> Result<String> {
    if path.is_empty() {
        return Err(Error::NotALoop("empty path".into()));
    }
    if path.first() != path.last() {
        return Err(Error::NotALoop(format!(
            "path starts at `{}` but ends at `{}`",
            path[0],
            path[path.len() - 1]
        )));
    }
    let g = &b.groupoid;
    let mut indices = Vec::with_capacity(path.len());
    for name in path {
        indices.push(
            b.base
                .vertex_index(name)
                .ok_or_else(|| Error::NotALoop(format!("unknown vertex `{name}`")))?,
        );
    }
    let mut acc = g.identity(b.vertex_objects[indices[0]]);
    for w in indices.windows(2) {
        let step = b.transport(w[0], w[1]).ok_or_else(|| {
            Error::NotALoop(format!(
                "({}, {}) is not an edge",
                b.base.vertex_names()[w[0]],
                b.base.vertex_names()[w[1]]
            ))
        })?;
        acc = g
            .compose(acc, step)
            .expect("loop composites are composable");
    }
    Ok(g.morphism_ids()[acc].clone())
}
