//! Torsor presentation of a bundle: the combinatorial total object with its
//! projection, object assignment and fiberwise action, together with the
//! correspondence back to cocycle form via local sections and the division
//! map.

use std::collections::BTreeMap;

use crate::bundles::{validate_bundle, CocycleBundle};
use crate::error::{Error, Result};
use crate::groupoid::FiniteGroupoid;
use crate::simplicial::{
    delta_set_from_complex, simplex_label, OrderedSimplicialComplex, SemiSimplicialSet,
};

/// Total object of a bundle: a semi-simplicial set over the base delta-set
/// with a levelwise projection, an object assignment `q` on vertices, and a
/// fiber-preserving action.
///
/// Invariants checked at construction:
/// - the projection commutes with every face map;
/// - `α(e, δ)` is defined iff `q(e) = src(δ)`, fixes the fiber, respects
///   identities and composition;
/// - the action is free and transitive on each fiber (division property).
#[derive(Debug, Clone)]
pub struct TorsorPresentation {
    base: OrderedSimplicialComplex,
    base_delta: SemiSimplicialSet,
    groupoid: FiniteGroupoid,
    total: SemiSimplicialSet,
    // proj[n][s] = base delta-set simplex under the total simplex s
    proj: Vec<Vec<usize>>,
    // obj[v] = object index of the level-0 simplex v
    obj: Vec<usize>,
    // action[(v, morphism)] = level-0 simplex, defined iff obj[v] = src
    action: BTreeMap<(usize, usize), usize>,
}

impl TorsorPresentation {
    pub fn new(
        base: OrderedSimplicialComplex,
        groupoid: FiniteGroupoid,
        total: SemiSimplicialSet,
        proj: Vec<Vec<usize>>,
        obj: Vec<usize>,
        action: BTreeMap<(usize, usize), usize>,
    ) -> Result<Self> {
        let t = TorsorPresentation {
            base_delta: delta_set_from_complex(&base),
            base,
            groupoid,
            total,
            proj,
            obj,
            action,
        };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        let g = &self.groupoid;
        // projection shape and face compatibility
        if self.proj.len() != self.total.top_level() + 1 {
            return Err(Error::Parse("projection misses levels".into()));
        }
        for n in 0..=self.total.top_level() {
            if self.proj[n].len() != self.total.level_size(n) {
                return Err(Error::Parse(format!(
                    "projection at level {n} has wrong length"
                )));
            }
            if n > 0 {
                for s in 0..self.total.level_size(n) {
                    for i in 0..=n {
                        let lhs = self.base_delta.face(n, i, self.proj[n][s]);
                        let rhs = self.proj[n - 1][self.total.face(n, i, s)];
                        if lhs != rhs {
                            return Err(Error::FaceIdentity(format!(
                                "projection does not commute with d_{i} at level {n}"
                            )));
                        }
                    }
                }
            }
        }
        // action domain, projection compatibility, unit and composition laws
        for v in 0..self.total.level_size(0) {
            for f in 0..g.morphism_count() {
                let defined = self.action.contains_key(&(v, f));
                if defined != (self.obj[v] == g.src(f)) {
                    return Err(Error::Parse(format!(
                        "action wrongly {} on ({}, {})",
                        if defined { "defined" } else { "undefined" },
                        self.total.label(0, v),
                        g.morphism_ids()[f]
                    )));
                }
                if let Some(&w) = self.action.get(&(v, f)) {
                    if self.proj[0][w] != self.proj[0][v] {
                        return Err(Error::Parse("action leaves the fiber".into()));
                    }
                    if self.obj[w] != g.tgt(f) {
                        return Err(Error::Parse("action breaks the object assignment".into()));
                    }
                }
            }
            let id = g.identity(self.obj[v]);
            if self.action.get(&(v, id)) != Some(&v) {
                return Err(Error::Parse("action does not respect identities".into()));
            }
        }
        for (&(v, f), &w) in &self.action {
            for f2 in 0..g.morphism_count() {
                if let Some(ff2) = g.compose(f, f2) {
                    let step = self.action.get(&(w, f2));
                    let direct = self.action.get(&(v, ff2));
                    if step != direct {
                        return Err(Error::Parse("action is not associative".into()));
                    }
                }
            }
        }
        // free and transitive on each fiber
        for v in 0..self.total.level_size(0) {
            for w in 0..self.total.level_size(0) {
                if self.proj[0][v] != self.proj[0][w] {
                    continue;
                }
                let matches = (0..g.morphism_count())
                    .filter(|&f| self.action.get(&(v, f)) == Some(&w))
                    .count();
                if matches != 1 {
                    return Err(Error::NotPrincipal(format!(
                        "{} morphisms send {} to {}",
                        matches,
                        self.total.label(0, v),
                        self.total.label(0, w)
                    )));
                }
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

    pub fn total(&self) -> &SemiSimplicialSet {
        &self.total
    }

    /// Base delta-set simplex under a total simplex.
    pub fn project(&self, n: usize, s: usize) -> usize {
        self.proj[n][s]
    }

    /// Object index attached to a total vertex.
    pub fn object_of(&self, v: usize) -> usize {
        self.obj[v]
    }

    /// The action on a total vertex; `None` when `q(v) ≠ src(f)`.
    pub fn act(&self, v: usize, f: usize) -> Option<usize> {
        self.action.get(&(v, f)).copied()
    }

    /// The unique morphism δ with `α(e1, δ) = e2`, for two total vertices in
    /// the same fiber.
    pub fn division(&self, e1: usize, e2: usize) -> Result<usize> {
        if self.proj[0][e1] != self.proj[0][e2] {
            return Err(Error::NotSameFiber(
                self.total.label(0, e1).to_string(),
                self.total.label(0, e2).to_string(),
            ));
        }
        let matches: Vec<usize> = (0..self.groupoid.morphism_count())
            .filter(|&f| self.action.get(&(e1, f)) == Some(&e2))
            .collect();
        match matches.as_slice() {
            [d] => Ok(*d),
            _ => Err(Error::NotPrincipal(format!(
                "{} morphisms send {} to {}",
                matches.len(),
                self.total.label(0, e1),
                self.total.label(0, e2)
            ))),
        }
    }

    /// Total vertices in the fiber over a base vertex, ascending.
    pub fn fiber(&self, base_vertex: usize) -> Vec<usize> {
        let target = self
            .base_delta
            .index_of(0, &self.base.vertex_names()[base_vertex])
            .expect("base vertex exists in its delta-set");
        (0..self.total.level_size(0))
            .filter(|&v| self.proj[0][v] == target)
            .collect()
    }

    /// Transports a total vertex over `u` across the increasing edge
    /// `u < v`: the `d_0`-end of the unique 1-simplex over the edge whose
    /// `d_1`-end is the given vertex.
    pub fn edge_transport(&self, u: usize, v: usize, e: usize) -> Result<usize> {
        let edge_label = simplex_label(&self.base.simplex_names(&[u, v]));
        let edge = self
            .base_delta
            .index_of(1, &edge_label)
            .ok_or_else(|| Error::Parse(format!("({u},{v}) is not an edge")))?;
        let lifts: Vec<usize> = (0..self.total.level_size(1))
            .filter(|&s| self.proj[1][s] == edge && self.total.face(1, 1, s) == e)
            .collect();
        match lifts.as_slice() {
            [s] => Ok(self.total.face(1, 0, *s)),
            _ => Err(Error::NotPrincipal(format!(
                "{} lifts of {} across ({},{})",
                lifts.len(),
                self.total.label(0, e),
                self.base.vertex_names()[u],
                self.base.vertex_names()[v]
            ))),
        }
    }

    /// One canonical local section: the least total vertex over each base
    /// vertex.
    pub fn canonical_sections(&self) -> Result<BTreeMap<String, String>> {
        let mut sections = BTreeMap::new();
        for (v, name) in self.base.vertex_names().iter().enumerate() {
            let fiber = self.fiber(v);
            let &least = fiber
                .first()
                .ok_or_else(|| Error::NotPrincipal(format!("empty fiber over `{name}`")))?;
            sections.insert(name.clone(), self.total.label(0, least).to_string());
        }
        Ok(sections)
    }
}

/// Builds the total object of a bundle: level-n simplices are pairs
/// (base n-simplex `v_0 < … < v_n`, morphism γ' with `src(γ') = h(v_n)`).
/// Inner faces drop a base vertex; the last face composes the final edge
/// into γ'. The projection forgets γ', `q` is its target, and the action
/// post-composes.
pub fn total_space(b: &CocycleBundle) -> Result<TorsorPresentation> {
    let g = b.groupoid().clone();
    let base = b.base().clone();
    let base_delta = delta_set_from_complex(&base);

    // enumerate level data together with projections
    let mut levels: Vec<Vec<(String, Vec<String>)>> = Vec::new();
    let mut proj_labels: Vec<Vec<(String, String)>> = Vec::new();

    let pair_label = |tuple: &[usize], gamma2: usize| -> String {
        let mut parts = base.simplex_names(tuple);
        parts.push(g.morphism_ids()[gamma2].clone());
        simplex_label(&parts)
    };

    for n in 0..=base.dim() {
        let mut entries = Vec::new();
        let mut projs = Vec::new();
        for tuple in base.simplices_of_dim(n) {
            let last = *tuple.last().unwrap();
            for gamma2 in 0..g.morphism_count() {
                if g.src(gamma2) != b.object_at(last) {
                    continue;
                }
                let label = pair_label(tuple, gamma2);
                let mut faces = Vec::new();
                if n > 0 {
                    for i in 0..n {
                        let mut sub = tuple.clone();
                        sub.remove(i);
                        faces.push(pair_label(&sub, gamma2));
                    }
                    // d_n: drop v_n and compose its edge into γ'
                    let mut sub = tuple.clone();
                    sub.pop();
                    let edge = b.gamma(tuple[n - 1], last);
                    let composed = g.compose(edge, gamma2).expect("edge composes with fiber");
                    faces.push(pair_label(&sub, composed));
                }
                entries.push((label.clone(), faces));
                projs.push((label, simplex_label(&base.simplex_names(tuple))));
            }
        }
        levels.push(entries);
        proj_labels.push(projs);
    }

    let total = SemiSimplicialSet::build(levels, true)?;
    let mut proj = Vec::with_capacity(proj_labels.len());
    for (n, level) in proj_labels.iter().enumerate() {
        let mut v = vec![usize::MAX; total.level_size(n)];
        for (label, base_label) in level {
            let s = total.index_of(n, label).unwrap();
            v[s] = base_delta.index_of(n, base_label).unwrap();
        }
        proj.push(v);
    }

    // q and α on vertices: a level-0 label is [vertex, γ']
    let mut obj = vec![usize::MAX; total.level_size(0)];
    let mut action = BTreeMap::new();
    for v in 0..total.level_size(0) {
        let parts: Vec<String> = serde_json::from_str(total.label(0, v))
            .map_err(|e| Error::Parse(format!("total vertex label: {e}")))?;
        let gamma2 = g
            .morphism_index(&parts[1])
            .expect("total vertex label carries a morphism");
        obj[v] = g.tgt(gamma2);
        for delta in 0..g.morphism_count() {
            if g.src(delta) != obj[v] {
                continue;
            }
            let composed = g.compose(gamma2, delta).unwrap();
            let target_label =
                simplex_label(&[parts[0].clone(), g.morphism_ids()[composed].clone()]);
            let w = total.index_of(0, &target_label).unwrap();
            action.insert((v, delta), w);
        }
    }

    TorsorPresentation::new(base, g, total, proj, obj, action)
}

/// Reconstructs a cocycle bundle from torsor data and a choice of local
/// sections (one total vertex over each base vertex): `h(v) = q(section v)`
/// and `γ_uv = division(transport of section u, section v)`.
pub fn bundle_from_torsor(
    t: &TorsorPresentation,
    sections: &BTreeMap<String, String>,
) -> Result<CocycleBundle> {
    let g = t.groupoid();
    let mut section_vertex = Vec::with_capacity(t.base().vertex_names().len());
    for (v, name) in t.base().vertex_names().iter().enumerate() {
        let label = sections
            .get(name)
            .ok_or_else(|| Error::Parse(format!("no section over vertex `{name}`")))?;
        let s = t
            .total()
            .index_of(0, label)
            .ok_or_else(|| Error::Parse(format!("unknown total vertex `{label}`")))?;
        if !t.fiber(v).contains(&s) {
            return Err(Error::Parse(format!(
                "section `{label}` does not lie over `{name}`"
            )));
        }
        section_vertex.push(s);
    }

    let h: BTreeMap<String, String> = t
        .base()
        .vertex_names()
        .iter()
        .enumerate()
        .map(|(v, name)| {
            (
                name.clone(),
                g.object_ids()[t.object_of(section_vertex[v])].clone(),
            )
        })
        .collect();
    let mut gamma = BTreeMap::new();
    for e in t.base().edges() {
        let (u, v) = (e[0], e[1]);
        let transported = t.edge_transport(u, v, section_vertex[u])?;
        let d = t.division(transported, section_vertex[v])?;
        gamma.insert(
            (
                t.base().vertex_names()[u].clone(),
                t.base().vertex_names()[v].clone(),
            ),
            g.morphism_ids()[d].clone(),
        );
    }
    validate_bundle(t.base().clone(), t.groupoid().clone(), &h, &gamma)
}
