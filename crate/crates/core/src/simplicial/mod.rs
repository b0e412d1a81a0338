//! Semi-simplicial sets (face maps only, no degeneracies), ordered
//! simplicial complexes, and level-respecting maps between them.
//!
//! A semi-simplicial set is stored as one label list per level plus the
//! face tables; labels are sorted lexicographically within each level, so
//! every enumeration downstream is deterministic. Levels above the
//! truncation are either unknown (`complete = false`, e.g. a truncated
//! nerve) or known to be empty (`complete = true`, e.g. the simplices of a
//! finite complex).

pub mod chain;
pub mod homology;
pub mod homotopy;
pub mod snf;

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Encodes a list of component ids as a canonical simplex label.
///
/// Level-0 simplices are labelled by their id alone; higher simplices by
/// the JSON array of their components, which is unambiguous for arbitrary
/// ids.
pub fn simplex_label(parts: &[String]) -> String {
    if parts.len() == 1 {
        parts[0].clone()
    } else {
        serde_json::to_string(parts).expect("label serialization cannot fail")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiSimplicialSet {
    labels: Vec<Vec<String>>,
    // faces[n][s][i] = index of d_i(s) at level n-1; faces[0] is empty
    faces: Vec<Vec<Vec<usize>>>,
    complete: bool,
}

impl SemiSimplicialSet {
    /// Builds a semi-simplicial set from per-level simplex descriptions.
    ///
    /// `levels[n]` lists `(label, face labels d_0..d_n)`; face labels refer
    /// to level `n-1`. Labels are sorted internally. The simplicial face
    /// identities `d_i d_j = d_{j-1} d_i` (i < j) are verified exhaustively.
    pub fn build(levels: Vec<Vec<(String, Vec<String>)>>, complete: bool) -> Result<Self> {
        let mut labels: Vec<Vec<String>> = Vec::with_capacity(levels.len().max(1));
        let mut faces: Vec<Vec<Vec<usize>>> = Vec::with_capacity(levels.len().max(1));

        let level_data = if levels.is_empty() {
            vec![Vec::new()]
        } else {
            levels
        };

        for (n, entries) in level_data.iter().enumerate() {
            let mut sorted: Vec<&(String, Vec<String>)> = entries.iter().collect();
            sorted.sort_by(|a, b| a.0.cmp(&b.0));
            if sorted.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::BadComplex(format!(
                    "duplicate simplex label at level {n}"
                )));
            }
            let level_labels: Vec<String> = sorted.iter().map(|e| e.0.clone()).collect();
            let mut level_faces = Vec::with_capacity(sorted.len());
            if n == 0 {
                for e in &sorted {
                    if !e.1.is_empty() {
                        return Err(Error::BadComplex("level-0 simplices have no faces".into()));
                    }
                    level_faces.push(Vec::new());
                }
            } else {
                let prev: HashMap<&str, usize> = labels[n - 1]
                    .iter()
                    .enumerate()
                    .map(|(i, l)| (l.as_str(), i))
                    .collect();
                for (label, fl) in &sorted {
                    if fl.len() != n + 1 {
                        return Err(Error::BadComplex(format!(
                            "simplex `{label}` at level {n} has {} faces, expected {}",
                            fl.len(),
                            n + 1
                        )));
                    }
                    let mut fs = Vec::with_capacity(n + 1);
                    for f in fl {
                        let &ix = prev.get(f.as_str()).ok_or_else(|| {
                            Error::BadComplex(format!(
                                "face `{f}` of `{label}` missing at level {}",
                                n - 1
                            ))
                        })?;
                        fs.push(ix);
                    }
                    level_faces.push(fs);
                }
            }
            labels.push(level_labels);
            faces.push(level_faces);
        }

        let s = SemiSimplicialSet {
            labels,
            faces,
            complete,
        };
        s.check_face_identities()?;
        Ok(s)
    }

    fn check_face_identities(&self) -> Result<()> {
        for n in 2..=self.top_level() {
            for s in 0..self.level_size(n) {
                for j in 1..=n {
                    for i in 0..j {
                        let lhs = self.face(n - 1, i, self.face(n, j, s));
                        let rhs = self.face(n - 1, j - 1, self.face(n, i, s));
                        if lhs != rhs {
                            return Err(Error::FaceIdentity(format!(
                                "d_{i} d_{j} ≠ d_{} d_{i} on `{}` (level {n})",
                                j - 1,
                                self.labels[n][s]
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Highest level carried (the truncation level).
    pub fn top_level(&self) -> usize {
        self.labels.len() - 1
    }

    /// True when no simplices exist above the top level.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn level_size(&self, n: usize) -> usize {
        if n < self.labels.len() {
            self.labels[n].len()
        } else {
            0
        }
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.labels.iter().map(Vec::len).collect()
    }

    pub fn labels(&self, n: usize) -> &[String] {
        &self.labels[n]
    }

    pub fn label(&self, n: usize, s: usize) -> &str {
        &self.labels[n][s]
    }

    pub fn index_of(&self, n: usize, label: &str) -> Option<usize> {
        self.labels[n]
            .binary_search_by(|l| l.as_str().cmp(label))
            .ok()
    }

    /// `d_i` applied to simplex `s` at level `n` (requires `1 ≤ n`, `i ≤ n`).
    pub fn face(&self, n: usize, i: usize, s: usize) -> usize {
        self.faces[n][s][i]
    }
}

/// A finite simplicial complex with a totally ordered vertex set (the order
/// in which the vertices are listed).
///
/// Simplices are kept as strictly increasing vertex-index tuples, closed
/// under taking faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedSimplicialComplex {
    vertices: Vec<String>,
    // simplices[d] = sorted list of (d+1)-element ascending index tuples
    simplices: Vec<Vec<Vec<usize>>>,
}

impl OrderedSimplicialComplex {
    /// Builds a complex from a vertex order and a set of generating
    /// simplices (given by vertex names); all faces are added automatically.
    pub fn new(vertices: Vec<String>, simplices: &[Vec<String>]) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v) {
                return Err(Error::BadComplex(format!("duplicate vertex `{v}`")));
            }
        }
        let index: HashMap<&str, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();

        let mut by_dim: Vec<std::collections::BTreeSet<Vec<usize>>> = Vec::new();
        let add = |tuple: Vec<usize>, by_dim: &mut Vec<std::collections::BTreeSet<Vec<usize>>>| {
            let d = tuple.len() - 1;
            while by_dim.len() <= d {
                by_dim.push(Default::default());
            }
            by_dim[d].insert(tuple);
        };
        // every vertex is a 0-simplex
        for i in 0..vertices.len() {
            add(vec![i], &mut by_dim);
        }
        for s in simplices {
            let mut tuple = Vec::with_capacity(s.len());
            for name in s {
                let &i = index.get(name.as_str()).ok_or_else(|| {
                    Error::BadComplex(format!("simplex vertex `{name}` not in vertex list"))
                })?;
                tuple.push(i);
            }
            tuple.sort_unstable();
            if tuple.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::BadComplex(format!(
                    "simplex {s:?} has repeated vertices"
                )));
            }
            if tuple.is_empty() {
                return Err(Error::BadComplex("empty simplex listed".into()));
            }
            // downward closure: all nonempty subsets
            let k = tuple.len();
            for mask in 1u32..(1 << k) {
                let sub: Vec<usize> = (0..k)
                    .filter(|&j| mask & (1 << j) != 0)
                    .map(|j| tuple[j])
                    .collect();
                add(sub, &mut by_dim);
            }
        }
        let simplices = by_dim
            .into_iter()
            .map(|set| set.into_iter().collect())
            .collect();
        Ok(OrderedSimplicialComplex {
            vertices,
            simplices,
        })
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    /// Dimension of the complex (`0` for a nonempty vertex set with no
    /// higher simplices); an empty complex reports dimension 0 as well.
    pub fn dim(&self) -> usize {
        self.simplices.len().saturating_sub(1)
    }

    pub fn simplices_of_dim(&self, d: usize) -> &[Vec<usize>] {
        if d < self.simplices.len() {
            &self.simplices[d]
        } else {
            &[]
        }
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        let d = tuple.len().saturating_sub(1);
        d < self.simplices.len()
            && self.simplices[d]
                .binary_search_by(|s| s.as_slice().cmp(tuple))
                .is_ok()
    }

    /// Increasing edges (pairs of vertex indices `u < v`).
    pub fn edges(&self) -> &[Vec<usize>] {
        self.simplices_of_dim(1)
    }

    pub fn simplex_names(&self, tuple: &[usize]) -> Vec<String> {
        tuple.iter().map(|&i| self.vertices[i].clone()).collect()
    }
}

/// Converts a complex to its semi-simplicial set of ordered simplices,
/// with `d_i` deleting the i-th vertex.
pub fn delta_set_from_complex(k: &OrderedSimplicialComplex) -> SemiSimplicialSet {
    let mut levels = Vec::new();
    for d in 0..=k.dim() {
        let mut entries = Vec::new();
        for tuple in k.simplices_of_dim(d) {
            let label = simplex_label(&k.simplex_names(tuple));
            let mut face_labels = Vec::new();
            if d > 0 {
                for i in 0..=d {
                    let mut sub = tuple.clone();
                    sub.remove(i);
                    face_labels.push(simplex_label(&k.simplex_names(&sub)));
                }
            }
            entries.push((label, face_labels));
        }
        levels.push(entries);
    }
    SemiSimplicialSet::build(levels, true).expect("complex faces are always consistent")
}

/// A level-respecting, face-commuting map of semi-simplicial sets.
#[derive(Debug, Clone)]
pub struct SimplicialMap {
    source: SemiSimplicialSet,
    target: SemiSimplicialSet,
    assign: Vec<Vec<usize>>,
}

impl SimplicialMap {
    /// Builds a map from per-level assignments `source label ↦ target label`
    /// and verifies commutation with every face map.
    pub fn new(
        source: SemiSimplicialSet,
        target: SemiSimplicialSet,
        assignments: &[Vec<(String, String)>],
    ) -> Result<Self> {
        if assignments.len() != source.top_level() + 1 {
            return Err(Error::BadSimplicialMap(format!(
                "expected assignments for {} levels, got {}",
                source.top_level() + 1,
                assignments.len()
            )));
        }
        if target.top_level() < source.top_level() {
            return Err(Error::BadSimplicialMap(
                "target truncated below source".into(),
            ));
        }
        let mut assign = Vec::with_capacity(assignments.len());
        for (n, level) in assignments.iter().enumerate() {
            let mut v = vec![usize::MAX; source.level_size(n)];
            for (from, to) in level {
                let si = source.index_of(n, from).ok_or_else(|| {
                    Error::BadSimplicialMap(format!("unknown source simplex `{from}` at level {n}"))
                })?;
                v[si] = target.index_of(n, to).ok_or_else(|| {
                    Error::BadSimplicialMap(format!("unknown target simplex `{to}` at level {n}"))
                })?;
            }
            if let Some(si) = v.iter().position(|&x| x == usize::MAX) {
                return Err(Error::BadSimplicialMap(format!(
                    "simplex `{}` at level {n} has no image",
                    source.label(n, si)
                )));
            }
            assign.push(v);
        }
        let map = SimplicialMap {
            source,
            target,
            assign,
        };
        map.check_face_commutation()?;
        Ok(map)
    }

    fn check_face_commutation(&self) -> Result<()> {
        for n in 1..=self.source.top_level() {
            for s in 0..self.source.level_size(n) {
                for i in 0..=n {
                    let lhs = self.target.face(n, i, self.assign[n][s]);
                    let rhs = self.assign[n - 1][self.source.face(n, i, s)];
                    if lhs != rhs {
                        return Err(Error::BadSimplicialMap(format!(
                            "d_{i} does not commute on `{}` (level {n})",
                            self.source.label(n, s)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &SemiSimplicialSet {
        &self.source
    }

    pub fn target(&self) -> &SemiSimplicialSet {
        &self.target
    }

    pub fn apply(&self, n: usize, s: usize) -> usize {
        self.assign[n][s]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{filled_triangle, k3_circle};

    #[test]
    fn k3_delta_set_levels() {
        let d = delta_set_from_complex(&k3_circle());
        assert_eq!(d.level_sizes(), vec![3, 3]);
        assert!(d.is_complete());
    }

    #[test]
    fn filled_triangle_levels() {
        let d = delta_set_from_complex(&filled_triangle());
        assert_eq!(d.level_sizes(), vec![3, 3, 1]);
    }

    #[test]
    fn empty_complex() {
        let k = OrderedSimplicialComplex::new(vec![], &[]).unwrap();
        let d = delta_set_from_complex(&k);
        assert_eq!(d.level_sizes(), vec![0]);
    }

    #[test]
    fn face_identities_are_enforced() {
        // two edges glued into a fake "triangle" whose faces disagree
        let levels = vec![
            vec![
                ("a".into(), vec![]),
                ("b".into(), vec![]),
                ("c".into(), vec![]),
            ],
            vec![
                ("ab".into(), vec!["b".into(), "a".into()]),
                ("bc".into(), vec!["c".into(), "b".into()]),
                ("ac".into(), vec!["c".into(), "a".into()]),
            ],
            // d0 = bc, d1 = ac, d2 = ab is consistent; swap two to break it
            vec![("abc".into(), vec!["ac".into(), "bc".into(), "ab".into()])],
        ];
        let err = SemiSimplicialSet::build(levels, true).unwrap_err();
        assert_eq!(err.reason(), "face_identity");
    }

    #[test]
    fn downward_closure_is_automatic() {
        let k = OrderedSimplicialComplex::new(
            vec!["x".into(), "y".into(), "z".into()],
            &[vec!["x".into(), "y".into(), "z".into()]],
        )
        .unwrap();
        assert_eq!(k.simplices_of_dim(1).len(), 3);
        assert_eq!(k.simplices_of_dim(0).len(), 3);
    }

    #[test]
    fn repeated_vertices_rejected() {
        let err = OrderedSimplicialComplex::new(
            vec!["x".into(), "y".into()],
            &[vec!["x".into(), "x".into()]],
        )
        .unwrap_err();
        assert_eq!(err.reason(), "bad_complex");
    }
}
