//! The standard example groupoids: a set, a group, a group action, an open
//! cover. Each constructor runs its own precondition check and returns a
//! fully validated [`FiniteGroupoid`].
//!
//! Generated ids use `#` as a separator; carrier and element names must not
//! contain it.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::groupoid::FiniteGroupoid;

fn check_names(names: &[String], what: &str) -> Result<()> {
    for n in names {
        if n.contains('#') {
            return Err(Error::Parse(format!(
                "{what} name `{n}` contains the reserved separator `#`"
            )));
        }
    }
    let set: BTreeSet<&String> = names.iter().collect();
    if set.len() != names.len() {
        return Err(Error::Parse(format!("duplicate {what} name")));
    }
    Ok(())
}

/// The groupoid with the given objects and only identity morphisms.
///
/// Unlike the pair-id constructors below, the generated `id#…` names are
/// injective for arbitrary carrier names, so nothing is reserved here.
pub fn trivial_groupoid(carrier: &[String]) -> Result<FiniteGroupoid> {
    let unique: BTreeSet<&String> = carrier.iter().collect();
    if unique.len() != carrier.len() {
        return Err(Error::Parse("duplicate carrier name".into()));
    }
    let objects = carrier.to_vec();
    let morphisms: Vec<(String, String, String)> = carrier
        .iter()
        .map(|s| (format!("id#{s}"), s.clone(), s.clone()))
        .collect();
    let identities = carrier
        .iter()
        .map(|s| (s.clone(), format!("id#{s}")))
        .collect();
    let compose = carrier
        .iter()
        .map(|s| {
            let id = format!("id#{s}");
            (id.clone(), id.clone(), id)
        })
        .collect();
    let inverses = carrier
        .iter()
        .map(|s| (format!("id#{s}"), format!("id#{s}")))
        .collect();
    FiniteGroupoid::validate("trivial", objects, morphisms, identities, compose, inverses)
}

/// A group multiplication table, viewed as a one-object groupoid.
///
/// `table(x, y)` is read in diagrammatic order ("x then y"); group axioms
/// are checked exhaustively before the groupoid is assembled.
pub fn groupoid_from_group(
    elements: &[String],
    table: &dyn Fn(usize, usize) -> usize,
) -> Result<FiniteGroupoid> {
    check_names(elements, "element")?;
    let n = elements.len();
    if n == 0 {
        return Err(Error::NotAGroup("empty element set".into()));
    }
    for x in 0..n {
        for y in 0..n {
            if table(x, y) >= n {
                return Err(Error::NotAGroup(format!(
                    "product ({}, {}) out of range",
                    elements[x], elements[y]
                )));
            }
        }
    }
    // unit
    let unit = (0..n)
        .find(|&e| (0..n).all(|x| table(e, x) == x && table(x, e) == x))
        .ok_or_else(|| Error::NotAGroup("no two-sided unit".into()))?;
    // inverses
    let mut inv = vec![usize::MAX; n];
    for x in 0..n {
        inv[x] = (0..n)
            .find(|&y| table(x, y) == unit && table(y, x) == unit)
            .ok_or_else(|| Error::NotAGroup(format!("`{}` has no inverse", elements[x])))?;
    }
    // associativity
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if table(table(x, y), z) != table(x, table(y, z)) {
                    return Err(Error::NotAGroup(format!(
                        "associativity fails on ({}, {}, {})",
                        elements[x], elements[y], elements[z]
                    )));
                }
            }
        }
    }

    let object = "*".to_string();
    let morphisms = elements
        .iter()
        .map(|g| (g.clone(), object.clone(), object.clone()))
        .collect();
    let compose = (0..n)
        .flat_map(|x| {
            (0..n).map(move |y| {
                (
                    elements[x].clone(),
                    elements[y].clone(),
                    elements[table(x, y)].clone(),
                )
            })
        })
        .collect();
    let inverses = (0..n)
        .map(|x| (elements[x].clone(), elements[inv[x]].clone()))
        .collect();
    FiniteGroupoid::validate(
        "group",
        vec![object.clone()],
        morphisms,
        vec![(object, elements[unit].clone())],
        compose,
        inverses,
    )
}

/// The action groupoid of a left group action on a finite carrier.
///
/// Objects are the carrier points; the morphism `(g, y)` runs from `y` to
/// `g·y`, so the composite of `(g, y)` followed by `(h, g·y)` is `(hg, y)`.
pub fn action_groupoid(
    group: &FiniteGroupoid,
    carrier: &[String],
    action: &dyn Fn(usize, usize) -> usize,
) -> Result<FiniteGroupoid> {
    check_names(carrier, "carrier")?;
    if group.object_count() != 1 {
        return Err(Error::NotAnAction(
            "acting groupoid must have one object".into(),
        ));
    }
    let n = carrier.len();
    let m = group.morphism_count();
    let unit = group.identity(0);
    for (g, y) in (0..m).flat_map(|g| (0..n).map(move |y| (g, y))) {
        if action(g, y) >= n {
            return Err(Error::NotAnAction(format!(
                "image of ({}, {}) out of range",
                group.morphism_ids()[g],
                carrier[y]
            )));
        }
    }
    for y in 0..n {
        if action(unit, y) != y {
            return Err(Error::NotAnAction(format!(
                "unit does not fix `{}`",
                carrier[y]
            )));
        }
    }
    for g in 0..m {
        for h in 0..m {
            // left action: (h∘g)·y = h·(g·y), with h∘g = compose(g, h)
            let hg = group.compose(g, h).unwrap();
            for y in 0..n {
                if action(hg, y) != action(h, action(g, y)) {
                    return Err(Error::NotAnAction(format!(
                        "compatibility fails on ({}, {}, {})",
                        group.morphism_ids()[g],
                        group.morphism_ids()[h],
                        carrier[y]
                    )));
                }
            }
        }
    }

    let mor_id = |g: usize, y: usize| format!("{}#{}", group.morphism_ids()[g], carrier[y]);
    let morphisms = (0..m)
        .flat_map(|g| {
            (0..n).map(move |y| {
                (
                    mor_id(g, y),
                    carrier[y].clone(),
                    carrier[action(g, y)].clone(),
                )
            })
        })
        .collect();
    let identities = (0..n)
        .map(|y| (carrier[y].clone(), mor_id(unit, y)))
        .collect();
    // (g, y): y → g·y followed by (h, g·y): g·y → h·(g·y) is (compose-in-group, y)
    let mut compose = Vec::new();
    for g in 0..m {
        for y in 0..n {
            for h in 0..m {
                let hg = group.compose(g, h).unwrap();
                compose.push((mor_id(g, y), mor_id(h, action(g, y)), mor_id(hg, y)));
            }
        }
    }
    let inverses = (0..m)
        .flat_map(|g| (0..n).map(move |y| (mor_id(g, y), mor_id(group.inverse(g), action(g, y)))))
        .collect();
    FiniteGroupoid::validate(
        "action",
        carrier.to_vec(),
        morphisms,
        identities,
        compose,
        inverses,
    )
}

/// The Čech groupoid of a cover: objects are pairs (point, cover index),
/// morphisms re-index a point between two cover members containing it.
pub fn cech_groupoid(carrier: &[String], cover: &[Vec<String>]) -> Result<FiniteGroupoid> {
    check_names(carrier, "carrier")?;
    let covered: BTreeSet<&String> = cover.iter().flatten().collect();
    let missing: Vec<String> = carrier
        .iter()
        .filter(|s| !covered.contains(s))
        .cloned()
        .collect();
    if !missing.is_empty() {
        return Err(Error::NotACover(missing));
    }
    for (i, u) in cover.iter().enumerate() {
        for s in u {
            if !carrier.contains(s) {
                return Err(Error::Parse(format!(
                    "cover member {i} contains `{s}` which is not in the carrier"
                )));
            }
        }
    }

    let obj_id = |s: &String, i: usize| format!("{s}#{i}");
    let mor_id = |s: &String, i: usize, j: usize| format!("{s}#{i}#{j}");
    let member = |s: &String, i: usize| cover[i].contains(s);

    let mut objects = Vec::new();
    let mut morphisms = Vec::new();
    let mut identities = Vec::new();
    let mut compose = Vec::new();
    let mut inverses = Vec::new();
    for s in carrier {
        for i in 0..cover.len() {
            if !member(s, i) {
                continue;
            }
            objects.push(obj_id(s, i));
            identities.push((obj_id(s, i), mor_id(s, i, i)));
            for j in 0..cover.len() {
                if !member(s, j) {
                    continue;
                }
                morphisms.push((mor_id(s, i, j), obj_id(s, i), obj_id(s, j)));
                inverses.push((mor_id(s, i, j), mor_id(s, j, i)));
                for k in 0..cover.len() {
                    if member(s, k) {
                        compose.push((mor_id(s, i, j), mor_id(s, j, k), mor_id(s, i, k)));
                    }
                }
            }
        }
    }
    FiniteGroupoid::validate("cech", objects, morphisms, identities, compose, inverses)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strs(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn trivial_counts_and_empty_case() {
        let g = trivial_groupoid(&strs(&["1", "2", "3"])).unwrap();
        assert_eq!((g.object_count(), g.morphism_count()), (3, 3));
        let pt = trivial_groupoid(&strs(&["pt"])).unwrap();
        assert_eq!((pt.object_count(), pt.morphism_count()), (1, 1));
        let empty = trivial_groupoid(&[]).unwrap();
        assert_eq!((empty.object_count(), empty.morphism_count()), (0, 0));
    }

    #[test]
    fn z2_and_s3_counts() {
        let z2 = groupoid_from_group(&strs(&["e", "g"]), &|x, y| x ^ y).unwrap();
        assert_eq!((z2.object_count(), z2.morphism_count()), (1, 2));

        let s3 = crate::fixtures::symmetric_group_3();
        assert_eq!((s3.object_count(), s3.morphism_count()), (1, 6));
        // 36 defined compositions
        let m = s3.morphism_count();
        let defined = (0..m)
            .flat_map(|x| (0..m).map(move |y| (x, y)))
            .filter(|&(x, y)| s3.compose(x, y).is_some())
            .count();
        assert_eq!(defined, 36);
    }

    #[test]
    fn non_associative_magma_rejected() {
        // size-3 magma with a(bc) ≠ (ab)c
        let table = [[0usize, 1, 2], [1, 2, 0], [2, 1, 0]];
        let err = groupoid_from_group(&strs(&["a", "b", "c"]), &|x, y| table[x][y]).unwrap_err();
        assert_eq!(err.reason(), "not_a_group");
    }

    #[test]
    fn z2_swap_action_counts() {
        let z2 = groupoid_from_group(&strs(&["e", "g"]), &|x, y| x ^ y).unwrap();
        let g = action_groupoid(&z2, &strs(&["a", "b"]), &|g, y| {
            if g == 1 {
                1 - y
            } else {
                y
            }
        })
        .unwrap();
        assert_eq!((g.object_count(), g.morphism_count()), (2, 4));
    }

    #[test]
    fn trivial_action_on_point_matches_group() {
        let z2 = groupoid_from_group(&strs(&["e", "g"]), &|x, y| x ^ y).unwrap();
        let a = action_groupoid(&z2, &strs(&["pt"]), &|_, y| y).unwrap();
        // same tables after the evident renaming g ↦ g#pt
        assert_eq!(a.object_count(), 1);
        assert_eq!(a.morphism_count(), 2);
        for x in 0..2 {
            for y in 0..2 {
                let lhs = a.compose(x, y).map(|z| a.morphism_ids()[z].clone());
                let rhs = z2
                    .compose(x, y)
                    .map(|z| format!("{}#pt", z2.morphism_ids()[z]));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn broken_action_rejected() {
        let z3 = groupoid_from_group(&strs(&["e", "r", "s"]), &|x, y| (x + y) % 3).unwrap();
        // not an action: r moves a↦b but r·r fixes a, contradicting r²·a = r·(r·a)
        let err = action_groupoid(&z3, &strs(&["a", "b"]), &|g, y| match (g, y) {
            (1, 0) => 1,
            (1, 1) => 0,
            (2, _) => y,
            _ => y,
        })
        .unwrap_err();
        assert_eq!(err.reason(), "not_an_action");
    }

    #[test]
    fn cech_counts_and_missing_point() {
        let g = cech_groupoid(
            &strs(&["1", "2", "3"]),
            &[strs(&["1", "2"]), strs(&["2", "3"])],
        )
        .unwrap();
        assert_eq!((g.object_count(), g.morphism_count()), (4, 6));

        let err = cech_groupoid(&strs(&["1", "2", "3"]), &[strs(&["1", "2"])]).unwrap_err();
        match err {
            Error::NotACover(missing) => assert_eq!(missing, vec!["3".to_string()]),
            other => panic!("expected NotACover, got {other:?}"),
        }
    }

    #[test]
    fn single_member_cover_is_trivial_like() {
        let g = cech_groupoid(&strs(&["1", "2", "3"]), &[strs(&["1", "2", "3"])]).unwrap();
        // one index: objects (s,0), only identity morphisms
        assert_eq!((g.object_count(), g.morphism_count()), (3, 3));
        for f in 0..3 {
            assert_eq!(g.src(f), g.tgt(f));
        }
    }
}
