//! Shared oracles and fixtures for the integration suites. Every oracle
//! here is an independent computation path: none of them call into the
//! nerve/Smith machinery they are used to check.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use nervecalc::groupoid::FiniteGroupoid;
use nervecalc::simplicial::homology::{DegreeHomology, HomologyProfile};
use nervecalc::simplicial::OrderedSimplicialComplex;

/// Homology of a cyclic group of order `m`, read off the two-periodic free
/// resolution: after tensoring down to the integers the boundary maps
/// alternate between 0 and multiplication by m, so each degree is a
/// kernel/image computation with scalar maps.
pub fn cyclic_resolution_profile(m: u64, k_max: usize) -> HomologyProfile {
    // d_k: Z → Z is 0 for odd k, ×m for even k ≥ 2
    let scalar = |k: usize| -> u64 {
        if k == 0 {
            0 // no boundary out of degree 0
        } else if k % 2 == 1 {
            0
        } else {
            m
        }
    };
    let mut degrees = Vec::new();
    for k in 0..=k_max {
        let d_k = scalar(k);
        let d_k1 = scalar(k + 1);
        // kernel of ×c on Z has rank 1 iff c = 0; image of ×c is cZ
        let kernel_rank = if d_k == 0 { 1 } else { 0 };
        let (betti, torsion) = if kernel_rank == 0 {
            (0, vec![])
        } else if d_k1 == 0 {
            (1, vec![])
        } else if d_k1 == 1 {
            (0, vec![])
        } else {
            (0, vec![d_k1])
        };
        degrees.push(DegreeHomology { k, betti, torsion });
    }
    HomologyProfile { degrees }
}

/// Invariant factors of the abelianization of a finite group given by its
/// one-object groupoid: commutator subgroup by closure, quotient order and
/// exponent, then the classification for the tiny orders that occur here.
pub fn abelianization_invariant_factors(g: &FiniteGroupoid) -> Vec<u64> {
    assert_eq!(g.object_count(), 1, "oracle expects a group");
    let n = g.morphism_count();
    let unit = g.identity(0);
    // commutators a·b·a⁻¹·b⁻¹, closed under multiplication
    let mut commutators: BTreeSet<usize> = BTreeSet::new();
    for a in 0..n {
        for b in 0..n {
            let c = g
                .compose(
                    g.compose(g.compose(a, b).unwrap(), g.inverse(a)).unwrap(),
                    g.inverse(b),
                )
                .unwrap();
            commutators.insert(c);
        }
    }
    loop {
        let mut grew = false;
        let current: Vec<usize> = commutators.iter().copied().collect();
        for &a in &current {
            for &b in &current {
                if commutators.insert(g.compose(a, b).unwrap()) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    // cosets of the commutator subgroup
    let mut coset_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let rep = reps.len();
        for &c in &commutators {
            coset_of[g.compose(x, c).unwrap()] = rep;
        }
        reps.push(x);
    }
    let q = reps.len() as u64;
    // exponent of the quotient
    let mut exponent = 1u64;
    for &r in &reps {
        let mut acc = unit;
        let mut order = 0u64;
        loop {
            acc = g.compose(acc, r).unwrap();
            order += 1;
            if coset_of[acc] == coset_of[unit] {
                break;
            }
        }
        exponent = num_lcm(exponent, order);
    }
    match (q, exponent) {
        (1, _) => vec![],
        (q, e) if q == e => vec![q],
        (4, 2) => vec![2, 2],
        (8, 2) => vec![2, 2, 2],
        (8, 4) => vec![2, 4],
        (9, 3) => vec![3, 3],
        other => panic!("oracle does not classify abelian group {other:?}"),
    }
}

fn num_lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Conjugacy classes of a one-object groupoid, as sorted element-index
/// sets.
pub fn conjugacy_classes(g: &FiniteGroupoid) -> Vec<BTreeSet<usize>> {
    assert_eq!(g.object_count(), 1, "oracle expects a group");
    let n = g.morphism_count();
    let mut seen = vec![false; n];
    let mut classes = Vec::new();
    for x in 0..n {
        if seen[x] {
            continue;
        }
        let mut class = BTreeSet::new();
        for c in 0..n {
            let conj = g.compose(g.compose(g.inverse(c), x).unwrap(), c).unwrap();
            class.insert(conj);
        }
        for &y in &class {
            seen[y] = true;
        }
        classes.push(class);
    }
    classes
}

/// A hand-built hexagonal circle: the connected double cover of the
/// 3-vertex circle.
pub fn hexagon_circle() -> OrderedSimplicialComplex {
    let v: Vec<String> = (0..6).map(|i| format!("a{i}")).collect();
    let mut edges = Vec::new();
    for i in 0..6 {
        let (a, b) = (v[i].clone(), v[(i + 1) % 6].clone());
        edges.push(if a < b { vec![a, b] } else { vec![b, a] });
    }
    OrderedSimplicialComplex::new(v, &edges).expect("hexagon")
}

/// Two disjoint triangulated circles: the trivial double cover.
pub fn two_circles() -> OrderedSimplicialComplex {
    let v: Vec<String> = ["p0", "p1", "p2", "q0", "q1", "q2"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let edges = vec![
        vec!["p0".to_string(), "p1".to_string()],
        vec!["p1".to_string(), "p2".to_string()],
        vec!["p0".to_string(), "p2".to_string()],
        vec!["q0".to_string(), "q1".to_string()],
        vec!["q1".to_string(), "q2".to_string()],
        vec!["q0".to_string(), "q2".to_string()],
    ];
    OrderedSimplicialComplex::new(v, &edges).expect("two circles")
}

/// Fundamental loop of the 3-vertex circle fixture.
pub fn fundamental_loop() -> Vec<String> {
    ["v0", "v1", "v2", "v0"]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

/// Writes the standard groupoid/bundle files into a directory, for the CLI
/// suites. Returns paths keyed by short names.
pub fn write_cli_fixtures(dir: &std::path::Path) -> BTreeMap<&'static str, std::path::PathBuf> {
    use nervecalc::bundles::SerializedBundle;
    use nervecalc::fixtures::{cyclic_group, k3_bundle, symmetric_group_3};

    let mut paths = BTreeMap::new();
    let mut write = |name: &'static str, contents: String| {
        let p = dir.join(name);
        std::fs::write(&p, contents).expect("fixture write");
        paths.insert(name, p);
    };

    write("z2.json", cyclic_group(2).to_serialized().to_json());
    write("z3.json", cyclic_group(3).to_serialized().to_json());
    write("z4.json", cyclic_group(4).to_serialized().to_json());
    write("s3.json", symmetric_group_3().to_serialized().to_json());

    let b_g = k3_bundle(&cyclic_group(2), ["r1", "r0", "r0"]);
    let b_e = k3_bundle(&cyclic_group(2), ["r0", "r0", "r0"]);
    write("k3_g.json", SerializedBundle::from_bundle(&b_g).to_json());
    write("k3_e.json", SerializedBundle::from_bundle(&b_e).to_json());
    let s3_template = serde_json::json!({
        "base": {
            "vertices": ["v0", "v1", "v2"],
            "simplices": [["v0","v1"],["v1","v2"],["v0","v2"]]
        },
        "groupoid": "s3.json"
    });
    write(
        "k3_s3_template.json",
        serde_json::to_string_pretty(&s3_template).unwrap(),
    );
    let z2_template = serde_json::json!({
        "base": {
            "vertices": ["v0", "v1", "v2"],
            "simplices": [["v0","v1"],["v1","v2"],["v0","v2"]]
        },
        "groupoid": "z2.json"
    });
    write(
        "k3_z2_template.json",
        serde_json::to_string_pretty(&z2_template).unwrap(),
    );
    let z3_template = serde_json::json!({
        "base": {
            "vertices": ["v0", "v1", "v2"],
            "simplices": [["v0","v1"],["v1","v2"],["v0","v2"]]
        },
        "groupoid": "z3.json"
    });
    write(
        "k3_z3_template.json",
        serde_json::to_string_pretty(&z3_template).unwrap(),
    );

    // quotient functor from the free Z/2 action groupoid to the point
    let free = nervecalc::fixtures::free_z2_action_groupoid();
    let pt = nervecalc::groupoid::trivial_groupoid(&["pt".to_string()]).unwrap();
    let functor = serde_json::json!({
        "source": free.to_serialized(),
        "target": pt.to_serialized(),
        "object_map": {"a": "pt", "b": "pt"},
        "morphism_map": {
            "r0#a": "id#pt", "r0#b": "id#pt", "r1#a": "id#pt", "r1#b": "id#pt"
        }
    });
    write(
        "quotient_functor.json",
        serde_json::to_string_pretty(&functor).unwrap(),
    );

    paths
}
