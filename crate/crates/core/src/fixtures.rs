//! Ready-made groupoids, complexes and functors used throughout the test
//! suites and handy for experiments.

use std::collections::BTreeMap;

use crate::bundles::{validate_bundle, CocycleBundle};
use crate::error::Result;
use crate::groupoid::{
    action_groupoid, cech_groupoid, groupoid_from_group, trivial_groupoid, FiniteGroupoid,
    GroupoidFunctor,
};
use crate::simplicial::OrderedSimplicialComplex;

/// ℤ/m with elements `r0..r{m-1}`, `r0` the unit.
pub fn cyclic_group(m: usize) -> FiniteGroupoid {
    assert!(m >= 1 && m <= 9, "fixture covers single-digit orders");
    let elements: Vec<String> = (0..m).map(|i| format!("r{i}")).collect();
    groupoid_from_group(&elements, &|x, y| (x + y) % m)
        .expect("cyclic table is a group")
        .with_name(&format!("z{m}"))
}

/// The symmetric group on three letters, elements named by one-line
/// notation ("120" sends 0↦1, 1↦2, 2↦0). Products are diagrammatic:
/// `(x·y)(i) = y(x(i))`.
pub fn symmetric_group_3() -> FiniteGroupoid {
    let perms: Vec<Vec<usize>> = vec![
        vec![0, 1, 2],
        vec![0, 2, 1],
        vec![1, 0, 2],
        vec![1, 2, 0],
        vec![2, 0, 1],
        vec![2, 1, 0],
    ];
    let name = |p: &Vec<usize>| p.iter().map(|d| d.to_string()).collect::<String>();
    let elements: Vec<String> = perms.iter().map(name).collect();
    let table = |x: usize, y: usize| {
        let composed: Vec<usize> = (0..3).map(|i| perms[y][perms[x][i]]).collect();
        perms.iter().position(|q| q == &composed).unwrap()
    };
    groupoid_from_group(&elements, &table)
        .expect("permutation table is a group")
        .with_name("s3")
}

/// ℤ/2 acting freely on a two-point set by the swap; equivalently the pair
/// groupoid on {a, b}.
pub fn free_z2_action_groupoid() -> FiniteGroupoid {
    let z2 = cyclic_group(2);
    action_groupoid(&z2, &["a".to_string(), "b".to_string()], &|g, y| {
        if g == 1 {
            1 - y
        } else {
            y
        }
    })
    .expect("swap is an action")
    .with_name("z2_free_on_ab")
}

/// The indiscrete (pair) groupoid on `n` formal points, presented as the
/// cover groupoid of `n` copies of a one-point set.
pub fn pair_groupoid(n: usize) -> FiniteGroupoid {
    assert!(n >= 1);
    let carrier = vec!["x".to_string()];
    let cover: Vec<Vec<String>> = (0..n).map(|_| carrier.clone()).collect();
    cech_groupoid(&carrier, &cover)
        .expect("repeated cover is a cover")
        .with_name(&format!("pair{n}"))
}

/// The cover groupoid of {{1,2},{2,3}} over {1,2,3}: 4 objects, 6
/// morphisms, three contractible components.
pub fn cech_cover_groupoid() -> FiniteGroupoid {
    let strs = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    cech_groupoid(
        &strs(&["1", "2", "3"]),
        &[strs(&["1", "2"]), strs(&["2", "3"])],
    )
    .expect("cover groupoid fixture")
    .with_name("cech12_23")
}

/// Collapses everything to the one-object trivial groupoid.
pub fn point_functor(g: &FiniteGroupoid) -> Result<GroupoidFunctor> {
    let pt = trivial_groupoid(&["pt".to_string()])?;
    let object_map: BTreeMap<String, String> = g
        .object_ids()
        .iter()
        .map(|o| (o.clone(), "pt".to_string()))
        .collect();
    let morphism_map: BTreeMap<String, String> = g
        .morphism_ids()
        .iter()
        .map(|m| (m.clone(), "id#pt".to_string()))
        .collect();
    GroupoidFunctor::new(g.clone(), pt, object_map, morphism_map)
}

/// The index-forgetting weak equivalence from the cover groupoid fixture to
/// the trivial groupoid on its carrier.
pub fn cech_forgetful_functor() -> GroupoidFunctor {
    let cech = cech_cover_groupoid();
    let strs = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let triv = trivial_groupoid(&strs(&["1", "2", "3"])).unwrap();
    let object_map: BTreeMap<String, String> = cech
        .object_ids()
        .iter()
        .map(|o| (o.clone(), o.split('#').next().unwrap().to_string()))
        .collect();
    let morphism_map: BTreeMap<String, String> = cech
        .morphism_ids()
        .iter()
        .map(|m| {
            let point = m.split('#').next().unwrap();
            (m.clone(), format!("id#{point}"))
        })
        .collect();
    GroupoidFunctor::new(cech, triv, object_map, morphism_map)
        .expect("forgetting the cover index is a functor")
}

/// ℤ/2 into the symmetric group, the generator landing on the
/// transposition fixing 0.
pub fn transposition_inclusion() -> GroupoidFunctor {
    let z2 = cyclic_group(2);
    let s3 = symmetric_group_3();
    let mut object_map = BTreeMap::new();
    object_map.insert("*".to_string(), "*".to_string());
    let mut morphism_map = BTreeMap::new();
    morphism_map.insert("r0".to_string(), "012".to_string());
    morphism_map.insert("r1".to_string(), "021".to_string());
    GroupoidFunctor::new(z2, s3, object_map, morphism_map)
        .expect("order-2 element generates a subgroup")
}

/// The triangulated circle: three vertices, three edges, no 2-simplex.
pub fn k3_circle() -> OrderedSimplicialComplex {
    let v = vec!["v0".to_string(), "v1".to_string(), "v2".to_string()];
    OrderedSimplicialComplex::new(
        v,
        &[
            vec!["v0".to_string(), "v1".to_string()],
            vec!["v1".to_string(), "v2".to_string()],
            vec!["v0".to_string(), "v2".to_string()],
        ],
    )
    .expect("circle fixture")
}

/// A single filled triangle (solid 2-simplex with all faces).
pub fn filled_triangle() -> OrderedSimplicialComplex {
    let v = vec!["v0".to_string(), "v1".to_string(), "v2".to_string()];
    OrderedSimplicialComplex::new(
        v,
        &[vec!["v0".to_string(), "v1".to_string(), "v2".to_string()]],
    )
    .expect("triangle fixture")
}

/// A solid tetrahedron (3-simplex with all faces).
pub fn solid_tetrahedron() -> OrderedSimplicialComplex {
    let v: Vec<String> = (0..4).map(|i| format!("v{i}")).collect();
    OrderedSimplicialComplex::new(v.clone(), &[v]).expect("tetrahedron fixture")
}

/// A bundle over the triangulated circle with a one-object groupoid;
/// `labels` assigns morphisms to the edges (v0,v1), (v0,v2), (v1,v2) in
/// that order.
pub fn k3_bundle(groupoid: &FiniteGroupoid, labels: [&str; 3]) -> CocycleBundle {
    assert_eq!(groupoid.object_count(), 1, "fixture expects one object");
    let obj = groupoid.object_ids()[0].clone();
    let h: BTreeMap<String, String> = ["v0", "v1", "v2"]
        .iter()
        .map(|v| (v.to_string(), obj.clone()))
        .collect();
    let mut gamma = BTreeMap::new();
    gamma.insert(("v0".to_string(), "v1".to_string()), labels[0].to_string());
    gamma.insert(("v0".to_string(), "v2".to_string()), labels[1].to_string());
    gamma.insert(("v1".to_string(), "v2".to_string()), labels[2].to_string());
    validate_bundle(k3_circle(), groupoid.clone(), &h, &gamma).expect("circle bundle fixture")
}
