//! Acceptance suite: one test per criterion, each printing its own
//! PASS line (visible with `--nocapture`). All checks are exact integer
//! equalities against independent oracles.

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use nervecalc::bundles::{
    are_isomorphic, bundle_from_torsor, enumerate_bundles, holonomy, total_space,
};
use nervecalc::classifying::{
    classifying_homology, morita_invariance_check, nerve, normalized_nerve_chain, unit_section,
    universal_total,
};
use nervecalc::fixtures::{
    cech_cover_groupoid, cyclic_group, free_z2_action_groupoid, k3_circle, pair_groupoid,
    point_functor, symmetric_group_3,
};
use nervecalc::groupoid::{trivial_groupoid, FiniteGroupoid};
use nervecalc::simplicial::chain::chain_complex;
use nervecalc::simplicial::delta_set_from_complex;
use nervecalc::simplicial::homology::{homology, HomologyProfile};
use nervecalc::simplicial::homotopy::nat_trans_chain_homotopy;

const LIMIT: u64 = 10_000_000;

#[test]
fn criterion_1_cyclic_group_homology_oracle() {
    for m in [2u64, 3, 4] {
        let start = Instant::now();
        let g = cyclic_group(m as usize);
        let report = classifying_homology(&g, 4, None).unwrap();
        let oracle = common::cyclic_resolution_profile(m, 4);
        assert_eq!(
            report.homology, oracle,
            "Z/{m} disagrees with the resolution oracle"
        );
        let elapsed = start.elapsed();
        assert!(
            elapsed.as_secs() < 10,
            "Z/{m} took {elapsed:?}, budget is 10 s"
        );
    }
    println!("criterion 1 (cyclic group homology vs resolution oracle): PASS");
}

fn criterion_2_groupoids() -> Vec<(FiniteGroupoid, usize)> {
    vec![
        (cyclic_group(2), 3),
        (cyclic_group(3), 3),
        (symmetric_group_3(), 2),
        (
            trivial_groupoid(&["1".into(), "2".into(), "3".into()]).unwrap(),
            3,
        ),
        (cech_cover_groupoid(), 3),
    ]
}

#[test]
fn criterion_2_universal_total_contractibility() {
    let start = Instant::now();
    for (g, k_max) in criterion_2_groupoids() {
        let r = universal_total(&g, k_max, None).unwrap();
        assert!(
            r.report
                .homology
                .is_acyclic_with_components(g.object_count()),
            "E of `{}` must have vanishing reduced homology and H_0 = Z^{}; got {:?}",
            g.name(),
            g.object_count(),
            r.report.homology
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}, budget is 60 s");
    println!("criterion 2 (universal total object contractibility): PASS");
}

#[test]
fn criterion_3_section_identities_and_retraction_homotopy() {
    for (g, k_max) in criterion_2_groupoids() {
        // ζ∘σ = id and T∘σ = id are asserted inside unit_section
        let u = unit_section(&g).unwrap();
        // ∂P + P∂ = (σζ)# − id# through the truncation, matrix-exactly
        let truncation = k_max + 1;
        let h = nat_trans_chain_homotopy(&u.retraction, truncation).unwrap();
        assert_eq!(h.truncation, truncation);
        // the left functor really is the identity on the arrow groupoid
        for (n, m) in h.f_map.matrices.iter().enumerate() {
            let size = h.f_map.map.source().level_size(n);
            assert_eq!(
                m,
                &nervecalc::simplicial::chain::SparseIntMatrix::identity(size)
            );
        }
    }
    println!("criterion 3 (section identities and retraction homotopy): PASS");
}

#[test]
fn criterion_4_morita_invariance_of_point_presentations() {
    let presentations = vec![
        trivial_groupoid(&["pt".into()]).unwrap(),
        free_z2_action_groupoid(),
        pair_groupoid(4),
    ];
    let profiles: Vec<HomologyProfile> = presentations
        .iter()
        .map(|g| classifying_homology(g, 3, None).unwrap().homology)
        .collect();
    assert_eq!(profiles[0], profiles[1]);
    assert_eq!(profiles[0], profiles[2]);
    assert_eq!(
        profiles[0],
        HomologyProfile::from_parts(&[(1, &[]), (0, &[]), (0, &[]), (0, &[])])
    );

    // connecting weak equivalences down to the one-point presentation
    for g in &presentations[1..] {
        let f = point_functor(g).unwrap();
        let r = morita_invariance_check(&f, 3).unwrap();
        assert!(r.invariant, "cone acyclicity failed for `{}`", g.name());
        assert!(r.cone_homology.is_trivial());
    }
    println!("criterion 4 (Morita invariance across point presentations): PASS");
}

#[test]
fn criterion_5_concordance_classification() {
    let start = Instant::now();
    let loop_path = common::fundamental_loop();
    for (g, expected_classes) in [
        (cyclic_group(2), 2usize),
        (cyclic_group(3), 3),
        (symmetric_group_3(), 3),
    ] {
        let e = enumerate_bundles(&k3_circle(), &g, 1 << 30, LIMIT).unwrap();
        assert_eq!(
            e.classes.len(),
            expected_classes,
            "class count for `{}`",
            g.name()
        );

        // conjugacy oracle: partition the same bundles by the conjugacy
        // class of their fundamental holonomy
        let conj = common::conjugacy_classes(&g);
        let class_of = |m: usize| conj.iter().position(|c| c.contains(&m)).unwrap();
        let mut oracle_partition: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); conj.len()];
        for (i, b) in e.bundles.iter().enumerate() {
            let h = holonomy(b, &loop_path).unwrap();
            oracle_partition[class_of(g.morphism_index(&h).unwrap())].insert(i);
        }
        let oracle_partition: BTreeSet<BTreeSet<usize>> = oracle_partition
            .into_iter()
            .filter(|c| !c.is_empty())
            .collect();
        let computed: BTreeSet<BTreeSet<usize>> = e
            .classes
            .iter()
            .map(|c| c.iter().copied().collect())
            .collect();
        assert_eq!(
            computed,
            oracle_partition,
            "partition for `{}` disagrees with the conjugacy oracle",
            g.name()
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 300, "took {elapsed:?}, budget is 5 min");
    println!("criterion 5 (concordance classes vs conjugacy oracle): PASS");
}

#[test]
fn criterion_6_torsor_round_trip() {
    let z2 = cyclic_group(2);
    let e = enumerate_bundles(&k3_circle(), &z2, 1 << 20, LIMIT).unwrap();
    assert_eq!(e.bundles.len(), 8);
    for b in &e.bundles {
        let t = total_space(b).unwrap();
        let back = bundle_from_torsor(&t, &t.canonical_sections().unwrap()).unwrap();
        assert!(
            are_isomorphic(b, &back).unwrap().is_some(),
            "round trip must recover the bundle up to isomorphism"
        );
        // division total and unique on every fiber pair
        for v in 0..3 {
            let fiber = t.fiber(v);
            for &e1 in &fiber {
                for &e2 in &fiber {
                    let d = t.division(e1, e2).unwrap();
                    assert_eq!(t.act(e1, d), Some(e2));
                    // uniqueness: any other morphism moving e1 to e2 would
                    // have made division fail; assert directly anyway
                    let count = (0..z2.morphism_count())
                        .filter(|&f| t.act(e1, f) == Some(e2))
                        .count();
                    assert_eq!(count, 1);
                }
            }
        }
    }
    println!("criterion 6 (torsor round trip and division map): PASS");
}

#[test]
fn criterion_7_total_space_oracle() {
    let z2 = cyclic_group(2);
    let holo = nervecalc::fixtures::k3_bundle(&z2, ["r1", "r0", "r0"]);
    let triv = nervecalc::fixtures::k3_bundle(&z2, ["r0", "r0", "r0"]);

    let h_holo = homology(
        &chain_complex(total_space(&holo).unwrap().total()).unwrap(),
        1,
    )
    .unwrap();
    let h_triv = homology(
        &chain_complex(total_space(&triv).unwrap().total()).unwrap(),
        1,
    )
    .unwrap();

    // hand-built covering complexes
    let hexagon = homology(
        &chain_complex(&delta_set_from_complex(&common::hexagon_circle())).unwrap(),
        1,
    )
    .unwrap();
    let two = homology(
        &chain_complex(&delta_set_from_complex(&common::two_circles())).unwrap(),
        1,
    )
    .unwrap();

    assert_eq!(h_holo, hexagon);
    assert_eq!(h_triv, two);
    assert_eq!(h_holo, HomologyProfile::from_parts(&[(1, &[]), (1, &[])]));
    assert_eq!(h_triv, HomologyProfile::from_parts(&[(2, &[]), (2, &[])]));
    println!("criterion 7 (total-space homology vs covering-space oracle): PASS");
}

#[test]
fn criterion_8_normalization_cross_check() {
    for g in [cyclic_group(2), symmetric_group_3()] {
        let unnorm = chain_complex(&nerve(&g, 4).unwrap()).unwrap();
        let norm = normalized_nerve_chain(&g, 4).unwrap();
        assert_eq!(
            homology(&unnorm, 3).unwrap(),
            homology(&norm, 3).unwrap(),
            "normalized and unnormalized profiles differ for `{}`",
            g.name()
        );
    }
    println!("criterion 8 (normalized vs unnormalized nerve chains): PASS");
}

#[test]
fn criterion_9_cli_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let paths = common::write_cli_fixtures(dir.path());
    let p = |k: &str| paths[k].to_str().unwrap().to_string();

    let commands: Vec<Vec<String>> = vec![
        vec!["validate".into(), "--groupoid".into(), p("s3.json")],
        vec!["validate".into(), "--bundle".into(), p("k3_g.json")],
        vec![
            "homology".into(),
            "--groupoid".into(),
            p("z2.json"),
            "--kmax".into(),
            "4".into(),
        ],
        vec![
            "homology".into(),
            "--groupoid".into(),
            p("z3.json"),
            "--kmax".into(),
            "4".into(),
        ],
        vec![
            "homology".into(),
            "--groupoid".into(),
            p("z4.json"),
            "--kmax".into(),
            "4".into(),
        ],
        vec![
            "euniv".into(),
            "--groupoid".into(),
            p("z2.json"),
            "--kmax".into(),
            "3".into(),
        ],
        vec![
            "euniv".into(),
            "--groupoid".into(),
            p("s3.json"),
            "--kmax".into(),
            "2".into(),
        ],
        vec![
            "morita".into(),
            "--functor".into(),
            p("quotient_functor.json"),
            "--kmax".into(),
            "3".into(),
        ],
        vec!["classify".into(), "--bundle".into(), p("k3_g.json")],
        vec![
            "total-space".into(),
            "--bundle".into(),
            p("k3_g.json"),
            "--kmax".into(),
            "1".into(),
        ],
        vec![
            "isomorphic".into(),
            "--bundle".into(),
            p("k3_g.json"),
            "--bundle".into(),
            p("k3_e.json"),
        ],
        vec![
            "concordance".into(),
            "--bundle".into(),
            p("k3_g.json"),
            "--bundle".into(),
            p("k3_e.json"),
        ],
        vec![
            "concordance".into(),
            "--bundle".into(),
            p("k3_g.json"),
            "--bundle".into(),
            p("k3_g.json"),
        ],
        vec![
            "holonomy".into(),
            "--bundle".into(),
            p("k3_g.json"),
            "--loop".into(),
            "v0,v1,v2,v0".into(),
        ],
        vec![
            "enumerate".into(),
            "--bundle".into(),
            p("k3_z2_template.json"),
        ],
        vec![
            "enumerate".into(),
            "--bundle".into(),
            p("k3_z3_template.json"),
        ],
        vec![
            "enumerate".into(),
            "--bundle".into(),
            p("k3_s3_template.json"),
        ],
    ];

    let run = |args: &[String], format: &str| -> (Vec<u8>, Option<i32>) {
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_nervecalc"))
            .args(args)
            .arg("--format")
            .arg(format)
            .output()
            .expect("binary runs");
        (out.stdout, out.status.code())
    };

    for args in &commands {
        for format in ["json", "text"] {
            let (out1, code1) = run(args, format);
            let (out2, code2) = run(args, format);
            assert_eq!(code1, Some(0), "command {args:?} must succeed");
            assert_eq!(code1, code2);
            assert_eq!(
                out1, out2,
                "byte-identical output required for {args:?} ({format})"
            );
            assert!(!out1.is_empty());
        }
    }
    println!("criterion 9 (CLI byte-determinism): PASS");
}
