//! Cross-checks against independent oracles: floating-point spectra,
//! brute-force intersection numbers and randomized round trips.

use std::collections::VecDeque;

use drg_core::bounds::{f_factored, f_poly, g_poly};
use drg_core::cab::{cab_formula_params, cab_partition_check, LocalSrgData};
use drg_core::classical::{classical_array, recognize_classical, ClassicalParams};
use drg_core::families::{antipodal_quotient, build_family, FamilySpec};
use drg_core::graphs::{
    check_distance_regular, graph_spectrum, local_graph, DrgOutcome, Graph, PairSelection,
    SpectrumOptions,
};
use drg_core::homogeneous::{
    check_i_homogeneous, classify_thm_1_1, recognize_named_family, EvidenceBundle,
};
use drg_core::srg::srg_from_graph;
use drg_core::{b_parameter, eigenvalues, IntersectionArray};
use nalgebra::DMatrix;
use num_rational::BigRational;
use proptest::prelude::*;

fn fam(s: &str) -> Graph {
    build_family(&s.parse::<FamilySpec>().unwrap()).unwrap()
}

fn bfs(adj: &[Vec<u32>], s: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &w in &adj[u] {
            if dist[w as usize] == usize::MAX {
                dist[w as usize] = dist[u] + 1;
                q.push_back(w as usize);
            }
        }
    }
    dist
}

/// Intersection numbers counted over every ordered pair; `None` if they vary.
fn brute_array(g: &Graph) -> Option<(Vec<u64>, Vec<u64>)> {
    let adj = g.adjacency_lists();
    let dist: Vec<Vec<usize>> = (0..adj.len()).map(|s| bfs(&adj, s)).collect();
    let diam = *dist.iter().flatten().max()?;
    if diam == usize::MAX {
        return None;
    }
    let mut b = vec![None; diam + 1];
    let mut c = vec![None; diam + 1];
    for x in 0..adj.len() {
        for y in 0..adj.len() {
            let i = dist[x][y];
            let (mut ci, mut bi) = (0u64, 0u64);
            for &z in &adj[y] {
                let dz = dist[x][z as usize];
                if dz + 1 == i {
                    ci += 1;
                } else if dz == i + 1 {
                    bi += 1;
                }
            }
            for (slot, val) in [(&mut b[i], bi), (&mut c[i], ci)] {
                match slot {
                    None => *slot = Some(val),
                    Some(v) if *v != val => return None,
                    _ => {}
                }
            }
        }
    }
    Some((
        b[..diam].iter().map(|v| v.unwrap()).collect(),
        c[1..].iter().map(|v| v.unwrap()).collect(),
    ))
}

const SMALL: [&str; 9] = [
    "petersen",
    "icosahedron",
    "johnson:6,3",
    "johnson:7,3",
    "hamming:3,3",
    "halved-cube:7",
    "folded-johnson:8",
    "folded-halved-cube:8",
    "cocktail-party:4",
];

#[test]
fn arrays_match_brute_force() {
    for name in SMALL {
        let g = fam(name);
        let (b, c) =
            brute_array(&g).unwrap_or_else(|| panic!("{name} not distance-regular by brute force"));
        let ours = check_distance_regular(&g).unwrap();
        assert_eq!(
            ours.array(),
            Some(&IntersectionArray::new(b, c).unwrap()),
            "{name}"
        );
    }
}

#[test]
fn non_drg_detected_like_brute_force() {
    for name in [
        "grid:2,3",
        "cycle:6",
        "complete-multipartite:3,2",
        "grid:3,4",
    ] {
        let g = fam(name);
        let ours = matches!(
            check_distance_regular(&g).unwrap(),
            DrgOutcome::DistanceRegular { .. }
        );
        assert_eq!(ours, brute_array(&g).is_some(), "{name}");
    }
}

fn float_spectrum(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let m = DMatrix::from_fn(n, n, |i, j| {
        if g.adjacent(i as u32, j as u32) {
            1.0
        } else {
            0.0
        }
    });
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
    ev
}

#[test]
fn spectra_match_floating_point() {
    for name in SMALL {
        let g = fam(name);
        let float = float_spectrum(&g);
        let exact = graph_spectrum(&g, &SpectrumOptions::default()).unwrap();
        assert!(exact.exact, "{name}");
        let mut expanded = Vec::new();
        for e in &exact.entries {
            let m = e
                .multiplicity
                .unwrap_or_else(|| panic!("{name}: multiplicity unknown"));
            expanded.extend(std::iter::repeat_n(e.value.to_f64(), m as usize));
        }
        assert_eq!(expanded.len(), float.len(), "{name}");
        for (a, b) in expanded.iter().zip(&float) {
            assert!((a - b).abs() < 1e-8, "{name}: {a} vs {b}");
        }

        // Distinct eigenvalues of the array equal those of the graph.
        let ia = check_distance_regular(&g).unwrap().array().unwrap().clone();
        let from_array = eigenvalues(&ia, 20).unwrap();
        assert_eq!(from_array.len(), exact.entries.len(), "{name}");
        for (x, e) in from_array.values().iter().zip(&exact.entries) {
            assert!(x.eq_exact(&e.value).unwrap(), "{name}: {x} vs {}", e.value);
        }
    }
}

#[test]
fn cab_recursion_matches_empirical() {
    for (name, d) in [
        ("johnson:6,3", 3),
        ("johnson:8,4", 4),
        ("halved-cube:8", 4),
        ("halved-cube:9", 4),
    ] {
        let g = fam(name);
        let ia = check_distance_regular(&g).unwrap().array().unwrap().clone();
        let local =
            LocalSrgData::from_local(&srg_from_graph(&local_graph(&g, 0).graph).unwrap()).unwrap();
        let upto = d - 1;
        let measured = cab_partition_check(&g, upto).unwrap();
        assert!(measured.holds(), "{name}");
        let cs: Vec<i64> = (1..=upto).map(|i| ia.c(i) as i64).collect();
        let predicted = cab_formula_params(&local, &cs).unwrap();
        assert_eq!(predicted.levels, measured.levels(), "{name}");
        for (j, b) in predicted.predicted_b.iter().enumerate() {
            assert_eq!(
                *b,
                BigRational::from_integer(ia.b(j + 1).into()),
                "{name} b_{}",
                j + 1
            );
        }
    }
}

#[test]
fn folds_agree_with_generic_antipodal_quotient() {
    for (name, parent) in [
        ("folded-johnson:8", "johnson:8,4"),
        ("folded-halved-cube:8", "halved-cube:8"),
    ] {
        let folded = fam(name);
        let generic = antipodal_quotient(&fam(parent)).unwrap();
        assert_eq!(folded.n(), generic.n(), "{name}");
        let a = check_distance_regular(&folded).unwrap().array().cloned();
        let b = check_distance_regular(&generic).unwrap().array().cloned();
        assert_eq!(a, b, "{name}");
        let parent_ia = check_distance_regular(&fam(parent))
            .unwrap()
            .array()
            .unwrap()
            .folded()
            .unwrap();
        assert_eq!(a, Some(parent_ia), "{name}");
    }
}

#[test]
fn graph_file_round_trip() {
    for name in SMALL {
        let g = fam(name);
        let back = Graph::from_json(&g.to_json()).unwrap();
        assert_eq!(back.adjacency_lists(), g.adjacency_lists(), "{name}");
    }
    assert!(Graph::from_json(r#"{"format":"drg-graph-v0","n":1,"adj":[[]]}"#).is_err());
    assert!(Graph::from_json(r#"{"format":"drg-graph-v1","n":2,"adj":[[1],[]]}"#).is_err());
}

#[test]
fn sampling_is_seed_deterministic_and_consistent() {
    let g = fam("johnson:8,4");
    let all = check_i_homogeneous(&g, 1, PairSelection::Exhaustive).unwrap();
    let s1 = check_i_homogeneous(&g, 1, PairSelection::Sampled { seed: 9, count: 40 }).unwrap();
    let s2 = check_i_homogeneous(&g, 1, PairSelection::Sampled { seed: 9, count: 40 }).unwrap();
    assert_eq!(s1, s2);
    assert!(all.holds && s1.holds);
    assert_eq!(all.matrix, s1.matrix);
}

#[test]
fn classification_evidence_is_reproducible() {
    let ia: IntersectionArray = "25,16,9,4,1;1,4,9,16,25".parse().unwrap();
    let out = classify_thm_1_1(&EvidenceBundle::from_array(ia.clone())).unwrap();
    let rules: Vec<&str> = out.evidence.iter().map(|e| e.rule.as_str()).collect();
    let mut sorted = rules.clone();
    sorted.sort();
    assert_eq!(rules, sorted);
    for e in &out.evidence {
        match e.rule.as_str() {
            "array" => {
                assert_eq!(e.values["ia"], ia.to_string());
                assert_eq!(e.values["a1"], ia.a(1));
                assert_eq!(e.values["c2"], ia.c(2));
                assert_eq!(e.values["k"], ia.valency());
            }
            "b-parameter" => assert_eq!(e.values["b"], b_parameter(&ia).unwrap().to_string()),
            "named-family" => {
                let names: Vec<String> = recognize_named_family(&ia)
                    .iter()
                    .map(|n| n.to_string())
                    .collect();
                assert_eq!(e.values["matches"], serde_json::json!(names));
            }
            _ => {}
        }
    }
    let again = classify_thm_1_1(&EvidenceBundle::from_array(ia)).unwrap();
    assert_eq!(out, again);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn classical_round_trip(d in 3u32..7, b in prop::sample::select(vec![-3i64, -2, 1, 2, 3]), alpha in 0i64..4, extra in 0i64..6) {
        // beta large enough that every b_i is positive.
        let base = drg_core::classical::gaussian_binomial(d, b);
        let beta = alpha * i64::try_from(base).unwrap().abs() + 1 + extra;
        let Ok(cp) = ClassicalParams::from_ints(d, b, alpha, beta) else { return Ok(()) };
        let Ok(array) = classical_array(&cp) else { return Ok(()) };
        prop_assert!(recognize_classical(&array).contains(&cp), "{cp} -> {array}");
    }

    #[test]
    fn f_forms_agree(num in -50i64..200, den in 1i64..20) {
        let b = BigRational::new(num.into(), den.into());
        prop_assert_eq!(f_poly().eval(&b), f_factored(&b));
        let h = BigRational::from_integer(4.into()) * b.pow(5) + BigRational::from_integer(4.into()) * b.pow(4)
            + BigRational::from_integer(4.into()) * b.pow(3) + BigRational::from_integer(1.into());
        prop_assert_eq!(g_poly().eval(&b), &h * &h);
    }

    #[test]
    fn johnson_arrays(n in 4u32..11, d in 1u32..5) {
        prop_assume!(d < n && 2 * d <= n);
        let g = fam(&format!("johnson:{n},{d}"));
        let ia = check_distance_regular(&g).unwrap().array().unwrap().clone();
        let b: Vec<u64> = (0..d as u64).map(|i| (d as u64 - i) * (n as u64 - d as u64 - i)).collect();
        let c: Vec<u64> = (1..=d as u64).map(|i| i * i).collect();
        prop_assert_eq!(ia, IntersectionArray::new(b, c).unwrap());
    }
}
