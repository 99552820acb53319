use proptest::prelude::*;
use qrank_core::analysis::{
    attack_sensitivity, damping_sweep, degeneracy_profile, fidelity, ipr, rank_correlation,
    Provenance, Ranker, Reported,
};
use qrank_core::{generate_scale_free, DirectedGraph, RankVector};

fn arb_dist(max: usize) -> impl Strategy<Value = RankVector> {
    proptest::collection::vec(0.0f64..1.0, 1..=max).prop_filter_map("nonzero", |v| {
        let s: f64 = v.iter().sum();
        (s > 1e-6).then(|| RankVector::new(v.iter().map(|x| x / s).collect()).unwrap())
    })
}

fn arb_pair(max: usize) -> impl Strategy<Value = (RankVector, RankVector)> {
    (1..=max).prop_flat_map(|n| {
        let one = proptest::collection::vec(0.01f64..1.0, n);
        (one.clone(), one).prop_map(|(a, b)| {
            let norm = |v: Vec<f64>| {
                let s: f64 = v.iter().sum();
                RankVector::new(v.iter().map(|x| x / s).collect()).unwrap()
            };
            (norm(a), norm(b))
        })
    })
}

fn arb_graph() -> impl Strategy<Value = DirectedGraph> {
    (3usize..14).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), n..(3 * n)).prop_map(move |arcs| {
            DirectedGraph::new(n, arcs.into_iter().filter(|(s, d)| s != d)).unwrap()
        })
    })
}

#[test]
fn attack_report_json_carries_provenance() {
    let g = generate_scale_free(20, 3).unwrap();
    let ranker = Ranker::quantum(64);
    let report = Reported {
        result: attack_sensitivity(&g, 2, &ranker, 0.85).unwrap(),
        provenance: Provenance::new(&g, &ranker, 0.85, Some(3)),
    };
    let value: serde_json::Value = serde_json::to_value(&report).unwrap();
    for key in [
        "removed",
        "survivors",
        "rank_correlation",
        "mean_displacement",
        "provenance",
    ] {
        assert!(value.get(key).is_some(), "{key}");
    }
    assert_eq!(value["provenance"]["steps"], 64);
    assert_eq!(
        value["provenance"]["graph_hash"].as_str().unwrap().len(),
        64
    );
    let back: Reported<qrank_core::analysis::AttackReport> = serde_json::from_value(value).unwrap();
    assert_eq!(back, report);
}

#[test]
fn quantum_sweep_is_flatter_than_classical() {
    let g = generate_scale_free(64, 21).unwrap();
    let grid = [0.1, 0.5, 0.9];
    let c = damping_sweep(&g, &grid, &Ranker::Classical).unwrap();
    let q = damping_sweep(&g, &grid, &Ranker::quantum(1024)).unwrap();
    assert!(q.min_fidelity > c.min_fidelity);
}

proptest! {
    #[test]
    fn ipr_bounds(p in arb_dist(40)) {
        let v = ipr(&p).unwrap();
        prop_assert!(v >= 1.0 - 1e-12 && v <= p.len() as f64 + 1e-9);
    }

    #[test]
    fn fidelity_symmetric_and_permutation_invariant((p, q) in arb_pair(30), shift in 0usize..30) {
        let f = fidelity(&p, &q).unwrap();
        prop_assert!((f - fidelity(&q, &p).unwrap()).abs() < 1e-15);
        prop_assert!((0.0..=1.0).contains(&f));
        prop_assert!((fidelity(&p, &p).unwrap() - 1.0).abs() < 1e-12);
        let n = p.len();
        let rot = |v: &RankVector| RankVector::new((0..n).map(|i| v[(i + shift) % n]).collect()).unwrap();
        prop_assert!((fidelity(&rot(&p), &rot(&q)).unwrap() - f).abs() < 1e-12);
    }

    #[test]
    fn tau_depends_only_on_order((p, q) in arb_pair(25)) {
        let tau = rank_correlation(&p, &q).unwrap();
        prop_assert!((-1.0..=1.0).contains(&tau));
        let warped = RankVector::new(p.values().iter().map(|x| x.sqrt() * 3.0 + x.powi(3)).collect()).unwrap();
        prop_assert!((rank_correlation(&warped, &q).unwrap() - tau).abs() < 1e-12);
        prop_assert!((rank_correlation(&q, &p).unwrap() - tau).abs() < 1e-12);
    }

    #[test]
    fn degeneracy_monotone_in_delta(p in arb_dist(40), a in 1e-8f64..1.0, b in 1e-8f64..1.0) {
        let (small, large) = if a < b { (a, b) } else { (b, a) };
        let fine = degeneracy_profile(&p, small).unwrap();
        let coarse = degeneracy_profile(&p, large).unwrap();
        prop_assert!(coarse.class_count <= fine.class_count);
        prop_assert_eq!(fine.class_sizes.iter().sum::<usize>(), p.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn no_attack_is_identity(g in arb_graph()) {
        for ranker in [Ranker::Classical, Ranker::quantum(32)] {
            let r = attack_sensitivity(&g, 0, &ranker, 0.85).unwrap();
            prop_assert_eq!(r.rank_correlation, 1.0);
            prop_assert_eq!(r.mean_displacement, 0.0);
        }
    }
}
