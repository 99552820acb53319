use nalgebra::DMatrix;
use proptest::prelude::*;
use qrank_core::{
    benchmark_graph, classical_pagerank, classical_pagerank_with, generate_scale_free,
    google_matrix, power_method, second_eigenvalue_modulus, Benchmark, ColumnOperator,
    DirectedGraph, GoogleMatrix, PowerConfig, StochasticMatrix,
};

fn arb_graph(max: usize) -> impl Strategy<Value = DirectedGraph> {
    (2usize..=max).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..(3 * n)).prop_map(move |arcs| {
            DirectedGraph::new(n, arcs.into_iter().filter(|(s, d)| s != d)).unwrap()
        })
    })
}

/// Stationary vector from the dense eigenproblem, as an independent check on
/// the power method.
fn dense_stationary(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    // Solve (G - 1) x = 0 with sum x = 1 by replacing the last equation.
    let mut a = m - DMatrix::identity(n, n);
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    let mut b = nalgebra::DVector::zeros(n);
    b[n - 1] = 1.0;
    a.lu().solve(&b).unwrap().iter().copied().collect()
}

#[test]
fn two_node_web() {
    let g = benchmark_graph(Benchmark::Fig1a);
    let p = classical_pagerank(&g, 0.85).unwrap();
    let x1 = 0.5 / 1.425;
    assert!((p[0] - x1).abs() < 1e-12);
    assert!((p[1] - (1.0 - x1)).abs() < 1e-12);

    let e = StochasticMatrix::from_graph(&g);
    let limit = power_method(&e, &[0.5, 0.5], &PowerConfig::default()).unwrap();
    assert!(limit.converged());
    assert!((limit.vector[0] - 1.0 / 3.0).abs() < 1e-12);
    assert!((limit.vector[1] - 2.0 / 3.0).abs() < 1e-12);
}

#[test]
fn complete_graph_is_uniform() {
    let g = DirectedGraph::new(3, [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]).unwrap();
    for alpha in [0.0, 0.3, 0.85, 0.99] {
        let p = classical_pagerank(&g, alpha).unwrap();
        assert!(p.values().iter().all(|v| (v - 1.0 / 3.0).abs() < 1e-12));
    }
}

#[test]
fn second_eigenvalue_examples() {
    let cycle = StochasticMatrix::from_graph(&benchmark_graph(Benchmark::Fig1c));
    let bare = google_matrix(cycle.clone(), 1.0).unwrap();
    assert!((second_eigenvalue_modulus(&bare).unwrap() - 1.0).abs() < 1e-9);
    let flat = google_matrix(cycle, 0.0).unwrap();
    assert!(second_eigenvalue_modulus(&flat).unwrap() < 1e-9);
}

#[test]
fn fixed_point_on_scale_free() {
    let g = generate_scale_free(200, 3).unwrap();
    let cfg = PowerConfig::default();
    let run = classical_pagerank_with(&g, 0.85, &cfg).unwrap();
    assert!(run.converged());
    let gm = GoogleMatrix::from_graph(&g, 0.85).unwrap();
    let mut y = vec![0.0; 200];
    gm.apply(run.vector.values(), &mut y);
    let residual: f64 = y
        .iter()
        .zip(run.vector.values())
        .map(|(a, b)| (a - b).abs())
        .sum();
    assert!(residual < 10.0 * cfg.tol, "{residual}");
}

proptest! {
    #[test]
    fn matrices_stay_column_stochastic(g in arb_graph(12), alpha in 0.0f64..=1.0) {
        let e = StochasticMatrix::from_graph(&g);
        let gm = google_matrix(e.clone(), alpha).unwrap();
        for m in [e.to_dense(), gm.to_dense()] {
            for j in 0..m.ncols() {
                prop_assert!((m.column(j).sum() - 1.0).abs() < 1e-12);
                prop_assert!(m.column(j).iter().all(|v| *v >= 0.0));
            }
        }
    }

    #[test]
    fn agrees_with_dense_solution(g in arb_graph(6), alpha in 0.0f64..0.99) {
        let p = classical_pagerank(&g, alpha).unwrap();
        let dense = dense_stationary(&GoogleMatrix::from_graph(&g, alpha).unwrap().to_dense());
        for (a, b) in p.values().iter().zip(&dense) {
            prop_assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn independent_of_start(
        g in arb_graph(20),
        alpha in 0.05f64..0.95,
        seeds in proptest::collection::vec(0.0f64..1.0, 40),
    ) {
        let n = g.node_count();
        let gm = GoogleMatrix::from_graph(&g, alpha).unwrap();
        let cfg = PowerConfig::default();
        let mut a: Vec<f64> = seeds[..n].to_vec();
        let mut b: Vec<f64> = seeds[20..20 + n].to_vec();
        a[0] += 0.1;
        b[n - 1] += 0.1;
        let ra = power_method(&gm, &a, &cfg).unwrap();
        let rb = power_method(&gm, &b, &cfg).unwrap();
        prop_assert!(ra.vector.l1_distance(&rb.vector) < 1e-8);
    }

    #[test]
    fn spectral_bound(g in arb_graph(16), alpha in 0.0f64..=1.0) {
        let gm = GoogleMatrix::from_graph(&g, alpha).unwrap();
        prop_assert!(second_eigenvalue_modulus(&gm).unwrap() <= alpha + 1e-9);
    }
}
