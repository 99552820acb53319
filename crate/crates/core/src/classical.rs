//! Hyperlink matrix, dangling-node patch, Google matrix and the power method.
//!
//! All matrices act on column vectors and are column-stochastic (or
//! substochastic, for the bare hyperlink matrix). Nothing is stored densely:
//! the Google matrix keeps the sparse link structure and applies the uniform
//! teleport term on the fly, so a matvec costs `O(arcs + N)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::rank::RankVector;

/// Column sums must match 1 to this tolerance.
pub const STOCHASTIC_TOL: f64 = 1e-12;

/// Default damping parameter.
pub const DEFAULT_ALPHA: f64 = 0.85;

/// A linear operator given column by column.
pub trait ColumnOperator: Sync {
    fn dim(&self) -> usize;

    /// `y = M x`.
    fn apply(&self, x: &[f64], y: &mut [f64]);

    fn entry(&self, row: usize, col: usize) -> f64;

    fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |i, j| self.entry(i, j))
    }

    fn column_sum(&self, col: usize) -> f64 {
        (0..self.dim()).map(|i| self.entry(i, col)).sum()
    }
}

type SparseColumn = Vec<(usize, f64)>;

fn sparse_entry(col: &SparseColumn, row: usize) -> f64 {
    col.binary_search_by_key(&row, |&(r, _)| r)
        .map(|k| col[k].1)
        .unwrap_or(0.0)
}

/// `H_ij = 1/outdeg(j)` when `j` links to `i`, zero otherwise. Columns of
/// dangling nodes are all zero.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperlinkMatrix {
    columns: Vec<SparseColumn>,
    dangling: Vec<bool>,
}

pub fn hyperlink_matrix(g: &DirectedGraph) -> HyperlinkMatrix {
    let n = g.node_count();
    let columns: Vec<SparseColumn> = (0..n)
        .map(|j| {
            let targets = g.successors(j);
            let w = 1.0 / targets.len() as f64;
            targets.map(|i| (i, w)).collect()
        })
        .collect();
    let dangling = columns.iter().map(Vec::is_empty).collect();
    HyperlinkMatrix { columns, dangling }
}

impl HyperlinkMatrix {
    pub fn dangling(&self) -> &[bool] {
        &self.dangling
    }

    pub fn is_dangling(&self, node: usize) -> bool {
        self.dangling[node]
    }
}

impl ColumnOperator for HyperlinkMatrix {
    fn dim(&self) -> usize {
        self.columns.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.fill(0.0);
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, w) in col {
                y[i] += w * x[j];
            }
        }
    }

    fn entry(&self, row: usize, col: usize) -> f64 {
        sparse_entry(&self.columns[col], row)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Column {
    Sparse(SparseColumn),
    Uniform,
}

/// A column-stochastic matrix whose columns are either sparse or uniform.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    columns: Vec<Column>,
}

/// Replaces every dangling column of `h` with the uniform column `1/N`.
pub fn patch_dangling(h: &HyperlinkMatrix) -> StochasticMatrix {
    let columns = h
        .columns
        .iter()
        .map(|c| {
            if c.is_empty() {
                Column::Uniform
            } else {
                Column::Sparse(c.clone())
            }
        })
        .collect();
    StochasticMatrix { columns }
}

impl StochasticMatrix {
    pub fn from_graph(g: &DirectedGraph) -> Self {
        patch_dangling(&hyperlink_matrix(g))
    }

    /// Validates a dense matrix: entries nonnegative, columns summing to one.
    pub fn from_dense(m: &DMatrix<f64>) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::DimensionMismatch {
                left: m.nrows(),
                right: m.ncols(),
            });
        }
        let mut columns = Vec::with_capacity(m.ncols());
        for j in 0..m.ncols() {
            let col = m.column(j);
            let sum: f64 = col.iter().sum();
            if col.iter().any(|v| !(*v >= 0.0)) || (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::NotStochastic { column: j, sum });
            }
            columns.push(Column::Sparse(
                col.iter()
                    .enumerate()
                    .filter(|(_, v)| **v != 0.0)
                    .map(|(i, v)| (i, *v))
                    .collect(),
            ));
        }
        Ok(Self { columns })
    }
}

impl ColumnOperator for StochasticMatrix {
    fn dim(&self) -> usize {
        self.columns.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.columns.len();
        y.fill(0.0);
        let mut uniform_mass = 0.0;
        for (j, col) in self.columns.iter().enumerate() {
            match col {
                Column::Sparse(c) => {
                    for &(i, w) in c {
                        y[i] += w * x[j];
                    }
                }
                Column::Uniform => uniform_mass += x[j],
            }
        }
        if uniform_mass != 0.0 {
            let share = uniform_mass / n as f64;
            y.iter_mut().for_each(|v| *v += share);
        }
    }

    fn entry(&self, row: usize, col: usize) -> f64 {
        match &self.columns[col] {
            Column::Sparse(c) => sparse_entry(c, row),
            Column::Uniform => 1.0 / self.columns.len() as f64,
        }
    }
}

/// `G = alpha E + (1 - alpha)/N * ones`, kept in factored form.
#[derive(Debug, Clone, PartialEq)]
pub struct GoogleMatrix {
    e: StochasticMatrix,
    alpha: f64,
}

pub fn google_matrix(e: StochasticMatrix, alpha: f64) -> Result<GoogleMatrix> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidAlpha(alpha));
    }
    Ok(GoogleMatrix { e, alpha })
}

impl GoogleMatrix {
    pub fn from_graph(g: &DirectedGraph, alpha: f64) -> Result<Self> {
        google_matrix(StochasticMatrix::from_graph(g), alpha)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn stochastic(&self) -> &StochasticMatrix {
        &self.e
    }
}

impl ColumnOperator for GoogleMatrix {
    fn dim(&self) -> usize {
        self.e.dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.e.apply(x, y);
        let teleport = (1.0 - self.alpha) * x.iter().sum::<f64>() / self.dim() as f64;
        y.iter_mut().for_each(|v| *v = self.alpha * *v + teleport);
    }

    fn entry(&self, row: usize, col: usize) -> f64 {
        self.alpha * self.e.entry(row, col) + (1.0 - self.alpha) / self.dim() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerConfig {
    /// Stop once the L1 change between iterates drops below this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PowerConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 100_000,
        }
    }
}

/// How a power-method run ended.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Convergence {
    /// Converged to a nonzero vector, returned normalized.
    Converged,
    /// Converged to the zero vector (probability leaked through dangling
    /// nodes). The returned vector is left unnormalized.
    DegenerateLimit,
    /// Hit `max_iter` while cycling through `cycle`, `period` normalized states
    /// starting at the returned vector.
    Periodic { period: usize, cycle: Vec<Vec<f64>> },
    /// Hit `max_iter` without settling.
    NotConverged,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerIteration {
    pub vector: RankVector,
    pub iterations: usize,
    pub status: Convergence,
}

impl PowerIteration {
    pub fn converged(&self) -> bool {
        matches!(
            self.status,
            Convergence::Converged | Convergence::DegenerateLimit
        )
    }
}

const MAX_PERIOD: usize = 16;

const SCHUR_MAX_ITER: usize = 10_000;

fn l1(x: &[f64]) -> f64 {
    x.iter().map(|v| v.abs()).sum()
}

fn l1_diff(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum()
}

/// Iterates `I <- M I` from `i0` (rescaled to unit L1 norm) until the L1
/// change falls below `cfg.tol` or `cfg.max_iter` is reached.
///
/// When the iteration does not settle, the final iterate is probed for a
/// short limit cycle so that periodic chains are reported as such.
pub fn power_method<M: ColumnOperator + ?Sized>(
    m: &M,
    i0: &[f64],
    cfg: &PowerConfig,
) -> Result<PowerIteration> {
    let n = m.dim();
    if i0.len() != n {
        return Err(Error::DimensionMismatch {
            left: i0.len(),
            right: n,
        });
    }
    if !(cfg.tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {}",
            cfg.tol
        )));
    }
    let norm = l1(i0);
    if norm == 0.0 {
        return Err(Error::ZeroInitialVector);
    }
    let mut x: Vec<f64> = i0.iter().map(|v| v / norm).collect();
    let mut y = vec![0.0; n];
    let mut iterations = 0;
    let mut settled = false;
    while iterations < cfg.max_iter {
        m.apply(&x, &mut y);
        iterations += 1;
        let diff = l1_diff(&x, &y);
        std::mem::swap(&mut x, &mut y);
        if diff < cfg.tol {
            settled = true;
            break;
        }
    }

    let normalize = |v: &[f64]| -> Vec<f64> {
        let s: f64 = v.iter().sum();
        if s > 0.0 {
            v.iter().map(|a| a / s).collect()
        } else {
            v.to_vec()
        }
    };

    let status = if settled {
        if l1(&x) <= cfg.tol {
            return Ok(PowerIteration {
                vector: RankVector::from_raw(x),
                iterations,
                status: Convergence::DegenerateLimit,
            });
        }
        Convergence::Converged
    } else {
        detect_cycle(m, &x, cfg.tol.max(1e-9))
            .map(|cycle| Convergence::Periodic {
                period: cycle.len(),
                cycle: cycle.iter().map(|c| normalize(c)).collect(),
            })
            .unwrap_or(Convergence::NotConverged)
    };
    Ok(PowerIteration {
        vector: RankVector::from_raw(normalize(&x)),
        iterations,
        status,
    })
}

fn detect_cycle<M: ColumnOperator + ?Sized>(m: &M, x: &[f64], tol: f64) -> Option<Vec<Vec<f64>>> {
    let mut states = vec![x.to_vec()];
    let mut next = vec![0.0; x.len()];
    for _ in 1..=MAX_PERIOD {
        m.apply(states.last().unwrap(), &mut next);
        if states.len() >= 2 && l1_diff(&next, x) < tol {
            return Some(states);
        }
        states.push(next.clone());
    }
    None
}

/// Stationary distribution of the Google matrix of `g`.
pub fn classical_pagerank(g: &DirectedGraph, alpha: f64) -> Result<RankVector> {
    Ok(classical_pagerank_with(g, alpha, &PowerConfig::default())?.vector)
}

pub fn classical_pagerank_with(
    g: &DirectedGraph,
    alpha: f64,
    cfg: &PowerConfig,
) -> Result<PowerIteration> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidAlpha(alpha));
    }
    let gm = GoogleMatrix::from_graph(g, alpha)?;
    let n = g.node_count();
    power_method(&gm, &vec![1.0 / n as f64; n], cfg)
}

fn spectrum(m: DMatrix<f64>) -> Option<Vec<Complex64>> {
    let eig = nalgebra::Schur::try_new(m, f64::EPSILON, SCHUR_MAX_ITER)?.complex_eigenvalues();
    eig.iter()
        .all(|z| z.re.is_finite() && z.im.is_finite())
        .then(|| eig.iter().copied().collect())
}

/// `|lambda_2|`: the largest eigenvalue modulus once the eigenvalue closest to
/// 1 is set aside. Uses the full dense spectrum.
pub fn second_eigenvalue_modulus<M: ColumnOperator + ?Sized>(m: &M) -> Result<f64> {
    if m.dim() < 2 {
        return Err(Error::InvalidParameter(
            "second eigenvalue needs at least 2 nodes".into(),
        ));
    }
    let dense = m.to_dense();
    // The unshifted-restart QR iteration can stall on some matrices while
    // converging on the transpose, which has the same spectrum.
    let eig = spectrum(dense.clone())
        .or_else(|| spectrum(dense.transpose()))
        .ok_or(Error::EigenFailure)?;
    let lead = eig
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - 1.0).norm().total_cmp(&(b.1 - 1.0).norm()))
        .map(|(k, _)| k)
        .expect("at least two eigenvalues");
    Ok(eig
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != lead)
        .map(|(_, z)| z.norm())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{benchmark_graph, Benchmark};

    fn dense(m: &impl ColumnOperator) -> Vec<Vec<f64>> {
        let d = m.to_dense();
        (0..d.nrows())
            .map(|i| d.row(i).iter().copied().collect())
            .collect()
    }

    #[test]
    fn two_node_web_matrices() {
        let g = benchmark_graph(Benchmark::Fig1a);
        let h = hyperlink_matrix(&g);
        assert_eq!(dense(&h), vec![vec![0.0, 0.0], vec![1.0, 0.0]]);
        assert_eq!(h.dangling(), &[false, true]);
        let e = patch_dangling(&h);
        assert_eq!(dense(&e), vec![vec![0.0, 0.5], vec![1.0, 0.5]]);
        let gm = google_matrix(e, 0.85).unwrap();
        let d = dense(&gm);
        let want = [[0.075, 0.5], [0.925, 0.5]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((d[i][j] - want[i][j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn fig1d_hyperlink_equals_printed_e() {
        let h = hyperlink_matrix(&benchmark_graph(Benchmark::Fig1d));
        let third = 1.0 / 3.0;
        let want = [
            [0.0, 0.5, 0.0, 0.0],
            [third, 0.0, 0.0, 0.0],
            [third, 0.0, 0.0, 1.0],
            [third, 0.5, 1.0, 0.0],
        ];
        let d = dense(&h);
        for i in 0..4 {
            for j in 0..4 {
                assert!((d[i][j] - want[i][j]).abs() < 1e-15);
            }
        }
        assert_eq!(patch_dangling(&h).to_dense(), h.to_dense());
    }

    #[test]
    fn single_node() {
        let g = DirectedGraph::new(1, []).unwrap();
        let h = hyperlink_matrix(&g);
        assert_eq!(dense(&h), vec![vec![0.0]]);
        assert!(h.is_dangling(0));
        assert_eq!(dense(&patch_dangling(&h)), vec![vec![1.0]]);
    }

    #[test]
    fn damping_extremes() {
        let e = StochasticMatrix::from_graph(&benchmark_graph(Benchmark::Fig1d));
        let g1 = google_matrix(e.clone(), 1.0).unwrap();
        assert_eq!(g1.to_dense(), e.to_dense());
        let g0 = google_matrix(e.clone(), 0.0).unwrap();
        assert!(g0.to_dense().iter().all(|v| (*v - 0.25).abs() < 1e-15));
        assert_eq!(google_matrix(e.clone(), 1.5), Err(Error::InvalidAlpha(1.5)));
        assert_eq!(google_matrix(e, -0.1), Err(Error::InvalidAlpha(-0.1)));
    }

    #[test]
    fn matvec_matches_dense() {
        let g = benchmark_graph(Benchmark::Fig2b);
        let gm = GoogleMatrix::from_graph(&g, 0.7).unwrap();
        let x: Vec<f64> = (0..7).map(|i| (i as f64 + 1.0) / 28.0).collect();
        let mut y = vec![0.0; 7];
        gm.apply(&x, &mut y);
        let yd = gm.to_dense() * nalgebra::DVector::from_vec(x);
        for i in 0..7 {
            assert!((y[i] - yd[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn from_dense_validates() {
        let bad = DMatrix::from_row_slice(2, 2, &[0.5, 0.5, 0.6, 0.5]);
        assert!(matches!(
            StochasticMatrix::from_dense(&bad),
            Err(Error::NotStochastic { column: 0, .. })
        ));
        let good = DMatrix::from_row_slice(2, 2, &[0.0, 0.5, 1.0, 0.5]);
        let e = StochasticMatrix::from_dense(&good).unwrap();
        assert_eq!(e.to_dense(), good);
    }

    #[test]
    fn bare_hyperlink_leaks_to_zero() {
        let h = hyperlink_matrix(&benchmark_graph(Benchmark::Fig1a));
        let r = power_method(&h, &[1.0, 0.0], &PowerConfig::default()).unwrap();
        assert_eq!(r.status, Convergence::DegenerateLimit);
        assert!(r.converged());
        assert_eq!(r.vector.values(), &[0.0, 0.0]);
    }

    #[test]
    fn zero_initial_vector_is_an_error() {
        let h = hyperlink_matrix(&benchmark_graph(Benchmark::Fig1a));
        assert_eq!(
            power_method(&h, &[0.0, 0.0], &PowerConfig::default()),
            Err(Error::ZeroInitialVector)
        );
    }

    #[test]
    fn four_cycle_does_not_converge() {
        let e = StochasticMatrix::from_graph(&benchmark_graph(Benchmark::Fig1c));
        let cfg = PowerConfig {
            tol: 1e-12,
            max_iter: 1000,
        };
        let r = power_method(&e, &[1.0, 0.0, 0.0, 0.0], &cfg).unwrap();
        assert!(!r.converged());
        assert_eq!(r.iterations, 1000);
        match r.status {
            Convergence::Periodic { period, .. } => assert_eq!(period, 4),
            other => panic!("expected a 4-cycle, got {other:?}"),
        }
    }

    #[test]
    fn complete_digraph_is_uniform() {
        let k3 = DirectedGraph::new(3, [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]).unwrap();
        for alpha in [0.0, 0.5, 0.85] {
            let r = classical_pagerank(&k3, alpha).unwrap();
            for v in r.values() {
                assert!((v - 1.0 / 3.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pagerank_rejects_alpha_one() {
        let g = benchmark_graph(Benchmark::Fig1a);
        assert_eq!(classical_pagerank(&g, 1.0), Err(Error::InvalidAlpha(1.0)));
    }

    #[test]
    fn second_eigenvalue_cases() {
        let e = StochasticMatrix::from_graph(&benchmark_graph(Benchmark::Fig1c));
        let g1 = google_matrix(e.clone(), 1.0).unwrap();
        assert!((second_eigenvalue_modulus(&g1).unwrap() - 1.0).abs() < 1e-12);
        let g0 = google_matrix(e, 0.0).unwrap();
        assert!(second_eigenvalue_modulus(&g0).unwrap() < 1e-12);
        let single = GoogleMatrix::from_graph(&DirectedGraph::new(1, []).unwrap(), 0.85).unwrap();
        assert!(second_eigenvalue_modulus(&single).is_err());
    }
}
