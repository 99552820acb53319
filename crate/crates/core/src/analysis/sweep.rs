use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{fidelity, Ranker};
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::rank::RankVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelitySweep {
    pub alpha_grid: Vec<f64>,
    pub rank_vectors: Vec<RankVector>,
    /// `pairwise_fidelity[a][b] = F(alpha_a, alpha_b)`.
    pub pairwise_fidelity: Vec<Vec<f64>>,
    pub min_fidelity: f64,
}

/// Parses `lo:hi:count` into `count` evenly spaced values from `lo` to `hi`
/// inclusive.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidParameter(format!("grid `{spec}` is not lo:hi:count"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, count] = parts.as_slice() else {
        return Err(bad());
    };
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    let count: usize = count.trim().parse().map_err(|_| bad())?;
    if count == 0 {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi - lo) / (count - 1) as f64;
    let mut grid: Vec<f64> = (0..count).map(|k| lo + step * k as f64).collect();
    grid[count - 1] = hi;
    Ok(grid)
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty damping grid".into()));
    }
    if let Some(a) = grid.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
        return Err(Error::InvalidAlpha(*a));
    }
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter(
            "damping grid must be ascending".into(),
        ));
    }
    Ok(())
}

/// Ranks `g` at every damping value of `grid` and compares all pairs.
pub fn damping_sweep(g: &DirectedGraph, grid: &[f64], ranker: &Ranker) -> Result<FidelitySweep> {
    check_grid(grid)?;
    let vectors = grid
        .par_iter()
        .map(|&alpha| ranker.rank(g, alpha))
        .collect::<Result<Vec<_>>>()?;
    damping_sweep_of(grid, vectors)
}

/// Builds the fidelity matrix from rank vectors computed elsewhere.
pub fn damping_sweep_of(grid: &[f64], rank_vectors: Vec<RankVector>) -> Result<FidelitySweep> {
    check_grid(grid)?;
    if rank_vectors.len() != grid.len() {
        return Err(Error::DimensionMismatch {
            left: rank_vectors.len(),
            right: grid.len(),
        });
    }
    let k = grid.len();
    let mut matrix = vec![vec![1.0; k]; k];
    for a in 0..k {
        for b in (a + 1)..k {
            let f = fidelity(&rank_vectors[a], &rank_vectors[b])?;
            matrix[a][b] = f;
            matrix[b][a] = f;
        }
    }
    let min_fidelity = matrix.iter().flatten().copied().fold(1.0, f64::min);
    Ok(FidelitySweep {
        alpha_grid: grid.to_vec(),
        rank_vectors,
        pairwise_fidelity: matrix,
        min_fidelity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{benchmark_graph, Benchmark};

    #[test]
    fn grid_parsing() {
        let g = parse_grid("0.01:0.98:20").unwrap();
        assert_eq!(g.len(), 20);
        assert_eq!(g[0], 0.01);
        assert_eq!(g[19], 0.98);
        assert_eq!(parse_grid("0.5:0.5:1").unwrap(), vec![0.5]);
        assert!(parse_grid("0.1:0.9").is_err());
        assert!(parse_grid("0.1:0.9:0").is_err());
        assert!(parse_grid("a:0.9:3").is_err());
    }

    #[test]
    fn degenerate_grids_have_unit_fidelity() {
        let g = benchmark_graph(Benchmark::Fig2b);
        for grid in [vec![0.85], vec![0.85, 0.85]] {
            for ranker in [Ranker::Classical, Ranker::quantum(64)] {
                let s = damping_sweep(&g, &grid, &ranker).unwrap();
                assert!((s.min_fidelity - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sweep_matrix_is_symmetric_and_bounded() {
        let g = benchmark_graph(Benchmark::Fig2b);
        let grid = parse_grid("0.1:0.9:5").unwrap();
        let s = damping_sweep(&g, &grid, &Ranker::Classical).unwrap();
        for a in 0..5 {
            assert_eq!(s.pairwise_fidelity[a][a], 1.0);
            for b in 0..5 {
                let f = s.pairwise_fidelity[a][b];
                assert_eq!(f, s.pairwise_fidelity[b][a]);
                assert!((0.0..=1.0).contains(&f));
                assert!(f >= s.min_fidelity);
            }
        }
        assert!(s.min_fidelity < 1.0);
    }

    #[test]
    fn invalid_grids() {
        let g = benchmark_graph(Benchmark::Fig1a);
        assert!(damping_sweep(&g, &[], &Ranker::Classical).is_err());
        assert!(damping_sweep(&g, &[0.0, 0.5], &Ranker::Classical).is_err());
        assert!(damping_sweep(&g, &[0.5, 1.0], &Ranker::Classical).is_err());
        assert!(damping_sweep(&g, &[0.6, 0.5], &Ranker::Classical).is_err());
    }
}
