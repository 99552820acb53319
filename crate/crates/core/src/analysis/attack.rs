use serde::{Deserialize, Serialize};

use super::{average_ranks, rank_correlation, rank_positions, Ranker};
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::rank::RankVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackReport {
    /// Removed nodes, most important first, as indices of the full graph.
    pub removed: Vec<usize>,
    /// `survivors[r]` is the full-graph index of reduced-graph node `r`.
    pub survivors: Vec<usize>,
    /// Full-graph scores restricted to the survivors.
    pub pre_ranking: RankVector,
    /// Scores on the reduced graph.
    pub post_ranking: RankVector,
    /// Kendall tau-b between the two survivor orderings.
    pub rank_correlation: f64,
    /// Mean absolute change of tie-averaged rank position.
    pub mean_displacement: f64,
    pub max_displacement: f64,
}

/// Removes the top `k` nodes of `g` under `ranker`, re-ranks the rest and
/// compares how the survivors are ordered before and after.
pub fn attack_sensitivity(
    g: &DirectedGraph,
    k: usize,
    ranker: &Ranker,
    alpha: f64,
) -> Result<AttackReport> {
    let n = g.node_count();
    if k >= n {
        return Err(Error::InvalidParameter(format!(
            "cannot remove {k} of {n} nodes"
        )));
    }
    let full = ranker.rank(g, alpha)?;
    let positions = rank_positions(&full);
    let mut removed: Vec<usize> = (0..n).filter(|&i| positions[i] <= k).collect();
    removed.sort_by_key(|&i| positions[i]);
    let reduced = g.remove_nodes(&removed)?;
    let post = ranker.rank(&reduced.graph, alpha)?;
    let pre = full.restrict(&reduced.original_index);

    let before = average_ranks(&pre);
    let after = average_ranks(&post);
    let shifts: Vec<f64> = before
        .iter()
        .zip(&after)
        .map(|(a, b)| (a - b).abs())
        .collect();
    Ok(AttackReport {
        removed,
        survivors: reduced.original_index,
        rank_correlation: rank_correlation(&pre, &post)?,
        mean_displacement: shifts.iter().sum::<f64>() / shifts.len() as f64,
        max_displacement: shifts.iter().copied().fold(0.0, f64::max),
        pre_ranking: pre,
        post_ranking: post,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{benchmark_graph, Benchmark};

    fn complete(n: usize) -> DirectedGraph {
        let arcs = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)));
        DirectedGraph::new(n, arcs).unwrap()
    }

    #[test]
    fn no_attack_is_identity() {
        let g = benchmark_graph(Benchmark::Fig2b);
        for ranker in [Ranker::Classical, Ranker::quantum(128)] {
            let r = attack_sensitivity(&g, 0, &ranker, 0.85).unwrap();
            assert!(r.removed.is_empty());
            assert_eq!(r.rank_correlation, 1.0);
            assert_eq!(r.mean_displacement, 0.0);
            assert_eq!(r.pre_ranking, r.post_ranking);
        }
    }

    #[test]
    fn complete_graph_stays_tied() {
        let g = complete(5);
        for ranker in [Ranker::Classical, Ranker::quantum(128)] {
            let r = attack_sensitivity(&g, 1, &ranker, 0.85).unwrap();
            assert_eq!(r.removed, vec![0]);
            assert_eq!(r.survivors, vec![1, 2, 3, 4]);
            assert_eq!(r.rank_correlation, 1.0);
        }
    }

    #[test]
    fn removing_everything_is_rejected() {
        let g = benchmark_graph(Benchmark::Fig1c);
        assert!(attack_sensitivity(&g, 4, &Ranker::Classical, 0.85).is_err());
    }
}
