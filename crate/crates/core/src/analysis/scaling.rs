use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::least_squares;
use super::{ipr, Ranker};
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::rank::RankVector;

/// Log-log slope of mean IPR against `N` below which the walker is
/// considered localized.
pub const LOCALIZATION_SLOPE: f64 = 0.9;

const MIN_SIZES: usize = 3;
const MIN_INSTANCES: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IprPoint {
    pub nodes: usize,
    pub instances: usize,
    pub mean: f64,
    /// Sample standard deviation.
    pub std_dev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IprScaling {
    pub points: Vec<IprPoint>,
    /// Least-squares slope of `ln(mean IPR)` against `ln N`.
    pub slope: f64,
    pub localized: bool,
}

/// Mean IPR per network size for the given ranker.
///
/// `ensembles[s]` holds the instances of one size; all graphs in it must
/// have the same node count.
pub fn ipr_scaling(
    ensembles: &[Vec<DirectedGraph>],
    ranker: &Ranker,
    alpha: f64,
) -> Result<IprScaling> {
    let samples = ensembles
        .iter()
        .map(|graphs| {
            let nodes = graphs.first().ok_or(Error::EmptyEnsemble)?.node_count();
            if let Some(g) = graphs.iter().find(|g| g.node_count() != nodes) {
                return Err(Error::DimensionMismatch {
                    left: g.node_count(),
                    right: nodes,
                });
            }
            let ranks = graphs
                .par_iter()
                .map(|g| ranker.rank(g, alpha))
                .collect::<Result<Vec<_>>>()?;
            Ok((nodes, ranks))
        })
        .collect::<Result<Vec<_>>>()?;
    ipr_scaling_of(&samples)
}

/// As [`ipr_scaling`] for rank vectors computed elsewhere, given as
/// `(N, instances)` pairs.
pub fn ipr_scaling_of(samples: &[(usize, Vec<RankVector>)]) -> Result<IprScaling> {
    if samples.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    if samples.len() < MIN_SIZES {
        return Err(Error::TooFewValues {
            needed: MIN_SIZES,
            found: samples.len(),
        });
    }
    let mut points = Vec::with_capacity(samples.len());
    for (nodes, ranks) in samples {
        if ranks.is_empty() {
            return Err(Error::EmptyEnsemble);
        }
        if ranks.len() < MIN_INSTANCES {
            return Err(Error::TooFewValues {
                needed: MIN_INSTANCES,
                found: ranks.len(),
            });
        }
        let values = ranks.iter().map(ipr).collect::<Result<Vec<_>>>()?;
        let k = values.len() as f64;
        let mean = values.iter().sum::<f64>() / k;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
        points.push(IprPoint {
            nodes: *nodes,
            instances: values.len(),
            mean,
            std_dev: var.sqrt(),
        });
    }
    let xs: Vec<f64> = points.iter().map(|p| (p.nodes as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.mean.ln()).collect();
    let (slope, _, _) = least_squares(&xs, &ys);
    Ok(IprScaling {
        points,
        slope,
        localized: slope < LOCALIZATION_SLOPE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_control_scales_linearly() {
        let samples: Vec<_> = [32, 64, 128, 256]
            .iter()
            .map(|&n| (n, vec![RankVector::uniform(n); 5]))
            .collect();
        let s = ipr_scaling_of(&samples).unwrap();
        assert!((s.slope - 1.0).abs() < 1e-6);
        assert!(!s.localized);
        for p in &s.points {
            assert!((p.mean - p.nodes as f64).abs() < 1e-9);
            assert!(p.std_dev < 1e-9);
        }
    }

    #[test]
    fn ensemble_size_requirements() {
        assert!(matches!(ipr_scaling_of(&[]), Err(Error::EmptyEnsemble)));
        let two: Vec<_> = [4, 8]
            .iter()
            .map(|&n| (n, vec![RankVector::uniform(n); 5]))
            .collect();
        assert!(ipr_scaling_of(&two).is_err());
        let thin: Vec<_> = [4, 8, 16]
            .iter()
            .map(|&n| (n, vec![RankVector::uniform(n); 4]))
            .collect();
        assert!(ipr_scaling_of(&thin).is_err());
        let empty = vec![(4, vec![]), (8, vec![]), (16, vec![])];
        assert!(matches!(ipr_scaling_of(&empty), Err(Error::EmptyEnsemble)));
    }
}
