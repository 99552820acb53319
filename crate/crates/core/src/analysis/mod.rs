//! Ranking analyses: localization, damping stability, power-law scaling,
//! degeneracy and attack sensitivity.

mod attack;
mod metrics;
mod scaling;
mod sweep;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use attack::{attack_sensitivity, AttackReport};
pub use metrics::{
    average_ranks, default_fit_range, degeneracy_profile, fidelity, ipr, power_law_fit,
    rank_correlation, rank_positions, DegeneracyProfile, PowerLawFit, DEFAULT_FIT_FRACTION,
    TIE_TOL,
};
pub use scaling::{ipr_scaling, ipr_scaling_of, IprPoint, IprScaling, LOCALIZATION_SLOPE};
pub use sweep::{damping_sweep, damping_sweep_of, parse_grid, FidelitySweep};

use crate::classical::classical_pagerank;
use crate::error::Result;
use crate::graph::DirectedGraph;
use crate::quantum::{quantum_pagerank, QuantumBackend};
use crate::rank::RankVector;

/// The ranking algorithm an analysis runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Ranker {
    Classical,
    /// Time-averaged quantum PageRank over `steps` two-steps.
    Quantum {
        steps: usize,
        backend: QuantumBackend,
    },
}

impl Ranker {
    pub fn quantum(steps: usize) -> Self {
        Self::Quantum {
            steps,
            backend: QuantumBackend::Auto,
        }
    }

    pub fn rank(&self, g: &DirectedGraph, alpha: f64) -> Result<RankVector> {
        match *self {
            Self::Classical => classical_pagerank(g, alpha),
            Self::Quantum { steps, backend } => {
                Ok(quantum_pagerank(g, alpha, steps, backend)?.average)
            }
        }
    }

    pub fn steps(&self) -> Option<usize> {
        match *self {
            Self::Classical => None,
            Self::Quantum { steps, .. } => Some(steps),
        }
    }
}

impl fmt::Display for Ranker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Classical => f.write_str("classical"),
            Self::Quantum { .. } => f.write_str("quantum"),
        }
    }
}

/// Where a result came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// [`DirectedGraph::content_hash`] of the input.
    pub graph_hash: String,
    pub seed: Option<u64>,
    pub alpha: f64,
    /// Averaging window of the quantum ranker, absent for classical runs.
    pub steps: Option<usize>,
    pub ranker: String,
}

impl Provenance {
    pub fn new(g: &DirectedGraph, ranker: &Ranker, alpha: f64, seed: Option<u64>) -> Self {
        Self {
            graph_hash: g.content_hash(),
            seed,
            alpha,
            steps: ranker.steps(),
            ranker: ranker.to_string(),
        }
    }
}

/// A result serialized together with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reported<T> {
    #[serde(flatten)]
    pub result: T,
    pub provenance: Provenance,
}

/// Localization, scaling and degeneracy figures of one ranking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingSummary {
    pub ipr: f64,
    /// Absent when the ranking has too few positive scores to fit.
    pub power_law: Option<PowerLawFit>,
    pub degeneracy: DegeneracyProfile,
    /// Largest minus smallest score.
    pub spread: f64,
}

pub fn summarize(p: &RankVector, delta: f64) -> Result<RankingSummary> {
    Ok(RankingSummary {
        ipr: ipr(p)?,
        power_law: power_law_fit(p, None).ok(),
        degeneracy: degeneracy_profile(p, delta)?,
        spread: p.spread(),
    })
}
