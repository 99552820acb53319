//! Szegedy quantization of the Google matrix and the quantum PageRank.

mod operator;
mod series;
mod state;
mod subspace;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use operator::SzegedyOperator;
pub use series::{evolve, evolve_window, QuantumRankSeries};
pub use state::WalkState;
pub use subspace::{
    build_dynamical_subspace, evolve_spectral, evolve_spectral_window, DynamicalSubspace, RANK_TOL,
};

use crate::classical::GoogleMatrix;
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;

pub const DEFAULT_STEPS: usize = 2048;

/// Largest network for which [`QuantumBackend::Auto`] picks the spectral
/// backend.
pub const SPECTRAL_AUTO_LIMIT: usize = 256;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantumBackend {
    /// Iterates the full state on the `N^2` pair space.
    Direct,
    /// Evolves in the eigenbasis of the dynamical subspace.
    Spectral,
    #[default]
    Auto,
}

impl QuantumBackend {
    fn resolve(self, n: usize) -> Self {
        match self {
            Self::Auto if n <= SPECTRAL_AUTO_LIMIT => Self::Spectral,
            Self::Auto => Self::Direct,
            other => other,
        }
    }
}

impl FromStr for QuantumBackend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "direct" => Ok(Self::Direct),
            "spectral" => Ok(Self::Spectral),
            "auto" => Ok(Self::Auto),
            _ => Err(Error::InvalidParameter(format!("unknown backend `{s}`"))),
        }
    }
}

impl fmt::Display for QuantumBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Direct => "direct",
            Self::Spectral => "spectral",
            Self::Auto => "auto",
        })
    }
}

/// Evolves `U^2` from `|psi_0>` for `m = offset .. offset + steps` with the
/// chosen backend.
pub fn quantum_series(
    gm: &GoogleMatrix,
    offset: usize,
    steps: usize,
    backend: QuantumBackend,
) -> Result<QuantumRankSeries> {
    let op = SzegedyOperator::new(gm)?;
    match backend.resolve(op.node_count()) {
        QuantumBackend::Spectral => {
            let sub = build_dynamical_subspace(&op)?;
            evolve_spectral_window(&sub, offset, steps)
        }
        _ => evolve_window(&op, offset, steps),
    }
}

/// Time-averaged quantum PageRank over the first `steps` two-steps.
pub fn quantum_pagerank(
    g: &DirectedGraph,
    alpha: f64,
    steps: usize,
    backend: QuantumBackend,
) -> Result<QuantumRankSeries> {
    let gm = GoogleMatrix::from_graph(g, alpha)?;
    quantum_series(&gm, 0, steps, backend)
}
