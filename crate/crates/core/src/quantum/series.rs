use serde::{Deserialize, Serialize};

use super::{SzegedyOperator, WalkState};
use crate::error::{Error, Result};
use crate::rank::RankVector;

/// Instantaneous quantum PageRanks for `m = offset .. offset + steps` and
/// their time average.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumRankSeries {
    /// Index of the first recorded two-step.
    pub offset: usize,
    /// `instantaneous[r]` is `I_q(., offset + r)`.
    pub instantaneous: Vec<Vec<f64>>,
    pub average: RankVector,
}

impl QuantumRankSeries {
    pub(crate) fn from_rows(offset: usize, rows: Vec<Vec<f64>>) -> Self {
        let n = rows.first().map_or(0, Vec::len);
        let mut avg = vec![0.0; n];
        for row in &rows {
            for (a, v) in avg.iter_mut().zip(row) {
                *a += v;
            }
        }
        let m = rows.len() as f64;
        avg.iter_mut().for_each(|a| *a /= m);
        Self {
            offset,
            instantaneous: rows,
            average: RankVector::from_raw(avg),
        }
    }

    pub fn steps(&self) -> usize {
        self.instantaneous.len()
    }

    pub fn node_count(&self) -> usize {
        self.average.len()
    }

    /// Largest instantaneous value reached by `node`.
    pub fn peak(&self, node: usize) -> f64 {
        self.instantaneous
            .iter()
            .map(|r| r[node])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest `|sum_i I_q(i, m) - 1|` over the recorded rows.
    pub fn normalization_error(&self) -> f64 {
        self.instantaneous
            .iter()
            .map(|r| (r.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Max-norm change between the average over the first half of the
    /// window and the average over the whole window.
    pub fn average_drift(&self) -> f64 {
        let half = self.steps() / 2;
        if half == 0 {
            return 0.0;
        }
        let first = Self::from_rows(self.offset, self.instantaneous[..half].to_vec());
        first
            .average
            .values()
            .iter()
            .zip(self.average.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn check_steps(steps: usize) -> Result<()> {
    if steps == 0 {
        Err(Error::InvalidParameter(
            "number of steps must be positive".into(),
        ))
    } else {
        Ok(())
    }
}

/// Evolves `|psi_0>` under `U^2` by direct iteration on the `N^2` pair space,
/// recording `I_q(., m)` for `m = 0 .. steps`.
pub fn evolve(op: &SzegedyOperator, steps: usize) -> Result<QuantumRankSeries> {
    evolve_window(op, 0, steps)
}

/// As [`evolve`] but records `m = offset .. offset + steps`.
pub fn evolve_window(
    op: &SzegedyOperator,
    offset: usize,
    steps: usize,
) -> Result<QuantumRankSeries> {
    check_steps(steps)?;
    let mut state = WalkState::initial(op);
    for _ in 0..offset {
        state.two_step(op);
    }
    let mut rows = Vec::with_capacity(steps);
    for m in 0..steps {
        rows.push(state.instantaneous_qpr().into_values());
        if m + 1 < steps {
            state.two_step(op);
        }
    }
    Ok(QuantumRankSeries::from_rows(offset, rows))
}
