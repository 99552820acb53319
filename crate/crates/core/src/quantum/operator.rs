use nalgebra::DMatrix;

use crate::classical::{ColumnOperator, GoogleMatrix, STOCHASTIC_TOL};
use crate::error::{Error, Result};

/// Szegedy lifting of a column-stochastic matrix `G`.
///
/// `|psi_j> = |j>_1 (x) sum_k sqrt(G_kj) |k>_2`. The operator keeps `G`, its
/// entrywise square root and the discriminant `D_jk = sqrt(G_jk G_kj)`, which
/// is the overlap `<psi_j| S |psi_k>`.
#[derive(Debug, Clone)]
pub struct SzegedyOperator {
    n: usize,
    /// Row-major `G_ij`.
    g: Vec<f64>,
    /// Row-major `sqrt(G_ij)`.
    sqrt_g: Vec<f64>,
    /// Row-major discriminant, symmetric.
    disc: Vec<f64>,
}

impl SzegedyOperator {
    pub fn new(g: &GoogleMatrix) -> Result<Self> {
        Self::from_dense(&g.to_dense())
    }

    /// Lifts an arbitrary dense matrix after checking it is column-stochastic.
    pub fn from_dense(m: &DMatrix<f64>) -> Result<Self> {
        let n = m.nrows();
        if n == 0 || m.ncols() != n {
            return Err(Error::DimensionMismatch {
                left: m.nrows(),
                right: m.ncols(),
            });
        }
        for j in 0..n {
            let col = m.column(j);
            let sum: f64 = col.iter().sum();
            if col.iter().any(|v| !(*v >= 0.0)) || (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::NotStochastic { column: j, sum });
            }
        }
        let g: Vec<f64> = (0..n * n).map(|k| m[(k / n, k % n)]).collect();
        let sqrt_g: Vec<f64> = g.iter().map(|v| v.sqrt()).collect();
        let mut disc = vec![0.0; n * n];
        for j in 0..n {
            for k in 0..n {
                disc[j * n + k] = sqrt_g[j * n + k] * sqrt_g[k * n + j];
            }
        }
        Ok(Self { n, g, sqrt_g, disc })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// `G_ij`.
    pub fn transition(&self, i: usize, j: usize) -> f64 {
        self.g[i * self.n + j]
    }

    /// Amplitude of `|psi_j>` on `|j>_1 |k>_2`, i.e. `sqrt(G_kj)`.
    pub fn psi_amplitude(&self, j: usize, k: usize) -> f64 {
        self.sqrt_g[k * self.n + j]
    }

    pub(crate) fn g_row(&self, i: usize) -> &[f64] {
        &self.g[i * self.n..(i + 1) * self.n]
    }

    pub(crate) fn sqrt_g(&self) -> &[f64] {
        &self.sqrt_g
    }

    pub fn discriminant(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.n, self.n, &self.disc)
    }

    /// Largest deviation of the Gram matrix of `{psi_j}` from the identity.
    ///
    /// The vectors have disjoint first-register support, so off-diagonal
    /// overlaps vanish identically and only the norms can deviate.
    pub fn gram_deviation(&self) -> f64 {
        (0..self.n)
            .map(|j| {
                let norm: f64 = (0..self.n).map(|k| self.psi_amplitude(j, k).powi(2)).sum();
                (norm - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }
}
