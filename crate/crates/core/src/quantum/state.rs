use num_complex::Complex64;

use super::SzegedyOperator;
use crate::error::{Error, Result};
use crate::rank::RankVector;

/// A state of the walk on ordered node pairs.
///
/// The amplitude of `|i>_1 |j>_2` lives at index `i * N + j`. Register 2 is
/// the position register that gets measured.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    n: usize,
    amps: Vec<Complex64>,
}

impl WalkState {
    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != n * n {
            return Err(Error::DimensionMismatch {
                left: amps.len(),
                right: n * n,
            });
        }
        Ok(Self { n, amps })
    }

    /// `|i>_1 |j>_2`.
    pub fn basis(n: usize, i: usize, j: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); n * n];
        amps[i * n + j] = Complex64::new(1.0, 0.0);
        Self { n, amps }
    }

    /// `|psi_j>`.
    pub fn psi(op: &SzegedyOperator, j: usize) -> Self {
        let n = op.node_count();
        let mut amps = vec![Complex64::new(0.0, 0.0); n * n];
        for k in 0..n {
            amps[j * n + k] = Complex64::new(op.psi_amplitude(j, k), 0.0);
        }
        Self { n, amps }
    }

    /// `|psi_0> = N^{-1/2} sum_j |psi_j>`.
    pub fn initial(op: &SzegedyOperator) -> Self {
        let n = op.node_count();
        let scale = 1.0 / (n as f64).sqrt();
        let amps = (0..n * n)
            .map(|idx| {
                let (j, k) = (idx / n, idx % n);
                Complex64::new(op.psi_amplitude(j, k) * scale, 0.0)
            })
            .collect();
        Self { n, amps }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, first: usize, second: usize) -> Complex64 {
        self.amps[first * self.n + second]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Applies `2 Pi - 1`, the reflection about `span{psi_j}`.
    pub fn reflect(&mut self, op: &SzegedyOperator) {
        let n = self.n;
        let sqrt_g = op.sqrt_g();
        for j in 0..n {
            let row = &mut self.amps[j * n..(j + 1) * n];
            // <psi_j|state>; psi_j is real.
            let c: Complex64 = (0..n).map(|k| row[k] * sqrt_g[k * n + j]).sum();
            let c2 = c * 2.0;
            for (k, a) in row.iter_mut().enumerate() {
                *a = c2 * sqrt_g[k * n + j] - *a;
            }
        }
    }

    /// Applies the register swap `S |i, j> = |j, i>`.
    pub fn swap_registers(&mut self) {
        let n = self.n;
        for i in 0..n {
            for j in (i + 1)..n {
                self.amps.swap(i * n + j, j * n + i);
            }
        }
    }

    /// Applies the single step `U = S (2 Pi - 1)`.
    pub fn step(&mut self, op: &SzegedyOperator) {
        self.reflect(op);
        self.swap_registers();
    }

    /// Applies `U^2`.
    pub fn two_step(&mut self, op: &SzegedyOperator) {
        self.step(op);
        self.step(op);
    }

    /// `I_q(i) = sum_j |<j, i|state>|^2`, the distribution of register 2.
    pub fn instantaneous_qpr(&self) -> RankVector {
        let n = self.n;
        let mut p = vec![0.0; n];
        for row in self.amps.chunks_exact(n) {
            for (pi, a) in p.iter_mut().zip(row) {
                *pi += a.norm_sqr();
            }
        }
        RankVector::from_raw(p)
    }
}
