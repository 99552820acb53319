//! The invariant subspace `span{psi_j} + span{S psi_j}` and a spectral
//! evolution backend on it.
//!
//! Write a vector of the subspace in frame coordinates `(a, b)`, meaning
//! `sum_j a_j |psi_j> + b_j S|psi_j>`. The Gram matrix of the frame is
//! `[[1, D], [D, 1]]` with `D` the discriminant, and one step `U` maps
//! `(a, b)` to `(-b, a + 2 D b)`. For an eigenpair `D v = mu v` the two
//! vectors `(v, +v)` and `(v, -v)` are orthogonal with squared norms
//! `2 (1 + mu)` and `2 (1 - mu)`, and `U` acts on the normalized pair as the
//! rotation `[[mu, s], [-s, mu]]`, `s = sqrt(1 - mu^2)`. The basis and the
//! eigendecomposition of the restricted `U^2` therefore follow from the
//! symmetric eigenproblem of `D` without any non-Hermitian solver.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use super::series::check_steps;
use super::{QuantumRankSeries, SzegedyOperator, WalkState};
use crate::error::{Error, Result};

/// Frame vectors whose half squared norm `1 +- mu` falls below this are
/// treated as linearly dependent and dropped.
pub const RANK_TOL: f64 = 1e-10;

const ORTHO_TOL: f64 = 1e-10;

/// Largest accepted `|D q - mu q|` after re-orthonormalization.
const EIGEN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Parity {
    /// `(v, v) / sqrt(2 (1 + mu))`
    Plus,
    /// `(v, -v) / sqrt(2 (1 - mu))`
    Minus,
}

#[derive(Debug, Clone, Copy)]
struct BasisVector {
    mode: usize,
    parity: Parity,
}

/// One eigenvector of the restricted `U^2`, stored through its frame
/// coordinates `(coef_a v_mode, coef_b v_mode)`.
#[derive(Debug, Clone, Copy)]
struct EigenComponent {
    mode: usize,
    eigenvalue: Complex64,
    /// Eigenphase of `U^2`.
    phase: f64,
    /// `<e | psi_0>`.
    weight: Complex64,
    coef_a: Complex64,
    coef_b: Complex64,
}

#[derive(Debug, Clone)]
pub struct DynamicalSubspace {
    op: SzegedyOperator,
    /// Eigenvalues of the discriminant, clamped to `[-1, 1]`.
    mu: Vec<f64>,
    /// Row-major eigenvectors of the discriminant, `vecs[i * n + k] = (v_k)_i`.
    vecs: Vec<f64>,
    basis: Vec<BasisVector>,
    components: Vec<EigenComponent>,
    /// Squared norm of `psi_0` missing from the subspace.
    initial_residual: f64,
}

fn deviation_from_identity(v: &DMatrix<f64>) -> f64 {
    let n = v.ncols();
    (v.transpose() * v - DMatrix::identity(n, n)).amax()
}

/// The symmetric solver can return eigenvectors that drift off orthogonal
/// inside a large cluster of near-zero eigenvalues. Any orthonormal basis of
/// a cluster is as good as another, so re-orthonormalize and accept the
/// result if it still diagonalizes the discriminant.
fn orthonormal_eigenvectors(
    d: &DMatrix<f64>,
    v: DMatrix<f64>,
    values: DVector<f64>,
) -> Result<(DMatrix<f64>, DVector<f64>)> {
    let deviation = deviation_from_identity(&v);
    if deviation <= ORTHO_TOL {
        return Ok((v, values));
    }
    let n = v.ncols();
    let mut q = v.clone().qr().q();
    for k in 0..n {
        if q.column(k).dot(&v.column(k)) < 0.0 {
            q.column_mut(k).neg_mut();
        }
    }
    let dq = d * &q;
    let values = DVector::from_fn(n, |k, _| q.column(k).dot(&dq.column(k)));
    let mut residual: f64 = 0.0;
    for k in 0..n {
        residual = residual.max((dq.column(k) - q.column(k) * values[k]).amax());
    }
    if residual > EIGEN_TOL || deviation_from_identity(&q) > ORTHO_TOL {
        return Err(Error::LossOfOrthogonality(deviation));
    }
    Ok((q, values))
}

/// Builds the orthonormal basis of the dynamical subspace and the
/// eigendecomposition of `U^2` restricted to it.
pub fn build_dynamical_subspace(op: &SzegedyOperator) -> Result<DynamicalSubspace> {
    let n = op.node_count();
    let d = op.discriminant();
    let eig = SymmetricEigen::try_new(d.clone(), f64::EPSILON, 0).ok_or(Error::EigenFailure)?;

    let (v, values) = orthonormal_eigenvectors(&d, eig.eigenvectors, eig.eigenvalues)?;

    let mut vecs = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            vecs[i * n + k] = v[(i, k)];
        }
    }
    let mu: Vec<f64> = values.iter().map(|m| m.clamp(-1.0, 1.0)).collect();

    let inv_sqrt_n = 1.0 / (n as f64).sqrt();
    let mut basis = Vec::with_capacity(2 * n);
    let mut components = Vec::with_capacity(2 * n);
    let mut captured = 0.0;
    let i = Complex64::i();
    let frac = std::f64::consts::FRAC_1_SQRT_2;

    for (k, &m) in mu.iter().enumerate() {
        let plus = 1.0 + m;
        let minus = 1.0 - m;
        let keep_plus = plus > RANK_TOL;
        let keep_minus = minus > RANK_TOL;
        let column_sum: f64 = (0..n).map(|r| vecs[r * n + k]).sum();
        // <b+-|psi_0> = sqrt((1 +- mu) / 2) (v . 1) / sqrt(N)
        let beta_plus = (plus.max(0.0) / 2.0).sqrt() * column_sum * inv_sqrt_n;
        let beta_minus = (minus.max(0.0) / 2.0).sqrt() * column_sum * inv_sqrt_n;
        let inv_plus = 1.0 / (2.0 * plus).sqrt();
        let inv_minus = 1.0 / (2.0 * minus).sqrt();

        if keep_plus {
            basis.push(BasisVector {
                mode: k,
                parity: Parity::Plus,
            });
            captured += beta_plus * beta_plus;
        }
        if keep_minus {
            basis.push(BasisVector {
                mode: k,
                parity: Parity::Minus,
            });
            captured += beta_minus * beta_minus;
        }

        match (keep_plus, keep_minus) {
            (true, true) => {
                // U (b+ +- i b-) = e^{+-i theta} (b+ +- i b-)
                let theta = (plus * minus).sqrt().atan2(m);
                for sign in [1.0, -1.0] {
                    let phase = 2.0 * theta * sign;
                    components.push(EigenComponent {
                        mode: k,
                        eigenvalue: Complex64::from_polar(1.0, phase),
                        phase,
                        weight: (beta_plus - i * sign * beta_minus) * frac,
                        coef_a: (inv_plus + i * sign * inv_minus) * frac,
                        coef_b: (inv_plus - i * sign * inv_minus) * frac,
                    });
                }
            }
            (true, false) => components.push(EigenComponent {
                mode: k,
                eigenvalue: Complex64::new(1.0, 0.0),
                phase: 0.0,
                weight: beta_plus.into(),
                coef_a: inv_plus.into(),
                coef_b: inv_plus.into(),
            }),
            (false, true) => components.push(EigenComponent {
                mode: k,
                eigenvalue: Complex64::new(1.0, 0.0),
                phase: 0.0,
                weight: beta_minus.into(),
                coef_a: inv_minus.into(),
                coef_b: (-inv_minus).into(),
            }),
            (false, false) => unreachable!("1 + mu and 1 - mu sum to 2"),
        }
    }

    Ok(DynamicalSubspace {
        op: op.clone(),
        mu,
        vecs,
        basis,
        components,
        initial_residual: (1.0 - captured).abs(),
    })
}

impl DynamicalSubspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn node_count(&self) -> usize {
        self.op.node_count()
    }

    pub fn operator(&self) -> &SzegedyOperator {
        &self.op
    }

    /// Eigenvalues of `U^2` on the subspace, one per dimension.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.components.iter().map(|c| c.eigenvalue).collect()
    }

    /// `1 - ||P psi_0||^2` where `P` projects onto the subspace.
    pub fn initial_residual(&self) -> f64 {
        self.initial_residual
    }

    /// Matrix of `U^2` in the orthonormal basis: 2x2 rotations by twice the
    /// Szegedy angle, and `1` for unpaired vectors.
    pub fn restricted_two_step(&self) -> DMatrix<f64> {
        let d = self.dim();
        let mut w = DMatrix::zeros(d, d);
        let mut idx = 0;
        while idx < d {
            let b = self.basis[idx];
            let paired = idx + 1 < d && self.basis[idx + 1].mode == b.mode;
            if paired {
                let m = self.mu[b.mode];
                let s = ((1.0 + m) * (1.0 - m)).sqrt();
                // [[m, s], [-s, m]]^2
                let c2 = m * m - s * s;
                let s2 = 2.0 * m * s;
                w[(idx, idx)] = c2;
                w[(idx, idx + 1)] = s2;
                w[(idx + 1, idx)] = -s2;
                w[(idx + 1, idx + 1)] = c2;
                idx += 2;
            } else {
                w[(idx, idx)] = 1.0;
                idx += 1;
            }
        }
        w
    }

    /// Frame coordinates `(a, b)` of basis vector `d`.
    fn basis_frame(&self, d: usize) -> (Vec<f64>, Vec<f64>) {
        let n = self.node_count();
        let b = self.basis[d];
        let m = self.mu[b.mode];
        let v: Vec<f64> = (0..n).map(|r| self.vecs[r * n + b.mode]).collect();
        match b.parity {
            Parity::Plus => {
                let s = 1.0 / (2.0 * (1.0 + m)).sqrt();
                (
                    v.iter().map(|x| x * s).collect(),
                    v.iter().map(|x| x * s).collect(),
                )
            }
            Parity::Minus => {
                let s = 1.0 / (2.0 * (1.0 - m)).sqrt();
                (
                    v.iter().map(|x| x * s).collect(),
                    v.iter().map(|x| -x * s).collect(),
                )
            }
        }
    }

    /// Basis vector `d` written out on the full pair space.
    pub fn basis_state(&self, d: usize) -> WalkState {
        let (a, b) = self.basis_frame(d);
        let ca: Vec<Complex64> = a.into_iter().map(Complex64::from).collect();
        let cb: Vec<Complex64> = b.into_iter().map(Complex64::from).collect();
        self.frame_to_state(&ca, &cb)
    }

    /// `sum_j a_j |psi_j> + b_j S|psi_j>` on the pair space.
    fn frame_to_state(&self, a: &[Complex64], b: &[Complex64]) -> WalkState {
        let n = self.node_count();
        let mut amps = vec![Complex64::new(0.0, 0.0); n * n];
        for r in 0..n {
            for c in 0..n {
                amps[r * n + c] =
                    a[r] * self.op.psi_amplitude(r, c) + b[c] * self.op.psi_amplitude(c, r);
            }
        }
        WalkState::from_amplitudes(n, amps).expect("n * n amplitudes")
    }

    /// Frame coordinates of `U^{2m} |psi_0>`.
    fn frame_at(&self, m: usize) -> (Vec<Complex64>, Vec<Complex64>) {
        let n = self.node_count();
        let zero = Complex64::new(0.0, 0.0);
        let mut mode_a = vec![zero; n];
        let mut mode_b = vec![zero; n];
        for c in &self.components {
            let w = c.weight * Complex64::cis(c.phase * m as f64);
            mode_a[c.mode] += w * c.coef_a;
            mode_b[c.mode] += w * c.coef_b;
        }
        (self.synthesize(&mode_a), self.synthesize(&mode_b))
    }

    /// `sum_k coeffs_k v_k`.
    fn synthesize(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let n = self.node_count();
        (0..n)
            .map(|r| {
                let row = &self.vecs[r * n..(r + 1) * n];
                row.iter().zip(coeffs).map(|(v, c)| c * v).sum()
            })
            .collect()
    }

    /// `U^{2m} |psi_0>` on the full pair space.
    pub fn state_at(&self, m: usize) -> WalkState {
        let (a, b) = self.frame_at(m);
        self.frame_to_state(&a, &b)
    }

    /// `I_q(., m)` computed from frame coordinates in `O(N^2)`:
    /// `I_q(i) = sum_r G_ir |a_r|^2 + |b_i|^2 + 2 Re(conj(b_i) (D a)_i)`.
    pub fn instantaneous(&self, m: usize) -> Vec<f64> {
        let n = self.node_count();
        let (a, b) = self.frame_at(m);
        let a_sq: Vec<f64> = a.iter().map(|z| z.norm_sqr()).collect();
        // D a = V (mu . V^T a)
        let mut proj = vec![Complex64::new(0.0, 0.0); n];
        for (ar, row) in a.iter().zip(self.vecs.chunks_exact(n)) {
            for (p, v) in proj.iter_mut().zip(row) {
                *p += ar * v;
            }
        }
        proj.iter_mut().zip(&self.mu).for_each(|(p, m)| *p *= m);
        let da = self.synthesize(&proj);
        (0..n)
            .map(|i| {
                let walk: f64 = self.op.g_row(i).iter().zip(&a_sq).map(|(g, x)| g * x).sum();
                walk + b[i].norm_sqr() + 2.0 * (b[i].conj() * da[i]).re
            })
            .collect()
    }
}

/// Spectral counterpart of [`super::evolve`].
pub fn evolve_spectral(sub: &DynamicalSubspace, steps: usize) -> Result<QuantumRankSeries> {
    evolve_spectral_window(sub, 0, steps)
}

pub fn evolve_spectral_window(
    sub: &DynamicalSubspace,
    offset: usize,
    steps: usize,
) -> Result<QuantumRankSeries> {
    check_steps(steps)?;
    let rows = (offset..offset + steps)
        .map(|m| sub.instantaneous(m))
        .collect();
    Ok(QuantumRankSeries::from_rows(offset, rows))
}
