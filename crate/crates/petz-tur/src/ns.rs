//! The Nussbaum-Szkola bridge.
//!
//! Given spectral decompositions `rho = Σ p_i |p_i><p_i|` and
//! `sigma = Σ q_j |q_j><q_j|`, the joint pmfs
//!
//! ```text
//! P(i,j) = p_i |<p_i|q_j>|^2,    Q(i,j) = q_j |<p_i|q_j>|^2
//! ```
//!
//! reproduce every Petz f-divergence classically: `D_f(rho||sigma) =
//! D_f^c(P||Q)`. An observable lifts to the (complex) random variable
//! `Theta(i,j) = <p_i|theta|q_j> / <p_i|q_j>` on the support of the overlaps;
//! the lift preserves both means exactly and can only shrink variances
//! (pinching), which is what lets classical Chapman-Robbins bounds transfer
//! to quantum statistics.

use num_complex::Complex64;

use crate::divergence::ClassicalPair;
use crate::states::{DensityMatrix, Observable};
use crate::{Error, Result};

/// Default squared-overlap flush threshold.
pub const DEFAULT_OVERLAP_TOL: f64 = 1e-12;

/// The NS joint distributions over index pairs `(i, j)`, row-major.
#[derive(Debug, Clone)]
pub struct NsJoint {
    dims: (usize, usize),
    p: Vec<f64>,
    q: Vec<f64>,
    overlaps: Vec<f64>,
}

impl NsJoint {
    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn p(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.dims.1 + j]
    }

    pub fn q(&self, i: usize, j: usize) -> f64 {
        self.q[i * self.dims.1 + j]
    }

    /// `a_ij = |<p_i|q_j>|^2`; rows and columns each sum to 1 (doubly
    /// stochastic).
    pub fn overlap(&self, i: usize, j: usize) -> f64 {
        self.overlaps[i * self.dims.1 + j]
    }

    pub fn p_flat(&self) -> &[f64] {
        &self.p
    }

    pub fn q_flat(&self) -> &[f64] {
        &self.q
    }

    /// Flatten to a classical pair over `n_rho * n_sigma` outcomes.
    pub fn classical_pair(&self) -> Result<ClassicalPair> {
        ClassicalPair::new(self.p.clone(), self.q.clone())
    }
}

/// The lifted observable `Theta(i,j)`, zero off the overlap support.
#[derive(Debug, Clone)]
pub struct NsObservable {
    dims: (usize, usize),
    theta: Vec<Complex64>,
    support_mask: Vec<bool>,
}

impl NsObservable {
    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn theta(&self, i: usize, j: usize) -> Complex64 {
        self.theta[i * self.dims.1 + j]
    }

    pub fn on_support(&self, i: usize, j: usize) -> bool {
        self.support_mask[i * self.dims.1 + j]
    }

    /// Mean of `Theta` under a joint pmf (flat, same layout).
    pub fn mean(&self, pmf: &[f64]) -> Complex64 {
        self.theta
            .iter()
            .zip(pmf)
            .map(|(&t, &w)| t * w)
            .sum()
    }

    /// Variance of the complex variable: `E|Theta|^2 - |E Theta|^2`.
    pub fn variance(&self, pmf: &[f64]) -> f64 {
        let mean = self.mean(pmf);
        let second: f64 = self
            .theta
            .iter()
            .zip(pmf)
            .map(|(&t, &w)| w * t.norm_sqr())
            .sum();
        second - mean.norm_sqr()
    }
}

fn overlap_matrix(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
) -> (Vec<Complex64>, Vec<f64>) {
    let n = rho.dim();
    let vr = &rho.spectrum().eigenvectors;
    let vs = &sigma.spectrum().eigenvectors;
    // inner[(i,j)] = <p_i | q_j> = Σ_k conj(vr[k,i]) vs[k,j]
    let mut inner = vec![Complex64::new(0.0, 0.0); n * n];
    let mut sq = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += vr[(k, i)].conj() * vs[(k, j)];
            }
            inner[i * n + j] = acc;
            sq[i * n + j] = acc.norm_sqr();
        }
    }
    (inner, sq)
}

/// Build the NS pair. Squared overlaps below `overlap_tol^2` are flushed to
/// exactly 0; the joints are renormalized if the flushed mass exceeds 1e-12.
pub fn ns_pair(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    overlap_tol: f64,
) -> Result<NsJoint> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    let n = rho.dim();
    let (_, mut sq) = overlap_matrix(rho, sigma);
    let flush = overlap_tol * overlap_tol;
    for a in sq.iter_mut() {
        if *a < flush {
            *a = 0.0;
        }
    }
    let p_ev = &rho.spectrum().eigenvalues;
    let q_ev = &sigma.spectrum().eigenvalues;
    let mut p = vec![0.0f64; n * n];
    let mut q = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            p[i * n + j] = p_ev[i] * sq[i * n + j];
            q[i * n + j] = q_ev[j] * sq[i * n + j];
        }
    }
    for pmf in [&mut p, &mut q] {
        let total: f64 = pmf.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            for v in pmf.iter_mut() {
                *v /= total;
            }
        }
    }
    Ok(NsJoint {
        dims: (n, n),
        p,
        q,
        overlaps: sq,
    })
}

/// Lift an observable onto the NS index set:
/// `Theta(i,j) = <p_i|theta|q_j> / <p_i|q_j>` where the overlap is nonzero.
pub fn ns_observable(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    obs: &Observable,
    overlap_tol: f64,
) -> Result<NsObservable> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    if rho.dim() != obs.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), obs.dim()));
    }
    let n = rho.dim();
    let (inner, _) = overlap_matrix(rho, sigma);
    let vr = &rho.spectrum().eigenvectors;
    let vs = &sigma.spectrum().eigenvectors;
    let theta_m = obs.matrix();
    let mut theta = vec![Complex64::new(0.0, 0.0); n * n];
    let mut mask = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            let ov = inner[i * n + j];
            if ov.norm() <= overlap_tol {
                continue;
            }
            // <p_i| theta |q_j>
            let mut num = Complex64::new(0.0, 0.0);
            for a in 0..n {
                for b in 0..n {
                    num += vr[(a, i)].conj() * theta_m[(a, b)] * vs[(b, j)];
                }
            }
            theta[i * n + j] = num / ov;
            mask[i * n + j] = true;
        }
    }
    Ok(NsObservable {
        dims: (n, n),
        theta,
        support_mask: mask,
    })
}
