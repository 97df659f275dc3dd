//! Divergence evaluation: classical Csiszar sums, quantum Petz values via
//! the NS bridge, chi-square kernels, and the mixture integral.
//!
//! Three independent routes to the same quantum number keep each other
//! honest:
//!
//! 1. the NS route (`petz_divergence`): classical Csiszar sum on the NS pair;
//! 2. the superoperator route (`lr_divergence`): diagonalize the left/right
//!    multiplication operator `rho ⊗ (sigma^-1)^T` on the doubled space and
//!    contract with `vec(sigma^(1/2))`;
//! 3. the mixture route (`mixture_divergence`): quadrature of
//!    `∫ w_f(λ) χ²_λ dλ` against the generator's mixing law.

use num_complex::Complex64;

use crate::generators::Generator;
use crate::linalg::{eigh, generalized_inverse, matfun_spec, DEFAULT_RANK_TOL};
use crate::ns::{ns_pair, DEFAULT_OVERLAP_TOL};
use crate::states::DensityMatrix;
use crate::weights::WeightMeasure;
use crate::{Error, Result};

pub use crate::quad::{QuadMethod, QuadratureSpec};

/// A pair of pmfs over the same finite outcome set.
#[derive(Debug, Clone)]
pub struct ClassicalPair {
    p: Vec<f64>,
    q: Vec<f64>,
}

impl ClassicalPair {
    pub fn new(p: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        if p.len() != q.len() {
            return Err(Error::DimensionMismatch(p.len(), q.len()));
        }
        for (name, pmf) in [("P", &p), ("Q", &q)] {
            if pmf.iter().any(|&v| v < 0.0) {
                return Err(Error::InvalidDistribution(format!(
                    "{name} has a negative entry"
                )));
            }
            let total: f64 = pmf.iter().sum();
            if (total - 1.0).abs() > 1e-10 {
                return Err(Error::InvalidDistribution(format!(
                    "{name} sums to {total}, expected 1"
                )));
            }
        }
        Ok(Self { p, q })
    }

    /// Two-outcome pair `(Bern(r), Bern(s))`.
    pub fn bernoulli(r: f64, s: f64) -> Result<Self> {
        Self::new(vec![r, 1.0 - r], vec![s, 1.0 - s])
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }
}

/// Csiszar f-divergence `Σ Q_i f(P_i/Q_i)` with the usual conventions:
/// `0 f(0/0) = 0` and `Q = 0 < P` contributing `P * lim f(u)/u`.
pub fn csiszar(gen: &Generator, pair: &ClassicalPair) -> f64 {
    let mut acc = 0.0f64;
    for (&pi, &qi) in pair.p.iter().zip(&pair.q) {
        if qi > 0.0 {
            let term = qi * gen.f(pi / qi);
            if term.is_infinite() {
                return f64::INFINITY;
            }
            acc += term;
        } else if pi > 0.0 {
            let slope = gen.slope_at_inf();
            if slope.is_infinite() {
                return f64::INFINITY;
            }
            acc += pi * slope;
        }
    }
    acc
}

/// The classical chi-square kernel
/// `χ²_λ(P||Q) = Σ (P_i - Q_i)^2 / ((1-λ) P_i + λ Q_i)` with 0/0 terms
/// dropped; equals `(1/λ²) χ²(P || (1-λ)P + λQ)` on (0,1) and reduces to the
/// Neyman / Pearson chi-square at the endpoints.
pub fn chi2_lambda_classical(pair: &ClassicalPair, lambda: f64) -> f64 {
    let mut acc = 0.0f64;
    for (&pi, &qi) in pair.p.iter().zip(&pair.q) {
        let num = (pi - qi) * (pi - qi);
        if num == 0.0 {
            continue;
        }
        let den = (1.0 - lambda) * pi + lambda * qi;
        if den <= 0.0 {
            return f64::INFINITY;
        }
        acc += num / den;
    }
    acc
}

/// Quantum Petz divergence evaluated through the NS bridge.
pub fn petz_divergence(
    gen: &Generator,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
) -> Result<f64> {
    let joint = ns_pair(rho, sigma, DEFAULT_OVERLAP_TOL)?;
    Ok(csiszar(gen, &joint.classical_pair()?))
}

/// Quantum chi-square kernel by its explicit double sum
/// `Σ_ij (p_i - q_j)^2 |<p_i|q_j>|^2 / ((1-λ) p_i + λ q_j)`.
pub fn chi2_lambda_quantum(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    lambda: f64,
) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    let joint = ns_pair(rho, sigma, DEFAULT_OVERLAP_TOL)?;
    let p_ev = &rho.spectrum().eigenvalues;
    let q_ev = &sigma.spectrum().eigenvalues;
    let mut acc = 0.0f64;
    for (i, &pi) in p_ev.iter().enumerate() {
        for (j, &qj) in q_ev.iter().enumerate() {
            let a = joint.overlap(i, j);
            if a == 0.0 {
                continue;
            }
            let diff = pi - qj;
            let num = diff * diff * a;
            if num == 0.0 {
                continue;
            }
            let den = (1.0 - lambda) * pi + lambda * qj;
            if den <= 0.0 {
                return Ok(f64::INFINITY);
            }
            acc += num / den;
        }
    }
    Ok(acc)
}

/// Independent evaluation of the Petz divergence through the left/right
/// multiplication superoperator on the doubled space.
///
/// With row-major vectorization, `X -> rho X sigma^-1` is the Hermitian
/// operator `rho ⊗ (sigma^-1)^T`; its spectrum is `{p_i/q_j}` and
/// `D_f = <vec(sigma^(1/2)), f(K) vec(sigma^(1/2))>`.
pub fn lr_divergence(
    gen: &Generator,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    let n = rho.dim();
    let sigma_inv = generalized_inverse(sigma.matrix(), DEFAULT_RANK_TOL)?;
    let k = rho.matrix().kron(&sigma_inv.transpose());
    let spec = eigh(&k, 1e-8)?;
    let sqrt_sigma = matfun_spec(sigma.spectrum(), f64::sqrt, None)?;
    // w = vec(sigma^(1/2)), row-major.
    let w: Vec<Complex64> = (0..n * n)
        .map(|idx| sqrt_sigma[(idx / n, idx % n)])
        .collect();
    let mut acc = 0.0f64;
    for (k_idx, &kappa) in spec.eigenvalues.iter().enumerate() {
        let vk = spec.eigenvector(k_idx);
        let overlap: Complex64 = vk
            .iter()
            .zip(&w)
            .map(|(a, b)| a.conj() * b)
            .sum();
        let weight = overlap.norm_sqr();
        if weight == 0.0 {
            continue;
        }
        let value = gen.f(kappa.max(0.0));
        if !value.is_finite() {
            return Ok(f64::INFINITY);
        }
        acc += weight * value;
    }
    Ok(acc)
}

/// Evaluate `D_f` as the chi-square mixture
/// `∫ w(λ) χ²_λ(rho||sigma) dλ + Σ atoms mass · χ²_{λ0}`.
///
/// Requires full-rank states in practice: an infinite kernel sample aborts
/// with [`Error::QuadratureFailure`] rather than truncating the integral.
pub fn mixture_divergence(
    gen: &Generator,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    w: &WeightMeasure,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    let joint = ns_pair(rho, sigma, DEFAULT_OVERLAP_TOL)?;
    let p_ev = rho.spectrum().eigenvalues.clone();
    let q_ev = sigma.spectrum().eigenvalues.clone();
    let mut cells: Vec<(f64, f64, f64)> = Vec::new(); // (num, p_i, q_j)
    for (i, &pi) in p_ev.iter().enumerate() {
        for (j, &qj) in q_ev.iter().enumerate() {
            let a = joint.overlap(i, j);
            let diff = pi - qj;
            let num = diff * diff * a;
            if num > 0.0 {
                cells.push((num, pi, qj));
            }
        }
    }
    // Rank deficiency makes the kernel blow up like 1/(1-λ) or 1/λ at an
    // endpoint; if the density does not vanish there the integral diverges
    // and no truncation may be reported in its place.
    if w.has_density() {
        let (a_exp, b_exp) = w.endpoint_exponents().unwrap_or((0.0, 0.0));
        let pole_at_1 = cells.iter().any(|&(_, pi, qj)| qj == 0.0 && pi > 0.0);
        let pole_at_0 = cells.iter().any(|&(_, pi, qj)| pi == 0.0 && qj > 0.0);
        if (pole_at_1 && b_exp <= 0.0) || (pole_at_0 && a_exp <= 0.0) {
            return Err(Error::QuadratureFailure(format!(
                "{} mixture diverges: kernel pole on the support boundary",
                gen.name()
            )));
        }
    }
    let kernel = |lam: f64, one_minus: f64| -> f64 {
        let mut acc = 0.0;
        for &(num, pi, qj) in &cells {
            let den = one_minus * pi + lam * qj;
            if den <= 0.0 {
                return f64::INFINITY;
            }
            acc += num / den;
        }
        acc
    };
    let mut total = w.integrate_density(kernel, quad).map_err(|e| match e {
        Error::QuadratureFailure(msg) => {
            Error::QuadratureFailure(format!("{} mixture: {msg}", gen.name()))
        }
        other => other,
    })?;
    for atom in w.atoms() {
        let v = kernel(atom.location, 1.0 - atom.location);
        if !v.is_finite() {
            return Err(Error::QuadratureFailure(format!(
                "{} mixture: infinite kernel at atom lambda = {}",
                gen.name(),
                atom.location
            )));
        }
        total += atom.mass * v;
    }
    Ok(total)
}
