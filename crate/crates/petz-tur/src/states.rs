//! Validated quantum objects: density matrices, observables, random
//! generation, and observable moments.
//!
//! Random states follow the Hilbert-Schmidt ensemble (`G G^dag / Tr`), which
//! is full rank almost surely, so bulk tests never trip over support issues.

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::linalg::{eigh, ComplexMatrix, SpectralDecomposition, DEFAULT_HERMITICITY_TOL};
use crate::{Error, Result};

/// Eigenvalues above this (negative) floor are treated as eigensolver noise
/// and clamped to zero at construction.
pub const EIGENVALUE_CLAMP: f64 = -1e-12;

/// Unit-trace positive semidefinite Hermitian matrix with cached spectrum.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    spectrum: SpectralDecomposition,
}

impl DensityMatrix {
    /// Validate and construct. Requires Hermiticity and unit trace within
    /// 1e-10; eigenvalues in [-1e-12, 0) are clamped to 0 and the spectrum
    /// renormalized, anything more negative is rejected.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::InvalidTrace(tr.re));
        }
        let spec = eigh(&matrix, DEFAULT_HERMITICITY_TOL)?;
        let min_ev = spec.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if min_ev < EIGENVALUE_CLAMP {
            return Err(Error::NotPositiveSemidefinite(min_ev));
        }
        let mut clamped: Vec<f64> = spec
            .eigenvalues
            .iter()
            .map(|&ev| if ev < 0.0 { 0.0 } else { ev })
            .collect();
        let total: f64 = clamped.iter().sum();
        for ev in &mut clamped {
            *ev /= total;
        }
        let spectrum = SpectralDecomposition {
            eigenvalues: clamped,
            eigenvectors: spec.eigenvectors,
        };
        Ok(Self {
            matrix: spectrum.reconstruct(),
            spectrum,
        })
    }

    /// Diagonal state from a probability vector (validated).
    pub fn from_probabilities(probs: &[f64]) -> Result<Self> {
        if probs.iter().any(|&p| p < 0.0) {
            return Err(Error::InvalidDistribution(
                "negative probability".to_string(),
            ));
        }
        Self::new(ComplexMatrix::diag(probs))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Cached spectral decomposition (ascending eigenvalues).
    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum.eigenvalues
    }

    /// True if every eigenvalue exceeds `cutoff`.
    pub fn is_full_rank(&self, cutoff: f64) -> bool {
        self.spectrum.eigenvalues.iter().all(|&p| p > cutoff)
    }
}

/// Hermitian operator in arbitrary observable units.
#[derive(Debug, Clone)]
pub struct Observable {
    matrix: ComplexMatrix,
}

impl Observable {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let residual = matrix.hermiticity_residual();
        if residual > DEFAULT_HERMITICITY_TOL {
            return Err(Error::NotHermitian(residual));
        }
        Ok(Self { matrix })
    }

    pub fn from_diagonal(values: &[f64]) -> Self {
        Self {
            matrix: ComplexMatrix::diag(values),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// Observable statistics under a state pair: mean gap and the two variances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentTriple {
    /// `<theta>_rho - <theta>_sigma`
    pub x: f64,
    /// `Var_rho(theta)` (>= 0)
    pub y: f64,
    /// `Var_sigma(theta)` (>= 0)
    pub z: f64,
}

impl MomentTriple {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }
}

fn real_trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    let prod = a.matmul(b)?;
    let tr = prod.trace();
    debug_assert!(tr.im.abs() <= 1e-9, "imaginary trace residue {}", tr.im);
    Ok(tr.re)
}

/// Mean gap and variances of `obs` under `(rho, sigma)`.
///
/// Imaginary residues below 1e-10 (forced by Hermiticity) are discarded.
pub fn moment_triple(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    obs: &Observable,
) -> Result<MomentTriple> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    if rho.dim() != obs.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), obs.dim()));
    }
    let theta = obs.matrix();
    let theta_sq = theta.matmul(theta)?;
    let mean_rho = real_trace_product(rho.matrix(), theta)?;
    let mean_sigma = real_trace_product(sigma.matrix(), theta)?;
    let second_rho = real_trace_product(rho.matrix(), &theta_sq)?;
    let second_sigma = real_trace_product(sigma.matrix(), &theta_sq)?;
    Ok(MomentTriple {
        x: mean_rho - mean_sigma,
        y: (second_rho - mean_rho * mean_rho).max(0.0),
        z: (second_sigma - mean_sigma * mean_sigma).max(0.0),
    })
}

fn ginibre(dim: usize, rng: &mut StdRng) -> ComplexMatrix {
    let mut g = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            g[(i, j)] = Complex64::new(
                StandardNormal.sample(rng),
                StandardNormal.sample(rng),
            );
        }
    }
    g
}

/// Hilbert-Schmidt random density matrix, deterministic per seed.
pub fn random_density(dim: usize, seed: u64) -> Result<DensityMatrix> {
    if dim == 0 {
        return Err(Error::InvalidInput("dim must be >= 1".to_string()));
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let g = ginibre(dim, &mut rng);
    let gg = g.matmul(&g.adjoint())?;
    let tr = gg.trace().re;
    DensityMatrix::new(gg.scale(Complex64::new(1.0 / tr, 0.0)))
}

/// Haar-random unitary via QR of a complex Ginibre matrix with the diagonal
/// phases of R fixed to 1.
pub fn random_unitary(dim: usize, seed: u64) -> Result<ComplexMatrix> {
    if dim == 0 {
        return Err(Error::InvalidInput("dim must be >= 1".to_string()));
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let g = ginibre(dim, &mut rng);
    // Modified Gram-Schmidt on the columns of g.
    let mut q = vec![vec![Complex64::new(0.0, 0.0); dim]; dim]; // q[col][row]
    let mut diag = vec![Complex64::new(0.0, 0.0); dim];
    for j in 0..dim {
        let mut col: Vec<Complex64> = (0..dim).map(|i| g[(i, j)]).collect();
        for qc in q.iter().take(j) {
            let proj: Complex64 = qc
                .iter()
                .zip(&col)
                .map(|(a, b)| a.conj() * b)
                .sum();
            for (c, a) in col.iter_mut().zip(qc) {
                *c -= proj * a;
            }
        }
        // Re-orthogonalize once for numerical safety at larger dims.
        for qc in q.iter().take(j) {
            let proj: Complex64 = qc
                .iter()
                .zip(&col)
                .map(|(a, b)| a.conj() * b)
                .sum();
            for (c, a) in col.iter_mut().zip(qc) {
                *c -= proj * a;
            }
        }
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let r_jj = {
            // The Gram-Schmidt R_jj is <q_j, g_j>; its phase is what must be
            // fixed for Haar measure.
            let mut inner = Complex64::new(norm, 0.0);
            if norm > 0.0 {
                let unit: Vec<Complex64> = col.iter().map(|z| z / norm).collect();
                inner = unit
                    .iter()
                    .zip((0..dim).map(|i| g[(i, j)]))
                    .map(|(a, b)| a.conj() * b)
                    .sum();
            }
            inner
        };
        diag[j] = if r_jj.norm() > 0.0 {
            r_jj / r_jj.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for c in col.iter_mut() {
            *c /= norm;
        }
        q[j] = col;
    }
    let mut u = ComplexMatrix::zeros(dim);
    for j in 0..dim {
        for i in 0..dim {
            u[(i, j)] = q[j][i] * diag[j];
        }
    }
    Ok(u)
}

/// Random Hermitian observable with standard Gaussian entries (GUE-style),
/// deterministic per seed.
pub fn random_observable(dim: usize, seed: u64) -> Result<Observable> {
    if dim == 0 {
        return Err(Error::InvalidInput("dim must be >= 1".to_string()));
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let g = ginibre(dim, &mut rng);
    let h = g.add(&g.adjoint())?.scale(Complex64::new(0.5, 0.0));
    Observable::new(h)
}

// ---------------------------------------------------------------------------
// JSON matrix schema: {"dim": n, "re": [[...]], "im": [[...]]}
// ---------------------------------------------------------------------------

/// Wire format for complex matrices.
#[derive(Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let n = m.dim();
        let re = (0..n)
            .map(|i| (0..n).map(|j| m[(i, j)].re).collect())
            .collect();
        let im = (0..n)
            .map(|i| (0..n).map(|j| m[(i, j)].im).collect())
            .collect();
        Self { dim: n, re, im }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let n = self.dim;
        if self.re.len() != n
            || self.im.len() != n
            || self.re.iter().any(|r| r.len() != n)
            || self.im.iter().any(|r| r.len() != n)
        {
            return Err(Error::InvalidInput(format!(
                "`re` and `im` must both be {n}x{n} arrays"
            )));
        }
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = Complex64::new(self.re[i][j], self.im[i][j]);
            }
        }
        Ok(m)
    }
}

/// Parse a matrix from the documented JSON schema.
pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix> {
    let parsed: MatrixJson = serde_json::from_str(text)?;
    parsed.to_matrix()
}

/// Serialize a matrix to the documented JSON schema (lexicographic keys).
pub fn matrix_to_json(m: &ComplexMatrix) -> String {
    serde_json::to_value(MatrixJson::from_matrix(m))
        .expect("matrix serialization")
        .to_string()
}
