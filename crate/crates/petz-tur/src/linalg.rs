//! Dense complex Hermitian linear algebra.
//!
//! Self-contained: the eigensolver is a cyclic Jacobi iteration with complex
//! rotations, accurate to near machine precision for the small dense matrices
//! used throughout (d ≲ 16, plus the d² lifted operators). Matrix functions
//! and the Moore-Penrose inverse are built on top of it in the usual
//! spectral-calculus way: `V f(Λ) V^dag`.

use num_complex::Complex64;

use crate::{Error, Result};

/// Default relative cutoff for pseudo-rank decisions, scaled by the largest
/// eigenvalue magnitude.
pub const DEFAULT_RANK_TOL: f64 = 1e-12;

/// Default Hermiticity tolerance (max-abs entrywise on `m - m^dag`).
pub const DEFAULT_HERMITICITY_TOL: f64 = 1e-10;

const MAX_JACOBI_SWEEPS: usize = 100;

/// Dense square complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Build from row-major entries; `entries.len()` must equal `dim * dim`.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(Self { dim, entries })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Real diagonal matrix.
    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            dim: self.dim,
            entries,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            dim: self.dim,
            entries,
        })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Kronecker product, row-major composite index `(i_a, i_b) -> i_a * dim_b + i_b`.
    pub fn kron(&self, other: &Self) -> Self {
        let (da, db) = (self.dim, other.dim);
        let n = da * db;
        let mut out = Self::zeros(n);
        for ia in 0..da {
            for ja in 0..da {
                let a = self[(ia, ja)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for ib in 0..db {
                    for jb in 0..db {
                        out[(ia * db + ib, ja * db + jb)] = a * other[(ib, jb)];
                    }
                }
            }
        }
        out
    }

    /// Entrywise transpose (no conjugation).
    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    /// Max-abs entrywise deviation from Hermiticity.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = self[(i, j)] - self[(j, i)].conj();
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn frobenius(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.dim + j]
    }
}

/// Result of diagonalizing a Hermitian matrix: `m = V Λ V^dag` with real
/// eigenvalues sorted ascending and `V` unitary (eigenvectors as columns).
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    /// Rebuild `V Λ V^dag`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += v[(i, k)] * self.eigenvalues[k] * v[(j, k)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// `V f(Λ) V^dag` for an already-mapped eigenvalue vector.
    pub fn assemble(&self, mapped: &[f64]) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += v[(i, k)] * mapped[k] * v[(j, k)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// Column `k` of `V` as a vector.
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        let n = self.eigenvalues.len();
        (0..n).map(|i| self.eigenvectors[(i, k)]).collect()
    }
}

/// Diagonalize a Hermitian matrix by cyclic Jacobi rotations.
///
/// `tol` bounds the accepted Hermiticity residual of the input. The output is
/// deterministic for identical input bits.
pub fn eigh(m: &ComplexMatrix, tol: f64) -> Result<SpectralDecomposition> {
    let residual = m.hermiticity_residual();
    if residual > tol {
        return Err(Error::NotHermitian(residual));
    }
    let n = m.dim();
    let mut a = m.clone();
    // Symmetrize away the sub-tol residual so the rotation algebra sees an
    // exactly Hermitian matrix.
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius().max(1.0);
    let stop = 1e-15 * scale;

    let mut converged = false;
    for _sweep in 0..MAX_JACOBI_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= stop {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= stop / (n as f64) {
                    continue;
                }
                rotate(&mut a, &mut v, p, q, apq, mag);
            }
        }
    }
    if !converged {
        // One last check: the final sweep may have reached the target.
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if (2.0 * off).sqrt() > stop {
            return Err(Error::NoConvergence(MAX_JACOBI_SWEEPS));
        }
    }

    let mut eigenvalues: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    // Ascending sort, applied consistently to the eigenvector columns.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eigenvalues[i].partial_cmp(&eigenvalues[j]).unwrap());
    eigenvalues = order.iter().map(|&k| eigenvalues[k]).collect();
    let mut sorted_v = ComplexMatrix::zeros(n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            sorted_v[(row, new_col)] = v[(row, old_col)];
        }
    }

    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors: sorted_v,
    })
}

/// One complex Jacobi rotation annihilating `a[(p,q)]`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, apq: Complex64, mag: f64) {
    let n = a.dim();
    let omega = apq / mag; // phase of the pivot
    let alpha = a[(p, p)].re;
    let beta = a[(q, q)].re;
    // Annihilation of a[(p,q)] requires |a_pq|(c^2 - s^2) + (beta-alpha)cs = 0,
    // i.e. t^2 - 2 tau t - 1 = 0; take the root of smaller magnitude.
    let tau = (beta - alpha) / (2.0 * mag);
    let t = if tau >= 0.0 {
        -1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let s_omega = omega * s;

    // A <- J^dag A J where J differs from I on the (p,q) block:
    // J[p][p] = c, J[p][q] = -s*omega, J[q][p] = s*conj(omega), J[q][q] = c.
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c + akq * s_omega.conj();
        a[(k, q)] = -akp * s_omega + akq * c;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c + aqk * s_omega;
        a[(q, k)] = -apk * s_omega.conj() + aqk * c;
    }
    // Clean up rounding on the annihilated pair and keep the diagonal real.
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * s_omega.conj();
        v[(k, q)] = -vkp * s_omega + vkq * c;
    }
}

/// Apply a real scalar function to a Hermitian matrix through its spectrum.
///
/// Errors with [`Error::DomainError`] if the function returns a non-finite
/// value on some eigenvalue.
pub fn matfun(m: &ComplexMatrix, scalar_fn: impl Fn(f64) -> f64, tol: f64) -> Result<ComplexMatrix> {
    let spec = eigh(m, tol)?;
    matfun_spec(&spec, scalar_fn, None)
}

/// Like [`matfun`] but eigenvalues at or below `kernel_cutoff` in magnitude
/// map to 0 instead of passing through `scalar_fn` (restriction to the
/// support, e.g. `log` or reciprocal powers of a singular state).
pub fn matfun_on_support(
    m: &ComplexMatrix,
    scalar_fn: impl Fn(f64) -> f64,
    tol: f64,
    kernel_cutoff: f64,
) -> Result<ComplexMatrix> {
    let spec = eigh(m, tol)?;
    matfun_spec(&spec, scalar_fn, Some(kernel_cutoff))
}

/// Spectral-calculus core shared by the `matfun` variants.
pub fn matfun_spec(
    spec: &SpectralDecomposition,
    scalar_fn: impl Fn(f64) -> f64,
    kernel_cutoff: Option<f64>,
) -> Result<ComplexMatrix> {
    let mapped: Vec<f64> = spec
        .eigenvalues
        .iter()
        .map(|&ev| match kernel_cutoff {
            Some(cut) if ev.abs() <= cut => Ok(0.0),
            _ => {
                let y = scalar_fn(ev);
                if y.is_finite() {
                    Ok(y)
                } else {
                    Err(Error::DomainError(ev))
                }
            }
        })
        .collect::<Result<_>>()?;
    Ok(spec.assemble(&mapped))
}

/// Moore-Penrose inverse of a Hermitian PSD matrix.
///
/// Eigenvalues at or below `rank_tol * max_eigenvalue` map to 0, the rest to
/// their reciprocal, in the same eigenbasis.
pub fn generalized_inverse(m: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    let spec = eigh(m, DEFAULT_HERMITICITY_TOL)?;
    let top = spec
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, &ev| acc.max(ev.abs()));
    let cut = rank_tol * top.max(1e-300);
    matfun_spec(&spec, |ev| 1.0 / ev, Some(cut))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};

    fn random_hermitian(dim: usize, seed: u64) -> ComplexMatrix {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut g = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                g[(i, j)] = Complex64::new(
                    StandardNormal.sample(&mut rng),
                    StandardNormal.sample(&mut rng),
                );
            }
        }
        // (G + G^dag)/2
        g.add(&g.adjoint()).unwrap().scale(Complex64::new(0.5, 0.0))
    }

    fn random_psd(dim: usize, seed: u64) -> ComplexMatrix {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut g = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                g[(i, j)] = Complex64::new(
                    StandardNormal.sample(&mut rng),
                    StandardNormal.sample(&mut rng),
                );
            }
        }
        g.matmul(&g.adjoint()).unwrap()
    }

    #[test]
    fn eigh_identity() {
        let spec = eigh(&ComplexMatrix::identity(3), 1e-10).unwrap();
        for ev in &spec.eigenvalues {
            assert!((ev - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn eigh_diagonal() {
        let spec = eigh(&ComplexMatrix::diag(&[0.7, 0.3]), 1e-10).unwrap();
        assert!((spec.eigenvalues[0] - 0.3).abs() < 1e-12);
        assert!((spec.eigenvalues[1] - 0.7).abs() < 1e-12);
        // Eigenvectors are a permutation of the standard basis.
        let v = &spec.eigenvectors;
        assert!((v[(1, 0)].norm() - 1.0).abs() < 1e-12);
        assert!((v[(0, 1)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigh_reconstruction_oracle() {
        // Oracle: V Λ V^dag must reproduce the input entrywise.
        for seed in 0..8 {
            let m = random_hermitian(4, 100 + seed);
            let spec = eigh(&m, 1e-10).unwrap();
            assert!(spec.reconstruct().max_abs_diff(&m) < 1e-10, "seed {seed}");
            // V^dag V = I
            let vtv = spec.eigenvectors.adjoint().matmul(&spec.eigenvectors).unwrap();
            assert!(vtv.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-10);
            // Ascending order.
            for w in spec.eigenvalues.windows(2) {
                assert!(w[0] <= w[1] + 1e-14);
            }
        }
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let mut m = ComplexMatrix::zeros(2);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(matches!(eigh(&m, 1e-10), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn eigh_deterministic() {
        let m = random_hermitian(5, 42);
        let a = eigh(&m, 1e-10).unwrap();
        let b = eigh(&m, 1e-10).unwrap();
        assert_eq!(a.eigenvalues, b.eigenvalues);
        assert_eq!(a.eigenvectors, b.eigenvectors);
    }

    #[test]
    fn trace_equals_eigenvalue_sum() {
        let m = random_hermitian(6, 7);
        let spec = eigh(&m, 1e-10).unwrap();
        let tr = m.trace().re;
        let sum: f64 = spec.eigenvalues.iter().sum();
        assert!((tr - sum).abs() < 1e-12);
    }

    #[test]
    fn matfun_identity_fn_is_identity() {
        let m = random_hermitian(4, 11);
        let f = matfun(&m, |x| x, 1e-10).unwrap();
        assert!(f.max_abs_diff(&m) < 1e-12);
    }

    #[test]
    fn matfun_sqrt_diagonal() {
        let f = matfun(&ComplexMatrix::diag(&[4.0, 9.0]), f64::sqrt, 1e-10).unwrap();
        assert!(f.max_abs_diff(&ComplexMatrix::diag(&[2.0, 3.0])) < 1e-12);
        let id = matfun(&ComplexMatrix::identity(2), f64::sqrt, 1e-10).unwrap();
        assert!(id.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn matfun_square_matches_product_oracle() {
        // Oracle: x -> x^2 through the spectrum equals the direct product m*m.
        let m = random_psd(4, 23);
        let via_spectrum = matfun(&m, |x| x * x, 1e-8).unwrap();
        let direct = m.matmul(&m).unwrap();
        assert!(via_spectrum.max_abs_diff(&direct) < 1e-10);
    }

    #[test]
    fn matfun_domain_error() {
        let m = ComplexMatrix::diag(&[1.0, -2.0]);
        assert!(matches!(
            matfun(&m, f64::ln, 1e-10),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn generalized_inverse_diagonal() {
        let g = generalized_inverse(&ComplexMatrix::diag(&[2.0, 0.0]), 1e-12).unwrap();
        assert!(g.max_abs_diff(&ComplexMatrix::diag(&[0.5, 0.0])) < 1e-12);

        let full = generalized_inverse(&ComplexMatrix::diag(&[0.25, 0.75]), 1e-12).unwrap();
        assert!(full.max_abs_diff(&ComplexMatrix::diag(&[4.0, 4.0 / 3.0])) < 1e-12);
    }

    #[test]
    fn generalized_inverse_penrose_oracle() {
        // Oracle: m * m^+ * m = m for a rank-2 PSD 3x3 matrix.
        let mut rng = StdRng::seed_from_u64(31);
        let mut g = ComplexMatrix::zeros(3);
        for i in 0..3 {
            for j in 0..2 {
                g[(i, j)] = Complex64::new(
                    StandardNormal.sample(&mut rng),
                    StandardNormal.sample(&mut rng),
                );
            }
        }
        let m = g.matmul(&g.adjoint()).unwrap();
        let pinv = generalized_inverse(&m, 1e-12).unwrap();
        let back = m.matmul(&pinv).unwrap().matmul(&m).unwrap();
        assert!(back.max_abs_diff(&m) < 1e-8);
    }

    #[test]
    fn kron_row_major_convention() {
        let a = ComplexMatrix::diag(&[1.0, 2.0]);
        let b = ComplexMatrix::diag(&[3.0, 4.0]);
        let k = a.kron(&b);
        assert_eq!(k.dim(), 4);
        assert!((k[(0, 0)].re - 3.0).abs() < 1e-15);
        assert!((k[(1, 1)].re - 4.0).abs() < 1e-15);
        assert!((k[(2, 2)].re - 6.0).abs() < 1e-15);
        assert!((k[(3, 3)].re - 8.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_spectrum_reconstructs() {
        // Two-fold degenerate eigenvalue; reconstruction must still hold even
        // though the basis inside the degenerate subspace is arbitrary.
        let u = eigh(&random_hermitian(3, 5), 1e-10).unwrap().eigenvectors;
        let m = SpectralDecomposition {
            eigenvalues: vec![0.5, 0.5, 2.0],
            eigenvectors: u,
        }
        .reconstruct();
        let spec = eigh(&m, 1e-10).unwrap();
        assert!(spec.reconstruct().max_abs_diff(&m) < 1e-10);
        assert!((spec.eigenvalues[0] - 0.5).abs() < 1e-10);
        assert!((spec.eigenvalues[1] - 0.5).abs() < 1e-10);
        assert!((spec.eigenvalues[2] - 2.0).abs() < 1e-10);
    }
}
