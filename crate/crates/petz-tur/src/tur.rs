//! The universal thermodynamic uncertainty relation.
//!
//! Given the moment triple `(x, y, z)` of any Hermitian observable under
//! `(rho, sigma)`, each chi-square kernel is bounded below by the closed-form
//! contrast
//!
//! ```text
//! h_λ(x,y,z) = x² / ((1-λ) y + λ z + λ(1-λ) x²),   h_0 := 0,  h_1 := x²/z,
//! ```
//!
//! so every f-divergence obeys `D_f ≥ ∫ w_f(λ) h_λ dλ`. The bound is tight:
//! a commuting binary pair `(Bern(r), Bern(s))` built from `(x, y, z)` alone
//! matches the moments and achieves `χ²_λ = h_λ` for every λ simultaneously.
//!
//! The certified endpoint value is `h_0 := 0` even though the λ→0 limit of
//! the formula is `x²/y`; [`EndpointConvention`] exposes the continuous
//! alternative for exploration (it only matters for weights with an atom at
//! λ = 0, i.e. the Neyman kernel).

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use crate::divergence::{petz_divergence, ClassicalPair, QuadratureSpec};
use crate::generators::Generator;
use crate::states::{moment_triple, DensityMatrix, MomentTriple, Observable};
use crate::weights::{analytic_weight, lambda_grid, WeightMeasure, DEFAULT_GRID_POINTS};
use crate::{Error, Result};

/// Value assigned to `h` at λ = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EndpointConvention {
    /// `h_0 := 0` (the certified convention).
    #[default]
    ZeroAtOrigin,
    /// `h_0 := x²/y`, the λ→0 limit of the interior formula.
    ContinuousLimit,
}

/// The closed-form contrast `h_λ(x, y, z)`; nonnegative, nonincreasing in
/// `y` and `z`, with the stated endpoint conventions.
pub fn h_lambda(m: &MomentTriple, lambda: f64) -> f64 {
    h_lambda_with(m, lambda, EndpointConvention::ZeroAtOrigin)
}

/// `h_λ` under an explicit endpoint convention.
pub fn h_lambda_with(m: &MomentTriple, lambda: f64, conv: EndpointConvention) -> f64 {
    if m.x == 0.0 {
        return 0.0;
    }
    let x2 = m.x * m.x;
    if lambda == 0.0 {
        return match conv {
            EndpointConvention::ZeroAtOrigin => 0.0,
            EndpointConvention::ContinuousLimit => {
                if m.y == 0.0 {
                    f64::INFINITY
                } else {
                    x2 / m.y
                }
            }
        };
    }
    if lambda == 1.0 {
        return if m.z == 0.0 { f64::INFINITY } else { x2 / m.z };
    }
    x2 / ((1.0 - lambda) * m.y + lambda * m.z + lambda * (1.0 - lambda) * x2)
}

/// The TUR lower bound `∫ w(λ) h_λ(x,y,z) dλ` (density quadrature plus atom
/// contributions at their endpoint-convention values).
pub fn tur_bound(
    gen: &Generator,
    m: &MomentTriple,
    w: &WeightMeasure,
    quad: &QuadratureSpec,
) -> Result<f64> {
    tur_bound_with(gen, m, w, quad, EndpointConvention::ZeroAtOrigin)
}

/// [`tur_bound`] under an explicit endpoint convention.
pub fn tur_bound_with(
    gen: &Generator,
    m: &MomentTriple,
    w: &WeightMeasure,
    quad: &QuadratureSpec,
    conv: EndpointConvention,
) -> Result<f64> {
    if m.x == 0.0 {
        return Ok(0.0);
    }
    let x2 = m.x * m.x;
    let density_part = w
        .integrate_density(
            |lam, one_minus| x2 / (one_minus * m.y + lam * m.z + lam * one_minus * x2),
            quad,
        )
        .map_err(|e| match e {
            Error::QuadratureFailure(msg) => {
                Error::QuadratureFailure(format!("{} bound: {msg}", gen.name()))
            }
            other => other,
        })?;
    let mut total = density_part;
    for atom in w.atoms() {
        let hv = h_lambda_with(m, atom.location, conv);
        if hv.is_infinite() {
            return Ok(f64::INFINITY);
        }
        total += atom.mass * hv;
    }
    Ok(total)
}

/// The commuting two-level pair that saturates the bound: occupation
/// probabilities `r, s` and observable eigenvalues `u1 > u2` matching the
/// moment triple exactly.
#[derive(Debug, Clone, Copy)]
pub struct BinaryPair {
    pub r: f64,
    pub s: f64,
    pub u1: f64,
    pub u2: f64,
    /// The mean gap `x`.
    pub delta: f64,
    /// The variance gap `z - y`.
    pub b: f64,
    /// Half the eigenvalue gap, `(u1 - u2)/2`.
    pub v: f64,
}

impl BinaryPair {
    /// `(Bern(r), Bern(s))` as a classical pair.
    pub fn classical_pair(&self) -> Result<ClassicalPair> {
        ClassicalPair::bernoulli(self.r, self.s)
    }

    /// The moment triple this pair realizes (for checking round trips).
    pub fn moment_triple(&self) -> MomentTriple {
        let gap = self.u1 - self.u2;
        MomentTriple {
            x: (self.r - self.s) * gap,
            y: self.r * (1.0 - self.r) * gap * gap,
            z: self.s * (1.0 - self.s) * gap * gap,
        }
    }

    /// Commuting qubit realization: `rho* = diag(r, 1-r)`,
    /// `sigma* = diag(s, 1-s)`, `theta = diag(u1, u2)`.
    pub fn quantum_states(&self) -> Result<(DensityMatrix, DensityMatrix, Observable)> {
        Ok((
            DensityMatrix::from_probabilities(&[self.r, 1.0 - self.r])?,
            DensityMatrix::from_probabilities(&[self.s, 1.0 - self.s])?,
            Observable::from_diagonal(&[self.u1, self.u2]),
        ))
    }
}

/// Construct the saturating binary pair from a strictly interior triple
/// (`x != 0`, `y > 0`, `z > 0`):
///
/// ```text
/// Δ = x,  b = z - y,  v = sqrt(b² + 2Δ²(y+z) + Δ⁴) / (2|Δ|),
/// r = 1/2 + (b + Δ²)/(4Δv),  s = 1/2 + (b - Δ²)/(4Δv),
/// ```
///
/// with the eigenvalue gap fixed by moment matching,
/// `(u1-u2)² = y/(r(1-r)) = z/(s(1-s)) = (2v)²`, and the location anchored
/// so the mean under `Bern(r)` is zero.
pub fn saturating_pair(m: &MomentTriple) -> Result<BinaryPair> {
    if m.x == 0.0 || m.y <= 0.0 || m.z <= 0.0 {
        return Err(Error::DegenerateTriple {
            x: m.x,
            y: m.y,
            z: m.z,
        });
    }
    let delta = m.x;
    let b = m.z - m.y;
    let d2 = delta * delta;
    let v = (b * b + 2.0 * d2 * (m.y + m.z) + d2 * d2).sqrt() / (2.0 * delta.abs());
    let r = 0.5 + (b + d2) / (4.0 * delta * v);
    let s = 0.5 + (b - d2) / (4.0 * delta * v);
    if !(r > 0.0 && r < 1.0 && s > 0.0 && s < 1.0) {
        return Err(Error::DegenerateTriple {
            x: m.x,
            y: m.y,
            z: m.z,
        });
    }
    let gap = 2.0 * v; // u1 - u2
    Ok(BinaryPair {
        r,
        s,
        u1: (1.0 - r) * gap,
        u2: -r * gap,
        delta,
        b,
        v,
    })
}

/// Everything about the bound for one `(gen, rho, sigma, theta)` instance.
#[derive(Debug, Clone)]
pub struct TurReport {
    pub divergence: f64,
    pub bound: f64,
    /// `divergence - bound`; nonnegative up to 1e-8 numerical slack.
    pub slack: f64,
    pub moments: MomentTriple,
    pub saturating_pair: Option<BinaryPair>,
    /// `(λ, w(λ) h_λ)` samples of the bound integrand (density part).
    pub lambda_curve: Vec<(f64, f64)>,
}

impl TurReport {
    /// Canonical JSON with lexicographic keys.
    pub fn to_json(&self) -> serde_json::Value {
        let pair = self.saturating_pair.as_ref().map(|p| {
            serde_json::json!({
                "b": p.b,
                "delta": p.delta,
                "r": p.r,
                "s": p.s,
                "u1": p.u1,
                "u2": p.u2,
                "v": p.v,
            })
        });
        serde_json::json!({
            "bound": self.bound,
            "divergence": self.divergence,
            "lambda_curve": self
                .lambda_curve
                .iter()
                .map(|&(l, wh)| serde_json::json!([l, wh]))
                .collect::<Vec<_>>(),
            "moments": {
                "x": self.moments.x,
                "y": self.moments.y,
                "z": self.moments.z,
            },
            "saturating_pair": pair,
            "slack": self.slack,
        })
    }
}

/// Full bound report: divergence via NS, bound via the mixing law, slack,
/// the saturating pair when the triple is interior, and the sampled
/// `w·h` curve.
pub fn tur_report(
    gen: &Generator,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    obs: &Observable,
    quad: &QuadratureSpec,
) -> Result<TurReport> {
    tur_report_with(gen, rho, sigma, obs, quad, EndpointConvention::ZeroAtOrigin)
}

/// [`tur_report`] under an explicit endpoint convention.
pub fn tur_report_with(
    gen: &Generator,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    obs: &Observable,
    quad: &QuadratureSpec,
    conv: EndpointConvention,
) -> Result<TurReport> {
    let m = moment_triple(rho, sigma, obs)?;
    let w = analytic_weight(gen)?;
    let divergence = petz_divergence(gen, rho, sigma)?;
    let bound = tur_bound_with(gen, &m, &w, quad, conv)?;
    let slack = if divergence.is_infinite() {
        f64::INFINITY
    } else {
        divergence - bound
    };
    let saturating = saturating_pair(&m).ok();
    let lambda_curve = lambda_grid(DEFAULT_GRID_POINTS)
        .into_iter()
        .map(|lam| (lam, w.density_at(lam) * h_lambda(&m, lam)))
        .collect();
    Ok(TurReport {
        divergence,
        bound,
        slack,
        moments: m,
        saturating_pair: saturating,
        lambda_curve,
    })
}

/// Result of the Chapman-Robbins variational check.
#[derive(Debug, Clone)]
pub struct CrReport {
    /// `χ²(P||Q) = Σ (P-Q)²/Q`.
    pub chi2: f64,
    /// Ratio achieved by the closed-form optimizer `Θ* = P/Q`.
    pub optimizer_ratio: f64,
    /// Best ratio over the random statistics tried.
    pub max_random_ratio: f64,
    pub trials: usize,
}

fn cr_ratio(theta: &[f64], pair: &ClassicalPair) -> Option<f64> {
    let mut bias = 0.0;
    let mut mean_q = 0.0;
    for ((&t, &p), &q) in theta.iter().zip(pair.p()).zip(pair.q()) {
        bias += (p - q) * t;
        mean_q += q * t;
    }
    // Two-pass variance: the one-pass form loses all its digits exactly when
    // the statistic is nearly degenerate.
    let var_q: f64 = theta
        .iter()
        .zip(pair.q())
        .map(|(&t, &q)| q * (t - mean_q) * (t - mean_q))
        .sum();
    if var_q < 1e-12 {
        return None;
    }
    Some(bias * bias / var_q)
}

/// Verify the variational identity `χ²(P||Q) = sup_Θ bias²/Var_Q`: the
/// optimizer `Θ* = P/Q` attains it, and no random statistic exceeds it.
pub fn chapman_robbins_verify(
    pair: &ClassicalPair,
    trials: usize,
    seed: u64,
) -> Result<CrReport> {
    for (i, (&p, &q)) in pair.p().iter().zip(pair.q()).enumerate() {
        if p > 0.0 && q == 0.0 {
            return Err(Error::SupportViolation(i));
        }
    }
    let chi2: f64 = pair
        .p()
        .iter()
        .zip(pair.q())
        .filter(|(_, &q)| q > 0.0)
        .map(|(&p, &q)| (p - q) * (p - q) / q)
        .sum();
    let optimizer: Vec<f64> = pair
        .p()
        .iter()
        .zip(pair.q())
        .map(|(&p, &q)| if q > 0.0 { p / q } else { 0.0 })
        .collect();
    let optimizer_ratio = cr_ratio(&optimizer, pair).unwrap_or(0.0);

    let mut rng = StdRng::seed_from_u64(seed);
    let mut max_random_ratio = 0.0f64;
    let mut done = 0usize;
    let mut attempts = 0usize;
    while done < trials && attempts < trials * 20 + 100 {
        attempts += 1;
        let theta: Vec<f64> = (0..pair.len())
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        if let Some(ratio) = cr_ratio(&theta, pair) {
            max_random_ratio = max_random_ratio.max(ratio);
            done += 1;
        }
    }
    Ok(CrReport {
        chi2,
        optimizer_ratio,
        max_random_ratio,
        trials: done,
    })
}

/// An independently computed moment triple for the NS-lifted observable:
/// the real bias (means are preserved exactly) with the complex variances.
pub fn ns_lifted_triple(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    obs: &Observable,
) -> Result<MomentTriple> {
    let joint = crate::ns::ns_pair(rho, sigma, crate::ns::DEFAULT_OVERLAP_TOL)?;
    let lifted = crate::ns::ns_observable(rho, sigma, obs, crate::ns::DEFAULT_OVERLAP_TOL)?;
    let bias: Complex64 = lifted.mean(joint.p_flat()) - lifted.mean(joint.q_flat());
    Ok(MomentTriple {
        x: bias.re,
        y: lifted.variance(joint.p_flat()).max(0.0),
        z: lifted.variance(joint.q_flat()).max(0.0),
    })
}
