//! Mixing laws `w_f` of the chi-square mixture representation.
//!
//! A [`WeightMeasure`] is a nonnegative measure on (0,1): an integrable
//! density plus a finite list of Dirac atoms. Catalog generators carry their
//! law in closed form; for anything else the density can be recovered
//! numerically by boundary evaluation of `g(z) = f(z)/(z-1)^2` just below the
//! negative real axis,
//!
//! ```text
//! phi_f(t) = (1/(pi t)) lim_{eps->0} Im g(-1/t - i eps),
//! w_f(lambda) = phi_f((1-lambda)/lambda) / lambda.
//! ```
//!
//! The limit is taken by Richardson extrapolation over a descending epsilon
//! schedule. Dirac atoms are invisible to pointwise boundary sampling, so the
//! numeric route refuses atom-bearing generators (pearson, neyman,
//! triangular) instead of silently dropping mass.

use std::sync::Arc;

use crate::generators::Generator;
use crate::quad::{gauss_legendre_adaptive, tanh_sinh, QuadMethod, QuadratureSpec};
use crate::{Error, Result};

/// Point mass of the mixing law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    /// Position in [0,1].
    pub location: f64,
    /// Mass (> 0).
    pub mass: f64,
}

#[derive(Clone)]
enum DensityRepr {
    None,
    Analytic(Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>),
    Sampled { lambdas: Vec<f64>, values: Vec<f64> },
}

/// Mixing law on (0,1): density part plus atoms.
#[derive(Clone)]
pub struct WeightMeasure {
    density: DensityRepr,
    atoms: Vec<Atom>,
    /// `(a, b)` when the density behaves like `λ^a (1-λ)^b` near the
    /// endpoints; drives quadrature selection.
    endpoint_exponents: Option<(f64, f64)>,
}

impl std::fmt::Debug for WeightMeasure {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        out.debug_struct("WeightMeasure")
            .field("atoms", &self.atoms)
            .field("endpoint_exponents", &self.endpoint_exponents)
            .field(
                "density",
                &match &self.density {
                    DensityRepr::None => "none",
                    DensityRepr::Analytic(_) => "analytic",
                    DensityRepr::Sampled { .. } => "sampled",
                },
            )
            .finish()
    }
}

impl WeightMeasure {
    /// Purely continuous law from an analytic density `(λ, 1-λ) -> w(λ)`.
    pub fn density(
        f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        endpoint_exponents: (f64, f64),
    ) -> Self {
        Self {
            density: DensityRepr::Analytic(Arc::new(f)),
            atoms: Vec::new(),
            endpoint_exponents: Some(endpoint_exponents),
        }
    }

    /// Purely atomic law.
    pub fn atoms_only(atoms: Vec<Atom>) -> Self {
        Self {
            density: DensityRepr::None,
            atoms,
            endpoint_exponents: None,
        }
    }

    /// Density tabulated on an ascending λ grid (piecewise-linear in
    /// between, zero outside the grid hull).
    pub fn sampled(lambdas: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if lambdas.len() != values.len() {
            return Err(Error::GridMismatch(lambdas.len(), values.len()));
        }
        if lambdas.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(
                "sampled lambda grid must be strictly ascending".to_string(),
            ));
        }
        Ok(Self {
            density: DensityRepr::Sampled { lambdas, values },
            atoms: Vec::new(),
            endpoint_exponents: None,
        })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn endpoint_exponents(&self) -> Option<(f64, f64)> {
        self.endpoint_exponents
    }

    pub fn has_density(&self) -> bool {
        !matches!(self.density, DensityRepr::None)
    }

    /// Density value at λ.
    pub fn density_at(&self, lambda: f64) -> f64 {
        self.density_at2(lambda, 1.0 - lambda)
    }

    /// Density value with a cancellation-free complement, safe arbitrarily
    /// close to either endpoint.
    pub fn density_at2(&self, lambda: f64, one_minus: f64) -> f64 {
        match &self.density {
            DensityRepr::None => 0.0,
            DensityRepr::Analytic(f) => f(lambda, one_minus),
            DensityRepr::Sampled { lambdas, values } => {
                if lambdas.is_empty() {
                    return 0.0;
                }
                let (first, last) = (lambdas[0], *lambdas.last().unwrap());
                // Round-trip through t = (1-λ)/λ can move a grid node by an
                // ulp; snap to the hull instead of dropping to zero there.
                if lambda < first {
                    return if first - lambda < 1e-12 { values[0] } else { 0.0 };
                }
                if lambda > last {
                    return if lambda - last < 1e-12 {
                        *values.last().unwrap()
                    } else {
                        0.0
                    };
                }
                match lambdas.binary_search_by(|x| x.partial_cmp(&lambda).unwrap()) {
                    Ok(i) => values[i],
                    Err(i) => {
                        let (x0, x1) = (lambdas[i - 1], lambdas[i]);
                        let (y0, y1) = (values[i - 1], values[i]);
                        y0 + (y1 - y0) * (lambda - x0) / (x1 - x0)
                    }
                }
            }
        }
    }

    /// The reflected law `λ -> w(1-λ)` (atoms included).
    pub fn reflected(&self) -> Self {
        let density = match &self.density {
            DensityRepr::None => DensityRepr::None,
            DensityRepr::Analytic(f) => {
                let inner = f.clone();
                DensityRepr::Analytic(Arc::new(move |lam, one_minus| inner(one_minus, lam)))
            }
            DensityRepr::Sampled { lambdas, values } => {
                let mut pairs: Vec<(f64, f64)> = lambdas
                    .iter()
                    .zip(values)
                    .map(|(&l, &v)| (1.0 - l, v))
                    .collect();
                pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
                DensityRepr::Sampled {
                    lambdas: pairs.iter().map(|p| p.0).collect(),
                    values: pairs.iter().map(|p| p.1).collect(),
                }
            }
        };
        Self {
            density,
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    location: 1.0 - a.location,
                    mass: a.mass,
                })
                .collect(),
            endpoint_exponents: self.endpoint_exponents.map(|(a, b)| (b, a)),
        }
    }

    /// `∫ w(λ) k(λ) dλ` over the density part only (atoms are the caller's
    /// business since the kernel may have endpoint conventions of its own).
    pub fn integrate_density(
        &self,
        kernel: impl Fn(f64, f64) -> f64,
        spec: &QuadratureSpec,
    ) -> Result<f64> {
        if !self.has_density() {
            return Ok(0.0);
        }
        let f = |lam: f64, one_minus: f64| self.density_at2(lam, one_minus) * kernel(lam, one_minus);
        match spec.resolved_method(self.endpoint_exponents) {
            QuadMethod::GaussLegendreAdaptive => {
                gauss_legendre_adaptive(f, spec.rel_tol, spec.max_subdivisions)
            }
            _ => tanh_sinh(f, spec.rel_tol, spec.tanh_sinh_levels()),
        }
    }

    /// Total mass `∫ w dλ + Σ masses`.
    pub fn total_mass(&self, spec: &QuadratureSpec) -> Result<f64> {
        let density = self.integrate_density(|_, _| 1.0, spec)?;
        Ok(density + self.atoms.iter().map(|a| a.mass).sum::<f64>())
    }
}

/// Chebyshev-spaced grid of `n` points on the open interval (0,1).
pub fn lambda_grid(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| 0.5 * (1.0 - (std::f64::consts::PI * (2.0 * k as f64 + 1.0) / (2.0 * n as f64)).cos()))
        .collect()
}

/// Default number of λ grid points used by curves and CSV exports.
pub const DEFAULT_GRID_POINTS: usize = 129;

/// Boundary-offset schedule for the Stieltjes inversion.
#[derive(Debug, Clone)]
pub struct InversionConfig {
    /// Strictly descending, all positive.
    pub epsilons: Vec<f64>,
    /// Degree of the Richardson/Neville extrapolation in epsilon.
    pub extrapolation_order: usize,
}

impl Default for InversionConfig {
    fn default() -> Self {
        Self {
            epsilons: vec![1e-3, 5e-4, 2.5e-4],
            extrapolation_order: 2,
        }
    }
}

impl InversionConfig {
    fn validate(&self) -> Result<()> {
        if self.epsilons.is_empty()
            || self.epsilons.iter().any(|&e| e <= 0.0)
            || self.epsilons.windows(2).any(|w| w[0] <= w[1])
        {
            return Err(Error::InvalidInput(
                "epsilons must be strictly descending and positive".to_string(),
            ));
        }
        Ok(())
    }
}

/// The generator's closed-form mixing law.
///
/// Errors with [`Error::UnsupportedGenerator`] for generators outside the
/// catalog; use the numeric route ([`invert_weight`] + [`weight_from_phi`])
/// for those.
pub fn analytic_weight(gen: &Generator) -> Result<WeightMeasure> {
    gen.analytic_weight_ref()
        .cloned()
        .ok_or_else(|| Error::UnsupportedGenerator(gen.name().to_string()))
}

/// Neville polynomial extrapolation of `(x_i, y_i)` to `x = 0`.
fn extrapolate_to_zero(xs: &[f64], ys: &[f64], order: usize) -> f64 {
    let n = xs.len().min(order + 1);
    // Use the smallest x values (the tail of the descending schedule).
    let xs = &xs[xs.len() - n..];
    let mut table: Vec<f64> = ys[ys.len() - n..].to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let xi = xs[i];
            let xij = xs[i - j];
            table[i] = (xij * table[i] - xi * table[i - 1]) / (xij - xi);
        }
    }
    table[n - 1]
}

/// Sample `phi_f` on a grid of `t > 0` by extrapolated boundary values of
/// `g`: `phi_f(t) = Im g(-1/t - i eps) / (pi t)` as `eps` descends.
///
/// Values in `(-1e-6, 0)` are clamped to 0; a point mass in the law does not
/// show up here (its location carries zero Lebesgue measure).
pub fn invert_weight(gen: &Generator, t_grid: &[f64], cfg: &InversionConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let mut out = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        if !t.is_finite() || t <= 0.0 {
            return Err(Error::InvalidInput(format!("t grid must be positive, got {t}")));
        }
        let mut samples = Vec::with_capacity(cfg.epsilons.len());
        for &eps in &cfg.epsilons {
            let z = num_complex::Complex64::new(-1.0 / t, -eps);
            let g = gen.g_complex(z);
            if !g.im.is_finite() || !g.re.is_finite() {
                return Err(Error::BranchCutError(t));
            }
            samples.push(g.im);
        }
        let limit = extrapolate_to_zero(&cfg.epsilons, &samples, cfg.extrapolation_order);
        let mut phi = limit / (std::f64::consts::PI * t);
        if phi < 0.0 && phi > -1e-6 {
            phi = 0.0;
        }
        out.push(phi);
    }
    Ok(out)
}

/// Substitute `t = (1-λ)/λ` to turn `phi` samples into a density sampled on
/// the corresponding λ grid: `w(λ) = phi(t)/λ = phi(t)(1+t)`.
///
/// Atoms are never recovered numerically; the result is density-only.
pub fn weight_from_phi(phi_samples: &[f64], t_grid: &[f64]) -> Result<WeightMeasure> {
    if phi_samples.len() != t_grid.len() {
        return Err(Error::GridMismatch(phi_samples.len(), t_grid.len()));
    }
    let mut pairs: Vec<(f64, f64)> = t_grid
        .iter()
        .zip(phi_samples)
        .map(|(&t, &phi)| (1.0 / (1.0 + t), phi * (1.0 + t)))
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    WeightMeasure::sampled(
        pairs.iter().map(|p| p.0).collect(),
        pairs.iter().map(|p| p.1).collect(),
    )
}

/// Full numeric pipeline: λ grid -> t grid -> inversion -> sampled density.
///
/// Refuses atom-bearing generators: a Dirac mass is invisible to pointwise
/// boundary sampling, so the recovered density would silently lose it.
pub fn numeric_weight(
    gen: &Generator,
    lambda_points: &[f64],
    cfg: &InversionConfig,
) -> Result<WeightMeasure> {
    if gen.has_atomic_weight() {
        return Err(Error::UnsupportedGenerator(gen.name().to_string()));
    }
    let t_grid: Vec<f64> = lambda_points.iter().map(|&l| (1.0 - l) / l).collect();
    let phi = invert_weight(gen, &t_grid, cfg)?;
    weight_from_phi(&phi, &t_grid)
}

/// One compared moment of the mixing law.
#[derive(Debug, Clone)]
pub struct MomentLine {
    pub name: &'static str,
    /// Integral against the weight (may be `+∞`).
    pub weight_side: f64,
    /// The generator-side value it must reproduce (may be `+∞`).
    pub generator_side: f64,
    pub matched: bool,
    /// Both sides diverge; counted as a match.
    pub both_infinite: bool,
}

/// Report of [`moment_checks`].
#[derive(Debug, Clone)]
pub struct MomentReport {
    pub lines: Vec<MomentLine>,
}

impl MomentReport {
    pub fn all_matched(&self) -> bool {
        self.lines.iter().all(|l| l.matched)
    }
}

const MOMENT_REL_TOL: f64 = 1e-6;

fn compare(name: &'static str, weight_side: f64, generator_side: f64) -> MomentLine {
    let both_infinite = weight_side.is_infinite() && generator_side.is_infinite();
    let matched = if both_infinite {
        true
    } else if weight_side.is_finite() && generator_side.is_finite() {
        (weight_side - generator_side).abs()
            <= MOMENT_REL_TOL * generator_side.abs().max(1.0)
    } else {
        false
    };
    MomentLine {
        name,
        weight_side,
        generator_side,
        matched,
        both_infinite,
    }
}

/// Second derivative of `f` at 1 by Richardson-extrapolated central
/// differences.
fn second_derivative_at_1(gen: &Generator) -> f64 {
    let hs = [1e-3, 5e-4, 2.5e-4];
    let d2: Vec<f64> = hs
        .iter()
        .map(|&h| (gen.f(1.0 + h) - 2.0 * gen.f(1.0) + gen.f(1.0 - h)) / (h * h))
        .collect();
    // Error is O(h^2): extrapolate in h^2.
    let xs: Vec<f64> = hs.iter().map(|&h| h * h).collect();
    extrapolate_to_zero(&xs, &d2, 2)
}

/// Moment of the weight against `λ^(-1)`, `(1-λ)^(-1)` or `(1-λ)^k`,
/// honoring atoms and recognizing divergence from the endpoint exponents.
fn weight_moment(
    w: &WeightMeasure,
    kernel: impl Fn(f64, f64) -> f64,
    diverges: bool,
    atom_value: impl Fn(&Atom) -> f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if diverges {
        return Ok(f64::INFINITY);
    }
    let mut acc = w.integrate_density(kernel, spec)?;
    for a in w.atoms() {
        let v = atom_value(a);
        if v.is_infinite() {
            return Ok(f64::INFINITY);
        }
        acc += v;
    }
    Ok(acc)
}

/// Check the mixing law against the boundary/curvature data of its
/// generator: the inverse-λ moment against `f~(0+)`, the inverse-(1-λ)
/// moment against `lim f(u)/u`, the total mass against `f~''(1)/2`, and the
/// small-contrast series at `u = 1 ± 0.1`.
///
/// Mismatches are reported, never thrown.
pub fn moment_checks(w: &WeightMeasure, gen: &Generator) -> Result<MomentReport> {
    let spec = QuadratureSpec::default();
    let c0 = gen.f(1.0);
    let c1 = gen.f_prime_at_1();
    // Centered boundary data f~ = f - c0 - c1 (u - 1).
    let f0_centered = if gen.f_at_0_plus().is_finite() {
        gen.f_at_0_plus() - c0 + c1
    } else {
        f64::INFINITY
    };
    let slope_centered = if gen.slope_at_inf().is_finite() {
        gen.slope_at_inf() - c1
    } else {
        f64::INFINITY
    };

    let (a_exp, b_exp) = w.endpoint_exponents().unwrap_or((1.0, 1.0));
    let mut lines = Vec::new();

    // f~(0+) = ∫ λ^{-1} w dλ  (+ atom masses / λ0)
    let inv_lambda_diverges =
        (w.has_density() && a_exp <= 0.0) || w.atoms().iter().any(|a| a.location == 0.0);
    let m_inv_lambda = weight_moment(
        w,
        |lam, _| 1.0 / lam,
        inv_lambda_diverges,
        |a| {
            if a.location == 0.0 {
                f64::INFINITY
            } else {
                a.mass / a.location
            }
        },
        &spec,
    )?;
    lines.push(compare("inv_lambda_vs_f_at_0", m_inv_lambda, f0_centered));

    // lim f(u)/u = ∫ (1-λ)^{-1} w dλ  (+ atom masses / (1-λ0))
    let inv_comp_diverges =
        (w.has_density() && b_exp <= 0.0) || w.atoms().iter().any(|a| a.location == 1.0);
    let m_inv_comp = weight_moment(
        w,
        |_, one_minus| 1.0 / one_minus,
        inv_comp_diverges,
        |a| {
            if a.location == 1.0 {
                f64::INFINITY
            } else {
                a.mass / (1.0 - a.location)
            }
        },
        &spec,
    )?;
    lines.push(compare("inv_complement_vs_slope", m_inv_comp, slope_centered));

    // f~''(1)/2 = ∫ w dλ (total mass)
    let mass = w.total_mass(&spec)?;
    lines.push(compare(
        "total_mass_vs_half_f_pp",
        mass,
        0.5 * second_derivative_at_1(gen),
    ));

    // Small-contrast series: f~(1+e) = Σ_{n>=2} (-1)^n m_{n-2} e^n with
    // m_k = ∫ (1-λ)^k w dλ.
    let mut comp_moments = Vec::new();
    for k in 0..=10usize {
        let mk = weight_moment(
            w,
            |_, one_minus| one_minus.powi(k as i32),
            false,
            |a| a.mass * (1.0 - a.location).powi(k as i32),
            &spec,
        )?;
        comp_moments.push(mk);
    }
    for eps in [0.1f64, -0.1] {
        let mut series = 0.0;
        for (k, mk) in comp_moments.iter().enumerate() {
            let n = (k + 2) as i32;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            series += sign * mk * eps.powi(n);
        }
        let direct = gen.f(1.0 + eps) - c0 - c1 * eps;
        lines.push(compare(
            if eps > 0.0 {
                "series_at_plus_0p1"
            } else {
                "series_at_minus_0p1"
            },
            series,
            direct,
        ));
    }

    Ok(MomentReport { lines })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const T_POINTS: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 10.0];

    #[test]
    fn analytic_weight_values() {
        let kl = analytic_weight(&Generator::kl()).unwrap();
        assert!((kl.density_at(0.25) - 0.25).abs() < 1e-15);

        let hel = analytic_weight(&Generator::hellinger()).unwrap();
        assert!((hel.density_at(0.5) - 1.0 / (2.0 * PI)).abs() < 1e-15);

        let pearson = analytic_weight(&Generator::pearson()).unwrap();
        assert_eq!(pearson.atoms().len(), 1);
        assert_eq!(pearson.atoms()[0].location, 1.0);
        assert_eq!(pearson.atoms()[0].mass, 1.0);
        assert!(!pearson.has_density());

        let custom = Generator::custom(
            "c",
            |u| (u - 1.0).abs(),
            |_| num_complex::Complex64::new(0.0, 0.0),
            0.0,
            1.0,
            1.0,
        );
        assert!(matches!(
            analytic_weight(&custom),
            Err(Error::UnsupportedGenerator(_))
        ));
    }

    #[test]
    fn jeffreys_weight_is_average_of_kl_and_rkl() {
        let j = analytic_weight(&Generator::jeffreys()).unwrap();
        let kl = analytic_weight(&Generator::kl()).unwrap();
        let rkl = analytic_weight(&Generator::rkl()).unwrap();
        for &lam in &lambda_grid(33) {
            let avg = 0.5 * (kl.density_at(lam) + rkl.density_at(lam));
            assert!((j.density_at(lam) - avg).abs() < 1e-12);
        }
    }

    #[test]
    fn inversion_matches_analytic_phi() {
        // phi_KL(t) = 1/(1+t)^2, phi_rKL(t) = t/(1+t)^2,
        // phi_H(t) = sqrt(t)/(pi (1+t)^2).
        let cfg = InversionConfig::default();
        let kl = invert_weight(&Generator::kl(), &T_POINTS, &cfg).unwrap();
        let rkl = invert_weight(&Generator::rkl(), &T_POINTS, &cfg).unwrap();
        let hel = invert_weight(&Generator::hellinger(), &T_POINTS, &cfg).unwrap();
        for (i, &t) in T_POINTS.iter().enumerate() {
            let d = 1.0 + t;
            assert!((kl[i] - 1.0 / (d * d)).abs() < 1e-6, "kl at t={t}: {}", kl[i]);
            assert!((rkl[i] - t / (d * d)).abs() < 1e-6, "rkl at t={t}");
            assert!(
                (hel[i] - t.sqrt() / (PI * d * d)).abs() < 1e-6,
                "hellinger at t={t}"
            );
        }
        // Spot values at t = 1.
        assert!((kl[2] - 0.25).abs() < 1e-6);
        assert!((rkl[2] - 0.25).abs() < 1e-6);
        assert!((hel[2] - 1.0 / (4.0 * PI)).abs() < 1e-6);
    }

    #[test]
    fn inversion_renyi_matches_analytic_phi() {
        let cfg = InversionConfig::default();
        for alpha in [0.25, 0.5, 0.75] {
            let gen = Generator::renyi(alpha).unwrap();
            let phi = invert_weight(&gen, &T_POINTS, &cfg).unwrap();
            for (i, &t) in T_POINTS.iter().enumerate() {
                let expected = (PI * alpha).sin() / (PI * alpha * (1.0 - alpha))
                    * t.powf(1.0 - alpha)
                    / ((1.0 + t) * (1.0 + t));
                assert!(
                    (phi[i] - expected).abs() <= 1e-3 * expected,
                    "alpha={alpha} t={t}: {} vs {expected}",
                    phi[i]
                );
            }
        }
    }

    #[test]
    fn weight_from_phi_substitution_oracle() {
        // Oracle: substituting phi_KL = 1/(1+t)^2 must reproduce w(λ) = λ,
        // and phi_H must reproduce the arcsine-type density.
        let lambdas = lambda_grid(41);
        let t_grid: Vec<f64> = lambdas.iter().map(|&l| (1.0 - l) / l).collect();
        let phi_kl: Vec<f64> = t_grid.iter().map(|&t| 1.0 / ((1.0 + t) * (1.0 + t))).collect();
        let w = weight_from_phi(&phi_kl, &t_grid).unwrap();
        for &lam in &lambdas {
            assert!((w.density_at(lam) - lam).abs() < 1e-3, "lambda {lam}");
        }
        let phi_h: Vec<f64> = t_grid
            .iter()
            .map(|&t| t.sqrt() / (PI * (1.0 + t) * (1.0 + t)))
            .collect();
        let wh = weight_from_phi(&phi_h, &t_grid).unwrap();
        for &lam in &lambdas {
            let expected = (lam * (1.0 - lam)).sqrt() / PI;
            assert!((wh.density_at(lam) - expected).abs() < 1e-3);
        }
        // phi = 0 gives the zero density.
        let zero = weight_from_phi(&vec![0.0; t_grid.len()], &t_grid).unwrap();
        assert_eq!(zero.density_at(0.3), 0.0);
    }

    #[test]
    fn weight_from_phi_grid_mismatch() {
        assert!(matches!(
            weight_from_phi(&[0.1, 0.2], &[1.0]),
            Err(Error::GridMismatch(2, 1))
        ));
    }

    #[test]
    fn numeric_weight_refuses_atomic_generators() {
        let grid = lambda_grid(9);
        let cfg = InversionConfig::default();
        for gen in [
            Generator::pearson(),
            Generator::neyman(),
            Generator::triangular(),
        ] {
            assert!(matches!(
                numeric_weight(&gen, &grid, &cfg),
                Err(Error::UnsupportedGenerator(_))
            ));
        }
    }

    // Interior λ grid for numeric-inversion checks: keeps t = (1-λ)/λ within
    // the regime where the default epsilon schedule is asymptotic.
    fn interior_grid() -> Vec<f64> {
        (1..=17).map(|k| k as f64 / 18.0).collect()
    }

    #[test]
    fn duality_reflection_numeric() {
        // Numeric weight of dual(kl) at λ equals numeric weight of kl at 1-λ.
        let grid = interior_grid();
        let cfg = InversionConfig::default();
        let w_kl = numeric_weight(&Generator::kl(), &grid, &cfg).unwrap();
        let w_dual = numeric_weight(&crate::generators::dual(&Generator::kl()), &grid, &cfg).unwrap();
        for &lam in &grid {
            let a = w_dual.density_at(lam);
            let b = w_kl.density_at(1.0 - lam);
            assert!((a - b).abs() < 2e-6, "lambda {lam}: {a} vs {b}");
        }
    }

    #[test]
    fn affine_invariance_of_inversion() {
        // Adding a + b(u-1) to f leaves phi unchanged.
        let (a, b) = (0.3, -0.7);
        let kl = Generator::kl();
        let shifted = {
            let inner_g = move |z: num_complex::Complex64| {
                let zm1 = z - 1.0;
                Generator::kl().g_complex(z) + (a + b * zm1) / (zm1 * zm1)
            };
            Generator::custom(
                "kl_affine",
                move |u| Generator::kl().f(u) + a + b * (u - 1.0),
                inner_g,
                b,
                1.0 + a - b,
                f64::INFINITY,
            )
        };
        let cfg = InversionConfig::default();
        let phi0 = invert_weight(&kl, &T_POINTS, &cfg).unwrap();
        let phi1 = invert_weight(&shifted, &T_POINTS, &cfg).unwrap();
        for i in 0..T_POINTS.len() {
            assert!((phi0[i] - phi1[i]).abs() < 2e-6, "t = {}", T_POINTS[i]);
        }
    }

    #[test]
    fn order_preservation_on_grid() {
        // w_{f1+f2} >= w_{f1} pointwise when f2 is a nonnegative convex
        // catalog contribution: jeffreys + hellinger vs jeffreys alone,
        // checked through the analytic densities.
        let j = analytic_weight(&Generator::jeffreys()).unwrap();
        let h = analytic_weight(&Generator::hellinger()).unwrap();
        for &lam in &lambda_grid(65) {
            let combined = j.density_at(lam) + h.density_at(lam);
            assert!(combined >= j.density_at(lam) - 1e-6);
        }
    }

    #[test]
    fn moment_checks_kl() {
        // ∫ λ^{-1} λ dλ = 1 = f~(0+) and ∫ λ dλ = 1/2 = f''(1)/2.
        let gen = Generator::kl();
        let w = analytic_weight(&gen).unwrap();
        let report = moment_checks(&w, &gen).unwrap();
        let by_name = |n: &str| report.lines.iter().find(|l| l.name == n).unwrap().clone();
        let l0 = by_name("inv_lambda_vs_f_at_0");
        assert!(l0.matched && (l0.weight_side - 1.0).abs() < 1e-8);
        let mass = by_name("total_mass_vs_half_f_pp");
        assert!(mass.matched && (mass.weight_side - 0.5).abs() < 1e-8);
        // KL has infinite slope at infinity and the weight moment diverges
        // alongside it.
        let slope = by_name("inv_complement_vs_slope");
        assert!(slope.matched && slope.both_infinite);
        assert!(by_name("series_at_plus_0p1").matched);
        assert!(by_name("series_at_minus_0p1").matched);
    }

    #[test]
    fn moment_checks_hellinger() {
        // ∫ w = 1/8 vs f''(1)/2 = 1/8, ∫ λ^{-1} w = 1/2 vs f(0+) = 1/2.
        let gen = Generator::hellinger();
        let w = analytic_weight(&gen).unwrap();
        let report = moment_checks(&w, &gen).unwrap();
        assert!(report.all_matched());
        let mass = report
            .lines
            .iter()
            .find(|l| l.name == "total_mass_vs_half_f_pp")
            .unwrap();
        assert!((mass.weight_side - 0.125).abs() < 1e-8);
        let inv = report
            .lines
            .iter()
            .find(|l| l.name == "inv_lambda_vs_f_at_0")
            .unwrap();
        assert!((inv.weight_side - 0.5).abs() < 1e-8);
    }

    #[test]
    fn moment_checks_renyi_beta_identities() {
        // ∫ λ^{-1} w_a = 1/a (Beta-function identity) and ∫ w_a = 1/2.
        for alpha in [0.25, 0.5, 0.75] {
            let gen = Generator::renyi(alpha).unwrap();
            let w = analytic_weight(&gen).unwrap();
            let report = moment_checks(&w, &gen).unwrap();
            assert!(report.all_matched(), "alpha {alpha}: {report:?}");
            let inv = report
                .lines
                .iter()
                .find(|l| l.name == "inv_lambda_vs_f_at_0")
                .unwrap();
            assert!((inv.weight_side - 1.0 / alpha).abs() < 1e-6 / alpha);
            let mass = report
                .lines
                .iter()
                .find(|l| l.name == "total_mass_vs_half_f_pp")
                .unwrap();
            assert!((mass.weight_side - 0.5).abs() < 1e-7);
        }
    }

    #[test]
    fn moment_checks_atomic_generators() {
        // Pearson: atom at 1 -> ∫λ^{-1}w = 1 = f(0+), slope side infinite on
        // both accounts. Triangular: atom at 1/2 -> both moments equal 1.
        let p = Generator::pearson();
        let report = moment_checks(&analytic_weight(&p).unwrap(), &p).unwrap();
        assert!(report.all_matched(), "{report:?}");
        let t = Generator::triangular();
        let report = moment_checks(&analytic_weight(&t).unwrap(), &t).unwrap();
        assert!(report.all_matched(), "{report:?}");
        let n = Generator::neyman();
        let report = moment_checks(&analytic_weight(&n).unwrap(), &n).unwrap();
        assert!(report.all_matched(), "{report:?}");
    }

    #[test]
    fn nonnegativity_of_numeric_densities() {
        let grid = interior_grid();
        let cfg = InversionConfig::default();
        for gen in [
            Generator::kl(),
            Generator::rkl(),
            Generator::jeffreys(),
            Generator::hellinger(),
            Generator::renyi(0.3).unwrap(),
            Generator::sym_renyi(0.3).unwrap(),
        ] {
            let w = numeric_weight(&gen, &grid, &cfg).unwrap();
            for &lam in &grid {
                assert!(w.density_at(lam) >= -1e-6, "{} at {lam}", gen.name());
            }
        }
    }

    #[test]
    fn lambda_grid_is_open_and_ascending() {
        let g = lambda_grid(DEFAULT_GRID_POINTS);
        assert_eq!(g.len(), 129);
        assert!(g[0] > 0.0 && g[128] < 1.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }
}
