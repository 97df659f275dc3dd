//! Catalog of f-divergence generators.
//!
//! A [`Generator`] bundles everything the rest of the crate needs to know
//! about an operator-convex `f`: the scalar function itself (normalized so
//! `f(1) = 0`), its boundary data `f(0+)` and `lim f(u)/u`, the complex map
//! `g(z) = f(z)/(z-1)^2` evaluated on principal branches (used by the
//! Stieltjes inversion just below the negative real axis), the known mixing
//! law where one exists in closed form, and a tag selecting a spectral
//! closed-form evaluator for the quantum divergence.
//!
//! The nine catalog entries:
//!
//! | name | f(u) | mixing law w(λ) |
//! |------|------|-----------------|
//! | `kl` | u ln u - (u-1) | λ |
//! | `rkl` | -ln u + (u-1) | 1-λ |
//! | `jeffreys` | (u-1) ln u / 2 | 1/2 |
//! | `pearson` | (u-1)² | atom at λ=1, mass 1 |
//! | `neyman` | (u-1)²/u | atom at λ=0, mass 1 |
//! | `hellinger` | (1/2)(√u-1)² | √(λ(1-λ))/π |
//! | `triangular` | (u-1)²/(u+1) | atom at λ=1/2, mass 1/2 |
//! | `renyi:a` | (u^a-1-a(u-1))/(a(a-1)) | sin(πa)/(πa(1-a)) λ^a (1-λ)^{1-a} |
//! | `sym_renyi:a` | renyi:a + renyi:1-a | sum of the two Beta densities |
//!
//! The Rényi entry uses the sign that makes `f` convex and the divergence
//! nonnegative, `D_a = (1 - Tr[ρ^a σ^{1-a}])/(a(1-a))`; this is the convention
//! under which the weight's moments close (`∫ w_a dλ = 1/2 = f''(1)/2`).

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::linalg::{generalized_inverse, DEFAULT_RANK_TOL};
use crate::states::DensityMatrix;
use crate::weights::{Atom, WeightMeasure};
use crate::{Error, Result};

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type ComplexFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// Tag naming a spectral closed-form evaluator for the quantum divergence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedForm {
    /// `Tr[rho (log rho - log sigma)]`
    Kl,
    /// `Tr[sigma (log sigma - log rho)]`
    Rkl,
    /// Mean of the two relative entropies.
    Jeffreys,
    /// `Tr(rho^2 sigma^-1) - 1`
    Pearson,
    /// `Tr(sigma^2 rho^-1) - 1`
    Neyman,
    /// `1 - Tr[sqrt(rho) sqrt(sigma)]`
    Hellinger,
    /// `(1 - Tr[rho^a sigma^(1-a)]) / (a(1-a))`
    Renyi(f64),
    /// `Renyi(a) + Renyi(1-a)`
    SymRenyi(f64),
}

/// An f-divergence generator with its analytic structure.
#[derive(Clone)]
pub struct Generator {
    name: String,
    f: ScalarFn,
    f_prime_at_1: f64,
    f_at_0_plus: f64,
    slope_at_inf: f64,
    g_complex: ComplexFn,
    alpha: Option<f64>,
    analytic_weight: Option<WeightMeasure>,
    closed_form: Option<ClosedForm>,
}

impl fmt::Debug for Generator {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.debug_struct("Generator")
            .field("name", &self.name)
            .field("alpha", &self.alpha)
            .field("closed_form", &self.closed_form)
            .finish()
    }
}

#[allow(clippy::too_many_arguments)]
fn make(
    name: String,
    f_raw: impl Fn(f64) -> f64 + Send + Sync + 'static,
    g_complex: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    f_prime_at_1: f64,
    f_at_0_plus: f64,
    slope_at_inf: f64,
    alpha: Option<f64>,
    analytic_weight: Option<WeightMeasure>,
    closed_form: Option<ClosedForm>,
) -> Generator {
    let f0 = f_at_0_plus;
    Generator {
        name,
        f: Arc::new(move |u: f64| if u == 0.0 { f0 } else { f_raw(u) }),
        f_prime_at_1,
        f_at_0_plus,
        slope_at_inf,
        g_complex: Arc::new(g_complex),
        alpha,
        analytic_weight,
        closed_form,
    }
}

impl Generator {
    /// Evaluate `f(u)` on `[0, ∞)`; `f(0)` returns the stored limit value
    /// (possibly `+∞`) and `f(1)` is exactly 0 for every catalog entry.
    pub fn f(&self, u: f64) -> f64 {
        (self.f)(u)
    }

    /// Evaluate `g(z) = f(z)/(z-1)^2` with principal branches of `ln` and
    /// powers (branch cut along the negative real axis).
    pub fn g_complex(&self, z: Complex64) -> Complex64 {
        (self.g_complex)(z)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    pub fn f_prime_at_1(&self) -> f64 {
        self.f_prime_at_1
    }

    /// `lim_{u -> 0+} f(u)` as an extended real.
    pub fn f_at_0_plus(&self) -> f64 {
        self.f_at_0_plus
    }

    /// `lim_{u -> ∞} f(u)/u` as an extended real.
    pub fn slope_at_inf(&self) -> f64 {
        self.slope_at_inf
    }

    pub fn closed_form(&self) -> Option<ClosedForm> {
        self.closed_form
    }

    /// The known mixing law, if this generator carries one.
    pub fn analytic_weight_ref(&self) -> Option<&WeightMeasure> {
        self.analytic_weight.as_ref()
    }

    /// True if the mixing law contains Dirac atoms (pearson, neyman,
    /// triangular); pointwise Stieltjes inversion cannot see those.
    pub fn has_atomic_weight(&self) -> bool {
        self.analytic_weight
            .as_ref()
            .map(|w| !w.atoms().is_empty())
            .unwrap_or(false)
    }

    /// Programmatic constructor for generators outside the catalog.
    pub fn custom(
        name: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        g_complex: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
        f_prime_at_1: f64,
        f_at_0_plus: f64,
        slope_at_inf: f64,
    ) -> Self {
        make(
            name.into(),
            f,
            g_complex,
            f_prime_at_1,
            f_at_0_plus,
            slope_at_inf,
            None,
            None,
            None,
        )
    }

    /// Forward Kullback-Leibler: `f(u) = u ln u - (u-1)`.
    pub fn kl() -> Self {
        make(
            "kl".to_string(),
            |u| {
                if u == 1.0 {
                    0.0
                } else {
                    u * u.ln() - (u - 1.0)
                }
            },
            |z| {
                let zm1 = z - 1.0;
                (z * z.ln() - zm1) / (zm1 * zm1)
            },
            0.0,
            1.0,
            f64::INFINITY,
            None,
            Some(WeightMeasure::density(
                |lam, _| lam,
                (1.0, 0.0),
            )),
            Some(ClosedForm::Kl),
        )
    }

    /// Reverse Kullback-Leibler: `f(u) = -ln u + (u-1)`.
    pub fn rkl() -> Self {
        make(
            "rkl".to_string(),
            |u| {
                if u == 1.0 {
                    0.0
                } else {
                    -u.ln() + (u - 1.0)
                }
            },
            |z| {
                let zm1 = z - 1.0;
                (-z.ln() + zm1) / (zm1 * zm1)
            },
            0.0,
            f64::INFINITY,
            1.0,
            None,
            Some(WeightMeasure::density(
                |_, one_minus| one_minus,
                (0.0, 1.0),
            )),
            Some(ClosedForm::Rkl),
        )
    }

    /// Jeffreys divergence: `f = (kl + rkl)/2 = (u-1) ln u / 2`.
    ///
    /// By linearity its weight is the average of the KL and reverse-KL
    /// weights, the constant density 1/2.
    pub fn jeffreys() -> Self {
        make(
            "jeffreys".to_string(),
            |u| {
                if u == 1.0 {
                    0.0
                } else {
                    0.5 * (u - 1.0) * u.ln()
                }
            },
            |z| 0.5 * z.ln() / (z - 1.0),
            0.0,
            f64::INFINITY,
            f64::INFINITY,
            None,
            Some(WeightMeasure::density(|_, _| 0.5, (0.0, 0.0))),
            Some(ClosedForm::Jeffreys),
        )
    }

    /// Pearson chi-square: `f(u) = (u-1)^2`, so `g ≡ 1` and the mixing law is
    /// a unit atom at λ = 1.
    pub fn pearson() -> Self {
        make(
            "pearson".to_string(),
            |u| (u - 1.0) * (u - 1.0),
            |_| Complex64::new(1.0, 0.0),
            0.0,
            1.0,
            f64::INFINITY,
            None,
            Some(WeightMeasure::atoms_only(vec![Atom {
                location: 1.0,
                mass: 1.0,
            }])),
            Some(ClosedForm::Pearson),
        )
    }

    /// Neyman chi-square (reverse Pearson): `f(u) = (u-1)^2/u`, `g = 1/u`,
    /// unit atom at λ = 0.
    pub fn neyman() -> Self {
        make(
            "neyman".to_string(),
            |u| (u - 1.0) * (u - 1.0) / u,
            |z| 1.0 / z,
            0.0,
            f64::INFINITY,
            1.0,
            None,
            Some(WeightMeasure::atoms_only(vec![Atom {
                location: 0.0,
                mass: 1.0,
            }])),
            Some(ClosedForm::Neyman),
        )
    }

    /// Squared Hellinger: `f(u) = (√u - 1)^2 / 2`.
    ///
    /// `g` simplifies to `1/(2(√z+1)^2)`, removing the double zero at z = 1.
    pub fn hellinger() -> Self {
        make(
            "hellinger".to_string(),
            |u| {
                if u == 1.0 {
                    0.0
                } else {
                    let d = u.sqrt() - 1.0;
                    0.5 * d * d
                }
            },
            |z| {
                let s = z.sqrt() + 1.0;
                0.5 / (s * s)
            },
            0.0,
            0.5,
            0.5,
            None,
            Some(WeightMeasure::density(
                |lam, one_minus| (lam * one_minus).sqrt() / PI,
                (0.5, 0.5),
            )),
            Some(ClosedForm::Hellinger),
        )
    }

    /// Triangular discrimination: `f(u) = (u-1)^2/(u+1)`, `g = 1/(u+1)`,
    /// atom of mass 1/2 at λ = 1/2.
    pub fn triangular() -> Self {
        make(
            "triangular".to_string(),
            |u| (u - 1.0) * (u - 1.0) / (u + 1.0),
            |z| 1.0 / (z + 1.0),
            0.0,
            1.0,
            1.0,
            None,
            Some(WeightMeasure::atoms_only(vec![Atom {
                location: 0.5,
                mass: 0.5,
            }])),
            None,
        )
    }

    /// Petz-Rényi generator for `alpha` in (0,1), convex normalization:
    /// `f(u) = (u^a - 1 - a(u-1)) / (a(a-1))`.
    pub fn renyi(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidAlpha(alpha));
        }
        let denom = alpha * (alpha - 1.0);
        let prefactor = (PI * alpha).sin() / (PI * alpha * (1.0 - alpha));
        Ok(make(
            format!("renyi:{alpha}"),
            move |u| {
                if u == 1.0 {
                    0.0
                } else {
                    (u.powf(alpha) - 1.0 - alpha * (u - 1.0)) / denom
                }
            },
            move |z| {
                let zm1 = z - 1.0;
                (z.powf(alpha) - 1.0 - alpha * zm1) / (denom * zm1 * zm1)
            },
            0.0,
            1.0 / alpha,
            1.0 / (1.0 - alpha),
            Some(alpha),
            Some(WeightMeasure::density(
                move |lam, one_minus| {
                    prefactor * lam.powf(alpha) * one_minus.powf(1.0 - alpha)
                },
                (alpha, 1.0 - alpha),
            )),
            Some(ClosedForm::Renyi(alpha)),
        ))
    }

    /// Symmetric Petz-Rényi: `renyi(alpha) + renyi(1-alpha)` pointwise.
    pub fn sym_renyi(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidAlpha(alpha));
        }
        let a = Self::renyi(alpha)?;
        let b = Self::renyi(1.0 - alpha)?;
        let (fa, fb) = (a.f.clone(), b.f.clone());
        let (ga, gb) = (a.g_complex.clone(), b.g_complex.clone());
        let prefactor = (PI * alpha).sin() / (PI * alpha * (1.0 - alpha));
        let (ea, eb) = (alpha, 1.0 - alpha);
        let edge = ea.min(eb);
        Ok(make(
            format!("sym_renyi:{alpha}"),
            move |u| fa(u) + fb(u),
            move |z| ga(z) + gb(z),
            0.0,
            1.0 / alpha + 1.0 / (1.0 - alpha),
            1.0 / alpha + 1.0 / (1.0 - alpha),
            Some(alpha),
            Some(WeightMeasure::density(
                move |lam, one_minus| {
                    prefactor
                        * (lam.powf(ea) * one_minus.powf(eb)
                            + lam.powf(eb) * one_minus.powf(ea))
                },
                (edge, edge),
            )),
            Some(ClosedForm::SymRenyi(alpha)),
        ))
    }

    /// The full nine-entry catalog for one Rényi order.
    pub fn catalog(alpha: f64) -> Result<Vec<Generator>> {
        Ok(vec![
            Self::kl(),
            Self::rkl(),
            Self::jeffreys(),
            Self::pearson(),
            Self::neyman(),
            Self::hellinger(),
            Self::triangular(),
            Self::renyi(alpha)?,
            Self::sym_renyi(alpha)?,
        ])
    }

    /// Resolve a CLI-style name: `kl | rkl | jeffreys | pearson | neyman |
    /// hellinger | triangular | renyi:<alpha> | sym_renyi:<alpha>`.
    pub fn by_name(name: &str) -> Result<Generator> {
        match name {
            "kl" => Ok(Self::kl()),
            "rkl" => Ok(Self::rkl()),
            "jeffreys" => Ok(Self::jeffreys()),
            "pearson" => Ok(Self::pearson()),
            "neyman" => Ok(Self::neyman()),
            "hellinger" => Ok(Self::hellinger()),
            "triangular" => Ok(Self::triangular()),
            other => {
                if let Some(rest) = other.strip_prefix("sym_renyi:") {
                    let alpha: f64 = rest
                        .parse()
                        .map_err(|_| Error::InvalidInput(format!("bad alpha in `{other}`")))?;
                    Self::sym_renyi(alpha)
                } else if let Some(rest) = other.strip_prefix("renyi:") {
                    let alpha: f64 = rest
                        .parse()
                        .map_err(|_| Error::InvalidInput(format!("bad alpha in `{other}`")))?;
                    Self::renyi(alpha)
                } else {
                    Err(Error::InvalidInput(format!("unknown generator `{other}`")))
                }
            }
        }
    }

    /// Worst midpoint-convexity violation of `f` over all pairs of a grid;
    /// nonpositive (up to rounding) for convex generators.
    pub fn midpoint_convexity_violation(&self, grid: &[f64]) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for &a in grid {
            for &b in grid {
                let lhs = self.f(0.5 * (a + b));
                let rhs = 0.5 * (self.f(a) + self.f(b));
                if lhs.is_finite() && rhs.is_finite() {
                    worst = worst.max(lhs - rhs);
                }
            }
        }
        worst
    }
}

/// Dual generator `f*(u) = u f(1/u)`, built generically from closures.
///
/// The mixing law reflects (`w_{f*}(λ) = w_f(1-λ)`), boundary data swaps,
/// and the closed-form tag maps to the evaluator with swapped arguments.
pub fn dual(gen: &Generator) -> Generator {
    let f_inner = gen.f.clone();
    let g_inner = gen.g_complex.clone();
    let f0 = gen.slope_at_inf; // f*(0+) = lim f(u)/u
    let slope = gen.f_at_0_plus; // lim f*(u)/u = f(0+)
    let closed = gen.closed_form.map(|cf| match cf {
        ClosedForm::Kl => ClosedForm::Rkl,
        ClosedForm::Rkl => ClosedForm::Kl,
        ClosedForm::Jeffreys => ClosedForm::Jeffreys,
        ClosedForm::Pearson => ClosedForm::Neyman,
        ClosedForm::Neyman => ClosedForm::Pearson,
        ClosedForm::Hellinger => ClosedForm::Hellinger,
        ClosedForm::Renyi(a) => ClosedForm::Renyi(1.0 - a),
        ClosedForm::SymRenyi(a) => ClosedForm::SymRenyi(a),
    });
    make(
        format!("dual({})", gen.name),
        move |u| {
            if u == 1.0 {
                0.0
            } else {
                u * f_inner(1.0 / u)
            }
        },
        move |z| g_inner(1.0 / z) / z,
        -gen.f_prime_at_1,
        f0,
        slope,
        None,
        gen.analytic_weight.as_ref().map(WeightMeasure::reflected),
        closed,
    )
}

/// Center a generator at u = 1: `f~(u) = f(u) - f(1) - f'(1)(u-1)`, so that
/// `f~(1) = f~'(1) = 0`. Affine shifts leave the mixing law untouched.
pub fn center(gen: &Generator) -> Generator {
    let f_inner = gen.f.clone();
    let g_inner = gen.g_complex.clone();
    let c0 = gen.f(1.0);
    let c1 = gen.f_prime_at_1;
    assert!(c1.is_finite(), "center() requires a finite f'(1)");
    let f0 = gen.f_at_0_plus - c0 + c1;
    let slope = if gen.slope_at_inf.is_finite() {
        gen.slope_at_inf - c1
    } else {
        gen.slope_at_inf
    };
    let closed = if c0 == 0.0 { gen.closed_form } else { None };
    make(
        format!("center({})", gen.name),
        move |u| f_inner(u) - c0 - c1 * (u - 1.0),
        move |z| {
            let zm1 = z - 1.0;
            g_inner(z) - (c0 + c1 * zm1) / (zm1 * zm1)
        },
        0.0,
        f0,
        slope,
        gen.alpha,
        gen.analytic_weight.clone(),
        closed,
    )
}

// ---------------------------------------------------------------------------
// Spectral closed forms
// ---------------------------------------------------------------------------

/// True if the support of `rho` is contained in the support of `sigma`.
fn support_contained(rho: &DensityMatrix, sigma: &DensityMatrix) -> bool {
    let spec = sigma.spectrum();
    let top = spec.eigenvalues.last().copied().unwrap_or(0.0);
    let cut = DEFAULT_RANK_TOL * top.max(1e-300);
    let n = sigma.dim();
    for k in 0..n {
        if spec.eigenvalues[k] > cut {
            continue;
        }
        // <v_k| rho |v_k> must vanish on sigma's kernel.
        let v = spec.eigenvector(k);
        let mut overlap = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                overlap += v[i].conj() * rho.matrix()[(i, j)] * v[j];
            }
        }
        if overlap.re > 1e-10 {
            return false;
        }
    }
    true
}

fn trace_product_re(a: &crate::linalg::ComplexMatrix, b: &crate::linalg::ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc.re
}

/// `Tr[rho log rho] = Σ p ln p` from the cached spectrum.
fn entropy_term(rho: &DensityMatrix) -> f64 {
    let top = rho.eigenvalues().last().copied().unwrap_or(0.0);
    let cut = DEFAULT_RANK_TOL * top.max(1e-300);
    rho.eigenvalues()
        .iter()
        .filter(|&&p| p > cut)
        .map(|&p| p * p.ln())
        .sum()
}

fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if !support_contained(rho, sigma) {
        return Ok(f64::INFINITY);
    }
    let top = sigma.eigenvalues().last().copied().unwrap_or(0.0);
    let cut = DEFAULT_RANK_TOL * top.max(1e-300);
    let log_sigma = crate::linalg::matfun_spec(sigma.spectrum(), f64::ln, Some(cut))?;
    Ok(entropy_term(rho) - trace_product_re(rho.matrix(), &log_sigma))
}

fn pearson_closed(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if !support_contained(rho, sigma) {
        return Ok(f64::INFINITY);
    }
    let sigma_inv = generalized_inverse(sigma.matrix(), DEFAULT_RANK_TOL)?;
    let rho_sq = rho.matrix().matmul(rho.matrix())?;
    Ok(trace_product_re(&rho_sq, &sigma_inv) - 1.0)
}

fn power_trace(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64) -> Result<f64> {
    let rho_a = crate::linalg::matfun_spec(rho.spectrum(), |p| p.powf(alpha), Some(-1.0))?;
    let sigma_b =
        crate::linalg::matfun_spec(sigma.spectrum(), |q| q.powf(1.0 - alpha), Some(-1.0))?;
    Ok(trace_product_re(&rho_a, &sigma_b))
}

/// Evaluate the quantum divergence by the generator's named spectral formula.
///
/// Errors with [`Error::UnsupportedGenerator`] when no closed form is known
/// (e.g. triangular discrimination or custom generators).
pub fn closed_form_divergence(
    gen: &Generator,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    let Some(tag) = gen.closed_form else {
        return Err(Error::UnsupportedGenerator(gen.name.clone()));
    };
    let value = match tag {
        ClosedForm::Kl => relative_entropy(rho, sigma)?,
        ClosedForm::Rkl => relative_entropy(sigma, rho)?,
        ClosedForm::Jeffreys => {
            0.5 * (relative_entropy(rho, sigma)? + relative_entropy(sigma, rho)?)
        }
        ClosedForm::Pearson => pearson_closed(rho, sigma)?,
        ClosedForm::Neyman => pearson_closed(sigma, rho)?,
        ClosedForm::Hellinger => {
            let sqrt_rho = crate::linalg::matfun_spec(rho.spectrum(), f64::sqrt, None)?;
            let sqrt_sigma = crate::linalg::matfun_spec(sigma.spectrum(), f64::sqrt, None)?;
            1.0 - trace_product_re(&sqrt_rho, &sqrt_sigma)
        }
        ClosedForm::Renyi(a) => (1.0 - power_trace(rho, sigma, a)?) / (a * (1.0 - a)),
        ClosedForm::SymRenyi(a) => {
            (2.0 - power_trace(rho, sigma, a)? - power_trace(rho, sigma, 1.0 - a)?)
                / (a * (1.0 - a))
        }
    };
    Ok(value)
}
