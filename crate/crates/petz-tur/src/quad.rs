//! Quadrature over the open unit interval.
//!
//! Two rules, selectable per integral:
//!
//! * **tanh-sinh** (double exponential): nodes cluster doubly-exponentially at
//!   the endpoints, so integrable endpoint singularities like `λ^(a-1)` with
//!   `a > 0` converge without special-casing. Integrands receive both `λ` and
//!   `1-λ` computed in a cancellation-free way, which matters once nodes get
//!   within 1e-300 of an endpoint.
//! * **adaptive Gauss-Legendre**: 15-point panels with bisection, for smooth
//!   integrands.
//!
//! Both are deterministic for identical inputs, and both abort with
//! [`Error::QuadratureFailure`] instead of returning a truncated value when
//! the integrand produces a non-finite sample or the budget runs out.

use crate::{Error, Result};

/// Integrand over (0,1) receiving `(lambda, 1 - lambda)` with each argument
/// accurate near its own endpoint.
pub trait UnitIntegrand: Fn(f64, f64) -> f64 {}
impl<T: Fn(f64, f64) -> f64> UnitIntegrand for T {}

/// Quadrature rule selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadMethod {
    /// Pick per integrand: tanh-sinh for unknown or non-polynomial endpoint
    /// behavior, Gauss-Legendre otherwise.
    Auto,
    GaussLegendreAdaptive,
    TanhSinh,
}

/// How hard to try when integrating over (0,1).
#[derive(Debug, Clone)]
pub struct QuadratureSpec {
    pub method: QuadMethod,
    /// Relative tolerance (> 0).
    pub rel_tol: f64,
    /// Subdivision budget for the adaptive Gauss-Legendre rule; the
    /// tanh-sinh rule caps its refinement levels independently.
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            method: QuadMethod::Auto,
            rel_tol: 1e-9,
            max_subdivisions: 4000,
        }
    }
}

impl QuadratureSpec {
    /// Resolve [`QuadMethod::Auto`] given the density's endpoint exponents
    /// `(a, b)` (density ~ `λ^a (1-λ)^b`), when known. Densities that are
    /// polynomial at both endpoints integrate fine with Gauss-Legendre;
    /// fractional powers and unknown behavior get the double-exponential
    /// rule.
    pub fn resolved_method(&self, endpoint_exponents: Option<(f64, f64)>) -> QuadMethod {
        match self.method {
            QuadMethod::Auto => {
                let polynomial = matches!(
                    endpoint_exponents,
                    Some((a, b)) if a >= 0.0 && b >= 0.0 && a.fract() == 0.0 && b.fract() == 0.0
                );
                if polynomial {
                    QuadMethod::GaussLegendreAdaptive
                } else {
                    QuadMethod::TanhSinh
                }
            }
            m => m,
        }
    }

    /// Refinement-level cap for tanh-sinh, derived from the subdivision
    /// budget but never beyond the rule's own maximum.
    pub fn tanh_sinh_levels(&self) -> usize {
        (usize::BITS - self.max_subdivisions.leading_zeros()) as usize
    }
}

const TANH_SINH_MAX_LEVEL: usize = 12;

/// Integrate over (0,1) by tanh-sinh doubling until successive levels agree
/// to `rel_tol` (relative, with an absolute floor).
pub fn tanh_sinh(f: impl UnitIntegrand, rel_tol: f64, max_level: usize) -> Result<f64> {
    let max_level = max_level.clamp(3, TANH_SINH_MAX_LEVEL);
    let half_pi = std::f64::consts::FRAC_PI_2;

    // Contribution of the node at parameter t (both symmetric sides).
    let eval_pair = |t: f64| -> Result<f64> {
        let u = half_pi * t.sinh();
        // lambda = (1 + tanh u)/2 and 1-lambda, both cancellation-free.
        let e2u = (-2.0 * u.abs()).exp();
        let near = e2u / (1.0 + e2u); // distance to the nearer endpoint
        let far = 1.0 / (1.0 + e2u);
        let sech2 = {
            let c = u.abs().exp() + (-u.abs()).exp();
            4.0 / (c * c)
        };
        let weight = half_pi * t.cosh() * sech2 * 0.5;
        if weight == 0.0 {
            return Ok(0.0);
        }
        let mut acc = 0.0;
        for (lam, lam1m) in [(far, near), (near, far)] {
            let v = f(lam, lam1m);
            if !v.is_finite() {
                return Err(Error::QuadratureFailure(format!(
                    "non-finite integrand sample at lambda = {lam:.6e}"
                )));
            }
            acc += weight * v;
        }
        Ok(acc)
    };

    let center = {
        let v = f(0.5, 0.5);
        if !v.is_finite() {
            return Err(Error::QuadratureFailure(
                "non-finite integrand sample at lambda = 0.5".to_string(),
            ));
        }
        half_pi * 0.5 * v
    };

    let mut h = 1.0f64;
    let mut sum = center;
    let mut previous = f64::NAN;
    let mut last_delta = f64::NAN;
    for level in 0..=max_level {
        if level > 0 {
            h *= 0.5;
        }
        // At level 0 take integer nodes; afterwards only the odd multiples of
        // the refined step are new.
        let mut k: u64 = 1;
        let step = if level == 0 { 1 } else { 2 };
        let mut new_sum = 0.0;
        let mut idx = 1usize;
        loop {
            let t = h * idx as f64;
            if t > 7.0 {
                // exp(pi/2 * sinh 7) underflows any double; nothing left.
                break;
            }
            let contrib = eval_pair(t)?;
            new_sum += contrib;
            // Stop extending once contributions vanish at working precision.
            if contrib.abs() <= 1e-300 && t > 3.0 {
                break;
            }
            idx += step;
            k += 1;
            if k > 1_000_000 {
                return Err(Error::QuadratureFailure(
                    "tanh-sinh node budget exhausted".to_string(),
                ));
            }
        }
        // I_n = I_{n-1}/2 + h_n * (new odd-node contributions); h_0 = 1.
        sum = if level == 0 { sum + new_sum } else { sum * 0.5 + new_sum * h };
        if level >= 2 {
            last_delta = (sum - previous).abs();
            if last_delta <= rel_tol * sum.abs().max(1e-300) || last_delta <= 1e-16 {
                return Ok(sum);
            }
        }
        previous = sum;
    }
    Err(Error::QuadratureFailure(format!(
        "tanh-sinh did not reach rel_tol within {max_level} levels (last delta {last_delta:.3e})"
    )))
}

// 15-point Gauss-Legendre nodes/weights on [-1, 1] (Newton on the Legendre
// recurrence, converged to the f64 roots).
const GL_NODES: [f64; 15] = [
    -0.987_992_518_020_485_4,
    -0.937_273_392_400_706,
    -0.848_206_583_410_427_2,
    -0.724_417_731_360_170_1,
    -0.570_972_172_608_538_8,
    -0.394_151_347_077_563_4,
    -0.201_194_093_997_434_5,
    0.0,
    0.201_194_093_997_434_5,
    0.394_151_347_077_563_4,
    0.570_972_172_608_538_8,
    0.724_417_731_360_170_1,
    0.848_206_583_410_427_2,
    0.937_273_392_400_706,
    0.987_992_518_020_485_4,
];
const GL_WEIGHTS: [f64; 15] = [
    0.030_753_241_996_117_49,
    0.070_366_047_488_108_15,
    0.107_159_220_467_172_04,
    0.139_570_677_926_154_3,
    0.166_269_205_816_993_95,
    0.186_161_000_015_562_1,
    0.198_431_485_327_111_58,
    0.202_578_241_925_561_3,
    0.198_431_485_327_111_58,
    0.186_161_000_015_562_1,
    0.166_269_205_816_993_95,
    0.139_570_677_926_154_3,
    0.107_159_220_467_172_04,
    0.070_366_047_488_108_15,
    0.030_753_241_996_117_49,
];

fn gl_panel(f: &impl UnitIntegrand, a: f64, b: f64) -> Result<f64> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (node, weight) in GL_NODES.iter().zip(GL_WEIGHTS.iter()) {
        let lam = mid + half * node;
        let v = f(lam, 1.0 - lam);
        if !v.is_finite() {
            return Err(Error::QuadratureFailure(format!(
                "non-finite integrand sample at lambda = {lam:.6e}"
            )));
        }
        acc += weight * v;
    }
    Ok(acc * half)
}

/// Adaptive Gauss-Legendre on (0,1): bisect panels until the two-half sum
/// agrees with the whole-panel estimate.
pub fn gauss_legendre_adaptive(
    f: impl UnitIntegrand,
    rel_tol: f64,
    max_subdivisions: usize,
) -> Result<f64> {
    let whole = gl_panel(&f, 0.0, 1.0)?;
    let scale = whole.abs().max(1e-300);
    let mut total = 0.0;
    let mut budget = max_subdivisions.max(16);
    // Depth-first, deterministic order.
    let mut stack = vec![(0.0f64, 1.0f64, whole)];
    while let Some((a, b, estimate)) = stack.pop() {
        let mid = 0.5 * (a + b);
        let left = gl_panel(&f, a, mid)?;
        let right = gl_panel(&f, mid, b)?;
        let refined = left + right;
        if (refined - estimate).abs() <= rel_tol * scale.max(refined.abs()) || (b - a) < 1e-12 {
            total += refined;
            continue;
        }
        if budget == 0 {
            return Err(Error::QuadratureFailure(
                "gauss-legendre subdivision budget exhausted".to_string(),
            ));
        }
        budget -= 1;
        stack.push((mid, b, right));
        stack.push((a, mid, left));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tanh_sinh_smooth() {
        // ∫0^1 1/(1+x) dx = ln 2
        let v = tanh_sinh(|x, _| 1.0 / (1.0 + x), 1e-12, 12).unwrap();
        assert!((v - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        // ∫0^1 x^{-1/2} dx = 2, singular at 0
        let v = tanh_sinh(|x, _| 1.0 / x.sqrt(), 1e-12, 12).unwrap();
        assert!((v - 2.0).abs() < 1e-10, "got {v}");
        // ∫0^1 (1-x)^{-1/2} dx = 2, singular at 1; needs the stable 1-x.
        let w = tanh_sinh(|_, x1m| 1.0 / x1m.sqrt(), 1e-12, 12).unwrap();
        assert!((w - 2.0).abs() < 1e-10, "got {w}");
    }

    #[test]
    fn tanh_sinh_beta_integral() {
        // ∫ λ^{-0.75} (1-λ)^{0.75} dλ = B(0.25, 1.75) = Γ(.25)Γ(1.75)/Γ(2)
        let v = tanh_sinh(
            |x, x1m| x.powf(-0.75) * x1m.powf(0.75),
            1e-12,
            12,
        )
        .unwrap();
        let expected = 3.332_162_203_618_775_5; // B(1/4, 7/4)
        assert!((v - expected).abs() < 1e-9, "got {v}");
    }

    #[test]
    fn tanh_sinh_rejects_infinite_sample() {
        let r = tanh_sinh(|x, _| 1.0 / (x - 0.5), 1e-10, 10);
        assert!(matches!(r, Err(Error::QuadratureFailure(_))));
    }

    #[test]
    fn gauss_legendre_polynomial_exact() {
        let v = gauss_legendre_adaptive(|x, _| x * x * x, 1e-12, 100).unwrap();
        assert!((v - 0.25).abs() < 1e-14);
    }

    #[test]
    fn gauss_legendre_adaptive_peak() {
        // Sharp but smooth bump needs subdivision.
        let v = gauss_legendre_adaptive(
            |x, _| 1.0 / (1e-4 + (x - 0.3) * (x - 0.3)),
            1e-10,
            10_000,
        )
        .unwrap();
        // ∫ dx/(a^2+(x-c)^2) = [atan((x-c)/a)]/a
        let a: f64 = 1e-2;
        let expected = ((0.7_f64 / a).atan() + (0.3_f64 / a).atan()) / a;
        assert!((v - expected).abs() < 1e-6 * expected, "got {v} want {expected}");
    }

    #[test]
    fn gauss_legendre_budget_error() {
        let r = gauss_legendre_adaptive(
            |x, _| 1.0 / (1e-9 + (x - 0.3) * (x - 0.3)),
            1e-12,
            4,
        );
        assert!(matches!(r, Err(Error::QuadratureFailure(_))));
    }
}
