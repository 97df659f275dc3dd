//! The self-check battery behind `petz-tur verify`.
//!
//! Eight property suites, each reducing to (checks, failures, worst
//! residual): NS equality, the mixture identity, the TUR slack sweep,
//! binary-pair saturation, weight duality, moment identities, the
//! Chapman-Robbins variational bound, and Stieltjes-inversion agreement.
//! Aggregation is order-independent (sums and maxima only), so the summary
//! is byte-identical for a fixed seed regardless of thread count.

use crate::divergence::{
    chi2_lambda_classical, lr_divergence, mixture_divergence, petz_divergence,
    QuadratureSpec,
};
use crate::generators::{dual, Generator};
use crate::states::{random_density, random_observable, MomentTriple};
use crate::tur::{
    chapman_robbins_verify, h_lambda, saturating_pair, tur_report,
};
use crate::weights::{
    analytic_weight, invert_weight, lambda_grid, moment_checks, numeric_weight, InversionConfig,
    WeightMeasure,
};
use crate::divergence::ClassicalPair;
use crate::Result;

/// Battery configuration.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Scales the per-suite instance counts.
    pub trials: usize,
    pub rel_tol: f64,
    /// Thread cap; `None` reads `PETZ_TUR_THREADS`, falling back to the
    /// machine's parallelism.
    pub threads: Option<usize>,
    /// Test hook: corrupt the KL mixing law so property suites must fail.
    pub break_kl_weight: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            trials: 40,
            rel_tol: 1e-9,
            threads: None,
            break_kl_weight: false,
        }
    }
}

/// One suite's tally.
#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checks: usize,
    pub failures: usize,
    pub worst_residual: f64,
}

/// Full battery outcome.
#[derive(Debug, Clone)]
pub struct BatteryReport {
    pub seed: u64,
    pub trials: usize,
    pub suites: Vec<SuiteResult>,
}

impl BatteryReport {
    pub fn all_pass(&self) -> bool {
        self.suites.iter().all(|s| s.failures == 0)
    }

    /// Canonical JSON (lexicographic keys, fixed suite order).
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "all_pass": self.all_pass(),
            "seed": self.seed,
            "suites": self
                .suites
                .iter()
                .map(|s| {
                    serde_json::json!({
                        "checks": s.checks,
                        "failures": s.failures,
                        "name": s.name,
                        "worst_residual": s.worst_residual,
                    })
                })
                .collect::<Vec<_>>(),
            "trials": self.trials,
        })
    }
}

fn thread_count(cfg: &VerifyConfig, jobs: usize) -> usize {
    let requested = cfg.threads.or_else(|| {
        std::env::var("PETZ_TUR_THREADS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
    });
    let available = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    requested.unwrap_or(available).clamp(1, jobs.max(1))
}

/// Run `work(i)` for `i in 0..jobs` across up to `threads` workers and merge
/// `(checks, failures, residual)` tallies; merging is order-independent.
fn parallel_tally(
    jobs: usize,
    threads: usize,
    work: &(dyn Fn(usize) -> (usize, usize, f64) + Sync),
) -> (usize, usize, f64) {
    if jobs == 0 {
        return (0, 0, 0.0);
    }
    if threads <= 1 {
        let mut acc = (0usize, 0usize, 0.0f64);
        for i in 0..jobs {
            let (c, f, r) = work(i);
            acc = (acc.0 + c, acc.1 + f, acc.2.max(r));
        }
        return acc;
    }
    let chunk = jobs.div_ceil(threads);
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for t in 0..threads {
            let lo = t * chunk;
            let hi = ((t + 1) * chunk).min(jobs);
            if lo >= hi {
                break;
            }
            handles.push(scope.spawn(move || {
                let mut acc = (0usize, 0usize, 0.0f64);
                for i in lo..hi {
                    let (c, f, r) = work(i);
                    acc = (acc.0 + c, acc.1 + f, acc.2.max(r));
                }
                acc
            }));
        }
        let mut acc = (0usize, 0usize, 0.0f64);
        for h in handles {
            let (c, f, r) = h.join().expect("verify worker panicked");
            acc = (acc.0 + c, acc.1 + f, acc.2.max(r));
        }
        acc
    })
}

fn derived_seed(base: u64, salt: u64, trial: usize) -> u64 {
    base.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(salt.wrapping_mul(0x2545_F491_4F6C_DD1D))
        .wrapping_add(trial as u64)
}

fn kl_weight(cfg: &VerifyConfig) -> WeightMeasure {
    if cfg.break_kl_weight {
        WeightMeasure::density(|lam, _| 1.05 * lam, (1.0, 0.0))
    } else {
        analytic_weight(&Generator::kl()).expect("kl carries a weight")
    }
}

fn suite_ns_equality(cfg: &VerifyConfig) -> Result<SuiteResult> {
    let gens = Generator::catalog(0.5)?;
    let jobs = cfg.trials;
    let work = |i: usize| -> (usize, usize, f64) {
        let dim = 2 + (i % 4);
        let seed = derived_seed(cfg.seed, 1, i);
        let rho = random_density(dim, seed).unwrap();
        let sigma = random_density(dim, seed ^ 0xABCD).unwrap();
        let mut checks = 0;
        let mut failures = 0;
        let mut worst = 0.0f64;
        for gen in &gens {
            let ns = petz_divergence(gen, &rho, &sigma).unwrap();
            let lr = lr_divergence(gen, &rho, &sigma).unwrap();
            // Scale-aware: absolute 1e-9 for O(1) divergences, relative for
            // the rare O(10^2) Neyman/Pearson values at the rounding floor.
            let residual = (ns - lr).abs() / ns.abs().max(1.0);
            checks += 1;
            if residual > 1e-9 {
                failures += 1;
            }
            worst = worst.max(residual);
        }
        (checks, failures, worst)
    };
    let (checks, failures, worst) = parallel_tally(jobs, thread_count(cfg, jobs), &work);
    Ok(SuiteResult {
        name: "ns_equality",
        checks,
        failures,
        worst_residual: worst,
    })
}

fn suite_mixture_identity(cfg: &VerifyConfig) -> Result<SuiteResult> {
    let quad = QuadratureSpec {
        rel_tol: cfg.rel_tol.min(1e-9),
        ..QuadratureSpec::default()
    };
    let mut entries: Vec<(Generator, WeightMeasure)> = vec![
        (Generator::kl(), kl_weight(cfg)),
        (
            Generator::rkl(),
            analytic_weight(&Generator::rkl())?,
        ),
        (
            Generator::jeffreys(),
            analytic_weight(&Generator::jeffreys())?,
        ),
        (
            Generator::hellinger(),
            analytic_weight(&Generator::hellinger())?,
        ),
    ];
    for alpha in [0.25, 0.5, 0.75] {
        let gen = Generator::renyi(alpha)?;
        let w = analytic_weight(&gen)?;
        entries.push((gen, w));
    }
    let jobs = cfg.trials;
    let work = |i: usize| -> (usize, usize, f64) {
        let dim = 2 + (i % 4);
        let seed = derived_seed(cfg.seed, 2, i);
        let rho = random_density(dim, seed).unwrap();
        let sigma = random_density(dim, seed ^ 0x1234).unwrap();
        let mut checks = 0;
        let mut failures = 0;
        let mut worst = 0.0f64;
        for (gen, w) in &entries {
            let mixture = mixture_divergence(gen, &rho, &sigma, w, &quad).unwrap();
            let direct = petz_divergence(gen, &rho, &sigma).unwrap();
            let residual = (mixture - direct).abs() / direct.abs().max(1e-12);
            checks += 1;
            if residual > 1e-6 {
                failures += 1;
            }
            worst = worst.max(residual);
        }
        (checks, failures, worst)
    };
    let (checks, failures, worst) = parallel_tally(jobs, thread_count(cfg, jobs), &work);
    Ok(SuiteResult {
        name: "mixture_identity",
        checks,
        failures,
        worst_residual: worst,
    })
}

fn suite_tur_slack(cfg: &VerifyConfig) -> Result<SuiteResult> {
    let gens = Generator::catalog(0.5)?;
    let quad = QuadratureSpec::default();
    let jobs = cfg.trials;
    let work = |i: usize| -> (usize, usize, f64) {
        let dim = 2 + (i % 2);
        let seed = derived_seed(cfg.seed, 3, i);
        let rho = random_density(dim, seed).unwrap();
        let sigma = random_density(dim, seed ^ 0x7777).unwrap();
        let obs = random_observable(dim, seed ^ 0x9999).unwrap();
        let mut checks = 0;
        let mut failures = 0;
        let mut worst = 0.0f64;
        for gen in &gens {
            let report = tur_report(gen, &rho, &sigma, &obs, &quad).unwrap();
            checks += 1;
            let negative = (-report.slack).max(0.0);
            if negative > 1e-8 {
                failures += 1;
            }
            worst = worst.max(negative);
        }
        (checks, failures, worst)
    };
    let (checks, failures, worst) = parallel_tally(jobs, thread_count(cfg, jobs), &work);
    Ok(SuiteResult {
        name: "tur_slack",
        checks,
        failures,
        worst_residual: worst,
    })
}

fn suite_saturation(cfg: &VerifyConfig) -> Result<SuiteResult> {
    use rand::rngs::StdRng;
    use rand::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};
    let quad = QuadratureSpec::default();
    let grid = lambda_grid(33);
    let jobs = cfg.trials;
    let work = |i: usize| -> (usize, usize, f64) {
        let mut rng = StdRng::seed_from_u64(derived_seed(cfg.seed, 4, i));
        let mut draw = || -> f64 { StandardNormal.sample(&mut rng) };
        let x = {
            let v = draw();
            if v.abs() < 0.05 {
                0.4
            } else {
                v
            }
        };
        let y = draw().powi(2) + 0.02;
        let z = draw().powi(2) + 0.02;
        let m = MomentTriple::new(x, y, z);
        let mut checks = 0;
        let mut failures = 0;
        let mut worst = 0.0f64;

        let pair = saturating_pair(&m).unwrap();
        let back = pair.moment_triple();
        let moment_residual = (back.x - x)
            .abs()
            .max((back.y - y).abs())
            .max((back.z - z).abs());
        checks += 1;
        if moment_residual > 1e-9 * y.max(z).max(1.0) {
            failures += 1;
        }
        worst = worst.max(moment_residual);

        let cp = pair.classical_pair().unwrap();
        let mut kernel_residual = 0.0f64;
        for &lam in &grid {
            kernel_residual =
                kernel_residual.max((chi2_lambda_classical(&cp, lam) - h_lambda(&m, lam)).abs());
        }
        checks += 1;
        if kernel_residual > 1e-9 {
            failures += 1;
        }
        worst = worst.max(kernel_residual);

        let (rho, sigma, obs) = pair.quantum_states().unwrap();
        let report = tur_report(&Generator::kl(), &rho, &sigma, &obs, &quad).unwrap();
        checks += 1;
        if report.slack.abs() > 1e-6 {
            failures += 1;
        }
        worst = worst.max(report.slack.abs());
        (checks, failures, worst)
    };
    let (checks, failures, worst) = parallel_tally(jobs, thread_count(cfg, jobs), &work);
    Ok(SuiteResult {
        name: "saturation",
        checks,
        failures,
        worst_residual: worst,
    })
}

fn suite_duality(cfg: &VerifyConfig) -> Result<SuiteResult> {
    let mut checks = 0usize;
    let mut failures = 0usize;
    let mut worst = 0.0f64;
    let grid: Vec<f64> = (1..=60).map(|k| 0.15 * k as f64).collect();
    for gen in Generator::catalog(0.3)? {
        let dd = dual(&dual(&gen));
        let mut residual = 0.0f64;
        for &u in &grid {
            residual = residual.max((dd.f(u) - gen.f(u)).abs());
        }
        checks += 1;
        if residual > 1e-12 {
            failures += 1;
        }
        worst = worst.max(residual);
    }
    // Numeric reflection kl <-> rkl and hellinger onto itself, on an
    // interior λ grid (t stays within the epsilon schedule's regime).
    let lam_points: Vec<f64> = (1..=17).map(|k| k as f64 / 18.0).collect();
    let inv = InversionConfig::default();
    let pairs = [
        (Generator::kl(), Generator::rkl()),
        (Generator::hellinger(), Generator::hellinger()),
    ];
    for (a, b) in pairs {
        let wa = numeric_weight(&dual(&a), &lam_points, &inv)?;
        let wb = numeric_weight(&b, &lam_points, &inv)?;
        let mut residual = 0.0f64;
        for &lam in &lam_points {
            // w_{a*}(λ) must equal w_a(1-λ); b is the catalog name of a*.
            residual = residual.max((wa.density_at(lam) - wb.density_at(lam)).abs());
        }
        checks += 1;
        if residual > 2e-6 {
            failures += 1;
        }
        worst = worst.max(residual);
    }
    let _ = cfg;
    Ok(SuiteResult {
        name: "duality",
        checks,
        failures,
        worst_residual: worst,
    })
}

fn suite_moments(cfg: &VerifyConfig) -> Result<SuiteResult> {
    let mut checks = 0usize;
    let mut failures = 0usize;
    let mut worst = 0.0f64;
    let mut entries: Vec<(Generator, WeightMeasure)> = Vec::new();
    for gen in Generator::catalog(0.5)? {
        let w = if gen.name() == "kl" {
            kl_weight(cfg)
        } else {
            analytic_weight(&gen)?
        };
        entries.push((gen, w));
    }
    for alpha in [0.25, 0.75] {
        let gen = Generator::renyi(alpha)?;
        let w = analytic_weight(&gen)?;
        entries.push((gen, w));
    }
    for (gen, w) in &entries {
        let report = moment_checks(w, gen)?;
        for line in &report.lines {
            checks += 1;
            if !line.matched {
                failures += 1;
            }
            if line.weight_side.is_finite() && line.generator_side.is_finite() {
                worst = worst.max(
                    (line.weight_side - line.generator_side).abs()
                        / line.generator_side.abs().max(1.0),
                );
            }
        }
    }
    Ok(SuiteResult {
        name: "moments",
        checks,
        failures,
        worst_residual: worst,
    })
}

fn suite_chapman_robbins(cfg: &VerifyConfig) -> Result<SuiteResult> {
    use rand::rngs::StdRng;
    use rand::Rng;
    use rand::SeedableRng;
    let jobs = cfg.trials;
    let work = |i: usize| -> (usize, usize, f64) {
        let mut rng = StdRng::seed_from_u64(derived_seed(cfg.seed, 5, i));
        let draw_pmf = |rng: &mut StdRng| -> Vec<f64> {
            let raw: Vec<f64> = (0..5).map(|_| rng.gen_range(0.05..1.0)).collect();
            let total: f64 = raw.iter().sum();
            raw.into_iter().map(|v| v / total).collect()
        };
        let p = draw_pmf(&mut rng);
        let q = draw_pmf(&mut rng);
        let pair = ClassicalPair::new(p, q).unwrap();
        let report = chapman_robbins_verify(&pair, 100, derived_seed(cfg.seed, 6, i)).unwrap();
        let mut checks = 0;
        let mut failures = 0;
        let mut worst = 0.0f64;
        // Optimizer attains chi2.
        let attain = (report.optimizer_ratio - report.chi2).abs();
        checks += 1;
        if attain > 1e-10 {
            failures += 1;
        }
        worst = worst.max(attain);
        // Random statistics never exceed it.
        let excess = (report.max_random_ratio - report.chi2).max(0.0);
        checks += 1;
        if excess > 1e-10 {
            failures += 1;
        }
        worst = worst.max(excess);
        (checks, failures, worst)
    };
    let (checks, failures, worst) = parallel_tally(jobs, thread_count(cfg, jobs), &work);
    Ok(SuiteResult {
        name: "chapman_robbins",
        checks,
        failures,
        worst_residual: worst,
    })
}

type PhiTable = Vec<(Generator, Box<dyn Fn(f64) -> f64>)>;

fn suite_inversion(cfg: &VerifyConfig) -> Result<SuiteResult> {
    use std::f64::consts::PI;
    let t_points = [0.1, 0.5, 1.0, 2.0, 10.0];
    let inv = InversionConfig::default();
    let mut checks = 0usize;
    let mut failures = 0usize;
    let mut worst = 0.0f64;
    let mut targets: PhiTable = vec![
        (
            Generator::kl(),
            Box::new(|t: f64| 1.0 / ((1.0 + t) * (1.0 + t))),
        ),
        (
            Generator::rkl(),
            Box::new(|t: f64| t / ((1.0 + t) * (1.0 + t))),
        ),
        (
            Generator::hellinger(),
            Box::new(|t: f64| t.sqrt() / (PI * (1.0 + t) * (1.0 + t))),
        ),
    ];
    for alpha in [0.25, 0.5, 0.75] {
        targets.push((
            Generator::renyi(alpha)?,
            Box::new(move |t: f64| {
                (PI * alpha).sin() / (PI * alpha * (1.0 - alpha)) * t.powf(1.0 - alpha)
                    / ((1.0 + t) * (1.0 + t))
            }),
        ));
    }
    for (gen, phi_exact) in &targets {
        let phi = invert_weight(gen, &t_points, &inv)?;
        for (i, &t) in t_points.iter().enumerate() {
            let expected = phi_exact(t);
            let residual = (phi[i] - expected).abs() / expected.abs().max(1e-300);
            checks += 1;
            if residual > 1e-3 {
                failures += 1;
            }
            worst = worst.max(residual);
        }
    }
    let _ = cfg;
    Ok(SuiteResult {
        name: "inversion",
        checks,
        failures,
        worst_residual: worst,
    })
}

/// Run the whole battery.
pub fn run_battery(cfg: &VerifyConfig) -> Result<BatteryReport> {
    let suites = vec![
        suite_ns_equality(cfg)?,
        suite_mixture_identity(cfg)?,
        suite_tur_slack(cfg)?,
        suite_saturation(cfg)?,
        suite_duality(cfg)?,
        suite_moments(cfg)?,
        suite_chapman_robbins(cfg)?,
        suite_inversion(cfg)?,
    ];
    Ok(BatteryReport {
        seed: cfg.seed,
        trials: cfg.trials,
        suites,
    })
}
