//! Acceptance battery: one test per certified property, each printing a
//! PASS/FAIL line (run with `cargo test --test acceptance -- --nocapture`
//! to see them all).

use std::f64::consts::PI;

use petz_tur::divergence::{
    chi2_lambda_classical, chi2_lambda_quantum, csiszar, lr_divergence, mixture_divergence,
    petz_divergence, ClassicalPair, QuadratureSpec,
};
use petz_tur::generators::{closed_form_divergence, Generator};
use petz_tur::scenarios::{
    entropy_production, lag_cgf_bound, thermal_state, EntropyProductionSetup, LagSetup,
};
use petz_tur::states::{
    random_density, random_observable, random_unitary, MomentTriple, Observable,
};
use petz_tur::tur::{
    chapman_robbins_verify, h_lambda, saturating_pair, tur_bound, tur_report,
};
use petz_tur::verify::{run_battery, VerifyConfig};
use petz_tur::weights::{
    analytic_weight, invert_weight, lambda_grid, numeric_weight, InversionConfig,
};

fn seed_for(salt: u64, trial: usize) -> u64 {
    0xA5A5_0000u64
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(salt.wrapping_mul(0x2545_F491_4F6C_DD1D))
        .wrapping_add(trial as u64)
}

fn verdict(name: &str, failures: usize, checks: usize, worst: f64) {
    let status = if failures == 0 { "PASS" } else { "FAIL" };
    println!("criterion {name}: {status} ({checks} checks, {failures} failures, worst residual {worst:.3e})");
    assert_eq!(failures, 0, "{name}: worst residual {worst:.3e}");
}

/// All nine generators for each Rényi order in {0.25, 0.5, 0.75}, with the
/// order-independent entries appearing once.
fn full_catalog() -> Vec<Generator> {
    let mut gens = Generator::catalog(0.25).unwrap();
    for alpha in [0.5, 0.75] {
        gens.push(Generator::renyi(alpha).unwrap());
        gens.push(Generator::sym_renyi(alpha).unwrap());
    }
    gens
}

#[test]
fn criterion_01_ns_equality() {
    let gens = full_catalog();
    let mut failures = 0usize;
    let mut checks = 0usize;
    let mut worst = 0.0f64;
    for trial in 0..200 {
        let dim = 2 + (trial % 4);
        let s = seed_for(1, trial);
        let rho = random_density(dim, s).unwrap();
        let sigma = random_density(dim, s ^ 0xABCD).unwrap();
        for gen in &gens {
            let ns = petz_divergence(gen, &rho, &sigma).unwrap();
            let lr = lr_divergence(gen, &rho, &sigma).unwrap();
            let residual = (ns - lr).abs() / ns.abs().max(1.0);
            checks += 1;
            if residual > 1e-9 {
                failures += 1;
            }
            worst = worst.max(residual);
        }
    }
    verdict("01 (ns-equality)", failures, checks, worst);
}

#[test]
fn criterion_02_mixture_identity() {
    let quad = QuadratureSpec::default();
    let mut entries = vec![
        Generator::kl(),
        Generator::rkl(),
        Generator::jeffreys(),
        Generator::hellinger(),
    ];
    for alpha in [0.25, 0.5, 0.75] {
        entries.push(Generator::renyi(alpha).unwrap());
    }
    let mut failures = 0usize;
    let mut checks = 0usize;
    let mut worst = 0.0f64;
    for trial in 0..100 {
        let dim = 2 + (trial % 3);
        let s = seed_for(2, trial);
        let rho = random_density(dim, s).unwrap();
        let sigma = random_density(dim, s ^ 0x5555).unwrap();
        for gen in &entries {
            let w = analytic_weight(gen).unwrap();
            let mixture = mixture_divergence(gen, &rho, &sigma, &w, &quad).unwrap();
            let direct = petz_divergence(gen, &rho, &sigma).unwrap();
            let residual = (mixture - direct).abs() / direct.abs().max(1e-12);
            checks += 1;
            if residual > 1e-6 {
                failures += 1;
            }
            worst = worst.max(residual);
        }
    }
    verdict("02 (mixture-identity)", failures, checks, worst);
}

#[test]
fn criterion_03_closed_forms() {
    let mut failures = 0usize;
    let mut checks = 0usize;
    let mut worst = 0.0f64;
    for trial in 0..100 {
        let dim = 2 + (trial % 2);
        let s = seed_for(3, trial);
        let rho = random_density(dim, s).unwrap();
        let sigma = random_density(dim, s ^ 0x1111).unwrap();

        // Pearson kernel identity chi2_1 = Tr(rho^2 sigma^-1) - 1.
        let kernel = chi2_lambda_quantum(&rho, &sigma, 1.0).unwrap();
        let closed = closed_form_divergence(&Generator::pearson(), &rho, &sigma).unwrap();
        let r1 = (kernel - closed).abs() / closed.abs().max(1.0);
        checks += 1;
        if r1 > 1e-9 {
            failures += 1;
        }
        worst = worst.max(r1);

        // Hellinger H^2 = 1 - Tr[sqrt(rho) sqrt(sigma)].
        let ns = petz_divergence(&Generator::hellinger(), &rho, &sigma).unwrap();
        let h2 = closed_form_divergence(&Generator::hellinger(), &rho, &sigma).unwrap();
        let r2 = (ns - h2).abs();
        checks += 1;
        if r2 > 1e-9 {
            failures += 1;
        }
        worst = worst.max(r2);
    }
    verdict("03 (closed-forms)", failures, checks, worst);
}

#[test]
fn criterion_04_stieltjes_inversion() {
    type PhiTable = Vec<(Generator, Box<dyn Fn(f64) -> f64>)>;
    let t_points = [0.1, 0.5, 1.0, 2.0, 10.0];
    let cfg = InversionConfig::default();
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
            Generator::renyi(alpha).unwrap(),
            Box::new(move |t: f64| {
                (PI * alpha).sin() / (PI * alpha * (1.0 - alpha)) * t.powf(1.0 - alpha)
                    / ((1.0 + t) * (1.0 + t))
            }),
        ));
    }
    let mut failures = 0usize;
    let mut checks = 0usize;
    let mut worst = 0.0f64;
    for (gen, exact) in &targets {
        let phi = invert_weight(gen, &t_points, &cfg).unwrap();
        for (i, &t) in t_points.iter().enumerate() {
            let expected = exact(t);
            let residual = (phi[i] - expected).abs() / expected.abs();
            checks += 1;
            if residual > 1e-3 {
                failures += 1;
            }
            worst = worst.max(residual);
        }
    }
    verdict("04 (stieltjes-inversion)", failures, checks, worst);
}

#[test]
fn criterion_05_weight_properties() {
    let mut failures = 0usize;
    let mut checks = 0usize;
    let mut worst = 0.0f64;
    let grid = lambda_grid(129);

    // P1: nonnegativity of analytic densities on the default grid.
    for gen in full_catalog() {
        let w = analytic_weight(&gen).unwrap();
        let min = grid
            .iter()
            .map(|&l| w.density_at(l))
            .fold(f64::INFINITY, f64::min);
        checks += 1;
        if min < -1e-6 {
            failures += 1;
        }
        worst = worst.max((-min).max(0.0));
    }
    // P1: nonnegativity of numerically inverted densities on an interior
    // grid (the default epsilon schedule's asymptotic range).
    let interior: Vec<f64> = (1..=17).map(|k| k as f64 / 18.0).collect();
    let inv_cfg = InversionConfig::default();
    for gen in [
        Generator::kl(),
        Generator::rkl(),
        Generator::hellinger(),
        Generator::renyi(0.5).unwrap(),
    ] {
        let w = numeric_weight(&gen, &interior, &inv_cfg).unwrap();
        let min = interior
            .iter()
            .map(|&l| w.density_at(l))
            .fold(f64::INFINITY, f64::min);
        checks += 1;
        if min < -1e-6 {
            failures += 1;
        }
        worst = worst.max((-min).max(0.0));
    }

    // P2 linearity: jeffreys density equals the average of kl and rkl.
    let wj = analytic_weight(&Generator::jeffreys()).unwrap();
    let wk = analytic_weight(&Generator::kl()).unwrap();
    let wr = analytic_weight(&Generator::rkl()).unwrap();
    let mut lin = 0.0f64;
    for &l in &grid {
        lin = lin.max((wj.density_at(l) - 0.5 * (wk.density_at(l) + wr.density_at(l))).abs());
    }
    checks += 1;
    if lin > 1e-12 {
        failures += 1;
    }
    worst = worst.max(lin);

    // P5 duality: numeric inversion of dual(kl) reflects onto kl (i.e. rkl).
    let w_dual = numeric_weight(
        &petz_tur::generators::dual(&Generator::kl()),
        &interior,
        &inv_cfg,
    )
    .unwrap();
    let w_kl_numeric = numeric_weight(&Generator::kl(), &interior, &inv_cfg).unwrap();
    let mut dual_res = 0.0f64;
    for &l in &interior {
        dual_res = dual_res.max((w_dual.density_at(l) - w_kl_numeric.density_at(1.0 - l)).abs());
    }
    checks += 1;
    if dual_res > 2e-6 {
        failures += 1;
    }
    worst = worst.max(dual_res);

    // P4/P6 moment identities with their frozen analytic values.
    let quad = QuadratureSpec::default();
    let cases: Vec<(Generator, f64, f64)> = vec![
        (Generator::kl(), 1.0, 0.5),
        (Generator::hellinger(), 0.5, 0.125),
        (Generator::renyi(0.25).unwrap(), 4.0, 0.5),
        (Generator::renyi(0.5).unwrap(), 2.0, 0.5),
        (Generator::renyi(0.75).unwrap(), 4.0 / 3.0, 0.5),
    ];
    for (gen, inv_lambda_expected, mass_expected) in cases {
        let w = analytic_weight(&gen).unwrap();
        let inv_lambda = w.integrate_density(|l, _| 1.0 / l, &quad).unwrap();
        let mass = w.total_mass(&quad).unwrap();
        let r1 = (inv_lambda - inv_lambda_expected).abs() / inv_lambda_expected;
        let r2 = (mass - mass_expected).abs() / mass_expected;
        checks += 2;
        if r1 > 1e-6 {
            failures += 1;
        }
        if r2 > 1e-6 {
            failures += 1;
        }
        worst = worst.max(r1).max(r2);
    }
    verdict("05 (weight-properties)", failures, checks, worst);
}

#[test]
fn criterion_06_universal_tur() {
    let gens = Generator::catalog(0.5).unwrap();
    let quad = QuadratureSpec::default();
    let mut failures = 0usize;
    let mut checks = 0usize;
    let mut worst = 0.0f64;
    for trial in 0..1000 {
        let dim = 2 + (trial % 2);
        let s = seed_for(6, trial);
        let rho = random_density(dim, s).unwrap();
        let sigma = random_density(dim, s ^ 0x2222).unwrap();
        let obs = random_observable(dim, s ^ 0x3333).unwrap();
        let m = petz_tur::states::moment_triple(&rho, &sigma, &obs).unwrap();
        for gen in &gens {
            let w = analytic_weight(gen).unwrap();
            let bound = tur_bound(gen, &m, &w, &quad).unwrap();
            let d = petz_divergence(gen, &rho, &sigma).unwrap();
            let slack = d - bound;
            checks += 1;
            if slack < -1e-8 {
                failures += 1;
            }
            worst = worst.max((-slack).max(0.0));
        }
    }
    verdict("06 (universal-tur)", failures, checks, worst);
}

#[test]
fn criterion_07_saturation() {
    use rand::rngs::StdRng;
    use rand::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};
    let quad = QuadratureSpec::default();
    let grid = lambda_grid(33);
    let mut failures = 0usize;
    let mut checks = 0usize;
    let mut worst = 0.0f64;
    for trial in 0..100 {
        let mut rng = StdRng::seed_from_u64(seed_for(7, trial));
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
        let pair = saturating_pair(&m).unwrap();

        let back = pair.moment_triple();
        let moment_residual = ((back.x - x).abs())
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
    }
    verdict("07 (saturation)", failures, checks, worst);
}

#[test]
fn criterion_08_chapman_robbins() {
    use rand::rngs::StdRng;
    use rand::Rng;
    use rand::SeedableRng;
    let mut failures = 0usize;
    let mut checks = 0usize;
    let mut worst = 0.0f64;
    for trial in 0..100 {
        let mut rng = StdRng::seed_from_u64(seed_for(8, trial));
        let mut draw_pmf = || -> Vec<f64> {
            let raw: Vec<f64> = (0..5).map(|_| rng.gen_range(0.05..1.0)).collect();
            let total: f64 = raw.iter().sum();
            raw.into_iter().map(|v| v / total).collect()
        };
        let pair = ClassicalPair::new(draw_pmf(), draw_pmf()).unwrap();
        // 100 pairs x 100 statistics = 1e4 random probes of the supremum.
        let report = chapman_robbins_verify(&pair, 100, seed_for(88, trial)).unwrap();
        let attain = (report.optimizer_ratio - report.chi2).abs();
        checks += 1;
        if attain > 1e-10 {
            failures += 1;
        }
        worst = worst.max(attain);
        let excess = (report.max_random_ratio - report.chi2).max(0.0);
        checks += 1;
        if excess > 1e-10 {
            failures += 1;
        }
        worst = worst.max(excess);
    }
    verdict("08 (chapman-robbins)", failures, checks, worst);
}

#[test]
fn criterion_09_scenarios() {
    let quad = QuadratureSpec::default();
    let mut failures = 0usize;
    let mut checks = 0usize;
    let mut worst = 0.0f64;

    // Entropy-production TUR on 200 random two-qubit setups.
    for trial in 0..200 {
        let s = seed_for(9, trial);
        let setup = EntropyProductionSetup {
            rho_s: random_density(2, s).unwrap(),
            rho_e: random_density(2, s ^ 0xAA).unwrap(),
            u: random_unitary(4, s ^ 0xBB).unwrap(),
            obs: random_observable(4, s ^ 0xCC).unwrap(),
        };
        let report = entropy_production(&setup, &quad).unwrap();
        checks += 1;
        if report.slack < -1e-8 || report.divergence < -1e-10 {
            failures += 1;
        }
        worst = worst.max((-report.slack).max(0.0));
    }

    // Lag CGF: ceiling and consistency identity across an alpha sweep for
    // 50 random qubit protocols.
    for trial in 0..50 {
        let s = seed_for(10, trial);
        let h_i = random_observable(2, s).unwrap();
        let h_f = random_observable(2, s ^ 0x11).unwrap();
        let setup = LagSetup {
            beta: 0.5 + (trial % 5) as f64 * 0.35,
            h_i,
            h_f,
            v: random_unitary(2, s ^ 0x22).unwrap(),
            obs: random_observable(2, s ^ 0x33).unwrap(),
        };
        for k in 1..=9 {
            let alpha = k as f64 / 10.0;
            let out = lag_cgf_bound(&setup, alpha, &quad).unwrap();
            checks += 2;
            let violation = (out.k_alpha - out.bound).max(0.0);
            if violation > 1e-8 {
                failures += 1;
            }
            worst = worst.max(violation);
            if out.consistency_residual > 1e-9 {
                failures += 1;
            }
            worst = worst.max(out.consistency_residual);
        }
    }
    verdict("09 (scenarios)", failures, checks, worst);
}

#[test]
fn criterion_10_determinism() {
    let cfg = VerifyConfig {
        seed: 2024,
        trials: 8,
        ..VerifyConfig::default()
    };
    let a = run_battery(&cfg).unwrap().to_json().to_string();
    let b = run_battery(&cfg).unwrap().to_json().to_string();
    let single = VerifyConfig {
        threads: Some(1),
        ..cfg
    };
    let c = run_battery(&single).unwrap().to_json().to_string();
    let failures = usize::from(a != b) + usize::from(a != c);
    verdict("10 (determinism)", failures, 2, 0.0);
}

#[test]
fn thermal_state_gibbs_anchor() {
    // Auxiliary anchor used by the scenario suite: beta = 1,
    // H = diag(0, ln 2) gives populations (2/3, 1/3).
    let t = thermal_state(&Observable::from_diagonal(&[0.0, std::f64::consts::LN_2]), 1.0).unwrap();
    assert!((t.eigenvalues()[0] - 1.0 / 3.0).abs() < 1e-12);
    let pair = csiszar(
        &Generator::kl(),
        &ClassicalPair::new(vec![2.0 / 3.0, 1.0 / 3.0], vec![2.0 / 3.0, 1.0 / 3.0]).unwrap(),
    );
    assert_eq!(pair, 0.0);
}
