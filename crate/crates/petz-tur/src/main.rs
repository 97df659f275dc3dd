//! Thin command-line front end; every computation lives in the library.
//!
//! Exit codes: 0 success, 1 property failure (`verify`), 2 validation
//! error (bad files, bad arguments), 3 numerical failure.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use petz_tur::divergence::{
    chi2_lambda_quantum, mixture_divergence, petz_divergence, QuadratureSpec,
};
use petz_tur::generators::{closed_form_divergence, Generator};
use petz_tur::scenarios::{
    entropy_production, lag_cgf_bound, EntropyProductionSetup, LagSetup,
};
use petz_tur::states::{
    matrix_from_json, moment_triple, random_density, random_observable, DensityMatrix, Observable,
};
use petz_tur::tur::{h_lambda, tur_report_with, EndpointConvention};
use petz_tur::verify::{run_battery, VerifyConfig};
use petz_tur::weights::{
    analytic_weight, lambda_grid, numeric_weight, InversionConfig, DEFAULT_GRID_POINTS,
};
use petz_tur::Error;

#[derive(Parser)]
#[command(
    name = "petz-tur",
    about = "Quantum f-divergences, mixing weights, and thermodynamic uncertainty bounds",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct StatePairArgs {
    /// Generator name: kl | rkl | jeffreys | pearson | neyman | hellinger |
    /// triangular | renyi:<alpha> | sym_renyi:<alpha>
    #[arg(long, default_value = "kl")]
    gen: String,
    /// Density matrix JSON file for rho
    #[arg(long)]
    rho: String,
    /// Density matrix JSON file for sigma
    #[arg(long)]
    sigma: String,
}

#[derive(Subcommand)]
enum Command {
    /// Compute D_f(rho||sigma) from state files
    Divergence {
        #[command(flatten)]
        pair: StatePairArgs,
        /// Evaluation route
        #[arg(long, value_parser = ["closed", "ns", "mixture"], default_value = "ns")]
        via: String,
        /// Relative quadrature tolerance (mixture route)
        #[arg(long, default_value_t = 1e-9)]
        rel_tol: f64,
    },
    /// Tabulate the mixing law w_f: CSV to stdout, atoms as JSON on stderr
    Weights {
        #[arg(long, default_value = "kl")]
        gen: String,
        /// Number of lambda grid points
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        points: usize,
    },
    /// Full TUR report for (gen, rho, sigma, obs) as JSON
    Tur {
        #[command(flatten)]
        pair: StatePairArgs,
        /// Observable JSON file
        #[arg(long)]
        obs: String,
        /// Use the continuous lambda=0 endpoint (h_0 = x^2/y) instead of
        /// the certified convention h_0 = 0
        #[arg(long)]
        continuous_endpoints: bool,
    },
    /// CSV curve (lambda, w, h, w*h) for (gen, rho, sigma, obs)
    TurCurve {
        #[command(flatten)]
        pair: StatePairArgs,
        /// Observable JSON file
        #[arg(long)]
        obs: String,
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        points: usize,
    },
    /// Run the property battery; exit 0 iff every suite passes
    Verify {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 40)]
        trials: usize,
        #[arg(long, default_value_t = 1e-9)]
        rel_tol: f64,
        /// Test hook: corrupt the KL weight so the battery must fail
        #[arg(long, hide = true)]
        inject_broken_weight: bool,
    },
    /// CSV sweep (lambda, w, chi2_lambda, h_lambda, w*h) for random or
    /// file-supplied states
    Sweep {
        #[arg(long, default_value = "kl")]
        gen: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Dimension of the random states (>= 2)
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        points: usize,
        /// Optional state/observable files overriding the random draw
        #[arg(long)]
        rho: Option<String>,
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long)]
        obs: Option<String>,
    },
    /// Physics scenarios
    #[command(subcommand)]
    Scenario(ScenarioCommand),
}

#[derive(Subcommand)]
enum ScenarioCommand {
    /// Entropy production of a system+environment unitary (JSON setup file)
    Ep {
        /// Setup JSON: {"rho_s":M, "rho_e":M, "u":M, "obs":M} with M the
        /// matrix schema {"dim":n, "re":[[..]], "im":[[..]]}
        #[arg(long)]
        setup: String,
    },
    /// Nonequilibrium-lag CGF sweep (JSON setup file)
    Lag {
        /// Setup JSON: {"beta":b, "h_i":M, "h_f":M, "v":M, "obs":M}
        #[arg(long)]
        setup: String,
        /// Rényi orders to sweep (comma separated)
        #[arg(long, default_value = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")]
        alphas: String,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::QuadratureFailure(_)
        | Error::NoConvergence(_)
        | Error::BranchCutError(_)
        | Error::DomainError(_) => 3,
        _ => 2,
    }
}

fn load_density(path: &str) -> Result<DensityMatrix, Error> {
    let text = std::fs::read_to_string(path)?;
    DensityMatrix::new(matrix_from_json(&text)?)
}

fn load_observable(path: &str) -> Result<Observable, Error> {
    let text = std::fs::read_to_string(path)?;
    Observable::new(matrix_from_json(&text)?)
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Divergence { pair, via, rel_tol } => {
            if rel_tol <= 0.0 {
                return Err(Error::InvalidInput("rel_tol must be > 0".to_string()));
            }
            let gen = Generator::by_name(&pair.gen)?;
            let rho = load_density(&pair.rho)?;
            let sigma = load_density(&pair.sigma)?;
            let quad = QuadratureSpec {
                rel_tol,
                ..QuadratureSpec::default()
            };
            let (value, cross_check) = match via.as_str() {
                "closed" => {
                    let v = closed_form_divergence(&gen, &rho, &sigma)?;
                    let ns = petz_divergence(&gen, &rho, &sigma)?;
                    (v, Some((v - ns).abs()))
                }
                "mixture" => {
                    let w = analytic_weight(&gen)?;
                    let v = mixture_divergence(&gen, &rho, &sigma, &w, &quad)?;
                    let ns = petz_divergence(&gen, &rho, &sigma)?;
                    (v, Some((v - ns).abs()))
                }
                _ => {
                    let v = petz_divergence(&gen, &rho, &sigma)?;
                    let cross = closed_form_divergence(&gen, &rho, &sigma)
                        .ok()
                        .map(|c| (v - c).abs());
                    (v, cross)
                }
            };
            let out = serde_json::json!({
                "cross_check": cross_check,
                "generator": gen.name(),
                "method": via,
                "value": value,
            });
            println!("{out}");
            Ok(0)
        }
        Command::Weights { gen, points } => {
            if points == 0 {
                return Err(Error::InvalidInput("points must be >= 1".to_string()));
            }
            let gen = Generator::by_name(&gen)?;
            let w = analytic_weight(&gen)?;
            let grid = lambda_grid(points);
            let numeric = if gen.has_atomic_weight() {
                None
            } else {
                Some(numeric_weight(&gen, &grid, &InversionConfig::default())?)
            };
            println!("lambda,density_analytic,density_numeric,abs_error");
            for &lam in &grid {
                let analytic = w.density_at(lam);
                match &numeric {
                    Some(nw) => {
                        let n = nw.density_at(lam);
                        println!("{lam},{analytic},{n},{}", (n - analytic).abs());
                    }
                    None => println!("{lam},{analytic},,"),
                }
            }
            let atoms: Vec<_> = w
                .atoms()
                .iter()
                .map(|a| serde_json::json!({"lambda": a.location, "mass": a.mass}))
                .collect();
            eprintln!("{}", serde_json::json!({ "atoms": atoms }));
            Ok(0)
        }
        Command::Tur {
            pair,
            obs,
            continuous_endpoints,
        } => {
            let gen = Generator::by_name(&pair.gen)?;
            let rho = load_density(&pair.rho)?;
            let sigma = load_density(&pair.sigma)?;
            let obs = load_observable(&obs)?;
            let conv = if continuous_endpoints {
                EndpointConvention::ContinuousLimit
            } else {
                EndpointConvention::ZeroAtOrigin
            };
            let report =
                tur_report_with(&gen, &rho, &sigma, &obs, &QuadratureSpec::default(), conv)?;
            println!("{}", report.to_json());
            Ok(0)
        }
        Command::TurCurve { pair, obs, points } => {
            if points == 0 {
                return Err(Error::InvalidInput("points must be >= 1".to_string()));
            }
            let gen = Generator::by_name(&pair.gen)?;
            let rho = load_density(&pair.rho)?;
            let sigma = load_density(&pair.sigma)?;
            let obs = load_observable(&obs)?;
            let w = analytic_weight(&gen)?;
            let m = moment_triple(&rho, &sigma, &obs)?;
            println!("lambda,w,h,w_times_h");
            for lam in lambda_grid(points) {
                let wv = w.density_at(lam);
                let hv = h_lambda(&m, lam);
                println!("{lam},{wv},{hv},{}", wv * hv);
            }
            for atom in w.atoms() {
                let hv = h_lambda(&m, atom.location);
                println!("{},{},{hv},{}", atom.location, atom.mass, atom.mass * hv);
            }
            Ok(0)
        }
        Command::Verify {
            seed,
            trials,
            rel_tol,
            inject_broken_weight,
        } => {
            if trials == 0 {
                return Err(Error::InvalidInput("trials must be >= 1".to_string()));
            }
            if rel_tol <= 0.0 {
                return Err(Error::InvalidInput("rel_tol must be > 0".to_string()));
            }
            let cfg = VerifyConfig {
                seed,
                trials,
                rel_tol,
                threads: None,
                break_kl_weight: inject_broken_weight,
            };
            let report = run_battery(&cfg)?;
            println!("{}", report.to_json());
            Ok(if report.all_pass() { 0 } else { 1 })
        }
        Command::Sweep {
            gen,
            seed,
            dim,
            points,
            rho,
            sigma,
            obs,
        } => {
            if points == 0 {
                return Err(Error::InvalidInput(
                    "points must be >= 1 (empty grid requested)".to_string(),
                ));
            }
            if dim < 2 {
                return Err(Error::InvalidInput(
                    "dim must be >= 2 for quantum sweeps".to_string(),
                ));
            }
            let gen = Generator::by_name(&gen)?;
            let rho = match rho {
                Some(path) => load_density(&path)?,
                None => random_density(dim, seed)?,
            };
            let sigma = match sigma {
                Some(path) => load_density(&path)?,
                None => random_density(dim, seed.wrapping_add(1))?,
            };
            let obs = match obs {
                Some(path) => load_observable(&path)?,
                None => random_observable(dim, seed.wrapping_add(2))?,
            };
            let w = analytic_weight(&gen)?;
            let m = moment_triple(&rho, &sigma, &obs)?;
            println!("lambda,w,chi2_lambda,h_lambda,w_times_h,atom");
            for lam in lambda_grid(points) {
                let wv = w.density_at(lam);
                let chi = chi2_lambda_quantum(&rho, &sigma, lam)?;
                let hv = h_lambda(&m, lam);
                println!("{lam},{wv},{chi},{hv},{},false", wv * hv);
            }
            for atom in w.atoms() {
                let chi = chi2_lambda_quantum(&rho, &sigma, atom.location)?;
                let hv = h_lambda(&m, atom.location);
                println!(
                    "{},{},{chi},{hv},{},true",
                    atom.location,
                    atom.mass,
                    atom.mass * hv
                );
            }
            Ok(0)
        }
        Command::Scenario(sub) => match sub {
            ScenarioCommand::Ep { setup } => {
                let text = std::fs::read_to_string(&setup)?;
                let parsed: serde_json::Value = serde_json::from_str(&text)?;
                let field = |name: &str| -> Result<serde_json::Value, Error> {
                    parsed
                        .get(name)
                        .cloned()
                        .ok_or_else(|| Error::InvalidInput(format!("setup missing `{name}`")))
                };
                let setup = EntropyProductionSetup {
                    rho_s: DensityMatrix::new(matrix_from_json(&field("rho_s")?.to_string())?)?,
                    rho_e: DensityMatrix::new(matrix_from_json(&field("rho_e")?.to_string())?)?,
                    u: matrix_from_json(&field("u")?.to_string())?,
                    obs: Observable::new(matrix_from_json(&field("obs")?.to_string())?)?,
                };
                let report = entropy_production(&setup, &QuadratureSpec::default())?;
                println!("{}", report.to_json());
                Ok(0)
            }
            ScenarioCommand::Lag { setup, alphas } => {
                let text = std::fs::read_to_string(&setup)?;
                let parsed: serde_json::Value = serde_json::from_str(&text)?;
                let field = |name: &str| -> Result<serde_json::Value, Error> {
                    parsed
                        .get(name)
                        .cloned()
                        .ok_or_else(|| Error::InvalidInput(format!("setup missing `{name}`")))
                };
                let beta = field("beta")?
                    .as_f64()
                    .ok_or_else(|| Error::InvalidInput("`beta` must be a number".to_string()))?;
                let setup = LagSetup {
                    beta,
                    h_i: Observable::new(matrix_from_json(&field("h_i")?.to_string())?)?,
                    h_f: Observable::new(matrix_from_json(&field("h_f")?.to_string())?)?,
                    v: matrix_from_json(&field("v")?.to_string())?,
                    obs: Observable::new(matrix_from_json(&field("obs")?.to_string())?)?,
                };
                let orders: Vec<f64> = alphas
                    .split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<f64>()
                            .map_err(|_| Error::InvalidInput(format!("bad alpha `{s}`")))
                    })
                    .collect::<Result<_, _>>()?;
                println!("alpha,k_alpha,bound,renyi_divergence,consistency_residual");
                let quad = QuadratureSpec::default();
                for alpha in orders {
                    let out = lag_cgf_bound(&setup, alpha, &quad)?;
                    println!(
                        "{alpha},{},{},{},{}",
                        out.k_alpha, out.bound, out.renyi_divergence, out.consistency_residual
                    );
                }
                Ok(0)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
