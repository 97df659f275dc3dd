//! Mixing laws w_f(λ): the closed-form tables and their recovery by
//! numerical Stieltjes inversion of g(z) = f(z)/(z-1)² just below the
//! negative real axis.
//!
//! ```bash
//! cargo run --example mixing_weights
//! ```

use petz_tur::generators::Generator;
use petz_tur::weights::{analytic_weight, moment_checks, numeric_weight, InversionConfig};

fn main() -> petz_tur::Result<()> {
    let grid: Vec<f64> = (1..=9).map(|k| k as f64 / 10.0).collect();
    let cfg = InversionConfig::default();

    println!("density laws, analytic vs numerically inverted:\n");
    for gen in [
        Generator::kl(),
        Generator::rkl(),
        Generator::jeffreys(),
        Generator::hellinger(),
        Generator::renyi(0.5)?,
    ] {
        let analytic = analytic_weight(&gen)?;
        let numeric = numeric_weight(&gen, &grid, &cfg)?;
        println!("{} :", gen.name());
        println!("  {:>8} {:>14} {:>14} {:>10}", "lambda", "analytic", "numeric", "|err|");
        for &lam in &grid {
            let a = analytic.density_at(lam);
            let n = numeric.density_at(lam);
            println!("  {lam:>8.2} {a:>14.9} {n:>14.9} {:>10.2e}", (a - n).abs());
        }
    }

    println!("\natomic laws (invisible to pointwise inversion, declared in closed form):");
    for gen in [Generator::pearson(), Generator::neyman(), Generator::triangular()] {
        let w = analytic_weight(&gen)?;
        for atom in w.atoms() {
            println!("  {:<12} atom at lambda = {:.2}, mass = {:.2}", gen.name(), atom.location, atom.mass);
        }
    }

    println!("\nmoment identities for hellinger (weight side vs generator side):");
    let gen = Generator::hellinger();
    let report = moment_checks(&analytic_weight(&gen)?, &gen)?;
    for line in &report.lines {
        println!(
            "  {:<24} {:>14.9} vs {:>14.9}  {}",
            line.name,
            line.weight_side,
            line.generator_side,
            if line.matched { "match" } else { "MISMATCH" }
        );
    }
    Ok(())
}
