//! The universal uncertainty bound: any f-divergence between two states is
//! at least the weight-integral of h_λ built from one observable's mean gap
//! and variances.
//!
//! ```bash
//! cargo run --example tur_bound
//! ```

use petz_tur::divergence::QuadratureSpec;
use petz_tur::generators::Generator;
use petz_tur::states::{moment_triple, random_density, random_observable};
use petz_tur::tur::tur_report;

fn main() -> petz_tur::Result<()> {
    let dim = 3;
    let rho = random_density(dim, 302)?;
    let sigma = random_density(dim, 602)?;
    let obs = random_observable(dim, 902)?;
    let quad = QuadratureSpec::default();

    let m = moment_triple(&rho, &sigma, &obs)?;
    println!("observable statistics: x = {:.6}, y = {:.6}, z = {:.6}\n", m.x, m.y, m.z);

    println!(
        "{:<14} {:>14} {:>14} {:>12}",
        "generator", "divergence", "bound", "slack"
    );
    for gen in Generator::catalog(0.5)? {
        let report = tur_report(&gen, &rho, &sigma, &obs, &quad)?;
        println!(
            "{:<14} {:>14.9} {:>14.9} {:>12.3e}",
            gen.name(),
            report.divergence,
            report.bound,
            report.slack
        );
    }

    println!("\nthe bound is achieved by a commuting binary pair matching (x,y,z):");
    let report = tur_report(&Generator::kl(), &rho, &sigma, &obs, &quad)?;
    if let Some(pair) = report.saturating_pair {
        let (rho_star, sigma_star, obs_star) = pair.quantum_states()?;
        let saturated = tur_report(&Generator::kl(), &rho_star, &sigma_star, &obs_star, &quad)?;
        println!("  r = {:.9}, s = {:.9}, eigenvalues ({:.6}, {:.6})", pair.r, pair.s, pair.u1, pair.u2);
        println!(
            "  D(rho*||sigma*) = {:.12}, bound = {:.12}, slack = {:.3e}",
            saturated.divergence, saturated.bound, saturated.slack
        );
    }
    Ok(())
}
