//! The chi-square mixture identity: integrating the kernel curve
//! λ -> χ²_λ(rho||sigma) against the mixing law reproduces the divergence
//! computed spectrally.
//!
//! ```bash
//! cargo run --example chi2_mixture
//! ```

use petz_tur::divergence::{
    chi2_lambda_quantum, mixture_divergence, petz_divergence, QuadratureSpec,
};
use petz_tur::generators::{closed_form_divergence, Generator};
use petz_tur::states::random_density;
use petz_tur::weights::analytic_weight;

fn main() -> petz_tur::Result<()> {
    let rho = random_density(3, 2024)?;
    let sigma = random_density(3, 2025)?;
    let quad = QuadratureSpec::default();

    println!("kernel curve of a random qutrit pair:");
    println!("  {:>6} {:>14}", "lambda", "chi2_lambda");
    for k in 0..=10 {
        let lam = k as f64 / 10.0;
        println!("  {lam:>6.2} {:>14.9}", chi2_lambda_quantum(&rho, &sigma, lam)?);
    }

    println!("\nmixture integral vs the NS value vs the closed form:");
    println!(
        "{:<14} {:>15} {:>15} {:>15}",
        "generator", "mixture", "ns", "closed form"
    );
    for gen in [
        Generator::kl(),
        Generator::rkl(),
        Generator::jeffreys(),
        Generator::hellinger(),
        Generator::renyi(0.5)?,
        Generator::pearson(),
        Generator::triangular(),
    ] {
        let w = analytic_weight(&gen)?;
        let mixture = mixture_divergence(&gen, &rho, &sigma, &w, &quad)?;
        let ns = petz_divergence(&gen, &rho, &sigma)?;
        let closed = closed_form_divergence(&gen, &rho, &sigma)
            .map(|v| format!("{v:>15.12}"))
            .unwrap_or_else(|_| format!("{:>15}", "-"));
        println!("{:<14} {mixture:>15.12} {ns:>15.12} {closed}", gen.name());
    }
    Ok(())
}
