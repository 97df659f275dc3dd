//! The Chapman-Robbins variational identity: χ²(P||Q) is the supremum of
//! squared bias over variance across all statistics, attained at
//! Θ* = P/Q. Random search approaches it from below, never past it.
//!
//! ```bash
//! cargo run --example chapman_robbins
//! ```

use petz_tur::divergence::ClassicalPair;
use petz_tur::tur::chapman_robbins_verify;

fn main() -> petz_tur::Result<()> {
    let pair = ClassicalPair::new(vec![0.8, 0.2], vec![0.5, 0.5])?;
    let report = chapman_robbins_verify(&pair, 1000, 7)?;
    println!("two-outcome pair P = (0.8, 0.2), Q = (0.5, 0.5):");
    println!("  chi2(P||Q)        = {:.12}", report.chi2);
    println!("  ratio at Theta*   = {:.12}", report.optimizer_ratio);
    println!("  best of {} draws = {:.12}\n", report.trials, report.max_random_ratio);

    let p = vec![0.30, 0.25, 0.20, 0.15, 0.10];
    let q = vec![0.20, 0.20, 0.20, 0.20, 0.20];
    let pair = ClassicalPair::new(p, q)?;
    for trials in [10usize, 100, 1000, 100_000] {
        let report = chapman_robbins_verify(&pair, trials, 42)?;
        println!(
            "5-outcome pair, {trials:>6} random statistics: best ratio {:.9} <= chi2 {:.9}",
            report.max_random_ratio, report.chi2
        );
    }
    println!("\n(the sup is reached only along affine images of P/Q, so random");
    println!("search saturates slowly while the closed form lands exactly)");
    Ok(())
}
