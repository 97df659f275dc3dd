//! Constructing the commuting two-level pair that makes the uncertainty
//! bound an equality: Bern(r) and Bern(s) match the moment triple and
//! achieve χ²_λ = h_λ for every λ at once.
//!
//! ```bash
//! cargo run --example saturating_pair
//! ```

use petz_tur::divergence::{chi2_lambda_classical, csiszar};
use petz_tur::generators::Generator;
use petz_tur::states::MomentTriple;
use petz_tur::tur::{h_lambda, saturating_pair, tur_bound};
use petz_tur::weights::analytic_weight;

fn main() -> petz_tur::Result<()> {
    let m = MomentTriple::new(1.0, 0.25, 0.25);
    let pair = saturating_pair(&m)?;
    println!("target statistics: x = {}, y = {}, z = {}", m.x, m.y, m.z);
    println!(
        "binary pair: r = {:.9}, s = {:.9}, u1 = {:.6}, u2 = {:.6}\n",
        pair.r, pair.s, pair.u1, pair.u2
    );

    let back = pair.moment_triple();
    println!("moment match: x = {:.12}, y = {:.12}, z = {:.12}\n", back.x, back.y, back.z);

    let cp = pair.classical_pair()?;
    println!("chi2_lambda(Bern(r)||Bern(s)) equals h_lambda(x,y,z):");
    println!("  {:>6} {:>14} {:>14}", "lambda", "chi2_lambda", "h_lambda");
    for k in 1..=9 {
        let lam = k as f64 / 10.0;
        println!(
            "  {lam:>6.1} {:>14.12} {:>14.12}",
            chi2_lambda_classical(&cp, lam),
            h_lambda(&m, lam)
        );
    }

    println!("\nso the binary divergence equals the bound integral, per generator:");
    let quad = petz_tur::divergence::QuadratureSpec::default();
    println!("{:<14} {:>16} {:>16}", "generator", "D(Bern||Bern)", "bound integral");
    for gen in [
        Generator::kl(),
        Generator::jeffreys(),
        Generator::hellinger(),
        Generator::renyi(0.5)?,
        Generator::pearson(),
        Generator::triangular(),
    ] {
        let w = analytic_weight(&gen)?;
        let direct = csiszar(&gen, &cp);
        let bound = tur_bound(&gen, &m, &w, &quad)?;
        println!("{:<14} {direct:>16.12} {bound:>16.12}", gen.name());
    }
    Ok(())
}
