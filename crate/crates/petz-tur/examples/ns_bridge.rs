//! The Nussbaum-Szkola bridge: every Petz f-divergence of a state pair
//! equals a classical Csiszar divergence of two joint distributions built
//! from the spectra and overlaps.
//!
//! ```bash
//! cargo run --example ns_bridge
//! ```

use petz_tur::divergence::{lr_divergence, petz_divergence};
use petz_tur::generators::Generator;
use petz_tur::ns::{ns_observable, ns_pair, DEFAULT_OVERLAP_TOL};
use petz_tur::states::{moment_triple, random_density, random_observable};

fn main() -> petz_tur::Result<()> {
    let dim = 3;
    let rho = random_density(dim, 11)?;
    let sigma = random_density(dim, 12)?;

    let joint = ns_pair(&rho, &sigma, DEFAULT_OVERLAP_TOL)?;
    println!("NS joint distributions for a random qutrit pair (seeds 11/12)\n");

    println!("overlap matrix a_ij = |<p_i|q_j>|^2 (rows/columns sum to 1):");
    for i in 0..dim {
        let row: Vec<String> = (0..dim)
            .map(|j| format!("{:.6}", joint.overlap(i, j)))
            .collect();
        let sum: f64 = (0..dim).map(|j| joint.overlap(i, j)).sum();
        println!("  [{}]  row sum = {sum:.12}", row.join(", "));
    }

    println!("\nD_f(rho||sigma): classical sum on the NS pair vs the");
    println!("left/right-superoperator evaluation on the doubled space:\n");
    println!("{:<14} {:>16} {:>16} {:>10}", "generator", "ns route", "lr route", "|delta|");
    for gen in Generator::catalog(0.5)? {
        let ns = petz_divergence(&gen, &rho, &sigma)?;
        let lr = lr_divergence(&gen, &rho, &sigma)?;
        println!(
            "{:<14} {:>16.12} {:>16.12} {:>10.2e}",
            gen.name(),
            ns,
            lr,
            (ns - lr).abs()
        );
    }

    // The lifted observable preserves means and can only shrink variances.
    let obs = random_observable(dim, 13)?;
    let lifted = ns_observable(&rho, &sigma, &obs, DEFAULT_OVERLAP_TOL)?;
    let m = moment_triple(&rho, &sigma, &obs)?;
    let mean_p = lifted.mean(joint.p_flat());
    let mean_q = lifted.mean(joint.q_flat());
    println!("\nlifted observable Theta(i,j) = <p_i|theta|q_j>/<p_i|q_j>:");
    println!("  E_P[Theta] = {:.12}  (quantum <theta>_rho = {:.12})", mean_p.re, m.x + mean_q.re);
    println!("  Var_P[Theta] = {:.12} <= Var_rho = {:.12}", lifted.variance(joint.p_flat()), m.y);
    println!("  Var_Q[Theta] = {:.12} <= Var_sigma = {:.12}", lifted.variance(joint.q_flat()), m.z);
    Ok(())
}
