//! # petz-tur
//!
//! Quantum f-divergences between density matrices, their chi-square mixture
//! structure, and the universal thermodynamic uncertainty bound they imply.
//!
//! Every Petz f-divergence with an operator-convex generator decomposes as a
//! positive mixture of quadratic contrasts,
//!
//! ```text
//! D_f(rho || sigma) = ∫₀¹ w_f(λ) χ²_λ(rho || sigma) dλ,
//! ```
//!
//! where the mixing law `w_f` is a nonnegative measure on (0,1) recovered from
//! the generator by Stieltjes inversion. Because each kernel `χ²_λ` obeys a
//! Chapman-Robbins variational bound in terms of the mean gap and variances of
//! any Hermitian observable, so does the full divergence:
//!
//! ```text
//! D_f(rho || sigma) ≥ ∫₀¹ w_f(λ) h_λ(x, y, z) dλ,
//! h_λ(x,y,z) = x² / ((1-λ)y + λz + λ(1-λ)x²),
//! ```
//!
//! with equality attained by an explicit commuting binary pair. This crate
//! implements the whole pipeline at desk scale (dense matrices, d ≲ 16):
//!
//! | Module | Provides |
//! |--------|----------|
//! | [`linalg`] | dense complex Hermitian eigensolver, matrix functions, pseudo-inverse |
//! | [`states`] | validated density matrices, observables, random ensembles, JSON I/O |
//! | [`ns`] | Nussbaum-Szkola joint distributions and the lifted observable |
//! | [`generators`] | catalog of f-divergence generators with duals and closed forms |
//! | [`weights`] | mixing laws w_f: analytic tables and numeric Stieltjes inversion |
//! | [`divergence`] | Csiszar sums, Petz divergences, χ²_λ kernels, mixture quadrature |
//! | [`tur`] | h_λ contrasts, bound integrals, saturating binary pairs, Chapman-Robbins |
//! | [`scenarios`] | entropy production of joint unitaries, nonequilibrium-lag CGF |
//! | [`verify`] | the self-check battery behind `petz-tur verify` |
//!
//! ## Quick start
//!
//! ```rust
//! use petz_tur::generators::Generator;
//! use petz_tur::states::{random_density, random_observable};
//! use petz_tur::divergence::{petz_divergence, QuadratureSpec};
//! use petz_tur::tur::tur_report;
//!
//! let rho = random_density(3, 7).unwrap();
//! let sigma = random_density(3, 8).unwrap();
//! let obs = random_observable(3, 9).unwrap();
//!
//! let kl = Generator::kl();
//! let d = petz_divergence(&kl, &rho, &sigma).unwrap();
//! let report = tur_report(&kl, &rho, &sigma, &obs, &QuadratureSpec::default()).unwrap();
//! assert!(d >= report.bound - 1e-8);
//! ```
//!
//! Run `cargo run --example tur_bound` (or any of the other examples) for a
//! guided tour; the `petz-tur` binary exposes the same operations as
//! subcommands for file-based states.

use thiserror::Error;

pub mod divergence;
pub mod generators;
pub mod linalg;
pub mod ns;
pub mod quad;
pub mod scenarios;
pub mod states;
pub mod tur;
pub mod verify;
pub mod weights;

pub use divergence::{petz_divergence, QuadratureSpec};
pub use generators::Generator;
pub use linalg::ComplexMatrix;
pub use states::{DensityMatrix, MomentTriple, Observable};
pub use tur::{tur_report, TurReport};
pub use weights::WeightMeasure;

/// Errors shared by all modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {0} rows x {1} cols")]
    NotSquare(usize, usize),

    #[error("matrix is not Hermitian (max |m - m^dag| = {0:.3e})")]
    NotHermitian(f64),

    #[error("eigensolver failed to converge within {0} sweeps")]
    NoConvergence(usize),

    #[error("eigenvalue {0} outside the domain of the requested scalar function")]
    DomainError(f64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("trace is {0}, expected 1")]
    InvalidTrace(f64),

    #[error("not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPositiveSemidefinite(f64),

    #[error("invalid probability vector: {0}")]
    InvalidDistribution(String),

    #[error("alpha = {0} outside (0,1)")]
    InvalidAlpha(f64),

    #[error("generator `{0}` does not support this operation")]
    UnsupportedGenerator(String),

    #[error("boundary evaluation of g returned a non-finite value at t = {0}")]
    BranchCutError(f64),

    #[error("phi samples and t grid have mismatched lengths: {0} vs {1}")]
    GridMismatch(usize, usize),

    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),

    #[error("degenerate moment triple (x = {x}, y = {y}, z = {z}); need x != 0 and y, z > 0")]
    DegenerateTriple { x: f64, y: f64, z: f64 },

    #[error("support violation: P is not absolutely continuous w.r.t. Q (index {0})")]
    SupportViolation(usize),

    #[error("rank-deficient reference state: support of sigma does not contain support of rho")]
    RankDeficient,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
