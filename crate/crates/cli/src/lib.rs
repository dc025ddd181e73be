//! Command-line front end for `brauer-core`.
//!
//! Every command renders a UTF-8 report and an exit status: 0 when every
//! verdict passes, 1 when some verdict fails, 2 on invalid input.

mod commands;
mod table;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{run, Outcome};

#[derive(Debug, Parser)]
#[command(name = "brauer", version, about = "Cyclic algebras and Severi-Brauer birationality checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the 2-cocycle condition for the standard cyclic cocycle or a stored table.
    VerifyCocycle(VerifyCocycleArgs),
    /// Build and certify the birational map SB(A) --> SB(A^l).
    Roquette(RoquetteArgs),
    /// Run the pipeline for every (s, l) up to a bound.
    Sweep(SweepArgs),
    /// Associativity, centre and splitting of a cyclic crossed product over Q(zeta_n).
    Crossed(CrossedArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Backend {
    Symbolic,
    Cyclotomic,
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    /// Scalar backend; inferred as cyclotomic when a conductor is given.
    #[arg(long, value_enum)]
    pub backend: Option<Backend>,
    /// Conductor n of K = Q(zeta_n).
    #[arg(long)]
    pub conductor: Option<u64>,
    /// sigma acts by zeta -> zeta^g; defaults to the least primitive root.
    #[arg(long)]
    pub generator: Option<i64>,
}

#[derive(Debug, Args)]
pub struct VerifyCocycleArgs {
    #[arg(long)]
    pub s: Option<usize>,
    /// A rational literal or `symbolic`.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    #[command(flatten)]
    pub field: FieldArgs,
    /// JSON file holding an explicit s x s table.
    #[arg(long, conflicts_with_all = ["s", "gamma"])]
    pub table: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RoquetteArgs {
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub ell: usize,
    /// A rational literal or `symbolic`.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    #[command(flatten)]
    pub field: FieldArgs,
    /// Where to write the JSON certificate.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 12)]
    pub max_s: usize,
    /// Also run pairs with gcd(l, s) > 1, which must fail the lattice stage.
    #[arg(long)]
    pub include_noncoprime: bool,
}

#[derive(Debug, Args)]
pub struct CrossedArgs {
    #[arg(long)]
    pub conductor: u64,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    pub gamma: String,
    #[arg(long)]
    pub generator: Option<i64>,
    /// Must equal phi(n) when given.
    #[arg(long)]
    pub s: Option<usize>,
}
