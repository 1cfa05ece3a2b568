use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Maslov-type indices, brake iterations, index identities and brake orbits.
///
/// Exit status: 0 success, 2 a verification claim failed, 3 numerical
/// failure, 64 invalid arguments or input, 1 I/O failure.
#[derive(Debug, Parser)]
#[command(name = "maslov", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Five Maslov-type indices and end-point nullities of one path.
    Index,
    /// Brake iterate of a path, its indices and the Bott formula for `--k`.
    Iterate {
        /// Iteration count.
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Identities, Hörmander consistency, Bott formulas for k = 2..=kmax and
    /// iteration inequalities, over `--count` consecutive corpus seeds.
    Verify {
        /// Number of consecutive seeds starting at `--seed`.
        #[arg(long, default_value_t = 1)]
        count: u64,
        /// Also print a text table of every claim to stderr.
        #[arg(long)]
        table: bool,
    },
    /// Galerkin Morse index against the L0 index and conjugate points, or the
    /// relative Morse index of a pencil `{"a": .., "b": ..}`.
    Morse,
    /// Shoots and certifies a brake orbit from `{"hamiltonian", "T", "q0"}`.
    Orbit {
        /// Write the orbit samples on [-T/2, T/2] as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Reference cases with exact answers.
    Selftest,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Input file, or inline JSON when the value starts with `{`.
    #[arg(long, global = true)]
    pub input: Option<String>,
    /// Output file for the JSON report [default: stdout].
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Corpus seed.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Half-dimension.
    #[arg(long, global = true, default_value_t = 1)]
    pub n: usize,
    /// Path duration for builtin coefficient paths.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub tau: f64,
    /// Largest iteration for Bott formulas and inequalities (1..=8).
    #[arg(long, global = true, default_value_t = 4)]
    pub kmax: usize,
    /// Galerkin truncations, comma separated.
    #[arg(long, global = true, value_delimiter = ',', default_value = "64,128")]
    pub modes: Vec<usize>,
    /// RK4 steps for the matrizant.
    #[arg(long, global = true, default_value_t = 4096)]
    pub steps: usize,
    /// Relative singular-value threshold for ranks [default: 1e-8].
    #[arg(long, global = true)]
    pub tol_rank: Option<f64>,
    /// Zero band for form eigenvalues [default: 1e-9].
    #[arg(long, global = true)]
    pub tol_zero: Option<f64>,
    /// Omit the generation time so reports are reproducible byte for byte.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// Worker threads for independent seeds.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Builtin coefficient path used when no `--input` is given:
    /// `constant-identity` (B = I on [0, tau]) or `corpus` (seeded trigonometric path).
    #[arg(long = "B", global = true, default_value = "corpus")]
    pub builtin: String,
}
