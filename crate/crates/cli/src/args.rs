use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "braceforge", version, about = "Construct and verify F_p-braces of order p^4")]
pub struct Cli {
    /// Worker threads; defaults to the available cores.
    #[arg(long, global = true, env = "BRACEFORGE_THREADS")]
    pub threads: Option<usize>,

    /// Wall-clock budget in seconds for the long-running checks.
    #[arg(long, global = true, value_name = "SECONDS")]
    pub time_budget: Option<f64>,

    /// Seed for sampled checks; echoed in every report.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct FamilyArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub y: i64,
    #[arg(long, default_value_t = 0)]
    pub i: i64,
    #[arg(long, default_value_t = 0)]
    pub k: i64,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct ModeArgs {
    /// Check every triple instead of sampling.
    #[arg(long, conflicts_with = "samples")]
    pub full: bool,
    /// Number of sampled triples.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a family brace and write it as JSON.
    Construct {
        #[command(flatten)]
        family: FamilyArgs,
        /// Output file; the brace JSON goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the raw λ-table instead of the parameters.
        #[arg(long)]
        expand: bool,
        /// Also write the circle table as CSV.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Nilpotency, primality, circle group and chain dimensions.
    Classify { input: PathBuf },
    /// Brace axioms, exhaustive or sampled.
    Verify {
        input: PathBuf,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Left, right and strong chains.
    Chains { input: PathBuf },
    /// The ideal lattice and the prime verdict.
    Ideals { input: PathBuf },
    /// Search for an isomorphism between two braces.
    Iso {
        a: PathBuf,
        b: PathBuf,
        /// Search node cap before giving up with exit code 4.
        #[arg(long)]
        node_limit: Option<u64>,
    },
    /// The Yang–Baxter solution of a brace.
    Ybe {
        input: PathBuf,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// The four-dimensional pre-Lie algebra.
    Prelie {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        y: i64,
        #[arg(long, default_value_t = 0)]
        j: i64,
        #[arg(long, default_value_t = 0)]
        k: i64,
    },
    /// Holomorph embedding and conjugation by a linear map.
    Hol {
        input: PathBuf,
        /// JSON file `{p, n, matrix}` with the matrix in row-major order.
        #[arg(long)]
        gamma: PathBuf,
        /// Write the conjugated brace table here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generator relations and the cocycle for one parameter triple.
    MatrixRelations {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Construct, verify and classify every parameter triple at `p`.
    Sweep {
        #[arg(long)]
        p: u32,
        #[command(flatten)]
        mode: ModeArgs,
    },
}
