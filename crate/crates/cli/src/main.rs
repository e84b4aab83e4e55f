//! `modkit` command-line front end.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 unreadable or malformed
//! input, 3 domain error (singular state, shape, positivity), 4 usage error.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use modkit::campaign::DEFAULT_TOL;

#[derive(Debug, Parser)]
#[command(name = "modkit", version, about = "Finite-dimensional modular theory toolkit")]
struct Cli {
    /// Emit a JSON report on stdout.
    #[arg(long, global = true)]
    json: bool,

    /// Relative tolerance for residual checks.
    #[arg(long, global = true, env = "MODKIT_TOL", default_value_t = DEFAULT_TOL)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SeedArg {
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Schmidt decomposition of a bipartite vector (vector or matrix file, `-` for stdin).
    Schmidt { input: String },

    /// Relative modular operator of two density matrices.
    Modular {
        phi: String,
        omega: String,
        /// Also check the cocycle and flow intertwining at this time.
        #[arg(long = "t", allow_negative_numbers = true)]
        time: Option<f64>,
        /// Run the Tomita–Takesaki verification.
        #[arg(long)]
        verify: bool,
        /// Random samples for the verification when d > 4.
        #[arg(long, default_value_t = 8)]
        samples: usize,
        #[command(flatten)]
        seed: SeedArg,
    },

    /// KMS boundary condition and state invariance for a Gibbs state.
    KmsVerify {
        state: String,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[command(flatten)]
        seed: SeedArg,
    },

    /// Natural-cone membership and four-part decomposition of a vector.
    Cone {
        input: String,
        #[arg(long, default_value_t = modkit::cone::DUAL_SAMPLES)]
        samples: usize,
        #[command(flatten)]
        seed: SeedArg,
    },

    /// Evaluate every trace inequality on a pair of PSD matrices.
    Ineq { a: String, b: String },

    /// Seeded verification campaign.
    Campaign {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[command(flatten)]
        seed: SeedArg,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(4) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("modkit: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
