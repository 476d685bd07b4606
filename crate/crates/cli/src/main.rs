//! `kproj`: construct, verify and classify P-algebras; build projector
//! representations; compute trace invariants.

use clap::{Parser, Subcommand, ValueEnum};
use kproj_cli::commands::{self, Options, OutputFormat, TraceMode};
use kproj_core::Backend;

#[derive(Parser)]
#[command(
    name = "kproj",
    version,
    about = "Exact-arithmetic toolkit for P-algebras and the projectors they generate"
)]
struct Cli {
    /// Scalar arithmetic for newly constructed data.
    #[arg(long, global = true, value_enum, default_value_t = BackendArg::Exact)]
    backend: BackendArg,

    /// Comparison tolerance for the float backend.
    #[arg(long, global = true)]
    epsilon: Option<f64>,

    /// Output as human text or machine-readable records (one JSON per line).
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,

    /// Upper bound on materialized tensor entries
    /// (overrides the KPROJ_CAP environment variable).
    #[arg(long, global = true)]
    cap: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Records,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Direct,
    Network,
    Transfer,
}

#[derive(Subcommand)]
enum Command {
    /// Check the three structure-constant relations of an algebra file.
    Verify { file: String },

    /// Build an algebra from a recipe parameter file and print its document.
    Construct {
        /// One of: zero-one, semisimple, idempotent-basis.
        recipe: String,
        params: String,
    },

    /// Decide perfectness of the projector built from multiplicities.
    Perfect {
        file: String,
        /// Path to a multiplicity file, or inline rows like "1,0;0,1".
        #[arg(long)]
        multiplicities: String,
    },

    /// Print the trace invariants tr(P_1)..tr(P_N).
    Trace {
        file: String,
        #[arg(long)]
        multiplicities: String,
        /// Largest tensor-power index N.
        #[arg(short = 'N', long = "steps")]
        steps: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Network)]
        mode: ModeArg,
        /// Recompute through the other modes and require exact agreement.
        #[arg(long)]
        check: bool,
    },

    /// Classify nonsingular (0,1)-matrices up to row and column
    /// permutations.
    Census {
        n: usize,
        /// Allow the larger sizes that take a while to scan exhaustively.
        #[arg(long)]
        exhaustive: bool,
    },
}

fn effective_cap(flag: Option<usize>) -> usize {
    flag.or_else(|| std::env::var("KPROJ_CAP").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(kproj_core::DEFAULT_CAP)
}

fn main() {
    let cli = Cli::parse();
    let eps = cli.epsilon.unwrap_or(kproj_core::DEFAULT_EPSILON);
    if eps <= 0.0 {
        eprintln!("error: epsilon must be positive");
        std::process::exit(3);
    }
    let opts = Options {
        backend: match cli.backend {
            BackendArg::Exact => Backend::Exact,
            BackendArg::Float => Backend::Float { eps },
        },
        format: match cli.format {
            FormatArg::Text => OutputFormat::Text,
            FormatArg::Records => OutputFormat::Records,
        },
        cap: effective_cap(cli.cap),
    };

    let result = match &cli.command {
        Command::Verify { file } => commands::cmd_verify(file, &opts),
        Command::Construct { recipe, params } => commands::cmd_construct(recipe, params, &opts),
        Command::Perfect {
            file,
            multiplicities,
        } => commands::cmd_perfect(file, multiplicities, &opts),
        Command::Trace {
            file,
            multiplicities,
            steps,
            mode,
            check,
        } => {
            let mode = match mode {
                ModeArg::Direct => TraceMode::Direct,
                ModeArg::Network => TraceMode::Network,
                ModeArg::Transfer => TraceMode::Transfer,
            };
            commands::cmd_trace(file, multiplicities, *steps, mode, *check, &opts)
        }
        Command::Census { n, exhaustive } => commands::cmd_census(*n, *exhaustive, &opts),
    };

    match result {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
