use std::path::PathBuf;
use std::process::ExitCode;

use clap::{error::ErrorKind, Args, Parser, Subcommand, ValueEnum};
use cliquesys::solvers::DEFAULT_BUDGET;

mod commands;
mod output;

/// Construct, simulate and audit nearly disjoint clique systems.
#[derive(Debug, Parser)]
#[command(name = "cliquesys", version)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Seed for every random choice made by the command.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Node budget for the exact searches.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Input document; standard input when absent.
    #[arg(long = "in", global = true)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a clique system or plane from parameters.
    #[command(subcommand)]
    Construct(Construct),
    /// Keep each vertex of a clique system independently at random.
    Restrict {
        /// Largest clique trace allowed to survive.
        #[arg(long)]
        q: usize,
        /// Keep probability; defaults to q / (10 * source clique size).
        #[arg(long)]
        prob: Option<f64>,
        #[arg(long, default_value_t = 100)]
        max_resamples: u32,
    },
    /// Top the traces of a restriction up to full cliques.
    Pad {
        /// Target clique size; defaults to the one the restriction used.
        #[arg(long)]
        q: Option<usize>,
    },
    /// Replace every clique by all of its k-subsets.
    Expand {
        #[arg(long)]
        k: usize,
    },
    /// Run the random greedy packing process.
    Process {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: usize,
        /// Stop after this many accepted sets.
        #[arg(long)]
        target_e: Option<usize>,
        /// Consecutive rejections before giving up; defaults to 1000 n.
        #[arg(long)]
        reject_limit: Option<u64>,
        /// Emit the accepted sets as a clique system.
        #[arg(long, conflicts_with = "stats_k")]
        system: bool,
        /// Emit statistics of the k-graph expansion instead of the trace.
        #[arg(long)]
        stats_k: Option<usize>,
    },
    /// Color a k-graph or clique system.
    Color {
        #[arg(long, value_enum, default_value_t = ColorMethod::Greedy)]
        method: ColorMethod,
        /// Uniformity used when the input is a clique system.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Exact independence number.
    Alpha {
        #[arg(long)]
        k: Option<usize>,
    },
    /// Exact chromatic number.
    Chi {
        #[arg(long)]
        k: Option<usize>,
    },
    /// Count the caps of the affine plane of order q.
    Caps {
        #[arg(long)]
        q: u64,
        /// Largest cap size to search for.
        #[arg(long)]
        max_t: Option<usize>,
        /// Include the caps themselves.
        #[arg(long, conflicts_with = "trace")]
        list: bool,
        /// Grow one random cap and report the blocked-line counts instead.
        #[arg(long)]
        trace: bool,
    },
    /// Singular values of the point-line incidence matrix of AG(2, q).
    Spectrum {
        #[arg(long)]
        q: u64,
        /// Test the mixing inequality on this many random subset pairs.
        #[arg(long)]
        mixing: Option<usize>,
    },
    /// Find cherries in a 3-graph.
    Cherries {
        /// Restrict to a random vertex subset first and clear the cherries.
        #[arg(long)]
        prob: Option<f64>,
    },
    /// Check the intersection bound of a system, or a coloring of a graph.
    Verify {
        /// Coloring document to check against the input graph.
        #[arg(long)]
        coloring: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Run the built-in self-check suite.
    Audit {
        #[arg(long, value_enum, default_value_t = AuditScale::Small)]
        scale: AuditScale,
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum Construct {
    /// Polynomial graphs over GF(Q) plus the Q columns.
    Poly {
        #[arg(long = "Q")]
        field_order: u64,
        #[arg(long)]
        k: usize,
    },
    /// Affine plane AG(2, q).
    Plane {
        #[arg(long)]
        q: u64,
    },
    /// Enlarged lines of a small plane, filled up with disjoint cliques.
    Prop2 {
        #[arg(long)]
        e: u64,
        #[arg(long)]
        q: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ColorMethod {
    Greedy,
    Split,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AuditScale {
    Small,
    Medium,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            let _ = e.print();
            return ExitCode::from(2);
        }
        Err(e) => {
            let text = e.to_string();
            eprintln!("{}", text.lines().next().unwrap_or("error: invalid arguments"));
            return ExitCode::from(2);
        }
    };
    match commands::run(&cli, &argv[1..]) {
        Ok(status) => ExitCode::from(status as u8),
        Err(failure) => {
            eprintln!("error: {}", failure.message.replace('\n', " "));
            ExitCode::from(failure.code)
        }
    }
}
