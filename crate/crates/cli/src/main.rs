//! `strata-lab`: data sets, decorated graphs and strata from the command line.
//!
//! Exit codes: 0 on success, 2 when validation finds violations, 1 on
//! malformed input. Logs go to stderr, filtered by `STRATA_LOG`.

mod commands;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::Output;

#[derive(Parser)]
#[command(name = "strata-lab", version, about = "Exact combinatorics of cylinder moduli spaces and their strata")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Census bounds: `max_leaves=6,max_codim=2,...` or a JSON file.
    #[arg(long, global = true)]
    bounds: Option<String>,
    /// Keep strata reached through boundary moves.
    #[arg(long, global = true)]
    include_boundary: bool,
    /// Seed for randomized choices.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a data set or a decorated graph.
    Validate { file: Option<PathBuf> },
    /// The angle named by an integer pair.
    Angle {
        #[arg(allow_hyphen_values = true)]
        p: i64,
        #[arg(allow_hyphen_values = true)]
        pp: i64,
    },
    /// Moduli dimension of a data set, or stratum dimension of a graph.
    Dim { file: Option<PathBuf> },
    /// The linear graph of a data set.
    LinearGraph { file: Option<PathBuf> },
    /// Existence check for a graph, or for a data set via its linear graph.
    CheckExists {
        file: Option<PathBuf>,
        #[arg(long)]
        linear: bool,
    },
    /// The automorphism group of a graph.
    Aut { file: Option<PathBuf> },
    /// Decide whether two graphs are isomorphic.
    Iso { first: PathBuf, second: PathBuf },
    /// Stabilizer of a point; the interior point by default.
    Stabilizer { graph: PathBuf, point: Option<PathBuf> },
    /// Act on a point; a seeded random lattice element by default.
    OrbitAct {
        graph: PathBuf,
        point: Option<PathBuf>,
        #[arg(long)]
        element: Option<PathBuf>,
    },
    /// Decide whether two points share an orbit.
    OrbitEqual { graph: PathBuf, first: PathBuf, second: PathBuf },
    /// Enumerate the strata of a data set.
    Census { file: Option<PathBuf> },
    /// Collapse an arc of a vertex graph.
    Collapse {
        graph: PathBuf,
        #[arg(long)]
        vertex: usize,
        #[arg(long)]
        arc: usize,
    },
    /// The adjacency poset of the census.
    Adjacency { file: Option<PathBuf> },
}

fn dispatch(cli: &Cli) -> anyhow::Result<Output> {
    let bounds = cli.bounds.as_deref();
    let b = cli.include_boundary;
    match &cli.command {
        Command::Validate { file } => commands::validate(file.as_deref()),
        Command::Angle { p, pp } => commands::angle(*p, *pp),
        Command::Dim { file } => commands::dim(file.as_deref()),
        Command::LinearGraph { file } => commands::linear(file.as_deref()),
        Command::CheckExists { file, linear } => commands::check(file.as_deref(), *linear),
        Command::Aut { file } => commands::aut(file.as_deref()),
        Command::Iso { first, second } => commands::iso(first, second),
        Command::Stabilizer { graph, point } => commands::stab(graph, point.as_deref()),
        Command::OrbitAct { graph, point, element } => {
            commands::orbit_act(graph, point.as_deref(), element.as_deref(), cli.seed)
        }
        Command::OrbitEqual { graph, first, second } => commands::orbit_equal(graph, first, second),
        Command::Census { file } => commands::run_census(file.as_deref(), bounds, b),
        Command::Collapse { graph, vertex, arc } => commands::collapse(graph, *vertex, *arc),
        Command::Adjacency { file } => commands::run_adjacency(file.as_deref(), bounds, b),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("STRATA_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = match dispatch(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let mut stdout = std::io::stdout().lock();
    // a closed pipe is not an error worth reporting
    let _ = match cli.format {
        Format::Text => writeln!(stdout, "{}", out.text),
        Format::Json => writeln!(stdout, "{}", serde_json::to_string_pretty(&out.json).expect("json value")),
        Format::Dot => match &out.dot {
            Some(d) => write!(stdout, "{d}"),
            None => {
                eprintln!("error: this command has no DOT rendering");
                return ExitCode::from(1);
            }
        },
    };
    ExitCode::from(if out.violations { 2 } else { 0 })
}
