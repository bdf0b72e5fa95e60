mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polybilliard::geometry::Vec3;
use serde::Serialize;

use crate::config::{parse_count, parse_tolerance, parse_vec3};
use crate::error::CliError;

/// Billiards in convex polyhedra: orbits, codes, unfoldings, reflection
/// groups, edge transversals, beam cells and word complexity.
#[derive(Debug, Parser)]
#[command(name = "polybilliard", version)]
struct Cli {
    /// Worker threads (default: hardware parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed recorded in every artifact and used by sampling subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Tolerance override NAME=VALUE (plane, norm, step, angle, sing, den,
    /// surf, deg); values must lie in [1e-14, 1e-3]. Repeatable.
    #[arg(long = "tol", global = true, value_parser = parse_tolerance, value_name = "NAME=VALUE")]
    tol: Vec<(String, f64)>,
    /// Output file (default: standard output).
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

/// A starting phase point.
#[derive(Debug, Args, Serialize)]
pub struct Start {
    /// Base point on the boundary, `x,y,z`.
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    pub m: Vec3,
    /// Inward direction, `x,y,z`; normalized if needed.
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    pub theta: Vec3,
    /// Label of the face holding the base point (default: inferred).
    #[arg(long)]
    pub face: Option<String>,
    /// Number of phase points to produce.
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Iterate the billiard map; writes one JSON line per bounce.
    Simulate {
        #[serde(skip)]
        polyhedron: PathBuf,
        #[command(flatten)]
        start: Start,
    },
    /// Code an orbit by face labels; writes a JSON report.
    Code {
        #[serde(skip)]
        polyhedron: PathBuf,
        #[command(flatten)]
        start: Start,
        /// Also report edges passing within this distance of the orbit.
        #[arg(long, default_value_t = 0.0)]
        radius: f64,
    },
    /// Unfold an orbit onto a straight line; writes one JSON line per point.
    Unfold {
        #[serde(skip)]
        polyhedron: PathBuf,
        #[command(flatten)]
        start: Start,
    },
    /// Generate the group of linear parts of face reflections.
    Group {
        #[serde(skip)]
        polyhedron: PathBuf,
        /// Give up once the group has more elements than this.
        #[arg(long, default_value_t = polybilliard::unfolding::DEFAULT_GROUP_BOUND)]
        bound: usize,
    },
    /// Constraints, surface, transversals and intersection counts for 2 to 4
    /// edge lines read from JSON.
    Transversal {
        #[serde(skip)]
        input: PathBuf,
        /// Number of sampled transversals.
        #[arg(long, default_value_t = 9)]
        samples: usize,
        /// Sampled constraint values span [-reach, reach].
        #[arg(long, default_value_t = 2.0)]
        reach: f64,
    },
    /// Classify the cell of a direction and a word.
    Cell {
        #[serde(skip)]
        polyhedron: PathBuf,
        /// Direction, `x,y,z`; normalized if needed.
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        theta: Vec3,
        /// Face labels separated by commas or spaces.
        #[arg(long)]
        word: String,
        /// Longest period searched for.
        #[arg(long, default_value_t = 32)]
        kmax: usize,
    },
    /// Estimate word complexity by sampling; writes CSV and a JSON sidecar.
    Complexity {
        #[serde(skip)]
        polyhedron: PathBuf,
        /// Longest word length counted.
        #[arg(long, default_value_t = 12)]
        nmax: usize,
        /// Number of sampled orbits (accepts forms like 1e6).
        #[arg(long, value_parser = parse_count, default_value = "100000")]
        budget: u64,
        /// Metadata sidecar path (default: OUT.meta.json when --out is set).
        #[serde(skip)]
        #[arg(long)]
        meta: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Parse("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Internal(format!("cannot start worker pool: {e}")))?;
    }
    let ctx = commands::Context {
        seed: cli.seed,
        tol: config::tolerances(&cli.tol)?,
        out: cli.out,
    };
    commands::dispatch(&cli.command, &ctx)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = std::panic::catch_unwind(move || run(cli))
        .unwrap_or_else(|_| Err(CliError::Internal("internal error (panic)".into())));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
