//! `jacloc`: local structure of compactified Jacobians from a JSON problem
//! file.

mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use jacloc_core::io::{execute, render_json, Command, ConvertDirection, ModeSpec, ProblemSpec};
use jacloc_core::{Error, RingName};

#[derive(Debug, Parser)]
#[command(
    name = "jacloc",
    version,
    about = "Local structure of compactified Jacobians of nodal curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Stability verdict (if a parameter is given), local report and presentations.
    Analyze(Common),
    /// Semistability and poly-stability of the sheaf against phi or a polarization.
    Stability(Common),
    /// Stable and strictly semistable line-bundle multidegrees.
    Chambers(Common),
    /// Convert between a polarization (with M, d) and phi.
    Convert {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        direction: Option<Direction>,
    },
    /// Totally cyclic orientations of the dual graph.
    Orientations(Common),
    /// Oriented circuits of the dual graph.
    Circuits(Common),
    /// A single ring presentation.
    Presentation {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_ring)]
        name: RingName,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Problem file in the jacloc/1 format.
    #[arg(long)]
    input: PathBuf,
    /// Render aligned text instead of JSON.
    #[arg(long)]
    text: bool,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Degree bound for listing invariant monomials.
    #[arg(long = "degree-bound")]
    degree_bound: Option<u32>,
    /// Largest t used for the Hilbert-Samuel function.
    #[arg(long = "tmax")]
    t_max: Option<u32>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Jacobian,
    Universal,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Direction {
    PolarizationToPhi,
    PhiToPolarization,
}

fn parse_ring(s: &str) -> Result<RingName, String> {
    s.parse()
}

fn run(common: &Common, command: Command) -> Result<serde_json::Value, Error> {
    let text =
        std::fs::read_to_string(&common.input).map_err(|e| Error::Input(format!("{}: {e}", common.input.display())))?;
    let mut spec = ProblemSpec::from_json(&text)?;
    if let Some(m) = common.mode {
        spec.mode = Some(match m {
            ModeArg::Jacobian => ModeSpec::Jacobian,
            ModeArg::Universal => ModeSpec::Universal,
        });
    }
    if common.degree_bound.is_some() {
        spec.options.degree_bound = common.degree_bound;
    }
    if common.t_max.is_some() {
        spec.options.t_max = common.t_max;
    }
    execute(&spec.build()?, &command)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, command) = match &cli.command {
        Cmd::Analyze(c) => (c, Command::Analyze),
        Cmd::Stability(c) => (c, Command::Stability),
        Cmd::Chambers(c) => (c, Command::Chambers),
        Cmd::Convert { common, direction } => (
            common,
            Command::Convert(direction.map(|d| match d {
                Direction::PolarizationToPhi => ConvertDirection::PolarizationToPhi,
                Direction::PhiToPolarization => ConvertDirection::PhiToPolarization,
            })),
        ),
        Cmd::Orientations(c) => (c, Command::Orientations),
        Cmd::Circuits(c) => (c, Command::Circuits),
        Cmd::Presentation { common, name } => (common, Command::Presentation(*name)),
    };
    let (value, code) = match run(common, command) {
        Ok(v) => (v, 0),
        Err(e) => (e.to_json(), e.exit_code()),
    };
    if common.text {
        print!("{}", render::text(&value));
    } else {
        println!("{}", render_json(&value));
    }
    ExitCode::from(code as u8)
}
