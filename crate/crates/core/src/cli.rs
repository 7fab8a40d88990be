//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 input or I/O error, 3 infeasible
//! plan. Diagnostics go to stderr; JSON results go to stdout unless `--out`
//! names a file.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::decomposition::{critical_points, HeadlandId};
use crate::io::{load_field, write_json, write_svg, CompareReport, IoError, PlanFile};
use crate::planner::{
    plan_global_prepared, plan_traditional_prepared, savings_ratio, Field, PlanComparison,
    PlanError, PlannerOptions, Prepared,
};
use crate::sequencing::{SequencingError, DEFAULT_EXACT_THRESHOLD};
use crate::turns::TeeFormula;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "fieldcover",
    version,
    about = "Coverage path planning for fields with obstacles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decompose a field into cells and print a summary.
    Decompose {
        field: PathBuf,
        /// Write the decomposition as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Plan coverage with one planner.
    Plan {
        field: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Write the plan file here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run both planners and report the savings.
    Compare {
        field: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the global plan as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Traditional,
    Global,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Largest track count solved exactly.
    #[arg(long, default_value_t = DEFAULT_EXACT_THRESHOLD)]
    exact_threshold: usize,
    /// T-turn expression: paper or normalized.
    #[arg(long, default_value_t = TeeFormula::Paper)]
    tee_formula: TeeFormula,
    /// Distance cut from each track end in meters (default 2 * r_min).
    #[arg(long)]
    headland_margin: Option<f64>,
    /// Seed for the heuristic solver.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl CommonArgs {
    fn options(&self) -> PlannerOptions {
        PlannerOptions {
            exact_threshold: self.exact_threshold,
            tee_formula: self.tee_formula,
            headland_margin: self.headland_margin,
            seed: self.seed,
        }
    }
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Infeasible(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<PlanError> for Failure {
    fn from(e: PlanError) -> Self {
        match e {
            PlanError::Infeasible { .. } | PlanError::Sequencing(SequencingError::Infeasible) => {
                Failure::Infeasible(e.to_string())
            }
            other => Failure::Input(other.to_string()),
        }
    }
}

/// Runs the CLI with the process streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
        Err(Failure::Infeasible(msg)) => {
            let _ = writeln!(err, "infeasible: {msg}");
            EXIT_INFEASIBLE
        }
    }
}

fn emit<T: Serialize>(value: &T, path: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => write_json(p, value).map_err(Failure::from),
        None => {
            let text = serde_json::to_string_pretty(value).expect("report types serialize");
            writeln!(out, "{text}").map_err(|e| Failure::Input(format!("stdout: {e}")))
        }
    }
}

#[derive(Serialize)]
struct CellSummary {
    id: usize,
    area_m2: f64,
    sweep_interval: (f64, f64),
    tracks: usize,
    neighbors: Vec<usize>,
}

#[derive(Serialize)]
struct DecompositionSummary {
    critical_points: usize,
    cells: Vec<CellSummary>,
    adjacency: Vec<(usize, usize)>,
    headland_components: Vec<Vec<String>>,
}

fn summarize(field: &Field, prep: &Prepared) -> DecompositionSummary {
    let (d, hg) = (&prep.decomposition, &prep.headlands);
    let cells = d
        .cells
        .iter()
        .map(|c| CellSummary {
            id: c.id,
            area_m2: c.polygon.area(),
            sweep_interval: c.sweep_interval,
            tracks: prep.tracks.iter().filter(|t| t.cell_id == c.id).count(),
            neighbors: d.neighbors(c.id),
        })
        .collect();
    let mut components: Vec<Vec<String>> = Vec::new();
    for k in 0.. {
        let members: Vec<HeadlandId> = hg.members(k);
        if members.is_empty() {
            break;
        }
        components.push(members.iter().map(ToString::to_string).collect());
    }
    DecompositionSummary {
        critical_points: critical_points(&field.free, &field.frame).map_or(0, |v| v.len()),
        cells,
        adjacency: d.adjacency.clone(),
        headland_components: components,
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Decompose { field, svg } => {
            let (_, field) = load_field(&field)?;
            let prep = Prepared::new(&field, &PlannerOptions::default())?;
            if let Some(path) = svg {
                write_svg(&path, &prep.decomposition, &prep.tracks, None)?;
            }
            emit(&summarize(&field, &prep), None, out)
        }
        Command::Plan {
            field,
            mode,
            out: out_path,
            svg,
            common,
        } => {
            let (file, field) = load_field(&field)?;
            let options = common.options();
            let prep = Prepared::new(&field, &options)?;
            let plan = match mode {
                ModeArg::Traditional => plan_traditional_prepared(&prep, &options)?,
                ModeArg::Global => plan_global_prepared(&prep, &options)?,
            };
            if let Some(path) = svg {
                write_svg(&path, &prep.decomposition, &prep.tracks, Some(&plan))?;
            }
            emit(
                &PlanFile::new(&file, &options, plan),
                out_path.as_deref(),
                out,
            )
        }
        Command::Compare {
            field,
            out: out_path,
            svg,
            common,
        } => {
            let (file, field) = load_field(&field)?;
            let options = common.options();
            let prep = Prepared::new(&field, &options)?;
            let traditional = plan_traditional_prepared(&prep, &options)?;
            let global = plan_global_prepared(&prep, &options)?;
            if let Some(path) = svg {
                write_svg(&path, &prep.decomposition, &prep.tracks, Some(&global))?;
            }
            let savings_ratio = savings_ratio(
                traditional.metrics.nonproductive_m,
                global.metrics.nonproductive_m,
            );
            let comparison = PlanComparison {
                traditional,
                global,
                savings_ratio,
            };
            let report = CompareReport::new(&file, &options, comparison);
            emit(&report, out_path.as_deref(), out)
        }
    }
}
