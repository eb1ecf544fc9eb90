//! Experiment harness: run the sweep for every requested heuristic and item
//! order on one instance and report the archives.
//!
//! `results.csv` has the header `heuristic,order,z1,z2,best`. Rows are grouped
//! by cell (order-major, heuristic-minor); within a cell they are sorted by
//! `z1` descending and `z2` ascending. `best` is `1` when the vector is not
//! dominated by any vector of any cell. Wall-clock times go to `timings.csv`
//! so that `results.csv` is reproducible byte for byte.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, ValueEnum};
use thiserror::Error;

use crate::construct::{run_sweep, Heuristic, ItemOrder, ParamError, Step, SweepParams};
use crate::instances::{self, GenerateError, ReadError};
use crate::model::{dominates, Instance, ObjectiveVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum HeuristicArg {
    BestFit,
    RandomFit,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    Decreasing,
    Increasing,
    Random,
    All,
}

#[derive(Debug, Parser)]
#[command(name = "hetpack", version, about = "Biobjective bin packing: bins used versus bin heterogeneousness")]
pub struct Args {
    /// Generate a benchmark instance with N items (a multiple of 5).
    #[arg(long, value_name = "N", conflicts_with = "instance", required_unless_present = "instance")]
    pub generate: Option<usize>,

    /// Read the instance from PATH.
    #[arg(long, value_name = "PATH")]
    pub instance: Option<PathBuf>,

    /// Seed for instance generation and for the sweep.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    #[arg(long, value_enum, default_value = "all")]
    pub heuristic: HeuristicArg,

    #[arg(long, value_enum, default_value = "all")]
    pub order: OrderArg,

    /// Run every heuristic under every order.
    #[arg(long, conflicts_with_all = ["heuristic", "order"])]
    pub all: bool,

    /// Level increment, as a decimal or a fraction.
    #[arg(long, default_value = "0.1")]
    pub step: String,

    /// Packings built per level.
    #[arg(long, default_value_t = 100)]
    pub reps: u32,

    /// Directory for results.csv, timings.csv and (when generating) instance.txt.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Usage(#[from] clap::Error),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error("cannot use instance {path}: {source}")]
    Instance { path: PathBuf, source: ReadError },
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: io::Error },
}

impl CliError {
    /// 1 for usage and parameter errors, 2 for an unusable instance.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Instance { .. } => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Cell {
    pub heuristic: Heuristic,
    pub order: ItemOrder,
    /// Archive vectors in reporting order.
    pub vectors: Vec<ObjectiveVector>,
    pub seconds: f64,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub instance: Instance,
    pub cells: Vec<Cell>,
}

impl Report {
    /// Vectors not dominated by anything found in any cell.
    pub fn is_best(&self, vector: &ObjectiveVector) -> bool {
        !self.cells.iter().flat_map(|c| &c.vectors).any(|other| dominates(other, vector))
    }

    pub fn results_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(["heuristic", "order", "z1", "z2", "best"]).expect("in-memory write");
        for cell in &self.cells {
            for v in &cell.vectors {
                let best = if self.is_best(v) { "1" } else { "0" };
                writer
                    .write_record([cell.heuristic.name(), cell.order.name(), &v.z1().to_string(), &v.z2_fixed3(), best])
                    .expect("in-memory write");
            }
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("ascii output")
    }

    pub fn timings_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(["heuristic", "order", "vectors", "seconds"]).expect("in-memory write");
        for cell in &self.cells {
            writer
                .write_record([
                    cell.heuristic.name(),
                    cell.order.name(),
                    &cell.vectors.len().to_string(),
                    &format!("{:.3}", cell.seconds),
                ])
                .expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("ascii output")
    }

    /// Human-readable table, one block per order; `*` marks best vectors.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "n = {}, c = {}, lower bound = {}",
            self.instance.len(),
            self.instance.capacity(),
            self.instance.lower_bound()
        );
        let mut orders: Vec<ItemOrder> = Vec::new();
        for cell in &self.cells {
            if !orders.contains(&cell.order) {
                orders.push(cell.order);
            }
        }
        for order in orders {
            let _ = writeln!(out, "{order}");
            for cell in self.cells.iter().filter(|c| c.order == order) {
                let vectors: Vec<String> = cell
                    .vectors
                    .iter()
                    .map(|v| if self.is_best(v) { format!("*{v}") } else { v.to_string() })
                    .collect();
                let _ = writeln!(out, "  {:<11}{}  [{:.2}s]", cell.heuristic.name(), vectors.join(" "), cell.seconds);
            }
        }
        out
    }
}

fn selected_heuristics(args: &Args) -> Vec<Heuristic> {
    match (args.all, args.heuristic) {
        (true, _) | (_, HeuristicArg::All) => Heuristic::ALL.to_vec(),
        (_, HeuristicArg::BestFit) => vec![Heuristic::BestFit],
        (_, HeuristicArg::RandomFit) => vec![Heuristic::RandomFit],
    }
}

fn selected_orders(args: &Args) -> Vec<ItemOrder> {
    match (args.all, args.order) {
        (true, _) | (_, OrderArg::All) => ItemOrder::ALL.to_vec(),
        (_, OrderArg::Decreasing) => vec![ItemOrder::DecreasingWeight],
        (_, OrderArg::Increasing) => vec![ItemOrder::IncreasingWeight],
        (_, OrderArg::Random) => vec![ItemOrder::RandomOrder],
    }
}

fn load_instance(args: &Args) -> Result<Instance, CliError> {
    match (&args.generate, &args.instance) {
        (Some(n), _) => Ok(instances::generate(*n, args.seed)?),
        (None, Some(path)) => {
            instances::load(path).map_err(|source| CliError::Instance { path: path.clone(), source })
        }
        (None, None) => unreachable!("clap requires one instance source"),
    }
}

/// Runs every requested cell. Nothing is written to disk.
pub fn run_experiment(args: &Args) -> Result<Report, CliError> {
    let step: Step = args.step.parse()?;
    let instance = load_instance(args)?;
    let mut cells = Vec::new();
    for order in selected_orders(args) {
        for heuristic in selected_heuristics(args) {
            let params = SweepParams { step, solutions_per_level: args.reps, seed: args.seed, heuristic, order };
            let started = Instant::now();
            let archive = run_sweep(&instance, &params)?;
            cells.push(Cell {
                heuristic,
                order,
                vectors: archive.sorted_vectors(),
                seconds: started.elapsed().as_secs_f64(),
            });
        }
    }
    Ok(Report { instance, cells })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Output { path: path.to_owned(), source })
}

/// Writes the report files into `dir`, creating it if needed.
pub fn write_report(report: &Report, dir: &Path, generated: bool) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Output { path: dir.to_owned(), source })?;
    write_file(&dir.join("results.csv"), &report.results_csv())?;
    write_file(&dir.join("timings.csv"), &report.timings_csv())?;
    if generated {
        let path = dir.join("instance.txt");
        instances::save(&report.instance, &path).map_err(|source| CliError::Output { path, source })?;
    }
    Ok(())
}

fn run(args: &Args) -> Result<(), CliError> {
    let step: Step = args.step.parse()?;
    if step.ratio() > num_rational::Ratio::from_integer(1) {
        eprintln!("warning: step {step} is above 1; some heterogeneousness levels will be skipped");
    }
    let report = run_experiment(args)?;
    match &args.out {
        Some(dir) => {
            write_report(&report, dir, args.generate.is_some())?;
            print!("{}", report.table());
        }
        None => {
            eprint!("{}", report.table());
            print!("{}", report.results_csv());
        }
    }
    let _ = io::stdout().flush();
    Ok(())
}

/// Parses `argv`, runs, and returns the process exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(args) => args,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    match run(&args) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}
