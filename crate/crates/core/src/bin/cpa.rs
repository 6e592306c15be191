use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use cpa_core::scenario::values::round_json;
use cpa_core::scenario::{
    custom_sweep_table, parse_scenario, run_custom_sweep, run_preset, run_scenario, table1, Preset,
    ScenarioError, Table, DEFAULT_GRID, SCHEMA_VERSION,
};

const REGRESSION_EXIT: u8 = 3;

/// Coherent perfect absorption of quantum light.
#[derive(Parser)]
#[command(name = "cpa", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Re-derive the reference table and check every row.
    Table1 {
        /// Fock cutoff for every row (default: per family).
        #[arg(long)]
        cutoff: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Run a JSON scenario file and print the result as JSON.
    Run {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report wall-clock time on stderr.
        #[arg(long)]
        timing: bool,
    },
    /// Produce a CSV grid from a preset or a scenario file's sweep section.
    Sweep(SweepArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "source")]
struct SweepSource {
    /// fig6, fig8, fig9a or fig9b.
    #[arg(long)]
    preset: Option<String>,
    /// Scenario file with a `sweep` section.
    #[arg(long)]
    custom: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    source: SweepSource,
    /// Points per axis (presets only).
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    timing: bool,
}

fn read_file(path: &Path) -> Result<String, ScenarioError> {
    fs::read_to_string(path).map_err(|e| ScenarioError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), ScenarioError> {
    let io_err = |path: String, e: io::Error| ScenarioError::Io {
        path,
        message: e.to_string(),
    };
    match out {
        Some(p) => fs::write(p, bytes).map_err(|e| io_err(p.display().to_string(), e)),
        None => io::stdout()
            .write_all(bytes)
            .map_err(|e| io_err("stdout".into(), e)),
    }
}

fn emit_json(out: Option<&Path>, mut value: Value) -> Result<(), ScenarioError> {
    round_json(&mut value);
    let mut text = serde_json::to_string_pretty(&value).expect("JSON values always serialize");
    text.push('\n');
    emit(out, text.as_bytes())
}

fn emit_table(out: Option<&Path>, table: &Table) -> Result<(), ScenarioError> {
    emit(out, table.to_csv_string()?.as_bytes())
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("results always serialize")
}

fn cmd_run(file: &Path, out: Option<&Path>) -> Result<(), ScenarioError> {
    let (scenario, raw) = parse_scenario(&read_file(file)?)?;
    let body = match &scenario.sweep {
        None => to_value(&run_scenario(&scenario)?),
        Some(sweep) => {
            let (values, results) = run_custom_sweep(&scenario, &raw)?;
            Value::Array(
                values
                    .iter()
                    .zip(&results)
                    .map(|(v, r)| json!({ sweep.parameter.as_str(): v, "result": to_value(r) }))
                    .collect(),
            )
        }
    };
    let key = if scenario.sweep.is_some() { "results" } else { "result" };
    emit_json(out, json!({ "schema": SCHEMA_VERSION, "input": raw, key: body }))
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), ScenarioError> {
    let table = match (&args.source.preset, &args.source.custom) {
        (Some(name), _) => run_preset(name.parse::<Preset>()?, args.grid)?,
        (None, Some(path)) => {
            let (scenario, raw) = parse_scenario(&read_file(path)?)?;
            custom_sweep_table(&scenario, &raw)?
        }
        (None, None) => unreachable!("clap requires one source"),
    };
    emit_table(args.out.as_deref(), &table)
}

fn fail(e: &ScenarioError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are validation failures, not numerical ones
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let start = Instant::now();
    let (outcome, timing) = match &cli.command {
        Command::Table1 { cutoff, json } => {
            let report = match table1(*cutoff) {
                Ok(r) => r,
                Err(e) => return fail(&e),
            };
            let printed = if *json {
                emit_json(None, to_value(&report))
            } else {
                emit(None, format!("{report}\n").as_bytes())
            };
            if let Err(e) = printed {
                return fail(&e);
            }
            if !report.pass {
                return ExitCode::from(REGRESSION_EXIT);
            }
            (Ok(()), false)
        }
        Command::Run { file, out, timing } => (cmd_run(file, out.as_deref()), *timing),
        Command::Sweep(args) => (cmd_sweep(args), args.timing),
    };
    if timing {
        eprintln!("wall-clock: {:.3} s", start.elapsed().as_secs_f64());
    }
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
