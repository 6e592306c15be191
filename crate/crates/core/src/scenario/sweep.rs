use std::io::Write;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::Value;

use super::file::{run_scenario, scenario_from_value, set_path, ScenarioFile};
use super::values::format_number;
use super::ScenarioError;
use crate::coefficient::Coefficient;
use crate::gaussian::{
    duan_inseparability, epr_coherence_absorption, epr_intensity_absorption_travelling,
    prepare_squeezed_coherent, squeezed_inseparability_closed_form, to_standing_gaussian,
    GaussianState, SqueezedSpec,
};
use crate::mode::ModeLabel;
use crate::report::ScenarioResult;

pub const DEFAULT_GRID: usize = 101;

/// Environment variable capping sweep worker threads.
pub const THREADS_VAR: &str = "CPA_THREADS";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Number(f64),
    Text(String),
    Undefined,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Number(x) if x.is_finite() => format_number(*x),
            Cell::Number(_) | Cell::Undefined => "undefined".into(),
            Cell::Text(s) => s.clone(),
        }
    }

    pub fn as_number(&self) -> Option<f64> {
        match self {
            Cell::Number(x) => Some(*x),
            _ => None,
        }
    }
}

impl From<Coefficient> for Cell {
    fn from(c: Coefficient) -> Self {
        match c {
            Coefficient::Defined(v) => Cell::Number(v),
            Coefficient::Undefined => Cell::Undefined,
        }
    }
}

/// A rectangular result grid with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), ScenarioError> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| ScenarioError::Io {
            path: "csv".into(),
            message: e.to_string(),
        };
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(io)?;
        }
        w.flush().map_err(|e| ScenarioError::Io {
            path: "csv".into(),
            message: e.to_string(),
        })
    }

    pub fn to_csv_string(&self) -> Result<String, ScenarioError> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
    }
}

/// `n` evenly spaced points from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    stop
                } else {
                    start + (stop - start) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

fn thread_pool() -> Result<rayon::ThreadPool, ScenarioError> {
    let threads = match std::env::var(THREADS_VAR) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => n,
            _ => {
                return Err(ScenarioError::Invalid(format!(
                    "{THREADS_VAR}: expected a positive integer, got `{v}`"
                )))
            }
        },
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| ScenarioError::Invalid(format!("{THREADS_VAR}: {e}")))
}

/// Order-preserving parallel map; the first failing point (in input order)
/// decides the error.
fn par_map<T, R, F>(items: &[T], f: F) -> Result<Vec<R>, ScenarioError>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R, ScenarioError> + Sync + Send,
{
    let pool = thread_pool()?;
    pool.install(|| items.par_iter().map(&f).collect::<Vec<_>>())
        .into_iter()
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fig6,
    Fig8,
    Fig9a,
    Fig9b,
}

impl FromStr for Preset {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "fig6" => Ok(Preset::Fig6),
            "fig8" => Ok(Preset::Fig8),
            "fig9a" => Ok(Preset::Fig9a),
            "fig9b" => Ok(Preset::Fig9b),
            other => Err(ScenarioError::Invalid(format!(
                "unknown preset `{other}`; expected fig6, fig8, fig9a or fig9b"
            ))),
        }
    }
}

/// Axis ranges of the presets.
pub mod axes {
    use std::f64::consts::PI;

    pub const FIG6_XI: f64 = 1.0;
    pub const PHASE: (f64, f64) = (0.0, 2.0 * PI);
    pub const AMPLITUDE: (f64, f64) = (0.5, 3.0);
    pub const FIG8_XI: [f64; 3] = [0.1, 0.5, 1.5];
    pub const FIG8_SQUEEZING: (f64, f64) = (0.0, 2.0);
    pub const FIG8D_AMPLITUDE: f64 = 1.0;
    pub const RATIO: (f64, f64) = (1.0, 10.0);
}

fn header(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn grid2(a: &[f64], b: &[f64]) -> Vec<(f64, f64)> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect()
}

fn fig6(grid: usize) -> Result<Table, ScenarioError> {
    let phases = linspace(axes::PHASE.0, axes::PHASE.1, grid);
    let points = grid2(&phases, &phases);
    let xi = axes::FIG6_XI;
    let zero = Complex64::new(0.0, 0.0);
    let rows = par_map(&points, |&(pk, pmk)| {
        let input = GaussianState::product(&[
            &prepare_squeezed_coherent(&SqueezedSpec::new(zero, xi, pk), ModeLabel::K),
            &prepare_squeezed_coherent(&SqueezedSpec::new(zero, xi, pmk), ModeLabel::MINUS_K),
        ])?;
        let standing = to_standing_gaussian(&input)?;
        let s = duan_inseparability(&standing, ModeLabel::C, ModeLabel::S)?;
        Ok(vec![
            Cell::Number(pk),
            Cell::Number(pmk),
            Cell::Number(s),
            Cell::Number(squeezed_inseparability_closed_form(xi, xi, pk, pmk)),
        ])
    })?;
    Ok(Table {
        header: header(&["phi_k", "phi_minus_k", "s_sq", "s_sq_closed_form"]),
        rows,
    })
}

fn fig8(grid: usize) -> Result<Table, ScenarioError> {
    let thetas = linspace(axes::PHASE.0, axes::PHASE.1, grid);
    let amps = linspace(axes::AMPLITUDE.0, axes::AMPLITUDE.1, grid);
    let mut points: Vec<(&'static str, f64, f64, f64)> = Vec::new();
    for (panel, &xi) in ["a", "b", "c"].into_iter().zip(axes::FIG8_XI.iter()) {
        for (t, a) in grid2(&thetas, &amps) {
            points.push((panel, t, a, xi));
        }
    }
    for (t, xi) in grid2(&thetas, &linspace(axes::FIG8_SQUEEZING.0, axes::FIG8_SQUEEZING.1, grid)) {
        points.push(("d", t, axes::FIG8D_AMPLITUDE, xi));
    }
    let rows = par_map(&points, |&(panel, t, a, xi)| {
        let value = epr_intensity_absorption_travelling(t, 0.0, a, xi)?;
        Ok(vec![
            Cell::Text(panel.into()),
            Cell::Number(t),
            Cell::Number(a),
            Cell::Number(xi),
            Cell::Number(value),
        ])
    })?;
    Ok(Table {
        header: header(&["panel", "theta_k", "alpha_abs", "xi", "intensity_absorption"]),
        rows,
    })
}

fn fig9(grid: usize, ratio_axis: bool) -> Result<Table, ScenarioError> {
    let thetas = linspace(axes::PHASE.0, axes::PHASE.1, grid);
    let second = if ratio_axis {
        linspace(axes::RATIO.0, axes::RATIO.1, grid)
    } else {
        linspace(axes::AMPLITUDE.0, axes::AMPLITUDE.1, grid)
    };
    let points = grid2(&thetas, &second);
    let rows = par_map(&points, |&(t, v)| {
        let (ak, amk) = if ratio_axis {
            (Complex64::from_polar(v, t), Complex64::new(1.0, 0.0))
        } else {
            (Complex64::from_polar(v, t), Complex64::new(v, 0.0))
        };
        Ok(vec![Cell::Number(t), Cell::Number(v), epr_coherence_absorption(ak, amk).into()])
    })?;
    let second_name = if ratio_axis { "amplitude_ratio" } else { "alpha_abs" };
    Ok(Table {
        header: header(&["theta_k", second_name, "coherence_absorption"]),
        rows,
    })
}

pub fn run_preset(preset: Preset, grid: usize) -> Result<Table, ScenarioError> {
    if grid < 2 {
        return Err(ScenarioError::Invalid("grid: must be at least 2".into()));
    }
    match preset {
        Preset::Fig6 => fig6(grid),
        Preset::Fig8 => fig8(grid),
        Preset::Fig9a => fig9(grid, false),
        Preset::Fig9b => fig9(grid, true),
    }
}

const SCALAR_COLUMNS: [&str; 13] = [
    "p_absorb",
    "mean_absorbed_photons",
    "input_photons",
    "intensity_absorption",
    "coherence_absorption",
    "p_all_absorbed",
    "p_none_absorbed",
    "zero_absorption_fidelity",
    "cross_sector_probability",
    "duan_travelling",
    "duan_standing",
    "duan_light_absorber",
    "environment_entropy",
];

fn scalars(r: &ScenarioResult) -> [Option<Cell>; 13] {
    let n = |x: Option<f64>| x.map(Cell::Number);
    let c = |x: Option<Coefficient>| x.map(Cell::from);
    [
        n(r.p_absorb),
        n(r.mean_absorbed_photons),
        n(r.input_photons),
        c(r.intensity_absorption),
        c(r.coherence_absorption),
        n(r.p_all_absorbed),
        n(r.p_none_absorbed),
        n(r.zero_absorption_fidelity),
        n(r.cross_sector_probability),
        n(r.duan_travelling),
        n(r.duan_standing),
        n(r.duan_light_absorber),
        n(r.environment_entropy),
    ]
}

/// Flattens a sequence of results into one table: the swept value, every
/// scalar that any point reports, and the absorbed-photon distribution.
pub fn results_table(parameter: &str, values: &[f64], results: &[ScenarioResult]) -> Table {
    let per_row: Vec<[Option<Cell>; 13]> = results.iter().map(scalars).collect();
    let used: Vec<usize> = (0..SCALAR_COLUMNS.len())
        .filter(|&i| per_row.iter().any(|row| row[i].is_some()))
        .collect();
    let counts: std::collections::BTreeSet<usize> = results
        .iter()
        .filter_map(|r| r.absorbed_distribution.as_ref())
        .flat_map(|d| d.keys().copied())
        .collect();

    let mut header = vec![parameter.to_string()];
    header.extend(used.iter().map(|&i| SCALAR_COLUMNS[i].to_string()));
    header.extend(counts.iter().map(|m| format!("p_absorbed_{m}")));

    let rows = values
        .iter()
        .zip(results)
        .zip(per_row)
        .map(|((&v, r), mut row)| {
            let mut cells = vec![Cell::Number(v)];
            cells.extend(used.iter().map(|&i| row[i].take().unwrap_or(Cell::Undefined)));
            for m in &counts {
                cells.push(match &r.absorbed_distribution {
                    Some(d) => Cell::Number(d.get(m).copied().unwrap_or(0.0)),
                    None => Cell::Undefined,
                });
            }
            cells
        })
        .collect();
    Table { header, rows }
}

/// Runs the sweep section of a scenario file.
pub fn run_custom_sweep(file: &ScenarioFile, raw: &Value) -> Result<(Vec<f64>, Vec<ScenarioResult>), ScenarioError> {
    let sweep = file
        .sweep
        .as_ref()
        .ok_or_else(|| ScenarioError::Invalid("sweep: section missing".into()))?;
    let values = linspace(sweep.start, sweep.stop, sweep.points);
    let results = par_map(&values, |&v| {
        let mut point = raw.clone();
        set_path(&mut point, &sweep.parameter, v)?;
        run_scenario(&scenario_from_value(&point)?)
    })?;
    Ok((values, results))
}

pub fn custom_sweep_table(file: &ScenarioFile, raw: &Value) -> Result<Table, ScenarioError> {
    let (values, results) = run_custom_sweep(file, raw)?;
    let name = file.sweep.as_ref().map(|s| s.parameter.as_str()).unwrap_or("value");
    Ok(results_table(name, &values, &results))
}
