use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use super::file::{run_scenario, scenario_from_value};
use super::ScenarioError;
use crate::report::ScenarioResult;

/// What a regression check accepts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expected {
    Approx { value: f64, tolerance: f64 },
    Below { bound: f64 },
    Above { bound: f64 },
}

impl Expected {
    fn accepts(&self, x: f64) -> bool {
        match *self {
            Expected::Approx { value, tolerance } => (x - value).abs() <= tolerance,
            Expected::Below { bound } => x < bound,
            Expected::Above { bound } => x > bound,
        }
    }
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expected::Approx { value, tolerance } => write!(f, "{value:.6} ± {tolerance:.0e}"),
            Expected::Below { bound } => write!(f, "< {bound}"),
            Expected::Above { bound } => write!(f, "> {bound}"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub quantity: String,
    pub expected: Expected,
    pub computed: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table1Row {
    pub input: String,
    pub pass: bool,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table1Report {
    pub pass: bool,
    pub rows: Vec<Table1Row>,
}

impl fmt::Display for Table1Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            writeln!(f, "{} {}", if row.pass { "PASS" } else { "FAIL" }, row.input)?;
            for c in &row.checks {
                let computed = c.computed.map_or("undefined".to_string(), |x| format!("{x:.10}"));
                writeln!(
                    f,
                    "    {:<4} {:<28} expected {:<22} got {}",
                    if c.pass { "ok" } else { "FAIL" },
                    c.quantity,
                    c.expected.to_string(),
                    computed
                )?;
            }
        }
        write!(f, "{}", if self.pass { "table1: all rows pass" } else { "table1: FAILED" })
    }
}

const EXACT: f64 = 1e-12;
const GAUSSIAN: f64 = 1e-10;
const CAT: f64 = 1e-3;

fn approx(value: f64, tolerance: f64) -> Expected {
    Expected::Approx { value, tolerance }
}

type Pick = fn(&ScenarioResult) -> Option<f64>;

fn p_absorbed(m: usize) -> impl Fn(&ScenarioResult) -> Option<f64> {
    move |r| r.absorbed_distribution.as_ref().map(|d| d.get(&m).copied().unwrap_or(0.0))
}

fn a_i(r: &ScenarioResult) -> Option<f64> {
    r.intensity_absorption.and_then(|c| c.value())
}

fn a_c(r: &ScenarioResult) -> Option<f64> {
    r.coherence_absorption.and_then(|c| c.value())
}

struct RowBuilder {
    input: String,
    result: ScenarioResult,
    checks: Vec<Check>,
}

impl RowBuilder {
    fn check(mut self, quantity: &str, pick: impl Fn(&ScenarioResult) -> Option<f64>, expected: Expected) -> Self {
        let computed = pick(&self.result);
        self.checks.push(Check {
            quantity: quantity.into(),
            expected,
            pass: computed.is_some_and(|x| expected.accepts(x)),
            computed,
        });
        self
    }

    fn finish(self) -> Table1Row {
        Table1Row {
            pass: self.checks.iter().all(|c| c.pass),
            input: self.input,
            checks: self.checks,
        }
    }
}

fn row(input: &str, engine: &str, scenario: Value, cutoff: Option<usize>) -> Result<RowBuilder, ScenarioError> {
    let mut file = json!({"schema": 1, "engine": engine, "scenario": scenario});
    if let Some(c) = cutoff {
        file["numerics"] = json!({"cutoff": c});
    }
    let result = run_scenario(&scenario_from_value(&file)?)?;
    Ok(RowBuilder {
        input: input.into(),
        result,
        checks: Vec::new(),
    })
}

/// Re-derives every row of the reference table with the canonical absorber.
///
/// `cutoff` overrides the per-family default Fock cutoff.
pub fn table1(cutoff: Option<usize>) -> Result<Table1Report, ScenarioError> {
    let duan_t: Pick = |r| r.duan_travelling;
    let duan_s: Pick = |r| r.duan_standing;
    let entropy: Pick = |r| r.environment_entropy;
    let p_all: Pick = |r| r.p_all_absorbed;
    let p_none: Pick = |r| r.p_none_absorbed;
    let cross: Pick = |r| r.cross_sector_probability;
    let duan_la: Pick = |r| r.duan_light_absorber;
    let e2 = (2.0f64).exp();

    let mut rows = Vec::new();

    rows.push(
        row("single photon, Δθ = 0", "fock", json!({"family": "single_photon", "delta_theta": 0}), cutoff)?
            .check("P(1 absorbed)", p_absorbed(1), approx(1.0, EXACT))
            .check("A_I", a_i, approx(1.0, EXACT))
            .finish(),
    );
    rows.push(
        row("single photon, Δθ = π", "fock", json!({"family": "single_photon", "delta_theta": "pi"}), cutoff)?
            .check("P(0 absorbed)", p_absorbed(0), approx(1.0, EXACT))
            .check("A_I", a_i, approx(0.0, EXACT))
            .finish(),
    );

    for (state, m) in [("psi_plus", [0.5, 0.0, 0.5]), ("psi_minus", [0.0, 1.0, 0.0])]
        .into_iter()
        .chain([("phi_plus", [0.5, 0.0, 0.5]), ("phi_minus", [0.0, 1.0, 0.0])])
    {
        let mut b = row(&format!("Bell {state}"), "fock", json!({"family": "bell", "state": state}), cutoff)?;
        for (k, p) in m.into_iter().enumerate() {
            b = b.check(&format!("P({k} absorbed)"), p_absorbed(k), approx(p, EXACT));
        }
        rows.push(b.check("A_I", a_i, approx(0.5, EXACT)).finish());
    }

    let noon: [(usize, &str, &[f64]); 4] = [
        (3, "0", &[0.0, 0.75, 0.0, 0.25]),
        (3, "pi", &[0.25, 0.0, 0.75, 0.0]),
        (4, "0", &[0.125, 0.0, 0.75, 0.0, 0.125]),
        (4, "pi", &[0.0, 0.5, 0.0, 0.5, 0.0]),
    ];
    for (n, dt, dist) in noon {
        let label = format!("NOON N = {n}, Δθ = {}", if dt == "pi" { "π" } else { "0" });
        let mut b = row(&label, "fock", json!({"family": "noon", "n": n, "delta_theta": dt}), cutoff)?;
        for (k, &p) in dist.iter().enumerate() {
            b = b.check(&format!("P({k} absorbed)"), p_absorbed(k), approx(p, EXACT));
        }
        rows.push(b.check("A_I", a_i, approx(0.5, EXACT)).finish());
    }

    let coherent = json!({"family": "squeezed_pair", "k": {"alpha": 1}, "minus_k": {"alpha": 1}});
    rows.push(
        row("identical coherent states", "gaussian", coherent, cutoff)?
            .check("A_I", a_i, approx(1.0, GAUSSIAN))
            .check("A_C", a_c, approx(1.0, GAUSSIAN))
            .finish(),
    );
    let squeezed = json!({"family": "squeezed_pair", "k": {"alpha": 1, "xi": 1}, "minus_k": {"alpha": 1, "xi": 1}});
    rows.push(
        row("identical squeezed states, ξ = 1", "gaussian", squeezed, cutoff)?
            .check("S_CS", duan_s, approx(e2 + 1.0 / e2, GAUSSIAN))
            .check("A_C", a_c, approx(1.0, GAUSSIAN))
            .finish(),
    );
    let strong = json!({"family": "squeezed_pair", "k": {"alpha": 1, "xi": 4}, "minus_k": {"alpha": 1, "xi": 4}});
    rows.push(
        row("identical squeezed states, ξ = 4", "gaussian", strong, cutoff)?
            .check("A_I", a_i, approx(0.5, CAT))
            .finish(),
    );
    let bridge = json!({"family": "squeezed_pair", "k": {"alpha": 0.5, "xi": 0.3}, "minus_k": {"alpha": 0.5, "xi": 0.3}});
    rows.push(
        row("identical squeezed states, Fock engine", "fock", bridge, cutoff)?
            .check("light-absorber entropy", entropy, Expected::Below { bound: 1e-6 })
            .finish(),
    );

    let orthogonal = json!({"family": "squeezed_pair", "k": {"xi": 1, "phi": "pi"}, "minus_k": {"xi": 1, "phi": 0}});
    rows.push(
        row("orthogonally squeezed vacua, ξ = 1", "gaussian", orthogonal, cutoff)?
            .check("S_k,-k", duan_t, Expected::Above { bound: 2.0 })
            .check("S_CS", duan_s, Expected::Below { bound: 2.0 })
            .check("S light-absorber", duan_la, Expected::Below { bound: 2.0 })
            .check("A_I", a_i, approx(0.5, GAUSSIAN))
            .finish(),
    );

    rows.push(
        row("EPR vacuum, ξ = 1", "gaussian", json!({"family": "epr", "xi": 1}), cutoff)?
            .check("S_k,-k", duan_t, Expected::Below { bound: 2.0 })
            .check("S_CS", duan_s, Expected::Above { bound: 2.0 })
            .check("S light-absorber", duan_la, Expected::Above { bound: 2.0 })
            .check("A_I", a_i, approx(0.5, GAUSSIAN))
            .finish(),
    );

    rows.push(
        row("identical cat states, α = 2", "fock", json!({"family": "cat_pair", "alpha": 2}), cutoff)?
            .check("P(all absorbed)", p_all, approx(0.5, CAT))
            .check("P(none absorbed)", p_none, approx(0.5, CAT))
            .check("A_I", a_i, approx(0.5, GAUSSIAN))
            .check("light-absorber entropy", entropy, Expected::Above { bound: 0.1 })
            .finish(),
    );

    rows.push(
        row(
            "coherent ⊗ squeezed vacuum",
            "fock",
            json!({"family": "coherent_squeezed", "alpha": 1, "xi": 0.5}),
            cutoff,
        )?
        .check("A_I", a_i, approx(0.5, GAUSSIAN))
        .check("light-absorber entropy", entropy, Expected::Above { bound: 0.01 })
        .finish(),
    );
    rows.push(
        row("coherent ⊗ cat", "fock", json!({"family": "coherent_cat", "alpha": 1.5}), cutoff)?
            .check("A_I", a_i, approx(0.5, GAUSSIAN))
            .check("cross-sector probability", cross, approx(0.0, GAUSSIAN))
            .check("light-absorber entropy", entropy, Expected::Above { bound: 0.01 })
            .finish(),
    );

    Ok(Table1Report {
        pass: rows.iter().all(|r| r.pass),
        rows,
    })
}
