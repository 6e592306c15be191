use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::values::{de_angle, Amplitude};
use super::ScenarioError;
use crate::absorber::AbsorberSpec;
use crate::dv::{run_dv, BellState, DvScenario};
use crate::fock::{bs_transform, full_pipeline, prepare_squeezed_coherent_fock, PureState};
use crate::gaussian::{
    epr_preceding_amplitudes, epr_prepare, prepare_squeezed_coherent, GaussianState, SqueezedSpec,
};
use crate::mode::ModeLabel;
use crate::nongaussian::{default_cat_cutoff, run_asymmetric, run_cat_cat, AsymmetricKind};
use crate::report::{fock_output_modes, fock_report, gaussian_report, ScenarioResult};
use crate::DEFAULT_CUTOFF;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Fock,
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SqueezedParams {
    #[serde(default)]
    pub alpha: Amplitude,
    #[serde(default)]
    pub xi: f64,
    #[serde(default, deserialize_with = "de_angle")]
    pub phi: f64,
}

impl SqueezedParams {
    fn spec(&self) -> SqueezedSpec {
        SqueezedSpec::new(self.alpha.0, self.xi, self.phi)
    }
}

/// Input state families.
///
/// Files carry the variant as a `family` field next to its parameters;
/// [`scenario_from_value`] rewrites that into the externally tagged form so
/// error paths reach into the variant.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ScenarioSpec {
    SinglePhoton {
        #[serde(deserialize_with = "de_angle")]
        delta_theta: f64,
    },
    Bell {
        state: BellState,
    },
    Noon {
        n: usize,
        #[serde(deserialize_with = "de_angle")]
        delta_theta: f64,
    },
    /// Independent squeezed coherent states on `K` and `-K`.
    SqueezedPair {
        k: SqueezedParams,
        minus_k: SqueezedParams,
    },
    /// EPR input given by its preceding-mode amplitudes.
    Epr {
        #[serde(default)]
        alpha_g: Amplitude,
        #[serde(default)]
        alpha_h: Amplitude,
        xi: f64,
    },
    /// EPR input given by its travelling-mode mean amplitudes.
    EprTravelling {
        #[serde(default)]
        alpha_k: Amplitude,
        #[serde(default)]
        alpha_minus_k: Amplitude,
        xi: f64,
    },
    CatPair {
        alpha: Amplitude,
    },
    CoherentSqueezed {
        alpha: Amplitude,
        xi: f64,
        #[serde(default, deserialize_with = "de_angle")]
        phi: f64,
    },
    CoherentCat {
        alpha: Amplitude,
        #[serde(default)]
        cat_alpha: Option<Amplitude>,
    },
}

impl ScenarioSpec {
    pub fn family(&self) -> &'static str {
        match self {
            ScenarioSpec::SinglePhoton { .. } => "single_photon",
            ScenarioSpec::Bell { .. } => "bell",
            ScenarioSpec::Noon { .. } => "noon",
            ScenarioSpec::SqueezedPair { .. } => "squeezed_pair",
            ScenarioSpec::Epr { .. } => "epr",
            ScenarioSpec::EprTravelling { .. } => "epr_travelling",
            ScenarioSpec::CatPair { .. } => "cat_pair",
            ScenarioSpec::CoherentSqueezed { .. } => "coherent_squeezed",
            ScenarioSpec::CoherentCat { .. } => "coherent_cat",
        }
    }

    pub fn is_gaussian(&self) -> bool {
        matches!(
            self,
            ScenarioSpec::SqueezedPair { .. }
                | ScenarioSpec::Epr { .. }
                | ScenarioSpec::EprTravelling { .. }
                | ScenarioSpec::CoherentSqueezed { .. }
        )
    }

    fn default_cutoff(&self) -> usize {
        match self {
            ScenarioSpec::CatPair { alpha } => default_cat_cutoff(alpha.0),
            ScenarioSpec::CoherentCat { alpha, cat_alpha } => {
                let cat = cat_alpha.unwrap_or(*alpha).0;
                default_cat_cutoff(cat).max(default_cat_cutoff(alpha.0))
            }
            _ => DEFAULT_CUTOFF,
        }
    }

    fn preceding_amplitudes(&self) -> Option<(Complex64, Complex64, f64)> {
        match *self {
            ScenarioSpec::Epr { alpha_g, alpha_h, xi } => Some((alpha_g.0, alpha_h.0, xi)),
            ScenarioSpec::EprTravelling { alpha_k, alpha_minus_k, xi } => {
                let (g, h) = epr_preceding_amplitudes(alpha_k.0, alpha_minus_k.0, xi);
                Some((g, h, xi))
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbsorberConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_c: Option<f64>,
    #[serde(default)]
    pub swap_roles: bool,
}

impl AbsorberConfig {
    pub fn to_spec(&self) -> Result<AbsorberSpec, ScenarioError> {
        let base = match (self.r, self.tau_c) {
            (Some(_), Some(_)) => {
                return Err(ScenarioError::Invalid(
                    "absorber: give either `r` or `tau_c`, not both".into(),
                ))
            }
            (Some(r), None) => AbsorberSpec::new(r),
            (None, Some(tau)) => AbsorberSpec::from_tau(tau),
            (None, None) => Ok(AbsorberSpec::canonical()),
        }
        .map_err(|e| ScenarioError::Invalid(format!("absorber: {e}")))?;
        Ok(base.with_swapped_roles(self.swap_roles))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Numerics {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

impl Default for Numerics {
    fn default() -> Self {
        Numerics {
            cutoff: None,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

/// One-dimensional sweep of a numeric field, addressed by a dotted path
/// such as `scenario.delta_theta` or `absorber.r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub parameter: String,
    #[serde(deserialize_with = "de_angle")]
    pub start: f64,
    #[serde(deserialize_with = "de_angle")]
    pub stop: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema: u32,
    pub engine: Engine,
    pub scenario: ScenarioSpec,
    #[serde(default)]
    pub absorber: AbsorberConfig,
    #[serde(default)]
    pub numerics: Numerics,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
}

impl ScenarioFile {
    /// Checks everything that can be checked without running the engines.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.schema != SCHEMA_VERSION {
            return Err(ScenarioError::Invalid(format!(
                "schema: unsupported version {}, expected {SCHEMA_VERSION}",
                self.schema
            )));
        }
        if self.engine == Engine::Gaussian && !self.scenario.is_gaussian() {
            return Err(ScenarioError::Invalid(format!(
                "engine: the gaussian engine cannot run `{}` inputs",
                self.scenario.family()
            )));
        }
        if self.numerics.tolerance.is_nan() || self.numerics.tolerance <= 0.0 {
            return Err(ScenarioError::Invalid("numerics.tolerance: must be positive".into()));
        }
        if let Some(sweep) = &self.sweep {
            if sweep.points < 2 {
                return Err(ScenarioError::Invalid("sweep.points: must be at least 2".into()));
            }
        }
        self.absorber.to_spec()?;
        Ok(())
    }

    pub fn cutoff(&self) -> usize {
        self.numerics.cutoff.unwrap_or_else(|| self.scenario.default_cutoff())
    }
}

/// Parses and validates a scenario file, reporting the path of the first
/// offending field.
pub fn parse_scenario(text: &str) -> Result<(ScenarioFile, Value), ScenarioError> {
    let raw: Value = serde_json::from_str(text).map_err(|e| ScenarioError::Parse {
        path: ".".into(),
        message: e.to_string(),
    })?;
    let file = scenario_from_value(&raw)?;
    Ok((file, raw))
}

fn family_tagged(raw: &Value) -> Result<(Value, Option<String>), ScenarioError> {
    let mut doc = raw.clone();
    let Some(Value::Object(scenario)) = doc.get_mut("scenario") else {
        return Ok((doc, None));
    };
    let family = match scenario.remove("family") {
        Some(Value::String(f)) => f,
        Some(other) => {
            return Err(ScenarioError::Parse {
                path: "scenario.family".into(),
                message: format!("expected a string, got {other}"),
            })
        }
        None => {
            return Err(ScenarioError::Parse {
                path: "scenario.family".into(),
                message: "missing field `family`".into(),
            })
        }
    };
    let params = Value::Object(std::mem::take(scenario));
    doc["scenario"] = serde_json::json!({ family.clone(): params });
    Ok((doc, Some(family)))
}

pub(crate) fn scenario_from_value(raw: &Value) -> Result<ScenarioFile, ScenarioError> {
    let (doc, family) = family_tagged(raw)?;
    let file: ScenarioFile = serde_path_to_error::deserialize(&doc).map_err(|e| {
        let mut path = e.path().to_string();
        if let Some(f) = &family {
            let tagged = format!("scenario.{f}");
            if path == "scenario" {
                path = "scenario.family".into();
            } else if path == tagged {
                path = "scenario".into();
            } else if let Some(rest) = path.strip_prefix(&format!("{tagged}.")) {
                path = format!("scenario.{rest}");
            }
        }
        ScenarioError::Parse {
            path,
            message: e.inner().to_string(),
        }
    })?;
    file.validate()?;
    Ok(file)
}

fn fock_bridge(alpha_k: SqueezedSpec, alpha_mk: SqueezedSpec, cutoff: usize) -> crate::Result<PureState> {
    let k = prepare_squeezed_coherent_fock(alpha_k.alpha, alpha_k.xi, alpha_k.phi, cutoff, ModeLabel::K)?;
    let mk = prepare_squeezed_coherent_fock(alpha_mk.alpha, alpha_mk.xi, alpha_mk.phi, cutoff, ModeLabel::MINUS_K)?;
    PureState::product(&[&k, &mk], cutoff)
}

fn run_fock_bridge(input: &PureState, absorber: &AbsorberSpec) -> crate::Result<ScenarioResult> {
    let joint = full_pipeline(input, absorber)?;
    let mut report = fock_report(input, &joint)?;
    report.output_modes = Some(fock_output_modes(&joint)?);
    Ok(report)
}

/// Runs a single validated scenario (ignoring any sweep section).
pub fn run_scenario(file: &ScenarioFile) -> Result<ScenarioResult, ScenarioError> {
    let absorber = file.absorber.to_spec()?;
    let cutoff = file.cutoff();
    let zero = Complex64::new(0.0, 0.0);
    let result = match (&file.engine, &file.scenario) {
        (_, ScenarioSpec::SinglePhoton { delta_theta }) => {
            run_dv(&DvScenario::SinglePhoton { delta_theta: *delta_theta }, &absorber, cutoff)?
        }
        (_, ScenarioSpec::Bell { state }) => run_dv(&DvScenario::Bell { state: *state }, &absorber, cutoff)?,
        (_, ScenarioSpec::Noon { n, delta_theta }) => run_dv(
            &DvScenario::Noon { n: *n, delta_theta: *delta_theta },
            &absorber,
            cutoff,
        )?,
        (_, ScenarioSpec::CatPair { alpha }) => run_cat_cat(alpha.0, &absorber, cutoff)?,
        (_, ScenarioSpec::CoherentCat { alpha, cat_alpha }) => run_asymmetric(
            &AsymmetricKind::CoherentCat { cat_alpha: cat_alpha.unwrap_or(*alpha).0 },
            alpha.0,
            &absorber,
            cutoff,
        )?,
        (Engine::Fock, ScenarioSpec::CoherentSqueezed { alpha, xi, phi }) => run_asymmetric(
            &AsymmetricKind::CoherentSqueezed { xi: *xi, phi: *phi },
            alpha.0,
            &absorber,
            cutoff,
        )?,
        (Engine::Gaussian, ScenarioSpec::CoherentSqueezed { alpha, xi, phi }) => {
            let input = GaussianState::product(&[
                &prepare_squeezed_coherent(&SqueezedSpec::new(alpha.0, 0.0, 0.0), ModeLabel::K),
                &prepare_squeezed_coherent(&SqueezedSpec::new(zero, *xi, *phi), ModeLabel::MINUS_K),
            ])?;
            gaussian_report(&input, &absorber)?
        }
        (Engine::Fock, ScenarioSpec::SqueezedPair { k, minus_k }) => {
            run_fock_bridge(&fock_bridge(k.spec(), minus_k.spec(), cutoff)?, &absorber)?
        }
        (Engine::Gaussian, ScenarioSpec::SqueezedPair { k, minus_k }) => {
            let input = GaussianState::product(&[
                &prepare_squeezed_coherent(&k.spec(), ModeLabel::K),
                &prepare_squeezed_coherent(&minus_k.spec(), ModeLabel::MINUS_K),
            ])?;
            gaussian_report(&input, &absorber)?
        }
        (engine, spec @ (ScenarioSpec::Epr { .. } | ScenarioSpec::EprTravelling { .. })) => {
            let (g, h, xi) = spec.preceding_amplitudes().expect("epr family");
            if xi.is_nan() || xi < 0.0 {
                return Err(ScenarioError::Invalid("scenario.xi: must be non-negative".into()));
            }
            match engine {
                Engine::Gaussian => gaussian_report(&epr_prepare(g, h, xi)?, &absorber)?,
                Engine::Fock => {
                    let preceding = fock_bridge(
                        SqueezedSpec::new(g, xi, std::f64::consts::PI),
                        SqueezedSpec::new(h, xi, 0.0),
                        cutoff,
                    )?;
                    let input = bs_transform(&preceding, ModeLabel::K, ModeLabel::MINUS_K)?;
                    run_fock_bridge(&input, &absorber)?
                }
            }
        }
    };
    check_normalization(&result, file.numerics.tolerance)?;
    Ok(result)
}

fn check_normalization(result: &ScenarioResult, tolerance: f64) -> Result<(), ScenarioError> {
    if let Some(dist) = &result.absorbed_distribution {
        let total: f64 = dist.values().sum();
        if (total - 1.0).abs() > tolerance {
            return Err(ScenarioError::Numerical(format!(
                "absorbed-photon distribution sums to {total}, outside tolerance {tolerance:e}"
            )));
        }
    }
    Ok(())
}

/// Writes `value` at a dotted path, creating the final key if its parent
/// object exists.
pub(crate) fn set_path(root: &mut Value, path: &str, value: f64) -> Result<(), ScenarioError> {
    let parts: Vec<&str> = path.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(ScenarioError::Invalid(format!("sweep.parameter: malformed path `{path}`")));
    }
    let (last, parents) = parts.split_last().expect("non-empty path");
    let mut node = root;
    for p in parents {
        node = match node {
            Value::Object(map) => map
                .entry(p.to_string())
                .or_insert_with(|| Value::Object(Default::default())),
            _ => {
                return Err(ScenarioError::Invalid(format!(
                    "sweep.parameter: `{path}` does not name a field"
                )))
            }
        };
    }
    match node {
        Value::Object(map) => {
            let number = serde_json::Number::from_f64(value)
                .ok_or_else(|| ScenarioError::Invalid("sweep: non-finite value".into()))?;
            map.insert(last.to_string(), Value::Number(number));
            Ok(())
        }
        _ => Err(ScenarioError::Invalid(format!(
            "sweep.parameter: `{path}` does not name a field"
        ))),
    }
}
