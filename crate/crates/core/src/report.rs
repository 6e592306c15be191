//! Serializable summaries of a scenario run.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::absorber::AbsorberSpec;
use crate::coefficient::Coefficient;
use crate::fock::{
    absorbed_photon_distribution, conditional_output, entanglement_entropy, environment_modes,
    light_modes, mode_moments, quadrature_moments, PureState,
};
use crate::gaussian::{bs_gaussian, cpa_gaussian, duan_inseparability, to_standing_gaussian, GaussianState};
use crate::mode::{ModeKind, ModeLabel};
use crate::Result;

/// Conditional branches below this probability are not reported.
pub const CONDITIONAL_REPORT_FLOOR: f64 = 1e-9;

/// Entries below this probability are dropped from reported distributions.
const DISTRIBUTION_FLOOR: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OccupationProbability {
    pub occupation: Vec<usize>,
    pub probability: f64,
}

pub(crate) fn occupation_list(dist: BTreeMap<Vec<usize>, f64>) -> Vec<OccupationProbability> {
    dist.into_iter()
        .filter(|&(_, p)| p > DISTRIBUTION_FLOOR)
        .map(|(occupation, probability)| OccupationProbability {
            occupation,
            probability,
        })
        .collect()
}

/// Output light given a fixed number of absorbed photons.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionalSummary {
    pub absorbed: usize,
    pub probability: f64,
    pub purity: f64,
    pub mean_photons: BTreeMap<String, f64>,
    pub distribution: Vec<OccupationProbability>,
}

/// Per-mode Gaussian statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeStatistics {
    pub mean: [f64; 2],
    pub variances: [f64; 2],
    pub intensity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis_terms: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_total_photons: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm_error: Option<f64>,
}

/// Everything a run reports. Fields that do not apply to a scenario are
/// left out.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ScenarioResult {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub absorbed_distribution: Option<BTreeMap<usize, f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_absorb: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_absorbed_photons: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_photons: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intensity_absorption: Option<Coefficient>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coherence_absorption: Option<Coefficient>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_all_absorbed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_none_absorbed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_absorption_fidelity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub standing_distribution: Option<Vec<OccupationProbability>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_sector_probability: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duan_travelling: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duan_standing: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duan_light_absorber: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_modes: Option<BTreeMap<String, ModeStatistics>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub conditional_outputs: Vec<ConditionalSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub environment_entropy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Diagnostics>,
}

fn total_photons(state: &PureState, modes: &[ModeLabel]) -> Result<f64> {
    modes.iter().map(|&m| Ok(mode_moments(state, m)?.1)).sum()
}

/// Absorption statistics common to every Fock-engine run, from the input ket
/// and the joint output of the pipeline.
pub(crate) fn fock_report(input: &PureState, joint: &PureState) -> Result<ScenarioResult> {
    let dist = absorbed_photon_distribution(joint)?;
    let env = environment_modes(joint);
    let light = light_modes(joint);
    let mean_absorbed: f64 = dist.iter().map(|(&m, &p)| m as f64 * p).sum();
    let input_photons = total_photons(input, input.modes())?;

    let coherence_absorption = if input.has_mode(ModeLabel::K) && input.has_mode(ModeLabel::MINUS_K) {
        let c_in = mode_moments(input, ModeLabel::K)?.0.norm_sqr()
            + mode_moments(input, ModeLabel::MINUS_K)?.0.norm_sqr();
        let absorbed: f64 = env
            .iter()
            .map(|&e| Ok(mode_moments(joint, e)?.0.norm_sqr()))
            .sum::<Result<f64>>()?;
        Some(Coefficient::ratio(absorbed, c_in))
    } else {
        None
    };

    let mut conditional_outputs = Vec::new();
    for (&m, &p) in &dist {
        if p <= CONDITIONAL_REPORT_FLOOR {
            continue;
        }
        let rho = conditional_output(joint, m)?;
        let mean_photons = light
            .iter()
            .map(|&l| Ok((l.to_string(), mode_moments(&rho, l)?.1)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        conditional_outputs.push(ConditionalSummary {
            absorbed: m,
            probability: p,
            purity: rho.purity(),
            mean_photons,
            distribution: occupation_list(rho.occupation_distribution()),
        });
    }

    Ok(ScenarioResult {
        p_absorb: Some(1.0 - dist.get(&0).copied().unwrap_or(0.0)),
        mean_absorbed_photons: Some(mean_absorbed),
        input_photons: Some(input_photons),
        intensity_absorption: Some(Coefficient::ratio(mean_absorbed, input_photons)),
        coherence_absorption,
        absorbed_distribution: Some(dist),
        conditional_outputs,
        environment_entropy: Some(entanglement_entropy(joint, &env)?),
        diagnostics: Some(Diagnostics {
            cutoff: Some(joint.cutoff()),
            basis_terms: Some(joint.num_terms()),
            max_total_photons: Some(joint.max_total_photons()),
            norm_error: Some((joint.norm_sqr() - 1.0).abs()),
        }),
        ..Default::default()
    })
}

fn mode_statistics(state: &GaussianState, mode: ModeLabel) -> Result<ModeStatistics> {
    Ok(ModeStatistics {
        mean: state.quadrature_means(mode)?,
        variances: state.variances(mode)?,
        intensity: state.intensity(mode)?,
    })
}

/// Absorption and inseparability figures of a Gaussian travelling input.
pub(crate) fn gaussian_report(input: &GaussianState, absorber: &AbsorberSpec) -> Result<ScenarioResult> {
    let (k, mk, env) = (ModeLabel::K, ModeLabel::MINUS_K, ModeLabel::ENV_C);
    let standing = to_standing_gaussian(input)?;
    let absorbed = cpa_gaussian(&standing, absorber, true)?;
    let output = bs_gaussian(&absorbed, ModeLabel::C, ModeLabel::S)?
        .relabel(ModeLabel::C, k)?
        .relabel(ModeLabel::S, mk)?;

    let i_in = input.intensity(k)? + input.intensity(mk)?;
    let c_in = input.mean_amplitude(k)?.norm_sqr() + input.mean_amplitude(mk)?.norm_sqr();
    let absorbed_intensity = output.intensity(env)?;
    let absorbed_coherence = output.mean_amplitude(env)?.norm_sqr();
    let (first, second) = if absorber.coupled_kind() == ModeKind::C {
        (env, ModeLabel::S)
    } else {
        (ModeLabel::C, env)
    };

    let output_modes = [k, mk, env]
        .into_iter()
        .map(|m| Ok((m.to_string(), mode_statistics(&output, m)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;

    Ok(ScenarioResult {
        input_photons: Some(i_in),
        mean_absorbed_photons: Some(absorbed_intensity),
        intensity_absorption: Some(Coefficient::ratio(absorbed_intensity, i_in)),
        coherence_absorption: Some(Coefficient::ratio(absorbed_coherence, c_in)),
        duan_travelling: Some(duan_inseparability(input, k, mk)?),
        duan_standing: Some(duan_inseparability(&standing, ModeLabel::C, ModeLabel::S)?),
        duan_light_absorber: Some(duan_inseparability(&absorbed, first, second)?),
        output_modes: Some(output_modes),
        ..Default::default()
    })
}

/// Quadrature statistics of the output travelling modes of a Fock run.
pub(crate) fn fock_output_modes(joint: &PureState) -> Result<BTreeMap<String, ModeStatistics>> {
    light_modes(joint)
        .into_iter()
        .chain(environment_modes(joint))
        .map(|m| {
            let q = quadrature_moments(joint, m)?;
            let (_, n) = mode_moments(joint, m)?;
            Ok((
                m.to_string(),
                ModeStatistics {
                    mean: q.mean,
                    variances: [q.cov[0][0], q.cov[1][1]],
                    intensity: n,
                },
            ))
        })
        .collect()
}
