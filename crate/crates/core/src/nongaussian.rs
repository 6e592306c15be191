//! Cat-state and asymmetric inputs on the Fock engine.

use num_complex::Complex64;
use serde::Serialize;

use crate::absorber::AbsorberSpec;
use crate::fock::{
    full_pipeline, light_modes, prepare_coherent, prepare_squeezed_coherent_fock,
    squeezed_coherent_amplitudes, to_standing_basis, PureState,
};
use crate::mode::ModeLabel;
use crate::report::{fock_report, occupation_list, ScenarioResult};
use crate::{CpaError, Result, TRUNCATION_LIMIT};

/// Even cat `|α⟩ + |−α⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CatSpec {
    pub alpha: Complex64,
    pub cutoff: usize,
}

/// Cutoff that holds a `√2 α` displaced branch, `⌈2|α|² + 8√2|α|⌉`.
pub fn cat_cutoff(alpha: Complex64) -> usize {
    let a = alpha.norm();
    (2.0 * a * a + 8.0 * std::f64::consts::SQRT_2 * a).ceil() as usize
}

/// Working cutoff for cat inputs: the minimum above plus a few photons of
/// margin, never below the global default.
pub fn default_cat_cutoff(alpha: Complex64) -> usize {
    (cat_cutoff(alpha) + 4).max(crate::DEFAULT_CUTOFF)
}

pub fn build_cat(spec: &CatSpec, mode: ModeLabel) -> Result<PureState> {
    let coh = squeezed_coherent_amplitudes(spec.alpha, 0.0, 0.0, spec.cutoff);
    let norm = (2.0 * (1.0 + (-2.0 * spec.alpha.norm_sqr()).exp())).sqrt().recip();
    // the |−α⟩ amplitudes are (−1)^n times those of |α⟩
    let amps: Vec<Complex64> = coh
        .iter()
        .enumerate()
        .map(|(n, &c)| if n % 2 == 0 { c * 2.0 * norm } else { Complex64::new(0.0, 0.0) })
        .collect();
    let kept: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let lost = (1.0 - kept).max(0.0);
    if lost > TRUNCATION_LIMIT || !kept.is_finite() {
        return Err(CpaError::TruncationLoss {
            cutoff: spec.cutoff,
            lost,
            limit: TRUNCATION_LIMIT,
        });
    }
    PureState::single_mode(mode, spec.cutoff, &amps)
}

fn light_vacuum_probability(joint: &PureState) -> Result<f64> {
    let light = light_modes(joint);
    let dist = joint.count_distribution(&light)?;
    Ok(dist.get(&0).copied().unwrap_or(0.0))
}

/// `|α⟩|−α⟩ + |−α⟩|α⟩` over `(K, -K)`, normalized.
pub fn anticorrelated_cat_pair(alpha: Complex64, cutoff: usize) -> Result<PureState> {
    let plus = |m| prepare_coherent(alpha, cutoff, m);
    let minus = |m| prepare_coherent(-alpha, cutoff, m);
    let a = PureState::product(&[&plus(ModeLabel::K)?, &minus(ModeLabel::MINUS_K)?], cutoff)?;
    let b = PureState::product(&[&minus(ModeLabel::K)?, &plus(ModeLabel::MINUS_K)?], cutoff)?;
    let one = Complex64::new(1.0, 0.0);
    PureState::superpose(&[(one, &a), (one, &b)])
}

/// Identical even cats on both travelling modes.
pub fn run_cat_cat(alpha: Complex64, absorber: &AbsorberSpec, cutoff: usize) -> Result<ScenarioResult> {
    let required = cat_cutoff(alpha);
    if cutoff < required {
        return Err(CpaError::CutoffTooSmall { cutoff, required });
    }
    let spec = CatSpec { alpha, cutoff };
    let input = PureState::product(
        &[&build_cat(&spec, ModeLabel::K)?, &build_cat(&spec, ModeLabel::MINUS_K)?],
        cutoff,
    )?;
    let joint = full_pipeline(&input, absorber)?;
    let mut report = fock_report(&input, &joint)?;
    report.p_all_absorbed = Some(light_vacuum_probability(&joint)?);
    report.p_none_absorbed = report
        .absorbed_distribution
        .as_ref()
        .map(|d| d.get(&0).copied().unwrap_or(0.0));
    report.zero_absorption_fidelity = match crate::fock::conditional_output(&joint, 0) {
        Ok(rho) => Some(rho.fidelity_with(&anticorrelated_cat_pair(alpha, cutoff)?)?),
        Err(CpaError::ZeroProbability(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(report)
}

/// Non-coherent partner of a coherent state on `K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AsymmetricKind {
    /// Squeezed vacuum on `-K`.
    CoherentSqueezed { xi: f64, phi: f64 },
    /// Even cat on `-K`.
    CoherentCat { cat_alpha: Complex64 },
}

/// Coherent state `α` on `K` with a squeezed vacuum or a cat on `-K`.
pub fn run_asymmetric(
    kind: &AsymmetricKind,
    alpha: Complex64,
    absorber: &AbsorberSpec,
    cutoff: usize,
) -> Result<ScenarioResult> {
    let coherent = prepare_coherent(alpha, cutoff, ModeLabel::K)?;
    let partner = match *kind {
        AsymmetricKind::CoherentSqueezed { xi, phi } => {
            prepare_squeezed_coherent_fock(Complex64::new(0.0, 0.0), xi, phi, cutoff, ModeLabel::MINUS_K)?
        }
        AsymmetricKind::CoherentCat { cat_alpha } => {
            build_cat(&CatSpec { alpha: cat_alpha, cutoff }, ModeLabel::MINUS_K)?
        }
    };
    let input = PureState::product(&[&coherent, &partner], cutoff)?;
    let joint = full_pipeline(&input, absorber)?;
    let mut report = fock_report(&input, &joint)?;

    let standing = to_standing_basis(&input)?.occupation_distribution(&[ModeLabel::C, ModeLabel::S])?;
    report.cross_sector_probability = Some(
        standing
            .iter()
            .filter(|(occ, _)| occ[0] > 0 && occ[1] > 0)
            .map(|(_, p)| p)
            .sum(),
    );
    report.standing_distribution = Some(occupation_list(standing));
    Ok(report)
}
