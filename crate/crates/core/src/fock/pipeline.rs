use std::collections::BTreeMap;

use super::density::{reduce, DensityOperator};
use super::linear::{apply_two_mode, CreationMap};
use super::state::PureState;
use crate::absorber::AbsorberSpec;
use crate::mode::{rails_of, ModeKind, ModeLabel};
use crate::{CpaError, Result};

/// Conditioning events below this probability are treated as impossible.
const CONDITION_FLOOR: f64 = 1e-14;

/// Hadamard beamsplitter on modes `a` and `b`:
/// `a† -> (a† + b†)/√2`, `b† -> (a† - b†)/√2`. The map is its own inverse.
pub fn bs_transform(state: &PureState, a: ModeLabel, b: ModeLabel) -> Result<PureState> {
    if a == b {
        return Err(CpaError::SameMode(a, b));
    }
    let ia = state.index_of(a)?;
    let ib = state.index_of(b)?;
    let required = state
        .raw()
        .keys()
        .map(|o| o.get(ia) + o.get(ib))
        .max()
        .unwrap_or(0);
    if required > state.cutoff() {
        return Err(CpaError::CutoffTooSmall {
            cutoff: state.cutoff(),
            required,
        });
    }
    let amps = apply_two_mode(state.raw(), ia, ib, CreationMap::hadamard());
    Ok(PureState::from_raw(state.modes().to_vec(), state.cutoff(), amps))
}

fn env_modes(modes: &[ModeLabel]) -> Vec<ModeLabel> {
    modes.iter().copied().filter(|m| m.kind == ModeKind::EnvC).collect()
}

/// Splits rails over a `(first, second)` role pair, requiring each rail to
/// carry both roles.
fn paired_rails(
    state: &PureState,
    first: ModeKind,
    second: ModeKind,
    missing: CpaError,
) -> Result<Vec<(ModeLabel, ModeLabel)>> {
    let rails = rails_of(state.modes(), first);
    if rails.is_empty() || rails_of(state.modes(), second).len() != rails.len() {
        return Err(missing);
    }
    rails
        .into_iter()
        .map(|rail| {
            let a = ModeLabel {
                kind: first,
                rail,
            };
            let b = a.with_kind(second);
            if state.has_mode(b) {
                Ok((a, b))
            } else {
                Err(missing.clone())
            }
        })
        .collect()
}

/// Absorbs the coupled standing wave into a fresh vacuum environment mode.
///
/// For each rail an `ENV_C` mode is appended and the coupled wave evolves as
/// `a_out = tau a_in + sqrt(1 - tau^2) e_in`. At `tau = 0` this is an exact
/// state swap between the standing wave and the environment.
pub fn cpa_channel(state: &PureState, absorber: &AbsorberSpec) -> Result<PureState> {
    if state.has_kind(ModeKind::EnvC) {
        return Err(CpaError::EnvironmentPresent);
    }
    let pairs = paired_rails(state, ModeKind::C, ModeKind::S, CpaError::StandingBasisAbsent)?;
    let tau = absorber.coupled_tau();
    let mut out = state.clone();
    for (c, s) in pairs {
        let coupled = if absorber.coupled_kind() == ModeKind::C { c } else { s };
        let env = c.with_kind(ModeKind::EnvC);
        out = out.with_vacuum_mode(env)?;
        if tau == 1.0 {
            continue;
        }
        let ia = out.index_of(coupled)?;
        let ie = out.index_of(env)?;
        let amps = apply_two_mode(out.raw(), ia, ie, CreationMap::loss(tau));
        out = PureState::from_raw(out.modes().to_vec(), out.cutoff(), amps);
    }
    Ok(out)
}

/// Travelling pair `(K, -K)` to standing pair `(C, S)`, rail by rail.
pub fn to_standing_basis(state: &PureState) -> Result<PureState> {
    let pairs = paired_rails(
        state,
        ModeKind::K,
        ModeKind::MinusK,
        CpaError::TravellingBasisAbsent,
    )?;
    let mut out = state.clone();
    for (k, mk) in pairs {
        out = bs_transform(&out, k, mk)?;
        out = out.relabel(k, k.with_kind(ModeKind::C))?;
        out = out.relabel(mk, mk.with_kind(ModeKind::S))?;
    }
    Ok(out)
}

/// Standing pair `(C, S)` back to travelling pair `(K, -K)`.
pub fn to_travelling_basis(state: &PureState) -> Result<PureState> {
    let pairs = paired_rails(state, ModeKind::C, ModeKind::S, CpaError::StandingBasisAbsent)?;
    let mut out = state.clone();
    for (c, s) in pairs {
        out = bs_transform(&out, c, s)?;
        out = out.relabel(c, c.with_kind(ModeKind::K))?;
        out = out.relabel(s, s.with_kind(ModeKind::MinusK))?;
    }
    Ok(out)
}

/// Splitter, absorber, splitter. Returns the joint pure state of the output
/// travelling waves and the absorber environment.
pub fn full_pipeline(state: &PureState, absorber: &AbsorberSpec) -> Result<PureState> {
    if state.has_kind(ModeKind::C) || state.has_kind(ModeKind::S) {
        return Err(CpaError::TravellingBasisAbsent);
    }
    let standing = to_standing_basis(state)?;
    let absorbed = cpa_channel(&standing, absorber)?;
    to_travelling_basis(&absorbed)
}

/// Distribution of the number of photons held by the absorber.
pub fn absorbed_photon_distribution(joint: &PureState) -> Result<BTreeMap<usize, f64>> {
    let env = env_modes(joint.modes());
    if env.is_empty() {
        return Err(CpaError::EnvironmentAbsent);
    }
    joint.count_distribution(&env)
}

/// Light-only joint state given that `absorbed` photons went to the absorber,
/// as an unnormalized projection and its probability.
fn project_absorbed(joint: &PureState, absorbed: usize) -> Result<(PureState, f64)> {
    let env = env_modes(joint.modes());
    if env.is_empty() {
        return Err(CpaError::EnvironmentAbsent);
    }
    let env_idx = env
        .iter()
        .map(|&m| joint.index_of(m))
        .collect::<Result<Vec<_>>>()?;
    let projected = joint.filtered(|occ| env_idx.iter().map(|&i| occ[i]).sum::<usize>() == absorbed);
    let p = projected.norm_sqr();
    if p < CONDITION_FLOOR {
        return Err(CpaError::ZeroProbability(absorbed));
    }
    Ok((projected, p))
}

/// Output-light state conditioned on `absorbed` photons in the absorber.
pub fn conditional_output(joint: &PureState, absorbed: usize) -> Result<DensityOperator> {
    let (projected, _) = project_absorbed(joint, absorbed)?;
    let (projected, _) = projected.renormalized()?;
    let light: Vec<ModeLabel> = joint
        .modes()
        .iter()
        .copied()
        .filter(|m| m.kind != ModeKind::EnvC)
        .collect();
    reduce(&projected, &light)
}

/// All absorber modes of a joint state.
pub fn environment_modes(joint: &PureState) -> Vec<ModeLabel> {
    env_modes(joint.modes())
}

/// All non-absorber modes of a joint state.
pub fn light_modes(joint: &PureState) -> Vec<ModeLabel> {
    joint
        .modes()
        .iter()
        .copied()
        .filter(|m| m.kind != ModeKind::EnvC)
        .collect()
}
