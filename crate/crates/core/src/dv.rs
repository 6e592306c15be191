//! Discrete-variable inputs: single photons, labelled-photon Bell states and
//! NOON states.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::absorber::AbsorberSpec;
use crate::fock::{full_pipeline, PureState};
use crate::mode::{ModeKind, ModeLabel, Rail};
use crate::report::{fock_report, ScenarioResult};
use crate::{CpaError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BellState {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        BellState::PsiPlus,
        BellState::PsiMinus,
        BellState::PhiPlus,
        BellState::PhiMinus,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DvScenario {
    SinglePhoton { delta_theta: f64 },
    Bell { state: BellState },
    Noon { n: usize, delta_theta: f64 },
}

impl DvScenario {
    pub fn photon_number(&self) -> usize {
        match *self {
            DvScenario::SinglePhoton { .. } => 1,
            DvScenario::Bell { .. } => 2,
            DvScenario::Noon { n, .. } => n,
        }
    }
}

/// Dual-rail modes `[first:A, first:B, second:A, second:B]`.
pub fn bell_modes(first: ModeKind, second: ModeKind) -> Vec<ModeLabel> {
    vec![
        ModeLabel::railed(first, Rail::A),
        ModeLabel::railed(first, Rail::B),
        ModeLabel::railed(second, Rail::A),
        ModeLabel::railed(second, Rail::B),
    ]
}

/// Bell state of photons A and B over the mode pair `(first, second)`.
pub fn bell_ket(state: BellState, first: ModeKind, second: ModeKind, cutoff: usize) -> Result<PureState> {
    // |A⟩_first|B⟩_second, |B⟩_first|A⟩_second, |A⟩_first|B⟩_first, |A⟩_second|B⟩_second
    let (x, y) = match state {
        BellState::PsiPlus | BellState::PsiMinus => (vec![1, 0, 0, 1], vec![0, 1, 1, 0]),
        BellState::PhiPlus | BellState::PhiMinus => (vec![1, 1, 0, 0], vec![0, 0, 1, 1]),
    };
    let sign = match state {
        BellState::PsiPlus | BellState::PhiPlus => 1.0,
        BellState::PsiMinus | BellState::PhiMinus => -1.0,
    };
    PureState::from_amplitudes(
        bell_modes(first, second),
        cutoff,
        [(x, Complex64::new(1.0, 0.0)), (y, Complex64::new(sign, 0.0))],
    )
}

/// `(|N,0⟩ + e^{iΔθ}|0,N⟩)/√2` over `(K, -K)`.
pub fn noon_ket(n: usize, delta_theta: f64, cutoff: usize) -> Result<PureState> {
    if n == 0 {
        return Err(CpaError::InvalidParameter("NOON photon number must be at least 1".into()));
    }
    if !delta_theta.is_finite() {
        return Err(CpaError::InvalidParameter("phase difference must be finite".into()));
    }
    PureState::from_amplitudes(
        vec![ModeLabel::K, ModeLabel::MINUS_K],
        cutoff,
        [
            (vec![n, 0], Complex64::new(1.0, 0.0)),
            (vec![0, n], Complex64::from_polar(1.0, delta_theta)),
        ],
    )
}

/// Travelling-basis input ket of a scenario.
pub fn build_input(scenario: &DvScenario, cutoff: usize) -> Result<PureState> {
    let required = scenario.photon_number();
    if cutoff < required {
        return Err(CpaError::CutoffTooSmall { cutoff, required });
    }
    match *scenario {
        DvScenario::SinglePhoton { delta_theta } => noon_ket(1, delta_theta, cutoff),
        DvScenario::Bell { state } => bell_ket(state, ModeKind::K, ModeKind::MinusK, cutoff),
        DvScenario::Noon { n, delta_theta } => noon_ket(n, delta_theta, cutoff),
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Real amplitudes of `|N−m⟩_C |m⟩_S` for the NOON input,
/// `2^{-(N-1)/2} C(N,m)^{1/2} cos((πm + Δθ)/2)`.
///
/// These amplitudes carry the sine wave with an extra phase `e^{iπ/2}` per
/// photon relative to the Hadamard splitter; see [`hadamard_sine_phase`].
pub fn noon_standing_decomposition(n: usize, delta_theta: f64) -> Vec<(usize, f64)> {
    let scale = 2f64.powf(-((n as f64) - 1.0) / 2.0);
    (0..=n)
        .map(|m| {
            let c = scale * binomial(n, m).sqrt() * ((PI * m as f64 + delta_theta) / 2.0).cos();
            (m, c)
        })
        .collect()
}

/// Phase per sine-wave photon that takes the Hadamard standing state to the
/// real-cosine decomposition.
pub fn hadamard_sine_phase() -> f64 {
    -PI / 2.0
}

/// The decomposition as a state over `(C, S)`.
pub fn noon_standing_state(n: usize, delta_theta: f64, cutoff: usize) -> Result<PureState> {
    if cutoff < n {
        return Err(CpaError::CutoffTooSmall { cutoff, required: n });
    }
    PureState::from_amplitudes(
        vec![ModeLabel::C, ModeLabel::S],
        cutoff,
        noon_standing_decomposition(n, delta_theta)
            .into_iter()
            .map(|(m, c)| (vec![n - m, m], Complex64::new(c, 0.0))),
    )
}

/// Runs the scenario through the absorber and reports absorption statistics.
pub fn run_dv(scenario: &DvScenario, absorber: &AbsorberSpec, cutoff: usize) -> Result<ScenarioResult> {
    let input = build_input(scenario, cutoff)?;
    let joint = full_pipeline(&input, absorber)?;
    fock_report(&input, &joint)
}

/// Standing-basis Bell state produced by each travelling Bell state.
pub fn standing_bell_image(state: BellState) -> BellState {
    match state {
        BellState::PsiPlus => BellState::PhiMinus,
        BellState::PsiMinus => BellState::PsiMinus,
        BellState::PhiPlus => BellState::PhiPlus,
        BellState::PhiMinus => BellState::PsiPlus,
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{bs_transform, to_standing_basis};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn dist(result: &ScenarioResult) -> Vec<(usize, f64)> {
        result
            .absorbed_distribution
            .as_ref()
            .unwrap()
            .iter()
            .filter(|(_, &p)| p > 1e-14)
            .map(|(&m, &p)| (m, p))
            .collect()
    }

    #[test]
    fn inputs() {
        let s = build_input(&DvScenario::SinglePhoton { delta_theta: 0.0 }, 3).unwrap();
        assert_abs_diff_eq!(s.amplitude(&[1, 0]).re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitude(&[0, 1]).re, FRAC_1_SQRT_2, epsilon = 1e-15);

        let s = build_input(&DvScenario::Noon { n: 1, delta_theta: PI }, 3).unwrap();
        assert_abs_diff_eq!(s.amplitude(&[0, 1]).re, -FRAC_1_SQRT_2, epsilon = 1e-15);

        let s = build_input(&DvScenario::Bell { state: BellState::PsiMinus }, 2).unwrap();
        assert_abs_diff_eq!(s.amplitude(&[1, 0, 0, 1]).re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitude(&[0, 1, 1, 0]).re, -FRAC_1_SQRT_2, epsilon = 1e-15);

        assert_eq!(
            build_input(&DvScenario::Noon { n: 4, delta_theta: 0.0 }, 3).unwrap_err(),
            CpaError::CutoffTooSmall { cutoff: 3, required: 4 }
        );
        assert!(build_input(&DvScenario::Noon { n: 0, delta_theta: 0.0 }, 3).is_err());
    }

    #[test]
    fn decomposition_examples() {
        let d3 = noon_standing_decomposition(3, 0.0);
        assert_abs_diff_eq!(d3[0].1, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d3[1].1, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d3[2].1, -(3f64.sqrt()) / 2.0, epsilon = 1e-15);

        let d4 = noon_standing_decomposition(4, 0.0);
        let r = 1.0 / (2.0 * 2f64.sqrt());
        assert_abs_diff_eq!(d4[0].1, r, epsilon = 1e-15);
        assert_abs_diff_eq!(d4[4].1, r, epsilon = 1e-15);
        assert_abs_diff_eq!(d4[2].1, -(6f64.sqrt()) * r, epsilon = 1e-15);

        for n in 1..=8 {
            let total: f64 = noon_standing_decomposition(n, 1.234).iter().map(|(_, c)| c * c).sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn decomposition_matches_splitter_up_to_sine_phase() {
        let engine = bs_transform(&noon_ket(2, 0.0, 4).unwrap(), ModeLabel::K, ModeLabel::MINUS_K)
            .unwrap()
            .relabel(ModeLabel::K, ModeLabel::C)
            .unwrap()
            .relabel(ModeLabel::MINUS_K, ModeLabel::S)
            .unwrap()
            .phase_shifted(ModeLabel::S, hadamard_sine_phase())
            .unwrap();
        assert_abs_diff_eq!(engine.amplitude(&[2, 0]).re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(engine.amplitude(&[0, 2]).re, -FRAC_1_SQRT_2, epsilon = 1e-15);
        let closed = noon_standing_state(2, 0.0, 4).unwrap();
        assert!(closed.fidelity(&engine).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn table_rows() {
        let ab = AbsorberSpec::canonical();
        let r = run_dv(&DvScenario::Noon { n: 3, delta_theta: 0.0 }, &ab, 30).unwrap();
        let d = dist(&r);
        assert_eq!(d.iter().map(|x| x.0).collect::<Vec<_>>(), vec![1, 3]);
        assert_abs_diff_eq!(d[0].1, 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(d[1].1, 0.25, epsilon = 1e-12);

        let r = run_dv(&DvScenario::Noon { n: 4, delta_theta: PI }, &ab, 30).unwrap();
        let d = dist(&r);
        assert_eq!(d.iter().map(|x| x.0).collect::<Vec<_>>(), vec![1, 3]);
        assert_abs_diff_eq!(d[0].1, 0.5, epsilon = 1e-12);

        let r = run_dv(&DvScenario::Bell { state: BellState::PhiPlus }, &ab, 30).unwrap();
        let d = dist(&r);
        assert_eq!(d.iter().map(|x| x.0).collect::<Vec<_>>(), vec![0, 2]);
        assert_abs_diff_eq!(r.intensity_absorption.unwrap().value().unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn single_photon_absorption_probability() {
        for i in 0..8 {
            let dt = i as f64 * PI / 4.0;
            let r = run_dv(&DvScenario::SinglePhoton { delta_theta: dt }, &AbsorberSpec::canonical(), 30).unwrap();
            assert_abs_diff_eq!(r.p_absorb.unwrap(), (dt / 2.0).cos().powi(2), epsilon = 1e-12);
        }
    }

    #[test]
    fn bell_mapping() {
        for b in BellState::ALL {
            let standing = to_standing_basis(&bell_ket(b, ModeKind::K, ModeKind::MinusK, 2).unwrap()).unwrap();
            let expect = bell_ket(standing_bell_image(b), ModeKind::C, ModeKind::S, 2).unwrap();
            assert!(standing.fidelity(&expect).unwrap() > 1.0 - 1e-12, "{b:?}");
        }
    }
}
