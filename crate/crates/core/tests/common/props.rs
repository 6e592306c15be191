//! Generated-input properties, runnable under any `TestRunner`.

use proptest::prelude::*;
use proptest::test_runner::TestRunner;

use super::{absorber, to_state, travelling_ket};
use cpa_core::dv::{run_dv, DvScenario};
use cpa_core::fock::{
    absorbed_photon_distribution, bs_transform, cpa_channel, full_pipeline, mode_moments, to_standing_basis,
};
use cpa_core::scenario::{parse_scenario, run_scenario};
use cpa_core::{AbsorberSpec, ModeLabel};

const CUTOFF: usize = 8;

fn run<S: Strategy>(
    runner: &mut TestRunner,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn fail<E: std::fmt::Display>(e: E) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}

/// The Hadamard splitter applied twice is the identity.
pub fn bs_involution(runner: &mut TestRunner) -> Result<(), String> {
    run(runner, travelling_ket(5), |terms| {
        let psi = to_state(&terms, CUTOFF);
        let once = bs_transform(&psi, ModeLabel::K, ModeLabel::MINUS_K).map_err(fail)?;
        let twice = bs_transform(&once, ModeLabel::K, ModeLabel::MINUS_K).map_err(fail)?;
        for (occ, a) in psi.terms() {
            prop_assert!((twice.amplitude(&occ) - a).norm() < 1e-12);
        }
        prop_assert_eq!(twice.num_terms(), psi.num_terms());
        Ok(())
    })
}

/// Splitter, absorber and splitter together preserve the norm.
pub fn norm_conservation(runner: &mut TestRunner) -> Result<(), String> {
    run(runner, (travelling_ket(5), absorber()), |(terms, ab)| {
        let psi = to_state(&terms, CUTOFF);
        let out = full_pipeline(&psi, &ab).map_err(fail)?;
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
        Ok(())
    })
}

/// The environment receives `(1 - τ²)` of the coupled wave's photons.
pub fn bookkeeping(runner: &mut TestRunner) -> Result<(), String> {
    run(runner, (travelling_ket(5), absorber()), |(terms, ab): (_, AbsorberSpec)| {
        let standing = to_standing_basis(&to_state(&terms, CUTOFF)).map_err(fail)?;
        let coupled = ModeLabel::new(ab.coupled_kind());
        let (_, n_in) = mode_moments(&standing, coupled).map_err(fail)?;
        let out = cpa_channel(&standing, &ab).map_err(fail)?;
        let (_, n_env) = mode_moments(&out, ModeLabel::ENV_C).map_err(fail)?;
        let (_, n_left) = mode_moments(&out, coupled).map_err(fail)?;
        let tau = ab.coupled_tau();
        prop_assert!((n_env - (1.0 - tau * tau) * n_in).abs() < 1e-10);
        prop_assert!((n_env + n_left - n_in).abs() < 1e-10);
        Ok(())
    })
}

/// Absorbed-photon distributions are probability distributions.
pub fn normalization(runner: &mut TestRunner) -> Result<(), String> {
    run(runner, (travelling_ket(5), absorber()), |(terms, ab)| {
        let out = full_pipeline(&to_state(&terms, CUTOFF), &ab).map_err(fail)?;
        let d = absorbed_photon_distribution(&out).map_err(fail)?;
        prop_assert!(d.values().all(|&p| (-1e-15..=1.0 + 1e-12).contains(&p)));
        prop_assert!((d.values().sum::<f64>() - 1.0).abs() < 1e-12);
        Ok(())
    })
}

/// In phase, NOON inputs lose photon numbers of the same parity as `N`;
/// out of phase, the opposite parity.
pub fn noon_parity(runner: &mut TestRunner) -> Result<(), String> {
    run(runner, (1usize..=10, any::<bool>()), |(n, flipped)| {
        let dt = if flipped { std::f64::consts::PI } else { 0.0 };
        let r = run_dv(&DvScenario::Noon { n, delta_theta: dt }, &AbsorberSpec::canonical(), 12).map_err(fail)?;
        let d = r.absorbed_distribution.expect("fock runs report a distribution");
        for (&m, &p) in &d {
            if ((n - m) % 2 == 1) != flipped {
                prop_assert!(p < 1e-12, "N={} Δθ={} P({})={}", n, dt, m, p);
            }
        }
        Ok(())
    })
}

/// Identical scenario files serialize to identical bytes.
pub fn determinism(runner: &mut TestRunner) -> Result<(), String> {
    run(runner, (0.0f64..1.0, 0.0f64..1.0, 0.0f64..0.5), |(amp, r, xi)| {
        let text = format!(
            r#"{{"schema": 1, "engine": "fock", "absorber": {{"r": {}}},
                "scenario": {{"family": "squeezed_pair", "k": {{"alpha": [{amp}, 0.2], "xi": {xi}}}, "minus_k": {{"xi": {xi}}}}},
                "numerics": {{"cutoff": 30}}}}"#,
            -r / 2.0
        );
        let once = || -> Result<String, TestCaseError> {
            let (file, _) = parse_scenario(&text).map_err(fail)?;
            let mut v = serde_json::to_value(run_scenario(&file).map_err(fail)?).map_err(fail)?;
            cpa_core::scenario::values::round_json(&mut v);
            serde_json::to_string(&v).map_err(fail)
        };
        prop_assert_eq!(once()?, once()?);
        Ok(())
    })
}

