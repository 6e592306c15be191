//! Browser bindings: three small computations behind a static page.

use std::f64::consts::PI;

use num_complex::Complex64;
use wasm_bindgen::prelude::*;

use cpa_core::dv::{run_dv, DvScenario};
use cpa_core::gaussian::{
    duan_inseparability, epr_intensity_absorption_travelling, prepare_squeezed_coherent,
    to_standing_gaussian, GaussianState, SqueezedSpec,
};
use cpa_core::{AbsorberSpec, CpaError, ModeLabel};

/// Largest NOON photon number the page offers.
pub const MAX_NOON: usize = 12;
/// Largest grid the page may request per axis.
pub const MAX_GRID: usize = 201;

fn check_grid(points: usize) -> Result<(), CpaError> {
    if (2..=MAX_GRID).contains(&points) {
        Ok(())
    } else {
        Err(CpaError::InvalidParameter(format!("grid must lie in 2..={MAX_GRID}")))
    }
}

fn axis(points: usize) -> impl Iterator<Item = f64> {
    (0..points).map(move |i| 2.0 * PI * i as f64 / (points - 1) as f64)
}

/// `P(m photons absorbed)` for `m = 0..=n` with a NOON input at the
/// canonical absorber.
pub fn noon_distribution(n: usize, delta_theta: f64) -> Result<Vec<f64>, CpaError> {
    if n == 0 || n > MAX_NOON {
        return Err(CpaError::InvalidParameter(format!("photon number must lie in 1..={MAX_NOON}")));
    }
    let r = run_dv(&DvScenario::Noon { n, delta_theta }, &AbsorberSpec::canonical(), n)?;
    let dist = r.absorbed_distribution.unwrap_or_default();
    Ok((0..=n).map(|m| dist.get(&m).copied().unwrap_or(0.0)).collect())
}

/// Standing-wave inseparability over a square grid of squeezing angles,
/// row-major with `phi_k` along rows.
pub fn inseparability_grid(xi: f64, points: usize) -> Result<Vec<f64>, CpaError> {
    check_grid(points)?;
    if !(0.0..=3.0).contains(&xi) {
        return Err(CpaError::InvalidParameter("squeezing must lie in [0, 3]".into()));
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(points * points);
    for pk in axis(points) {
        for pmk in axis(points) {
            let input = GaussianState::product(&[
                &prepare_squeezed_coherent(&SqueezedSpec::new(zero, xi, pk), ModeLabel::K),
                &prepare_squeezed_coherent(&SqueezedSpec::new(zero, xi, pmk), ModeLabel::MINUS_K),
            ])?;
            out.push(duan_inseparability(&to_standing_gaussian(&input)?, ModeLabel::C, ModeLabel::S)?);
        }
    }
    Ok(out)
}

/// EPR intensity absorption against `theta_k` on `[0, 2π]`, with
/// `theta_-k = 0` and equal amplitudes.
pub fn epr_intensity_curve(alpha_abs: f64, xi: f64, points: usize) -> Result<Vec<f64>, CpaError> {
    check_grid(points)?;
    axis(points)
        .map(|t| epr_intensity_absorption_travelling(t, 0.0, alpha_abs, xi))
        .collect()
}

fn js(e: CpaError) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen(js_name = noonDistribution)]
pub fn noon_distribution_js(n: usize, delta_theta: f64) -> Result<Vec<f64>, JsError> {
    noon_distribution(n, delta_theta).map_err(js)
}

#[wasm_bindgen(js_name = inseparabilityGrid)]
pub fn inseparability_grid_js(xi: f64, points: usize) -> Result<Vec<f64>, JsError> {
    inseparability_grid(xi, points).map_err(js)
}

#[wasm_bindgen(js_name = eprIntensityCurve)]
pub fn epr_intensity_curve_js(alpha_abs: f64, xi: f64, points: usize) -> Result<Vec<f64>, JsError> {
    epr_intensity_curve(alpha_abs, xi, points).map_err(js)
}
