use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use num_complex::Complex64;
use serde::Serialize;

use super::state::{bs_gaussian, prepare_squeezed_coherent, GaussianState, SqueezedSpec};
use crate::coefficient::Coefficient;
use crate::mode::ModeLabel;
use crate::{CpaError, Result};

const ANGLE_GUARD: f64 = 1e-9;
const AMPLITUDE_GUARD: f64 = 1e-12;

/// EPR input on `(K, -K)` from preceding modes `g` (squeezed by `−ξ`) and
/// `h` (squeezed by `+ξ`) mixed on the beamsplitter.
pub fn epr_prepare(alpha_g: Complex64, alpha_h: Complex64, xi: f64) -> Result<GaussianState> {
    if !xi.is_finite() || xi < 0.0 {
        return Err(CpaError::InvalidParameter(format!(
            "squeezing must be finite and non-negative, got {xi}"
        )));
    }
    let g = prepare_squeezed_coherent(&SqueezedSpec::new(alpha_g, xi, PI), ModeLabel::K);
    let h = prepare_squeezed_coherent(&SqueezedSpec::new(alpha_h, xi, 0.0), ModeLabel::MINUS_K);
    bs_gaussian(&GaussianState::product(&[&g, &h])?, ModeLabel::K, ModeLabel::MINUS_K)
}

/// Preceding-mode parameters. Magnitudes carry a sign, so
/// `alpha_g() = alpha_g_mag · e^{i theta_g}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrecedingModes {
    pub theta_g: f64,
    pub theta_h: f64,
    pub alpha_g_mag: f64,
    pub alpha_h_mag: f64,
}

impl PrecedingModes {
    pub fn alpha_g(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta_g) * self.alpha_g_mag
    }

    pub fn alpha_h(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta_h) * self.alpha_h_mag
    }
}

/// Preceding-mode parameters reproducing travelling amplitudes
/// `|α| e^{iθ_k}` and `|α| e^{iθ_-k}`.
///
/// A mode whose amplitude factor vanishes gets magnitude 0 and needs no
/// angle. Otherwise an angle whose tangent diverges is reported as
/// [`CpaError::SingularAngle`]; [`epr_preceding_amplitudes`] has no such
/// points.
pub fn epr_inverse_map(theta_k: f64, theta_mk: f64, alpha_mag: f64, xi: f64) -> Result<PrecedingModes> {
    let sigma = (theta_k + theta_mk) / 2.0;
    let half_delta = (theta_k - theta_mk) / 2.0;
    let (sin_s, cos_s) = sigma.sin_cos();

    let g_factor = SQRT_2 * (-xi).exp() * alpha_mag * half_delta.cos();
    let (theta_g, alpha_g_mag) = if cos_s.abs() < ANGLE_GUARD {
        if g_factor.abs() < AMPLITUDE_GUARD {
            (0.0, 0.0)
        } else {
            return Err(CpaError::SingularAngle("theta_g"));
        }
    } else {
        let t = ((2.0 * xi).exp() * sin_s / cos_s).atan();
        (t, g_factor * cos_s / t.cos())
    };

    let h_factor = -SQRT_2 * xi.exp() * alpha_mag * half_delta.sin();
    let (theta_h, alpha_h_mag) = if sin_s.abs() < ANGLE_GUARD {
        if h_factor.abs() < AMPLITUDE_GUARD {
            (0.0, 0.0)
        } else {
            return Err(CpaError::SingularAngle("theta_h"));
        }
    } else {
        let t = (-(-2.0 * xi).exp() * cos_s / sin_s).atan();
        (t, h_factor * sin_s / t.cos())
    };

    Ok(PrecedingModes {
        theta_g,
        theta_h,
        alpha_g_mag,
        alpha_h_mag,
    })
}

/// Preceding-mode amplitudes `(α_g, α_h)` for arbitrary travelling means,
/// by undoing the beamsplitter and the squeezing of each mean.
pub fn epr_preceding_amplitudes(alpha_k: Complex64, alpha_mk: Complex64, xi: f64) -> (Complex64, Complex64) {
    let g_mean = (alpha_k + alpha_mk) * FRAC_1_SQRT_2;
    let h_mean = (alpha_k - alpha_mk) * FRAC_1_SQRT_2;
    let (grow, shrink) = (xi.exp(), (-xi).exp());
    (
        Complex64::new(shrink * g_mean.re, grow * g_mean.im),
        Complex64::new(grow * h_mean.re, shrink * h_mean.im),
    )
}

/// Fraction of the input intensity absorbed, `⟨g†g⟩ / (⟨g†g⟩ + ⟨h†h⟩)`.
pub fn epr_intensity_absorption(alpha_g: Complex64, alpha_h: Complex64, xi: f64) -> Result<f64> {
    let (ch, sh) = ((2.0 * xi).cosh(), (2.0 * xi).sinh());
    let vac = xi.sinh().powi(2);
    let ng = alpha_g.norm_sqr() * (ch + (2.0 * alpha_g.arg()).cos() * sh) + vac;
    let nh = alpha_h.norm_sqr() * (ch - (2.0 * alpha_h.arg()).cos() * sh) + vac;
    Coefficient::ratio(ng, ng + nh)
        .value()
        .ok_or(CpaError::Undefined("intensity absorption of a zero-intensity input"))
}

/// Intensity absorption for travelling amplitudes `|α| e^{iθ_k}` and
/// `|α| e^{iθ_-k}`, through the inverse map where it is regular and the
/// linear route at its singular angles.
pub fn epr_intensity_absorption_travelling(theta_k: f64, theta_mk: f64, alpha_mag: f64, xi: f64) -> Result<f64> {
    let (ag, ah) = match epr_inverse_map(theta_k, theta_mk, alpha_mag, xi) {
        Ok(p) => (p.alpha_g(), p.alpha_h()),
        Err(CpaError::SingularAngle(_)) => epr_preceding_amplitudes(
            Complex64::from_polar(alpha_mag, theta_k),
            Complex64::from_polar(alpha_mag, theta_mk),
            xi,
        ),
        Err(e) => return Err(e),
    };
    epr_intensity_absorption(ag, ah, xi)
}

/// Coherence absorption `|α_k + α_-k|² / (2(|α_k|² + |α_-k|²))`.
pub fn epr_coherence_absorption(alpha_k: Complex64, alpha_mk: Complex64) -> Coefficient {
    let c_in = alpha_k.norm_sqr() + alpha_mk.norm_sqr();
    Coefficient::ratio((alpha_k + alpha_mk).norm_sqr(), 2.0 * c_in)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::absorber::AbsorberSpec;
    use crate::gaussian::{absorption_coefficients, duan_inseparability, gaussian_pipeline, to_standing_gaussian};
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn travelling_means(state: &GaussianState) -> (Complex64, Complex64) {
        (
            state.mean_amplitude(ModeLabel::K).unwrap(),
            state.mean_amplitude(ModeLabel::MINUS_K).unwrap(),
        )
    }

    #[test]
    fn vacuum_epr_duan_and_variances() {
        let zero = c(0.0, 0.0);
        let st = epr_prepare(zero, zero, 1.0).unwrap();
        let e2 = 2f64.exp();
        assert_abs_diff_eq!(duan_inseparability(&st, ModeLabel::K, ModeLabel::MINUS_K).unwrap(), 2.0 / e2, epsilon = 1e-12);
        for m in [ModeLabel::K, ModeLabel::MINUS_K] {
            for v in st.variances(m).unwrap() {
                assert_abs_diff_eq!(v, (e2 + 1.0 / e2) / 2.0, epsilon = 1e-12);
            }
        }
        let standing = to_standing_gaussian(&st).unwrap();
        assert_abs_diff_eq!(duan_inseparability(&standing, ModeLabel::C, ModeLabel::S).unwrap(), e2 + 1.0 / e2, epsilon = 1e-12);

        let flat = epr_prepare(c(0.3, 0.1), c(-0.2, 0.5), 0.0).unwrap();
        assert_abs_diff_eq!(duan_inseparability(&flat, ModeLabel::K, ModeLabel::MINUS_K).unwrap(), 2.0, epsilon = 1e-12);
        assert!(epr_prepare(zero, zero, -0.1).is_err());
    }

    #[test]
    fn standing_modes_repeat_preceding_modes() {
        let (ag, ah, xi) = (c(0.4, -0.3), c(0.2, 0.6), 0.8);
        let standing = to_standing_gaussian(&epr_prepare(ag, ah, xi).unwrap()).unwrap();
        let g = prepare_squeezed_coherent(&SqueezedSpec::new(ag, xi, PI), ModeLabel::C);
        let h = prepare_squeezed_coherent(&SqueezedSpec::new(ah, xi, 0.0), ModeLabel::S);
        let expect = GaussianState::product(&[&g, &h]).unwrap();
        assert!((standing.cov() - expect.cov()).amax() < 1e-12);
        assert!((standing.mean() - expect.mean()).amax() < 1e-12);
    }

    #[test]
    fn inverse_map_round_trip() {
        let (tk, tmk, a, xi) = (0.7, 0.0, 1.0, 0.5);
        let p = epr_inverse_map(tk, tmk, a, xi).unwrap();
        let (mk, mmk) = travelling_means(&epr_prepare(p.alpha_g(), p.alpha_h(), xi).unwrap());
        assert!((mk - Complex64::from_polar(a, tk)).norm() < 1e-12);
        assert!((mmk - Complex64::from_polar(a, tmk)).norm() < 1e-12);

        let (lg, lh) = epr_preceding_amplitudes(Complex64::from_polar(a, tk), Complex64::from_polar(a, tmk), xi);
        assert!((lg - p.alpha_g()).norm() < 1e-12);
        assert!((lh - p.alpha_h()).norm() < 1e-12);
    }

    #[test]
    fn inverse_map_special_points() {
        let p = epr_inverse_map(0.0, 0.0, 1.3, 0.6).unwrap();
        assert_eq!(p.theta_g, 0.0);
        assert_eq!(p.alpha_h_mag, 0.0);

        let p = epr_inverse_map(0.9, 0.3, 1.0, 0.0).unwrap();
        assert_abs_diff_eq!(p.theta_g, 0.6, epsilon = 1e-15);

        assert_eq!(
            epr_inverse_map(PI / 2.0, PI / 2.0, 1.0, 0.3).unwrap_err(),
            CpaError::SingularAngle("theta_g")
        );
        assert_eq!(
            epr_inverse_map(0.5, -0.5, 1.0, 0.3).unwrap_err(),
            CpaError::SingularAngle("theta_h")
        );
    }

    #[test]
    fn intensity_absorption_matches_covariance_route() {
        for &(ag, ah, xi) in &[
            (c(0.0, 0.0), c(0.0, 0.0), 0.7),
            (c(0.5, 0.2), c(-0.3, 0.4), 0.4),
            (c(1.2, -0.8), c(0.1, 0.0), 1.5),
        ] {
            let direct = epr_intensity_absorption(ag, ah, xi).unwrap();
            let coeffs = absorption_coefficients(&epr_prepare(ag, ah, xi).unwrap()).unwrap();
            assert_abs_diff_eq!(direct, coeffs.intensity.value().unwrap(), epsilon = 1e-12);
        }
        assert_abs_diff_eq!(epr_intensity_absorption(c(0.7, 0.1), c(0.0, 0.0), 0.0).unwrap(), 1.0, epsilon = 1e-15);
        assert!(epr_intensity_absorption(c(0.0, 0.0), c(0.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn absorbed_intensity_matches_pipeline() {
        let (ag, ah, xi) = (c(0.5, 0.2), c(-0.3, 0.4), 0.4);
        let input = epr_prepare(ag, ah, xi).unwrap();
        let out = gaussian_pipeline(&input, &AbsorberSpec::canonical(), false).unwrap();
        let i_in = input.intensity(ModeLabel::K).unwrap() + input.intensity(ModeLabel::MINUS_K).unwrap();
        let i_out = out.intensity(ModeLabel::K).unwrap() + out.intensity(ModeLabel::MINUS_K).unwrap();
        assert_abs_diff_eq!(1.0 - i_out / i_in, epr_intensity_absorption(ag, ah, xi).unwrap(), epsilon = 1e-12);
    }

    #[test]
    fn travelling_route_handles_singular_angles() {
        let xi = 0.5;
        for &tk in &[0.0, 0.3, PI / 2.0, PI, 4.0] {
            let via = epr_intensity_absorption_travelling(tk, -tk + PI, 1.0, xi).unwrap();
            let (ag, ah) = epr_preceding_amplitudes(Complex64::from_polar(1.0, tk), Complex64::from_polar(1.0, -tk + PI), xi);
            assert_abs_diff_eq!(via, epr_intensity_absorption(ag, ah, xi).unwrap(), epsilon = 1e-12);
        }
    }

    #[test]
    fn coherence_law() {
        for i in 0..16 {
            let d = 2.0 * PI * i as f64 / 16.0;
            let (ak, amk) = (Complex64::from_polar(1.0, d), c(1.0, 0.0));
            let expect = (1.0 + d.cos()) / 2.0;
            assert_abs_diff_eq!(epr_coherence_absorption(ak, amk).value().unwrap(), expect, epsilon = 1e-14);
        }
    }
}
