use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::absorber::AbsorberSpec;
use crate::coefficient::AbsorptionCoefficients;
use crate::mode::{check_distinct, ModeLabel};
use crate::{CpaError, Result};

const SYMMETRY_TOLERANCE: f64 = 1e-12;
const UNCERTAINTY_TOLERANCE: f64 = 1e-10;

/// Gaussian state over labelled modes: quadrature means ordered
/// `(X1, X2)` per mode and the symmetrized covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    modes: Vec<ModeLabel>,
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    pub fn new(modes: Vec<ModeLabel>, mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        check_distinct(&modes)?;
        let dim = 2 * modes.len();
        if mean.len() != dim || cov.nrows() != dim || cov.ncols() != dim {
            return Err(CpaError::InvalidParameter(format!(
                "expected {dim} quadratures, got mean {} and covariance {}x{}",
                mean.len(),
                cov.nrows(),
                cov.ncols()
            )));
        }
        let state = GaussianState { modes, mean, cov };
        let asym = state.symmetry_error();
        if asym.is_nan() || asym > SYMMETRY_TOLERANCE {
            return Err(CpaError::InvalidParameter(format!(
                "covariance not symmetric (error {asym:e})"
            )));
        }
        let det = state.min_block_determinant();
        if det < 1.0 - UNCERTAINTY_TOLERANCE {
            return Err(CpaError::InvalidParameter(format!(
                "single-mode block determinant {det} violates the uncertainty bound"
            )));
        }
        Ok(state)
    }

    pub fn vacuum(modes: Vec<ModeLabel>) -> Result<Self> {
        let dim = 2 * modes.len();
        Self::new(modes, DVector::zeros(dim), DMatrix::identity(dim, dim))
    }

    pub fn coherent(alpha: Complex64, mode: ModeLabel) -> Self {
        prepare_squeezed_coherent(&SqueezedSpec::new(alpha, 0.0, 0.0), mode)
    }

    /// Tensor product, modes concatenated in order.
    pub fn product(parts: &[&GaussianState]) -> Result<Self> {
        let modes: Vec<ModeLabel> = parts.iter().flat_map(|p| p.modes.iter().copied()).collect();
        check_distinct(&modes)?;
        let dim = 2 * modes.len();
        let mut mean = DVector::zeros(dim);
        let mut cov = DMatrix::zeros(dim, dim);
        let mut offset = 0;
        for p in parts {
            let d = p.mean.len();
            mean.rows_mut(offset, d).copy_from(&p.mean);
            cov.view_mut((offset, offset), (d, d)).copy_from(&p.cov);
            offset += d;
        }
        Ok(GaussianState { modes, mean, cov })
    }

    pub fn modes(&self) -> &[ModeLabel] {
        &self.modes
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub fn index_of(&self, mode: ModeLabel) -> Result<usize> {
        self.modes
            .iter()
            .position(|&m| m == mode)
            .ok_or(CpaError::UnknownMode(mode))
    }

    pub fn has_mode(&self, mode: ModeLabel) -> bool {
        self.modes.contains(&mode)
    }

    pub fn quadrature_means(&self, mode: ModeLabel) -> Result<[f64; 2]> {
        let i = self.index_of(mode)?;
        Ok([self.mean[2 * i], self.mean[2 * i + 1]])
    }

    /// Covariance block `σ(a_i, b_j)`; `a == b` gives the single-mode block.
    pub fn cov_block(&self, a: ModeLabel, b: ModeLabel) -> Result<[[f64; 2]; 2]> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        let c = &self.cov;
        Ok([
            [c[(2 * i, 2 * j)], c[(2 * i, 2 * j + 1)]],
            [c[(2 * i + 1, 2 * j)], c[(2 * i + 1, 2 * j + 1)]],
        ])
    }

    pub fn variances(&self, mode: ModeLabel) -> Result<[f64; 2]> {
        let b = self.cov_block(mode, mode)?;
        Ok([b[0][0], b[1][1]])
    }

    /// `⟨a⟩ = (⟨X1⟩ + i⟨X2⟩)/2`.
    pub fn mean_amplitude(&self, mode: ModeLabel) -> Result<Complex64> {
        let [x1, x2] = self.quadrature_means(mode)?;
        Ok(Complex64::new(x1, x2) / 2.0)
    }

    /// `⟨a†a⟩ = |⟨a⟩|² + (σ11 + σ22 − 2)/4`.
    pub fn intensity(&self, mode: ModeLabel) -> Result<f64> {
        let b = self.cov_block(mode, mode)?;
        Ok(self.mean_amplitude(mode)?.norm_sqr() + (b[0][0] + b[1][1] - 2.0) / 4.0)
    }

    /// `⟨a† b⟩` for distinct modes.
    pub fn cross_moment(&self, a: ModeLabel, b: ModeLabel) -> Result<Complex64> {
        if a == b {
            return Err(CpaError::SameMode(a, b));
        }
        let s = self.cov_block(a, b)?;
        let fluct = Complex64::new(s[0][0] + s[1][1], s[0][1] - s[1][0]) / 4.0;
        Ok(self.mean_amplitude(a)?.conj() * self.mean_amplitude(b)? + fluct)
    }

    /// Marginal over `keep`, in the given order.
    pub fn marginal(&self, keep: &[ModeLabel]) -> Result<Self> {
        if keep.is_empty() {
            return Err(CpaError::EmptySelection);
        }
        check_distinct(keep)?;
        let idx: Vec<usize> = keep
            .iter()
            .map(|&m| self.index_of(m))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flat_map(|i| [2 * i, 2 * i + 1])
            .collect();
        let mean = DVector::from_iterator(idx.len(), idx.iter().map(|&i| self.mean[i]));
        let cov = DMatrix::from_fn(idx.len(), idx.len(), |r, c| self.cov[(idx[r], idx[c])]);
        Ok(GaussianState {
            modes: keep.to_vec(),
            mean,
            cov,
        })
    }

    pub fn relabel(&self, from: ModeLabel, to: ModeLabel) -> Result<Self> {
        let i = self.index_of(from)?;
        if from != to && self.has_mode(to) {
            return Err(CpaError::DuplicateMode(to));
        }
        let mut out = self.clone();
        out.modes[i] = to;
        Ok(out)
    }

    pub fn symmetry_error(&self) -> f64 {
        (&self.cov - self.cov.transpose()).amax()
    }

    /// Smallest single-mode block determinant; at least 1 for physical states.
    pub fn min_block_determinant(&self) -> f64 {
        (0..self.modes.len())
            .map(|i| {
                let c = &self.cov;
                c[(2 * i, 2 * i)] * c[(2 * i + 1, 2 * i + 1)]
                    - c[(2 * i, 2 * i + 1)] * c[(2 * i + 1, 2 * i)]
            })
            .fold(f64::INFINITY, f64::min)
    }

    fn with_vacuum_mode(&self, mode: ModeLabel) -> Result<Self> {
        Self::product(&[self, &Self::vacuum(vec![mode])?])
    }

    /// Applies `X_a → m00 X_a + m01 X_b`, `X_b → m10 X_a + m11 X_b` to both
    /// quadrature sectors.
    fn mix(&self, a: ModeLabel, b: ModeLabel, m: [[f64; 2]; 2]) -> Result<Self> {
        if a == b {
            return Err(CpaError::SameMode(a, b));
        }
        let (ia, ib) = (self.index_of(a)?, self.index_of(b)?);
        let dim = self.mean.len();
        let mut s = DMatrix::<f64>::identity(dim, dim);
        for q in 0..2 {
            let (ra, rb) = (2 * ia + q, 2 * ib + q);
            s[(ra, ra)] = m[0][0];
            s[(ra, rb)] = m[0][1];
            s[(rb, ra)] = m[1][0];
            s[(rb, rb)] = m[1][1];
        }
        let cov = &s * &self.cov * s.transpose();
        // restore exact symmetry lost to rounding
        let cov = (&cov + cov.transpose()) * 0.5;
        Ok(GaussianState {
            modes: self.modes.clone(),
            mean: &s * &self.mean,
            cov,
        })
    }
}

/// Squeezed coherent state `S(ζ)D(α)|0⟩` with `ζ = ξ e^{iφ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezedSpec {
    pub alpha: Complex64,
    pub xi: f64,
    pub phi: f64,
}

impl SqueezedSpec {
    /// Negative `xi` is folded into the angle.
    pub fn new(alpha: Complex64, xi: f64, phi: f64) -> Self {
        if xi < 0.0 {
            SqueezedSpec {
                alpha,
                xi: -xi,
                phi: phi + std::f64::consts::PI,
            }
        } else {
            SqueezedSpec { alpha, xi, phi }
        }
    }

    pub fn vacuum() -> Self {
        Self::new(Complex64::new(0.0, 0.0), 0.0, 0.0)
    }

    /// `⟨a⟩ = α cosh ξ − α* e^{iφ} sinh ξ`.
    pub fn mean_amplitude(&self) -> Complex64 {
        let s = SqueezedSpec::new(self.alpha, self.xi, self.phi);
        s.alpha * s.xi.cosh() - s.alpha.conj() * Complex64::from_polar(1.0, s.phi) * s.xi.sinh()
    }
}

pub fn prepare_squeezed_coherent(spec: &SqueezedSpec, mode: ModeLabel) -> GaussianState {
    let s = SqueezedSpec::new(spec.alpha, spec.xi, spec.phi);
    let beta = s.mean_amplitude();
    let (ch, sh) = ((2.0 * s.xi).cosh(), (2.0 * s.xi).sinh());
    let (cp, sp) = (s.phi.cos(), s.phi.sin());
    let cov = DMatrix::from_row_slice(2, 2, &[ch - cp * sh, -sp * sh, -sp * sh, ch + cp * sh]);
    GaussianState {
        modes: vec![mode],
        mean: DVector::from_row_slice(&[2.0 * beta.re, 2.0 * beta.im]),
        cov,
    }
}

/// Hadamard beamsplitter `X_a → (X_a + X_b)/√2`, `X_b → (X_a − X_b)/√2`.
pub fn bs_gaussian(state: &GaussianState, a: ModeLabel, b: ModeLabel) -> Result<GaussianState> {
    let h = FRAC_1_SQRT_2;
    state.mix(a, b, [[h, h], [h, -h]])
}

/// Couples the absorbing standing mode to a vacuum environment.
///
/// With `retain_env` the environment stays in the state as `ENV_C`; at full
/// absorption it then holds the pre-channel state of the absorbed mode.
pub fn cpa_gaussian(
    state: &GaussianState,
    absorber: &AbsorberSpec,
    retain_env: bool,
) -> Result<GaussianState> {
    if !(state.has_mode(ModeLabel::C) && state.has_mode(ModeLabel::S)) {
        return Err(CpaError::StandingBasisAbsent);
    }
    if state.has_mode(ModeLabel::ENV_C) {
        return Err(CpaError::EnvironmentPresent);
    }
    let coupled = ModeLabel::new(absorber.coupled_kind());
    let tau = absorber.coupled_tau();
    let leak = absorber.coupled_loss_amplitude();
    let with_env = state.with_vacuum_mode(ModeLabel::ENV_C)?;
    let out = with_env.mix(coupled, ModeLabel::ENV_C, [[tau, leak], [leak, -tau]])?;
    if retain_env {
        Ok(out)
    } else {
        out.marginal(&state.modes)
    }
}

/// Travelling pair `(K, -K)` to standing pair `(C, S)`.
pub fn to_standing_gaussian(state: &GaussianState) -> Result<GaussianState> {
    bs_gaussian(state, ModeLabel::K, ModeLabel::MINUS_K)?
        .relabel(ModeLabel::K, ModeLabel::C)?
        .relabel(ModeLabel::MINUS_K, ModeLabel::S)
}

/// Standing decomposition, absorption, and recombination into output
/// travelling modes.
pub fn gaussian_pipeline(
    state: &GaussianState,
    absorber: &AbsorberSpec,
    retain_env: bool,
) -> Result<GaussianState> {
    let standing = to_standing_gaussian(state)?;
    let absorbed = cpa_gaussian(&standing, absorber, retain_env)?;
    bs_gaussian(&absorbed, ModeLabel::C, ModeLabel::S)?
        .relabel(ModeLabel::C, ModeLabel::K)?
        .relabel(ModeLabel::S, ModeLabel::MINUS_K)
}

/// Duan parameter `Var((X_a1 − X_b1)/√2) + Var((X_a2 + X_b2)/√2)`.
/// Below 2 witnesses entanglement.
pub fn duan_inseparability(state: &GaussianState, a: ModeLabel, b: ModeLabel) -> Result<f64> {
    if a == b {
        return Err(CpaError::SameMode(a, b));
    }
    let sa = state.cov_block(a, a)?;
    let sb = state.cov_block(b, b)?;
    let sab = state.cov_block(a, b)?;
    let var_q = (sa[0][0] + sb[0][0] - 2.0 * sab[0][0]) / 2.0;
    let var_p = (sa[1][1] + sb[1][1] + 2.0 * sab[1][1]) / 2.0;
    Ok(var_q + var_p)
}

/// Intensity and coherence absorption of a travelling-basis input.
pub fn absorption_coefficients(state: &GaussianState) -> Result<AbsorptionCoefficients> {
    let (k, mk) = (ModeLabel::K, ModeLabel::MINUS_K);
    if !(state.has_mode(k) && state.has_mode(mk)) {
        return Err(CpaError::TravellingBasisAbsent);
    }
    Ok(AbsorptionCoefficients::from_moments(
        state.mean_amplitude(k)?,
        state.mean_amplitude(mk)?,
        state.intensity(k)?,
        state.intensity(mk)?,
        state.cross_moment(k, mk)?,
    ))
}

/// Duan parameter of the standing modes obtained from squeezed states
/// `(ξ_k, φ_k)` on `K` and `(ξ_-k, φ_-k)` on `-K`.
pub fn squeezed_inseparability_closed_form(xi_k: f64, xi_mk: f64, phi_k: f64, phi_mk: f64) -> f64 {
    (2.0 * xi_k).cosh() + (2.0 * xi_mk).cosh() + phi_k.cos() * (2.0 * xi_k).sinh()
        - phi_mk.cos() * (2.0 * xi_mk).sinh()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pair(a: SqueezedSpec, b: SqueezedSpec) -> GaussianState {
        GaussianState::product(&[
            &prepare_squeezed_coherent(&a, ModeLabel::K),
            &prepare_squeezed_coherent(&b, ModeLabel::MINUS_K),
        ])
        .unwrap()
    }

    #[test]
    fn squeezed_preparation() {
        let v = prepare_squeezed_coherent(&SqueezedSpec::vacuum(), ModeLabel::K);
        assert_eq!(v, GaussianState::vacuum(vec![ModeLabel::K]).unwrap());

        let s = prepare_squeezed_coherent(&SqueezedSpec::new(c(0.0, 0.0), 1.0, 0.0), ModeLabel::K);
        let [v1, v2] = s.variances(ModeLabel::K).unwrap();
        assert_abs_diff_eq!(v1, (-2.0f64).exp(), epsilon = 1e-14);
        assert_abs_diff_eq!(v2, 2.0f64.exp(), epsilon = 1e-14);

        let s = prepare_squeezed_coherent(&SqueezedSpec::new(c(1.0, 0.0), 0.5, 0.0), ModeLabel::K);
        let [x1, x2] = s.quadrature_means(ModeLabel::K).unwrap();
        assert_abs_diff_eq!(x1, 2.0 * (-0.5f64).exp(), epsilon = 1e-14);
        assert_abs_diff_eq!(x2, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn negative_squeezing_folds_into_angle() {
        let a = prepare_squeezed_coherent(&SqueezedSpec::new(c(0.3, 0.2), -0.7, 0.4), ModeLabel::K);
        let b = prepare_squeezed_coherent(&SqueezedSpec::new(c(0.3, 0.2), 0.7, 0.4 + PI), ModeLabel::K);
        assert!((a.cov() - b.cov()).amax() < 1e-14);
        assert!((a.mean() - b.mean()).amax() < 1e-14);
    }

    #[test]
    fn beamsplitter_examples() {
        let spec = SqueezedSpec::new(c(0.8, 0.3), 0.4, 1.1);
        let st = to_standing_gaussian(&pair(spec, spec)).unwrap();
        let single = spec.mean_amplitude();
        assert!((st.mean_amplitude(ModeLabel::C).unwrap() - single * 2f64.sqrt()).norm() < 1e-14);
        assert!(st.mean_amplitude(ModeLabel::S).unwrap().norm() < 1e-14);

        let xi = 0.9;
        let orth = pair(
            SqueezedSpec::new(c(0.0, 0.0), xi, PI),
            SqueezedSpec::new(c(0.0, 0.0), xi, 0.0),
        );
        let st = to_standing_gaussian(&orth).unwrap();
        let expect = ((2.0 * xi).exp() + (-2.0 * xi).exp()) / 2.0;
        for m in [ModeLabel::C, ModeLabel::S] {
            for v in st.variances(m).unwrap() {
                assert_abs_diff_eq!(v, expect, epsilon = 1e-12);
            }
        }
        let twice = bs_gaussian(&bs_gaussian(&orth, ModeLabel::K, ModeLabel::MINUS_K).unwrap(), ModeLabel::K, ModeLabel::MINUS_K).unwrap();
        assert!((twice.cov() - orth.cov()).amax() < 1e-12);
    }

    #[test]
    fn channel_limits() {
        let spec = SqueezedSpec::new(c(0.5, -0.2), 0.6, 0.3);
        let st = to_standing_gaussian(&pair(spec, SqueezedSpec::new(c(0.1, 0.0), 0.2, 2.0))).unwrap();
        let out = cpa_gaussian(&st, &AbsorberSpec::canonical(), false).unwrap();
        assert_eq!(out.quadrature_means(ModeLabel::C).unwrap(), [0.0, 0.0]);
        assert_eq!(out.cov_block(ModeLabel::C, ModeLabel::C).unwrap(), [[1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(out.cov_block(ModeLabel::C, ModeLabel::S).unwrap(), [[0.0, 0.0], [0.0, 0.0]]);

        let lossless = cpa_gaussian(&st, &AbsorberSpec::new(0.0).unwrap(), false).unwrap();
        assert!((lossless.cov() - st.cov()).amax() < 1e-15);

        let kept = cpa_gaussian(&st, &AbsorberSpec::canonical(), true).unwrap();
        assert_eq!(
            kept.cov_block(ModeLabel::ENV_C, ModeLabel::ENV_C).unwrap(),
            st.cov_block(ModeLabel::C, ModeLabel::C).unwrap()
        );
        assert_eq!(
            duan_inseparability(&kept, ModeLabel::ENV_C, ModeLabel::S).unwrap(),
            duan_inseparability(&st, ModeLabel::C, ModeLabel::S).unwrap()
        );
    }

    #[test]
    fn partial_channel_scales_coupled_block() {
        let spec = SqueezedSpec::new(c(0.5, -0.2), 0.6, 0.3);
        let st = to_standing_gaussian(&pair(spec, spec)).unwrap();
        let ab = AbsorberSpec::new(-0.2).unwrap();
        let tau = ab.tau_c();
        let out = cpa_gaussian(&st, &ab, false).unwrap();
        let before = st.cov_block(ModeLabel::C, ModeLabel::C).unwrap();
        let after = out.cov_block(ModeLabel::C, ModeLabel::C).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let id = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(after[i][j], tau * tau * before[i][j] + (1.0 - tau * tau) * id, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn duan_values() {
        let coh = GaussianState::product(&[
            &GaussianState::coherent(c(1.0, 2.0), ModeLabel::K),
            &GaussianState::coherent(c(-0.5, 0.0), ModeLabel::MINUS_K),
        ])
        .unwrap();
        assert_abs_diff_eq!(duan_inseparability(&coh, ModeLabel::K, ModeLabel::MINUS_K).unwrap(), 2.0, epsilon = 1e-15);

        let sq = SqueezedSpec::new(c(0.0, 0.0), 1.0, 0.0);
        let st = to_standing_gaussian(&pair(sq, sq)).unwrap();
        let e2 = 2f64.exp();
        assert_abs_diff_eq!(duan_inseparability(&st, ModeLabel::C, ModeLabel::S).unwrap(), e2 + 1.0 / e2, epsilon = 1e-12);

        let orth = pair(SqueezedSpec::new(c(0.0, 0.0), 1.0, PI), sq);
        let st = to_standing_gaussian(&orth).unwrap();
        assert_abs_diff_eq!(duan_inseparability(&st, ModeLabel::C, ModeLabel::S).unwrap(), 2.0 / e2, epsilon = 1e-12);
    }

    #[test]
    fn closed_form_examples() {
        let e2 = 2f64.exp();
        assert_abs_diff_eq!(squeezed_inseparability_closed_form(1.0, 1.0, PI, 0.0), 2.0 / e2, epsilon = 1e-12);
        assert_abs_diff_eq!(squeezed_inseparability_closed_form(0.7, 0.7, 0.4, 0.4), (1.4f64).exp() + (-1.4f64).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(
            squeezed_inseparability_closed_form(0.3, 0.8, PI, 0.0),
            (-0.6f64).exp() + (-1.6f64).exp(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn coherence_absorption_of_identical_inputs() {
        let spec = SqueezedSpec::new(c(0.7, 0.4), 0.5, 0.9);
        let coeffs = absorption_coefficients(&pair(spec, spec)).unwrap();
        assert_abs_diff_eq!(coeffs.coherence.value().unwrap(), 1.0, epsilon = 1e-12);

        let vacua = pair(SqueezedSpec::new(c(0.0, 0.0), 0.5, 0.0), SqueezedSpec::new(c(0.0, 0.0), 0.5, 1.0));
        let coeffs = absorption_coefficients(&vacua).unwrap();
        assert!(!coeffs.coherence.is_defined());
        assert!(coeffs.intensity.is_defined());
    }

    #[test]
    fn intensity_and_cross_moment_of_coherent_pair() {
        let g = GaussianState::product(&[
            &GaussianState::coherent(c(1.0, 0.5), ModeLabel::K),
            &GaussianState::coherent(c(0.2, -0.3), ModeLabel::MINUS_K),
        ])
        .unwrap();
        assert_abs_diff_eq!(g.intensity(ModeLabel::K).unwrap(), 1.25, epsilon = 1e-15);
        let x = g.cross_moment(ModeLabel::K, ModeLabel::MINUS_K).unwrap();
        assert!((x - c(1.0, -0.5) * c(0.2, -0.3)).norm() < 1e-15);
    }

    #[test]
    fn validation() {
        let bad = GaussianState::new(
            vec![ModeLabel::K],
            DVector::zeros(2),
            DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.5]),
        );
        assert!(matches!(bad, Err(CpaError::InvalidParameter(_))));
        let st = GaussianState::vacuum(vec![ModeLabel::K, ModeLabel::MINUS_K]).unwrap();
        assert_eq!(cpa_gaussian(&st, &AbsorberSpec::canonical(), false).unwrap_err(), CpaError::StandingBasisAbsent);
    }
}
