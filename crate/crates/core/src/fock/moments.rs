use num_complex::Complex64;

use super::density::DensityOperator;
use super::state::{inner_raw, PureState};
use crate::mode::ModeLabel;
use crate::Result;

/// First and second moments of a single mode: `(⟨a⟩, ⟨a†a⟩)`.
pub trait ModeMoments {
    fn mode_moments(&self, mode: ModeLabel) -> Result<(Complex64, f64)>;
}

pub fn mode_moments<S: ModeMoments + ?Sized>(state: &S, mode: ModeLabel) -> Result<(Complex64, f64)> {
    state.mode_moments(mode)
}

impl ModeMoments for PureState {
    fn mode_moments(&self, mode: ModeLabel) -> Result<(Complex64, f64)> {
        let i = self.index_of(mode)?;
        let lowered = self.lowered(i);
        let mean = self.expectation_of_lowered(&lowered);
        let n = inner_raw(&lowered, &lowered).re;
        Ok((mean, n))
    }
}

impl ModeMoments for DensityOperator {
    fn mode_moments(&self, mode: ModeLabel) -> Result<(Complex64, f64)> {
        let m = self.index_of_mode(mode)?;
        let rho = self.matrix();
        let index = self.raw_index();
        let mut mean = Complex64::new(0.0, 0.0);
        let mut n = 0.0;
        for (col, occ) in self.raw_basis().iter().enumerate() {
            let k = occ.get(m);
            n += k as f64 * rho[(col, col)].re;
            if k > 0 {
                // Tr(ρ a) = Σ ⟨col|ρ|row⟩⟨row|a|col⟩ with row = col - 1 in mode m
                if let Some(&row) = index.get(&occ.with(m, k - 1)) {
                    mean += rho[(col, row)] * (k as f64).sqrt();
                }
            }
        }
        Ok((mean, n))
    }
}

/// Quadrature statistics of one mode in the `a = (X1 + i X2)/2` convention:
/// means and symmetrized covariance. Vacuum has unit variances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureMoments {
    pub mean: [f64; 2],
    pub cov: [[f64; 2]; 2],
}

/// Quadrature means and covariance of `mode`, from `⟨a⟩`, `⟨a²⟩`, `⟨a†a⟩`.
pub fn quadrature_moments(state: &PureState, mode: ModeLabel) -> Result<QuadratureMoments> {
    let i = state.index_of(mode)?;
    let lowered = state.lowered(i);
    let m = state.expectation_of_lowered(&lowered);
    let n = inner_raw(&lowered, &lowered).re;
    let twice = PureState::from_raw(state.modes().to_vec(), state.cutoff(), lowered).lowered(i);
    let q = state.expectation_of_lowered(&twice);

    let mean = [2.0 * m.re, 2.0 * m.im];
    let x1x1 = 2.0 * q.re + 2.0 * n + 1.0;
    let x2x2 = -2.0 * q.re + 2.0 * n + 1.0;
    let x1x2 = 2.0 * q.im;
    let off = x1x2 - mean[0] * mean[1];
    Ok(QuadratureMoments {
        mean,
        cov: [
            [x1x1 - mean[0] * mean[0], off],
            [off, x2x2 - mean[1] * mean[1]],
        ],
    })
}

/// Normally ordered cross moment `⟨a† b⟩`.
pub fn cross_moment(state: &PureState, a: ModeLabel, b: ModeLabel) -> Result<Complex64> {
    let la = state.lowered(state.index_of(a)?);
    let lb = state.lowered(state.index_of(b)?);
    Ok(inner_raw(&la, &lb))
}
