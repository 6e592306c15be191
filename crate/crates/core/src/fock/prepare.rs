use num_complex::Complex64;

use super::state::PureState;
use crate::mode::ModeLabel;
use crate::{CpaError, Result, TRUNCATION_LIMIT};

/// Number-basis amplitudes of the squeezed coherent state `S(ζ) D(α) |0⟩`,
/// `ζ = ξ e^{iφ}`, up to and including `cutoff`, without renormalization.
///
/// Uses `S D(α) = D(β) S` with `β = α cosh ξ - α* e^{iφ} sinh ξ` and the
/// annihilation condition `(μ(a - β) + ν(a† - β*)) |ψ⟩ = 0`,
/// `μ = cosh ξ`, `ν = e^{iφ} sinh ξ`.
pub fn squeezed_coherent_amplitudes(alpha: Complex64, xi: f64, phi: f64, cutoff: usize) -> Vec<Complex64> {
    let (xi, phi) = if xi < 0.0 { (-xi, phi + std::f64::consts::PI) } else { (xi, phi) };
    let mu = xi.cosh();
    let nu = Complex64::from_polar(xi.sinh(), phi);
    let beta = alpha * mu - alpha.conj() * nu;
    let rot = Complex64::from_polar(xi.tanh(), phi);

    let c0 = (-(beta.norm_sqr()) / 2.0 - beta.conj() * beta.conj() * rot / 2.0).exp() / mu.sqrt();
    let drive = beta * mu + beta.conj() * nu;
    let mut amps = Vec::with_capacity(cutoff + 1);
    amps.push(c0);
    for n in 0..cutoff {
        let prev = if n == 0 { Complex64::new(0.0, 0.0) } else { amps[n - 1] };
        let next = (drive * amps[n] - nu * (n as f64).sqrt() * prev) / (mu * ((n + 1) as f64).sqrt());
        amps.push(next);
    }
    amps
}

fn checked_single_mode(mode: ModeLabel, cutoff: usize, amps: &[Complex64]) -> Result<PureState> {
    let kept: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let lost = (1.0 - kept).max(0.0);
    if lost > TRUNCATION_LIMIT || !kept.is_finite() {
        return Err(CpaError::TruncationLoss {
            cutoff,
            lost,
            limit: TRUNCATION_LIMIT,
        });
    }
    PureState::single_mode(mode, cutoff, amps)
}

/// Coherent state `|α⟩` on `mode`, renormalized after truncation.
pub fn prepare_coherent(alpha: Complex64, cutoff: usize, mode: ModeLabel) -> Result<PureState> {
    prepare_squeezed_coherent_fock(alpha, 0.0, 0.0, cutoff, mode)
}

/// Squeezed coherent state `|α, ξe^{iφ}⟩` on `mode`, renormalized after
/// truncation. Fails if the truncated tail exceeds the truncation limit.
pub fn prepare_squeezed_coherent_fock(
    alpha: Complex64,
    xi: f64,
    phi: f64,
    cutoff: usize,
    mode: ModeLabel,
) -> Result<PureState> {
    if !(alpha.re.is_finite() && alpha.im.is_finite() && xi.is_finite() && phi.is_finite()) {
        return Err(CpaError::InvalidParameter("non-finite state parameter".into()));
    }
    let amps = squeezed_coherent_amplitudes(alpha, xi, phi, cutoff);
    checked_single_mode(mode, cutoff, &amps)
}
