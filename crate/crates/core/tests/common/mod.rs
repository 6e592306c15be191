//! Independent oracles and generators shared by the integration tests.

#![allow(dead_code)]

pub mod props;

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use cpa_core::fock::PureState;
use cpa_core::{AbsorberSpec, ModeLabel};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

type Poly = HashMap<Vec<usize>, Complex64>;

fn poly_mul_linear(p: &Poly, row: &[Complex64]) -> Poly {
    let mut out = Poly::new();
    for (exps, &coef) in p {
        for (j, &u) in row.iter().enumerate() {
            if u == c(0.0, 0.0) {
                continue;
            }
            let mut e = exps.clone();
            e[j] += 1;
            *out.entry(e).or_default() += coef * u;
        }
    }
    out
}

/// Pushes a ket through a linear map of creation operators by expanding
/// `Π (Σ_j U[i][j] b_j†)^{n_i} / √(n_i!)` term by term.
///
/// `rows[i]` is the image of input mode `i`; the result lists amplitudes over
/// the output modes, one entry per occupation tuple.
pub fn push_through(terms: &[(Vec<usize>, Complex64)], rows: &[Vec<Complex64>]) -> Poly {
    let width = rows[0].len();
    let mut total = Poly::new();
    for (occ, amp) in terms {
        let norm: f64 = occ.iter().map(|&n| factorial(n)).product::<f64>().sqrt();
        let mut p = Poly::new();
        p.insert(vec![0; width], *amp / norm);
        for (i, &n) in occ.iter().enumerate() {
            for _ in 0..n {
                p = poly_mul_linear(&p, &rows[i]);
            }
        }
        for (e, coef) in p {
            let ket = coef * e.iter().map(|&n| factorial(n)).product::<f64>().sqrt();
            *total.entry(e).or_default() += ket;
        }
    }
    total.retain(|_, a| a.norm() > 1e-15);
    total
}

fn matmul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    a.iter()
        .map(|row| {
            (0..b[0].len())
                .map(|j| row.iter().enumerate().map(|(k, &x)| x * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Creation-operator images of `(K, -K)` over `(K, -K, ENV)` for the whole
/// splitter, absorber, splitter chain, built from 3x3 matrices.
pub fn pipeline_rows(absorber: &AbsorberSpec) -> Vec<Vec<Complex64>> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = c(0.0, 0.0);
    let r = |x: f64| c(x, 0.0);
    // (K, -K, ENV) -> (C, S, ENV)
    let split = vec![vec![r(h), r(h), z], vec![r(h), r(-h), z], vec![z, z, r(1.0)]];
    let tau = absorber.tau_c();
    let rho = (1.0 - tau * tau).max(0.0).sqrt();
    let coupled = if absorber.swap_roles() { 1 } else { 0 };
    let mut channel = vec![vec![r(1.0), z, z], vec![z, r(1.0), z], vec![z, z, r(1.0)]];
    channel[coupled][coupled] = r(tau);
    channel[coupled][2] = r(rho);
    channel[2][coupled] = r(rho);
    channel[2][2] = r(-tau);
    // (C, S, ENV) -> (K, -K, ENV)
    let join = split.clone();
    let full = matmul(&matmul(&split, &channel), &join);
    full.into_iter().take(2).collect()
}

/// Largest amplitude mismatch between an engine state over
/// `(K, -K, ENV_C)` and an oracle polynomial.
pub fn max_mismatch(state: &PureState, oracle: &Poly) -> f64 {
    let aligned = state
        .aligned_to(&[ModeLabel::K, ModeLabel::MINUS_K, ModeLabel::ENV_C])
        .unwrap();
    let mut worst: f64 = 0.0;
    for (occ, a) in aligned.terms() {
        let o = oracle.get(&occ).copied().unwrap_or_default();
        worst = worst.max((a - o).norm());
    }
    for (occ, o) in oracle {
        worst = worst.max((aligned.amplitude(occ) - o).norm());
    }
    worst
}

/// Paper-style NOON decomposition over `(C, S)`, real amplitudes.
pub fn noon_closed_form(n: usize, delta_theta: f64) -> Vec<(Vec<usize>, Complex64)> {
    let binom = |n: usize, k: usize| factorial(n) / (factorial(k) * factorial(n - k));
    (0..=n)
        .map(|m| {
            let amp = 2f64.powf(-(n as f64 - 1.0) / 2.0)
                * binom(n, m).sqrt()
                * ((PI * m as f64 + delta_theta) / 2.0).cos();
            (vec![n - m, m], c(amp, 0.0))
        })
        .collect()
}

/// Duan parameter of two modes from a closed form for product squeezed
/// inputs after the splitter.
pub fn s_sq(xk: f64, xmk: f64, pk: f64, pmk: f64) -> f64 {
    (2.0 * xk).cosh() + (2.0 * xmk).cosh() + pk.cos() * (2.0 * xk).sinh() - pmk.cos() * (2.0 * xmk).sinh()
}

/// Random normalized two-mode kets with at most `max_n` photons in total.
pub fn travelling_ket(max_n: usize) -> impl Strategy<Value = Vec<(Vec<usize>, Complex64)>> {
    let slots: Vec<(usize, usize)> = (0..=max_n)
        .flat_map(|t| (0..=t).map(move |k| (k, t - k)))
        .collect();
    let n = slots.len();
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n).prop_filter_map("zero ket", move |raw| {
        let norm: f64 = raw.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
        (norm > 1e-3).then(|| {
            slots
                .iter()
                .zip(&raw)
                .map(|(&(a, b), &(re, im))| (vec![a, b], c(re / norm, im / norm)))
                .collect()
        })
    })
}

pub fn to_state(terms: &[(Vec<usize>, Complex64)], cutoff: usize) -> PureState {
    PureState::from_amplitudes(vec![ModeLabel::K, ModeLabel::MINUS_K], cutoff, terms.iter().cloned()).unwrap()
}

pub fn absorber() -> impl Strategy<Value = AbsorberSpec> {
    (-0.5f64..=0.0, any::<bool>())
        .prop_map(|(r, swap)| AbsorberSpec::new(r).unwrap().with_swapped_roles(swap))
}

/// Records the outcome of one acceptance criterion.
pub struct Ledger {
    lines: Vec<(usize, bool, String)>,
}

impl Ledger {
    pub fn new() -> Self {
        Ledger { lines: Vec::new() }
    }

    pub fn record(&mut self, id: usize, title: &str, outcome: Result<String, String>) {
        let (pass, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        println!(
            "criterion {id:>2}: {} {title} ({detail})",
            if pass { "PASS" } else { "FAIL" }
        );
        self.lines.push((id, pass, title.to_string()));
    }

    pub fn failures(&self) -> Vec<usize> {
        self.lines.iter().filter(|l| !l.1).map(|l| l.0).collect()
    }
}

/// `Ok` with the worst error when it stays below `tol`.
pub fn within(worst: f64, tol: f64) -> Result<String, String> {
    if worst <= tol {
        Ok(format!("max error {worst:.2e} <= {tol:.0e}"))
    } else {
        Err(format!("max error {worst:.2e} > {tol:.0e}"))
    }
}
