use std::collections::BTreeMap;

use num_complex::Complex64;

use super::occupation::Occupation;

/// Real substitution of two creation operators:
/// `a† -> a.0 a† + a.1 b†`, `b† -> b.0 a† + b.1 b†`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CreationMap {
    pub a: (f64, f64),
    pub b: (f64, f64),
}

impl CreationMap {
    /// Balanced Hadamard splitter: `a† -> (a† + b†)/√2`, `b† -> (a† - b†)/√2`.
    pub(crate) fn hadamard() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        CreationMap {
            a: (h, h),
            b: (h, -h),
        }
    }

    /// Coupling of a mode to an environment with amplitude transmissivity `tau`.
    /// At `tau = 0` the two modes swap exactly.
    pub(crate) fn loss(tau: f64) -> Self {
        let leak = (1.0 - tau * tau).max(0.0).sqrt();
        CreationMap {
            a: (tau, leak),
            b: (leak, -tau),
        }
    }
}

pub(crate) fn ln_factorials(n: usize) -> Vec<f64> {
    let mut table = Vec::with_capacity(n + 1);
    let mut acc = 0.0f64;
    table.push(0.0);
    for k in 1..=n {
        acc += (k as f64).ln();
        table.push(acc);
    }
    table
}

/// Expands every ket `|n, m⟩` on modes `(ia, ib)` as
/// `(p a† + q b†)^n (r a† + s b†)^m / sqrt(n! m!) |0⟩` and collects terms.
///
/// The caller guarantees `n + m` fits the cutoff of the target space.
pub(crate) fn apply_two_mode(
    amps: &BTreeMap<Occupation, Complex64>,
    ia: usize,
    ib: usize,
    map: CreationMap,
) -> BTreeMap<Occupation, Complex64> {
    let max_total = amps
        .keys()
        .map(|o| o.get(ia) + o.get(ib))
        .max()
        .unwrap_or(0);
    let lnf = ln_factorials(max_total);
    let (p, q) = map.a;
    let (r, s) = map.b;

    let mut out: BTreeMap<Occupation, Complex64> = BTreeMap::new();
    for (&occ, &amp) in amps {
        let n = occ.get(ia);
        let m = occ.get(ib);
        if n == 0 && m == 0 {
            *out.entry(occ).or_default() += amp;
            continue;
        }
        let total = n + m;
        let norm = -0.5 * (lnf[n] + lnf[m]);
        for j in 0..=n {
            let wa = p.powi(j as i32) * q.powi((n - j) as i32);
            if wa == 0.0 {
                continue;
            }
            let ln_bin_a = lnf[n] - lnf[j] - lnf[n - j];
            for l in 0..=m {
                let wb = r.powi(l as i32) * s.powi((m - l) as i32);
                if wb == 0.0 {
                    continue;
                }
                let ln_bin_b = lnf[m] - lnf[l] - lnf[m - l];
                let na = j + l;
                let nb = total - na;
                let mag = (ln_bin_a + ln_bin_b + norm + 0.5 * (lnf[na] + lnf[nb])).exp();
                let target = occ.with(ia, na).with(ib, nb);
                *out.entry(target).or_default() += amp * (wa * wb * mag);
            }
        }
    }
    out.retain(|_, a| a.norm_sqr() > 1e-32);
    out
}
