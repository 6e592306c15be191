use std::collections::BTreeMap;

use num_complex::Complex64;

use super::occupation::{Occupation, MAX_CUTOFF, MAX_MODES};
use crate::mode::{check_distinct, ModeKind, ModeLabel};
use crate::{CpaError, Result, TRUNCATION_LIMIT};

/// A normalized pure state over labelled modes in a truncated Fock space.
///
/// Amplitudes are stored sparsely; an occupation absent from the map has
/// amplitude zero. No stored occupation exceeds `cutoff` in any mode.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    modes: Vec<ModeLabel>,
    cutoff: usize,
    amps: BTreeMap<Occupation, Complex64>,
}

fn check_layout(modes: &[ModeLabel], cutoff: usize) -> Result<()> {
    if modes.len() > MAX_MODES {
        return Err(CpaError::TooManyModes {
            max: MAX_MODES,
            got: modes.len(),
        });
    }
    if cutoff > MAX_CUTOFF {
        return Err(CpaError::CutoffTooLarge(cutoff));
    }
    check_distinct(modes)
}

impl PureState {
    /// Builds a state from `(occupation, amplitude)` pairs and normalizes it.
    /// Repeated occupations add up.
    pub fn from_amplitudes<I>(modes: Vec<ModeLabel>, cutoff: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Complex64)>,
    {
        check_layout(&modes, cutoff)?;
        let mut amps: BTreeMap<Occupation, Complex64> = BTreeMap::new();
        for (occ, amp) in terms {
            if occ.len() != modes.len() {
                return Err(CpaError::InvalidParameter(format!(
                    "occupation has {} entries for {} modes",
                    occ.len(),
                    modes.len()
                )));
            }
            if let Some(&n) = occ.iter().find(|&&n| n > cutoff) {
                return Err(CpaError::CutoffTooSmall {
                    cutoff,
                    required: n,
                });
            }
            *amps.entry(Occupation::from_slice(&occ)).or_default() += amp;
        }
        amps.retain(|_, a| *a != Complex64::new(0.0, 0.0));
        let mut state = PureState {
            modes,
            cutoff,
            amps,
        };
        state.normalize()?;
        Ok(state)
    }

    pub fn vacuum(modes: Vec<ModeLabel>, cutoff: usize) -> Result<Self> {
        let n = modes.len();
        Self::from_amplitudes(modes, cutoff, [(vec![0; n], Complex64::new(1.0, 0.0))])
    }

    /// Number state `|n_1, n_2, ...⟩`.
    pub fn fock(modes: Vec<ModeLabel>, occupation: &[usize], cutoff: usize) -> Result<Self> {
        Self::from_amplitudes(modes, cutoff, [(occupation.to_vec(), Complex64::new(1.0, 0.0))])
    }

    /// Single-mode state from its number-basis amplitudes `c_0, c_1, ...`.
    pub fn single_mode(mode: ModeLabel, cutoff: usize, amplitudes: &[Complex64]) -> Result<Self> {
        if amplitudes.len() > cutoff + 1 {
            return Err(CpaError::CutoffTooSmall {
                cutoff,
                required: amplitudes.len() - 1,
            });
        }
        Self::from_amplitudes(
            vec![mode],
            cutoff,
            amplitudes
                .iter()
                .enumerate()
                .map(|(n, &c)| (vec![n], c)),
        )
    }

    pub(crate) fn from_raw(
        modes: Vec<ModeLabel>,
        cutoff: usize,
        amps: BTreeMap<Occupation, Complex64>,
    ) -> Self {
        debug_assert!(amps.keys().all(|o| o.max_count() <= cutoff));
        PureState {
            modes,
            cutoff,
            amps,
        }
    }

    /// Tensor product of states on disjoint modes, restricted to total photon
    /// number `<= cutoff` so that every photon-number-conserving map stays
    /// exact. Fails if the discarded probability exceeds the truncation limit.
    pub fn product(factors: &[&PureState], cutoff: usize) -> Result<Self> {
        let modes: Vec<ModeLabel> = factors.iter().flat_map(|f| f.modes.iter().copied()).collect();
        check_layout(&modes, cutoff)?;

        let mut amps: BTreeMap<Occupation, Complex64> = BTreeMap::new();
        amps.insert(Occupation::default(), Complex64::new(1.0, 0.0));
        let mut offset = 0;
        for factor in factors {
            let mut next = BTreeMap::new();
            for (&occ, &amp) in &amps {
                let used = occ.total();
                for (&focc, &famp) in &factor.amps {
                    if used + focc.total() > cutoff {
                        continue;
                    }
                    let mut o = occ;
                    for i in 0..factor.modes.len() {
                        o = o.with(offset + i, focc.get(i));
                    }
                    next.insert(o, amp * famp);
                }
            }
            amps = next;
            offset += factor.modes.len();
        }

        let kept: f64 = amps.values().map(|a| a.norm_sqr()).sum();
        let full: f64 = factors.iter().map(|f| f.norm_sqr()).product();
        let lost = (full - kept).max(0.0);
        if lost > TRUNCATION_LIMIT {
            return Err(CpaError::TruncationLoss {
                cutoff,
                lost,
                limit: TRUNCATION_LIMIT,
            });
        }
        let mut state = PureState {
            modes,
            cutoff,
            amps,
        };
        state.normalize()?;
        Ok(state)
    }

    /// Normalized linear combination of states over the same modes.
    pub fn superpose(terms: &[(Complex64, &PureState)]) -> Result<Self> {
        let first = terms.first().ok_or(CpaError::ZeroNorm)?.1;
        let mut amps: BTreeMap<Occupation, Complex64> = BTreeMap::new();
        let cutoff = terms.iter().map(|(_, s)| s.cutoff).max().unwrap_or(0);
        for (w, s) in terms {
            let aligned = s.aligned_to(&first.modes)?;
            for (&o, &a) in &aligned.amps {
                *amps.entry(o).or_default() += w * a;
            }
        }
        amps.retain(|_, a| a.norm_sqr() > 0.0);
        let mut state = PureState {
            modes: first.modes.clone(),
            cutoff,
            amps,
        };
        state.normalize()?;
        Ok(state)
    }

    fn normalize(&mut self) -> Result<()> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(CpaError::ZeroNorm);
        }
        for a in self.amps.values_mut() {
            *a /= n;
        }
        Ok(())
    }

    pub fn modes(&self) -> &[ModeLabel] {
        &self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn num_terms(&self) -> usize {
        self.amps.len()
    }

    pub(crate) fn raw(&self) -> &BTreeMap<Occupation, Complex64> {
        &self.amps
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

    pub fn has_kind(&self, kind: ModeKind) -> bool {
        self.modes.iter().any(|m| m.kind == kind)
    }

    pub fn amplitude(&self, occupation: &[usize]) -> Complex64 {
        if occupation.len() != self.modes.len() || occupation.iter().any(|&n| n > self.cutoff) {
            return Complex64::new(0.0, 0.0);
        }
        self.amps
            .get(&Occupation::from_slice(occupation))
            .copied()
            .unwrap_or_default()
    }

    /// Nonzero amplitudes in a deterministic order.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, Complex64)> + '_ {
        let n = self.modes.len();
        self.amps.iter().map(move |(o, &a)| (o.to_vec(n), a))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn max_total_photons(&self) -> usize {
        self.amps.keys().map(|o| o.total()).max().unwrap_or(0)
    }

    /// The same state with its modes listed in the given order.
    pub fn aligned_to(&self, order: &[ModeLabel]) -> Result<PureState> {
        if order == self.modes.as_slice() {
            return Ok(self.clone());
        }
        if order.len() != self.modes.len() {
            return Err(CpaError::InvalidParameter(format!(
                "cannot align {} modes to {}",
                self.modes.len(),
                order.len()
            )));
        }
        let perm = order
            .iter()
            .map(|&m| self.index_of(m))
            .collect::<Result<Vec<_>>>()?;
        let amps = self.amps.iter().map(|(o, &a)| (o.select(&perm), a)).collect();
        Ok(PureState {
            modes: order.to_vec(),
            cutoff: self.cutoff,
            amps,
        })
    }

    /// `⟨self|other⟩`, matching modes by label.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        let other = other.aligned_to(&self.modes)?;
        Ok(self
            .amps
            .iter()
            .filter_map(|(o, a)| other.amps.get(o).map(|b| a.conj() * b))
            .sum())
    }

    /// `|⟨self|other⟩|^2`, insensitive to global phase.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr() / (self.norm_sqr() * other.norm_sqr()))
    }

    pub fn relabel(&self, from: ModeLabel, to: ModeLabel) -> Result<PureState> {
        let i = self.index_of(from)?;
        if from != to && self.has_mode(to) {
            return Err(CpaError::DuplicateMode(to));
        }
        let mut out = self.clone();
        out.modes[i] = to;
        Ok(out)
    }

    /// Applies `exp(i theta n)` to `mode`.
    pub fn phase_shifted(&self, mode: ModeLabel, theta: f64) -> Result<PureState> {
        let i = self.index_of(mode)?;
        let mut out = self.clone();
        for (o, a) in out.amps.iter_mut() {
            *a *= Complex64::from_polar(1.0, theta * o.get(i) as f64);
        }
        Ok(out)
    }

    /// Appends a mode in its vacuum state.
    pub(crate) fn with_vacuum_mode(&self, mode: ModeLabel) -> Result<PureState> {
        let mut modes = self.modes.clone();
        modes.push(mode);
        check_layout(&modes, self.cutoff)?;
        // the new byte is zero in every packed occupation
        Ok(PureState {
            modes,
            cutoff: self.cutoff,
            amps: self.amps.clone(),
        })
    }

    /// Probability distribution of the total photon number found in `modes`.
    pub fn count_distribution(&self, modes: &[ModeLabel]) -> Result<BTreeMap<usize, f64>> {
        let idx = modes
            .iter()
            .map(|&m| self.index_of(m))
            .collect::<Result<Vec<_>>>()?;
        let mut dist = BTreeMap::new();
        for (o, a) in &self.amps {
            let n: usize = idx.iter().map(|&i| o.get(i)).sum();
            *dist.entry(n).or_insert(0.0) += a.norm_sqr();
        }
        Ok(dist)
    }

    /// Joint photon-number distribution of `modes`.
    pub fn occupation_distribution(
        &self,
        modes: &[ModeLabel],
    ) -> Result<BTreeMap<Vec<usize>, f64>> {
        let idx = modes
            .iter()
            .map(|&m| self.index_of(m))
            .collect::<Result<Vec<_>>>()?;
        let mut dist = BTreeMap::new();
        for (o, a) in &self.amps {
            let key: Vec<usize> = idx.iter().map(|&i| o.get(i)).collect();
            *dist.entry(key).or_insert(0.0) += a.norm_sqr();
        }
        Ok(dist)
    }

    /// Keeps the amplitudes accepted by `keep` without renormalizing.
    pub(crate) fn filtered<F>(&self, mut keep: F) -> PureState
    where
        F: FnMut(&[usize]) -> bool,
    {
        let n = self.modes.len();
        let amps = self
            .amps
            .iter()
            .filter(|(o, _)| keep(&o.to_vec(n)))
            .map(|(o, a)| (*o, *a))
            .collect();
        PureState {
            modes: self.modes.clone(),
            cutoff: self.cutoff,
            amps,
        }
    }

    /// Rescales to unit norm, returning the norm squared before rescaling.
    pub(crate) fn renormalized(mut self) -> Result<(PureState, f64)> {
        let p = self.norm_sqr();
        self.normalize()?;
        Ok((self, p))
    }

    /// Applies the annihilation operator of mode `i` without renormalizing.
    pub(crate) fn lowered(&self, i: usize) -> BTreeMap<Occupation, Complex64> {
        self.amps
            .iter()
            .filter(|(o, _)| o.get(i) > 0)
            .map(|(o, &a)| {
                let n = o.get(i);
                (o.with(i, n - 1), a * (n as f64).sqrt())
            })
            .collect()
    }

    pub(crate) fn expectation_of_lowered(&self, lowered: &BTreeMap<Occupation, Complex64>) -> Complex64 {
        lowered
            .iter()
            .filter_map(|(o, b)| self.amps.get(o).map(|a| a.conj() * b))
            .sum()
    }
}

pub(crate) fn inner_raw(
    a: &BTreeMap<Occupation, Complex64>,
    b: &BTreeMap<Occupation, Complex64>,
) -> Complex64 {
    a.iter()
        .filter_map(|(o, x)| b.get(o).map(|y| x.conj() * y))
        .sum()
}
