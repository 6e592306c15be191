use std::collections::{BTreeMap, BTreeSet, HashMap};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::occupation::Occupation;
use super::state::PureState;
use crate::mode::{check_distinct, ModeLabel};
use crate::{CpaError, Result};

/// Reduced density operator over a subset of modes.
///
/// Rows and columns are indexed by the occupations that actually carry
/// weight, sorted ascending.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    modes: Vec<ModeLabel>,
    basis: Vec<Occupation>,
    index: HashMap<Occupation, usize>,
    matrix: DMatrix<Complex64>,
}

impl DensityOperator {
    pub fn modes(&self) -> &[ModeLabel] {
        &self.modes
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> Vec<Vec<usize>> {
        let n = self.modes.len();
        self.basis.iter().map(|o| o.to_vec(n)).collect()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Matrix element `⟨row|ρ|col⟩`; zero outside the stored support.
    pub fn element(&self, row: &[usize], col: &[usize]) -> Complex64 {
        match (
            self.index.get(&Occupation::from_slice(row)),
            self.index.get(&Occupation::from_slice(col)),
        ) {
            (Some(&i), Some(&j)) => self.matrix[(i, j)],
            _ => Complex64::new(0.0, 0.0),
        }
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        if self.dim() == 0 {
            return Vec::new();
        }
        let mut ev: Vec<f64> = self
            .matrix
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> f64 {
        let s: f64 = self
            .eigenvalues()
            .into_iter()
            .filter(|&l| l > 1e-300)
            .map(|l| -l * l.log2())
            .sum();
        s.max(0.0)
    }

    pub fn probability(&self, occupation: &[usize]) -> f64 {
        self.element(occupation, occupation).re
    }

    /// Diagonal in the number basis.
    pub fn occupation_distribution(&self) -> BTreeMap<Vec<usize>, f64> {
        let n = self.modes.len();
        self.basis
            .iter()
            .enumerate()
            .map(|(i, o)| (o.to_vec(n), self.matrix[(i, i)].re))
            .collect()
    }

    /// `⟨ψ|ρ|ψ⟩` for a pure state over the same modes.
    pub fn fidelity_with(&self, psi: &PureState) -> Result<f64> {
        let psi = psi.aligned_to(&self.modes)?;
        let coeffs: Vec<(usize, Complex64)> = psi
            .raw()
            .iter()
            .filter_map(|(o, a)| self.index.get(o).map(|&i| (i, *a)))
            .collect();
        let mut f = Complex64::new(0.0, 0.0);
        for &(i, ai) in &coeffs {
            for &(j, aj) in &coeffs {
                f += ai.conj() * self.matrix[(i, j)] * aj;
            }
        }
        Ok(f.re / psi.norm_sqr())
    }

    pub(crate) fn index_of_mode(&self, mode: ModeLabel) -> Result<usize> {
        self.modes
            .iter()
            .position(|&m| m == mode)
            .ok_or(CpaError::UnknownMode(mode))
    }

    pub(crate) fn raw_basis(&self) -> &[Occupation] {
        &self.basis
    }

    pub(crate) fn raw_index(&self) -> &HashMap<Occupation, usize> {
        &self.index
    }
}

/// Partial trace of a pure state onto `keep`, listed in the given order.
pub fn reduce(joint: &PureState, keep: &[ModeLabel]) -> Result<DensityOperator> {
    if keep.is_empty() {
        return Err(CpaError::EmptySelection);
    }
    check_distinct(keep)?;
    let keep_idx = keep
        .iter()
        .map(|&m| joint.index_of(m))
        .collect::<Result<Vec<_>>>()?;
    let rest_idx: Vec<usize> = (0..joint.modes().len())
        .filter(|i| !keep_idx.contains(i))
        .collect();

    let support: BTreeSet<Occupation> = joint.raw().keys().map(|o| o.select(&keep_idx)).collect();
    let basis: Vec<Occupation> = support.into_iter().collect();
    let index: HashMap<Occupation, usize> =
        basis.iter().enumerate().map(|(i, &o)| (o, i)).collect();

    // ordered so the accumulation order, and hence rounding, is reproducible
    let mut groups: BTreeMap<Occupation, Vec<(usize, Complex64)>> = BTreeMap::new();
    for (o, &a) in joint.raw() {
        groups
            .entry(o.select(&rest_idx))
            .or_default()
            .push((index[&o.select(&keep_idx)], a));
    }

    let d = basis.len();
    let mut matrix = DMatrix::<Complex64>::zeros(d, d);
    for members in groups.values() {
        for &(i, ai) in members {
            for &(j, aj) in members {
                matrix[(i, j)] += ai * aj.conj();
            }
        }
    }
    let tr: f64 = matrix.diagonal().iter().map(|z| z.re).sum();
    if tr > 0.0 {
        matrix /= Complex64::new(tr, 0.0);
    }

    Ok(DensityOperator {
        modes: keep.to_vec(),
        basis,
        index,
        matrix,
    })
}

/// Von Neumann entropy (bits) of the reduced state of `partition`.
pub fn entanglement_entropy(joint: &PureState, partition: &[ModeLabel]) -> Result<f64> {
    Ok(reduce(joint, partition)?.entropy())
}
