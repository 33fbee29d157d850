//! Nonstandard form of a kernel in the 2D wave atom basis: analysis,
//! thresholding, sparse storage and the three-step fast apply.

mod apply;
mod io;
mod report;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::{DenseKernel, KernelKind};
use crate::wave_atom::{forward2d, AtomIndex2D, CoefficientTable2D, Tiling};

pub use report::{
    estimate_l2_error, pattern_position, sparsity_pattern, L2ErrorEstimate, SparsityPattern, SparsityReport,
};

/// How the discard budget is measured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    /// Discarded energy at most `eps^2` times the total coefficient energy.
    Relative(f64),
    /// Discarded energy at most `eps^2`.
    Absolute(f64),
}

impl Threshold {
    pub fn epsilon(self) -> f64 {
        match self {
            Threshold::Relative(e) | Threshold::Absolute(e) => e,
        }
    }
}

/// Coefficients `<K, Phi_mu>` of a dense kernel in the 2D basis.
pub fn analyze(kernel: &DenseKernel) -> Result<CoefficientTable2D> {
    let tiling = Tiling::new(kernel.n)?;
    forward2d(&tiling, kernel.values())
}

/// A thresholded nonstandard form.
#[derive(Debug, Clone)]
pub struct SparseNSForm {
    pub k: f64,
    pub n: usize,
    pub kind: KernelKind,
    pub eta: f64,
    /// Requested accuracy (0 for the exact form).
    pub epsilon: f64,
    /// Smallest kept modulus.
    pub delta: f64,
    /// `l2` norm of the full coefficient set.
    pub total_norm: f64,
    entries: Vec<(AtomIndex2D, Complex64)>,
    tiling: Tiling,
    rows: apply::RowMatrix,
}

impl PartialEq for SparseNSForm {
    fn eq(&self, other: &Self) -> bool {
        self.k.to_bits() == other.k.to_bits()
            && self.n == other.n
            && self.kind == other.kind
            && self.eta.to_bits() == other.eta.to_bits()
            && self.epsilon.to_bits() == other.epsilon.to_bits()
            && self.delta.to_bits() == other.delta.to_bits()
            && self.total_norm.to_bits() == other.total_norm.to_bits()
            && self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|((a, x), (b, y))| a == b && x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits())
    }
}

/// Kernel metadata carried into a compressed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormHeader {
    pub k: f64,
    pub kind: KernelKind,
    pub eta: f64,
}

impl From<&DenseKernel> for FormHeader {
    fn from(kernel: &DenseKernel) -> Self {
        FormHeader { k: kernel.k, kind: kernel.kind, eta: kernel.eta }
    }
}

impl SparseNSForm {
    /// Builds a form from explicit entries. Entries are sorted by block and translation.
    #[allow(clippy::too_many_arguments)]
    pub fn from_entries(
        header: FormHeader,
        n: usize,
        epsilon: f64,
        delta: f64,
        total_norm: f64,
        mut entries: Vec<(AtomIndex2D, Complex64)>,
    ) -> Result<Self> {
        let tiling = Tiling::new(n)?;
        for (idx, _) in &entries {
            let p = 1u32 << idx.j;
            if !tiling.is_admissible_2d(idx.j, idx.m1, idx.m2) || idx.n1 >= p || idx.n2 >= p {
                return Err(Error::InvalidIndex(format!("{idx:?} is not a 2D atom for N = {n}")));
            }
        }
        entries.sort_by_key(|(idx, _)| *idx);
        let rows = apply::RowMatrix::new(&tiling, &entries);
        Ok(SparseNSForm {
            k: header.k,
            n,
            kind: header.kind,
            eta: header.eta,
            epsilon,
            delta,
            total_norm,
            entries,
            tiling,
            rows,
        })
    }

    /// Keeps every coefficient (`delta = 0`); applies the kernel exactly.
    pub fn exact(header: FormHeader, coeffs: &CoefficientTable2D) -> Result<Self> {
        let total_norm = coeffs.norm_sqr().sqrt();
        SparseNSForm::from_entries(header, coeffs.signal_len(), 0.0, 0.0, total_norm, coeffs.iter().collect())
    }

    pub fn entries(&self) -> &[(AtomIndex2D, Complex64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Kept coefficients per row, `nnz / N`.
    pub fn per_row(&self) -> f64 {
        self.entries.len() as f64 / self.n as f64
    }

    pub fn tiling(&self) -> &Tiling {
        &self.tiling
    }
}

/// Result of the sorted-tail threshold search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdChoice {
    /// Smallest kept modulus (0 when nothing is kept).
    pub delta: f64,
    /// Number of discarded coefficients.
    pub discarded: usize,
    /// Energy of the discarded coefficients.
    pub discarded_energy: f64,
}

/// Largest threshold whose discarded tail (all moduli strictly below it) fits
/// in `budget`. Moduli equal to the threshold are kept.
pub fn choose_threshold(magnitudes: &[f64], budget: f64) -> ThresholdChoice {
    let mut sorted = magnitudes.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut energy = 0.0;
    let mut p = 0;
    while p < sorted.len() && energy + sorted[p] * sorted[p] <= budget {
        energy += sorted[p] * sorted[p];
        p += 1;
    }
    if p == sorted.len() {
        return ThresholdChoice { delta: 0.0, discarded: p, discarded_energy: energy };
    }
    // Moduli tied with the first kept one are kept as well.
    while p > 0 && sorted[p - 1] == sorted[p] {
        p -= 1;
        energy -= sorted[p] * sorted[p];
    }
    ThresholdChoice { delta: sorted[p], discarded: p, discarded_energy: energy.max(0.0) }
}

/// Thresholds `coeffs` to the sparsest form whose discarded energy fits the budget.
pub fn compress(header: FormHeader, coeffs: &CoefficientTable2D, threshold: Threshold) -> Result<SparseNSForm> {
    let eps = threshold.epsilon();
    match threshold {
        Threshold::Relative(e) if !(e > 0.0 && e < 1.0) => {
            return Err(Error::domain(format!("relative accuracy must lie in (0, 1), got {e}")));
        }
        Threshold::Absolute(e) if !(e > 0.0 && e.is_finite()) => {
            return Err(Error::domain(format!("absolute accuracy must be positive, got {e}")));
        }
        _ => {}
    }
    let total_sqr = coeffs.norm_sqr();
    let total_norm = total_sqr.sqrt();
    let budget = match threshold {
        Threshold::Relative(e) => e * e * total_sqr,
        Threshold::Absolute(e) => e * e,
    };
    let magnitudes: Vec<f64> = coeffs.iter().map(|(_, c)| c.norm()).collect();
    let choice = choose_threshold(&magnitudes, budget);
    let entries: Vec<_> = if choice.discarded == magnitudes.len() {
        Vec::new()
    } else {
        coeffs.iter().filter(|(_, c)| c.norm() >= choice.delta).collect()
    };
    SparseNSForm::from_entries(header, coeffs.signal_len(), eps, choice.delta, total_norm, entries)
}
