use std::f64::consts::PI;

use num_complex::Complex64;

use super::{AtomIndex1D, Band, Tiling};
use crate::error::{Error, Result};

/// Coefficients of a 1D transform, one array per tiling band (in
/// [`Tiling::bands`] order). Bands outside the computed set hold empty arrays.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable1D {
    n: usize,
    extended: bool,
    values: Vec<Vec<Complex64>>,
}

impl CoefficientTable1D {
    pub fn zeros(tiling: &Tiling, extended: bool) -> Self {
        let values = tiling
            .bands()
            .iter()
            .map(|b| if extended || b.admissible { vec![Complex64::default(); b.translations] } else { Vec::new() })
            .collect();
        CoefficientTable1D { n: tiling.len(), extended, values }
    }

    pub fn signal_len(&self) -> usize {
        self.n
    }

    /// Whether the table carries the extended (non-admissible) bands.
    pub fn is_extended(&self) -> bool {
        self.extended
    }

    pub fn get(&self, tiling: &Tiling, idx: AtomIndex1D) -> Option<Complex64> {
        let id = tiling.band_id(idx.j, idx.m)?;
        self.values.get(id)?.get(idx.n as usize).copied()
    }

    pub fn set(&mut self, tiling: &Tiling, idx: AtomIndex1D, value: Complex64) -> Result<()> {
        let slot = tiling
            .band_id(idx.j, idx.m)
            .and_then(|id| self.values.get_mut(id))
            .and_then(|v| v.get_mut(idx.n as usize))
            .ok_or_else(|| Error::InvalidIndex(format!("{idx:?} not in table")))?;
        *slot = value;
        Ok(())
    }

    /// Coefficients of the band at position `id` in [`Tiling::bands`].
    pub fn band(&self, id: usize) -> &[Complex64] {
        &self.values[id]
    }

    pub fn band_mut(&mut self, id: usize) -> &mut [Complex64] {
        &mut self.values[id]
    }

    /// Extended table as one vector indexed by [`Tiling::flat_index`].
    pub fn to_flat(&self) -> Vec<Complex64> {
        debug_assert!(self.extended);
        self.values.concat()
    }

    /// Inverse of [`CoefficientTable1D::to_flat`].
    pub fn from_flat(tiling: &Tiling, flat: &[Complex64]) -> Result<Self> {
        if flat.len() != tiling.extended_count() {
            return Err(Error::ShapeMismatch { expected: tiling.extended_count(), got: flat.len() });
        }
        let values = tiling
            .bands()
            .iter()
            .enumerate()
            .map(|(id, b)| flat[tiling.band_offset(id)..tiling.band_offset(id) + b.translations].to_vec())
            .collect();
        Ok(CoefficientTable1D { n: tiling.len(), extended: true, values })
    }

    /// Number of stored coefficients.
    pub fn count(&self) -> usize {
        self.values.iter().map(Vec::len).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().flatten().map(|c| c.norm_sqr()).sum()
    }

    /// All stored coefficients with their indices.
    pub fn iter<'a>(&'a self, tiling: &'a Tiling) -> impl Iterator<Item = (AtomIndex1D, Complex64)> + 'a {
        tiling.bands().iter().zip(&self.values).flat_map(|(b, v)| {
            v.iter().enumerate().map(move |(n, &c)| (AtomIndex1D { j: b.j, m: b.m, n: n as u32 }, c))
        })
    }

    fn check(&self, tiling: &Tiling) -> Result<()> {
        if self.n != tiling.len() || self.values.len() != tiling.bands().len() {
            return Err(Error::ShapeMismatch { expected: tiling.len(), got: self.n });
        }
        for (b, v) in tiling.bands().iter().zip(&self.values) {
            let expected = if self.extended || b.admissible { b.translations } else { 0 };
            if v.len() != expected {
                return Err(Error::ShapeMismatch { expected, got: v.len() });
            }
        }
        Ok(())
    }
}

fn spectrum_of(tiling: &Tiling, f: &[Complex64]) -> Result<Vec<Complex64>> {
    if f.len() != tiling.len() {
        return Err(Error::ShapeMismatch { expected: tiling.len(), got: f.len() });
    }
    let mut spec = f.to_vec();
    tiling.plans.forward(tiling.len()).process(&mut spec);
    Ok(spec)
}

/// `<f, phi_(j,m,n)>` for all `n`, given the DFT of `f`.
pub(crate) fn analyze_band(tiling: &Tiling, band: &Band, spec: &[Complex64], out: &mut [Complex64]) {
    let p = band.translations;
    out.iter_mut().for_each(|c| *c = Complex64::default());
    for &(k, psi) in band.spectrum() {
        out[k % p] += spec[k] * psi.conj();
    }
    tiling.plans.inverse(p).process(out);
    let scale = 1.0 / ((tiling.len() * p) as f64).sqrt();
    out.iter_mut().for_each(|c| *c *= scale);
}

/// Adds the DFT of `sum_n c_n phi_(j,m,n)` into `spec`.
pub(crate) fn synthesize_band(tiling: &Tiling, band: &Band, coeffs: &[Complex64], spec: &mut [Complex64]) {
    let p = band.translations;
    let mut c = coeffs.to_vec();
    tiling.plans.forward(p).process(&mut c);
    let scale = (tiling.len() as f64 / p as f64).sqrt();
    for &(k, psi) in band.spectrum() {
        spec[k] += psi * c[k % p] * scale;
    }
}

fn forward_impl(tiling: &Tiling, f: &[Complex64], extended: bool) -> Result<CoefficientTable1D> {
    let spec = spectrum_of(tiling, f)?;
    let mut table = CoefficientTable1D::zeros(tiling, extended);
    for (band, out) in tiling.bands().iter().zip(table.values.iter_mut()) {
        if !out.is_empty() {
            analyze_band(tiling, band, &spec, out);
        }
    }
    Ok(table)
}

fn adjoint_impl(tiling: &Tiling, table: &CoefficientTable1D) -> Result<Vec<Complex64>> {
    table.check(tiling)?;
    let n = tiling.len();
    let mut spec = vec![Complex64::default(); n];
    for (band, c) in tiling.bands().iter().zip(&table.values) {
        if !c.is_empty() {
            synthesize_band(tiling, band, c, &mut spec);
        }
    }
    tiling.plans.inverse(n).process(&mut spec);
    let scale = 1.0 / n as f64;
    spec.iter_mut().for_each(|c| *c *= scale);
    Ok(spec)
}

/// Coefficients of `f` in the orthonormal basis (exactly `N` of them).
pub fn forward1d(tiling: &Tiling, f: &[Complex64]) -> Result<CoefficientTable1D> {
    forward_impl(tiling, f, false)
}

/// Inverse of [`forward1d`]; also accepts an extended table but then
/// synthesizes only what the table holds.
pub fn adjoint1d(tiling: &Tiling, table: &CoefficientTable1D) -> Result<Vec<Complex64>> {
    adjoint_impl(tiling, table)
}

/// Inner products with every atom of every band, the low extended bands
/// `0 <= m < 2^j` of each scale included.
pub fn forward1d_extended(tiling: &Tiling, f: &[Complex64]) -> Result<CoefficientTable1D> {
    forward_impl(tiling, f, true)
}

/// `sum_lambda c_lambda phi_lambda` over the extended index set.
pub fn adjoint1d_extended(tiling: &Tiling, table: &CoefficientTable1D) -> Result<Vec<Complex64>> {
    if !table.extended {
        return Err(Error::domain("adjoint1d_extended needs an extended table"));
    }
    adjoint_impl(tiling, table)
}

/// Samples of the atom `phi_(j,m,n)` on the grid `t / N`.
pub fn synthesize_atom1d(tiling: &Tiling, idx: AtomIndex1D) -> Result<Vec<Complex64>> {
    let band = tiling.band(idx.j, idx.m).ok_or_else(|| Error::InvalidIndex(format!("no band for {idx:?}")))?;
    let p = band.translations;
    if idx.n as usize >= p {
        return Err(Error::InvalidIndex(format!("{idx:?}: translation must be below {p}")));
    }
    let n = tiling.len();
    let scale = (n as f64 / p as f64).sqrt();
    let mut spec = vec![Complex64::default(); n];
    for &(k, psi) in band.spectrum() {
        let shift = -2.0 * PI * ((k * idx.n as usize) % p) as f64 / p as f64;
        spec[k] = psi * Complex64::from_polar(scale, shift);
    }
    tiling.plans.inverse(n).process(&mut spec);
    spec.iter_mut().for_each(|c| *c /= n as f64);
    Ok(spec)
}
