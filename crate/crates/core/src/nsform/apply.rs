use num_complex::Complex64;
use rayon::prelude::*;

use super::SparseNSForm;
use crate::error::{Error, Result};
use crate::wave_atom::{adjoint1d_extended, forward1d_extended, AtomIndex2D, CoefficientTable1D, Tiling};

/// Kept coefficients grouped by output atom `lambda1`, in compressed-row layout
/// over the flat extended 1D index.
#[derive(Debug, Clone, Default)]
pub(crate) struct RowMatrix {
    row_start: Vec<usize>,
    cols: Vec<u32>,
    values: Vec<Complex64>,
}

impl RowMatrix {
    pub(crate) fn new(tiling: &Tiling, entries: &[(AtomIndex2D, Complex64)]) -> Self {
        let rows = tiling.extended_count();
        let flat = |j, m, n| tiling.flat_index(j, m, n).expect("entry index validated");
        let mut counts = vec![0usize; rows + 1];
        let keyed: Vec<(usize, u32, Complex64)> = entries
            .iter()
            .map(|(idx, v)| (flat(idx.j, idx.m1, idx.n1), flat(idx.j, idx.m2, idx.n2) as u32, *v))
            .collect();
        for &(r, _, _) in &keyed {
            counts[r + 1] += 1;
        }
        for r in 0..rows {
            counts[r + 1] += counts[r];
        }
        let row_start = counts.clone();
        let mut cursor = counts;
        let mut cols = vec![0u32; keyed.len()];
        let mut values = vec![Complex64::default(); keyed.len()];
        for (r, c, v) in keyed {
            cols[cursor[r]] = c;
            values[cursor[r]] = v;
            cursor[r] += 1;
        }
        RowMatrix { row_start, cols, values }
    }

    fn multiply(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.row_start.len() - 1)
            .into_par_iter()
            .with_min_len(256)
            .map(|r| {
                let range = self.row_start[r]..self.row_start[r + 1];
                self.cols[range.clone()].iter().zip(&self.values[range]).map(|(&c, v)| v * x[c as usize]).sum()
            })
            .collect()
    }

    fn multiply_adjoint(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::default(); x.len()];
        for (r, xr) in x.iter().enumerate() {
            let range = self.row_start[r]..self.row_start[r + 1];
            for (&c, v) in self.cols[range.clone()].iter().zip(&self.values[range]) {
                y[c as usize] += v.conj() * xr;
            }
        }
        y
    }
}

impl SparseNSForm {
    fn check_len(&self, f: &[Complex64]) -> Result<()> {
        if f.len() != self.n {
            return Err(Error::ShapeMismatch { expected: self.n, got: f.len() });
        }
        Ok(())
    }

    /// Applies the compressed operator: extended forward transform, sparse
    /// coefficient product, extended adjoint transform.
    pub fn apply(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(f)?;
        let t = &self.tiling;
        let fc = forward1d_extended(t, f)?.to_flat();
        let g = self.rows.multiply(&fc);
        adjoint1d_extended(t, &CoefficientTable1D::from_flat(t, &g)?)
    }

    /// Applies the adjoint of the compressed operator.
    pub fn apply_adjoint(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(f)?;
        let t = &self.tiling;
        let fc = forward1d_extended(t, f)?.to_flat();
        let g = self.rows.multiply_adjoint(&fc);
        adjoint1d_extended(t, &CoefficientTable1D::from_flat(t, &g)?)
    }
}
