use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

/// Forward/inverse plans for every length a tiling needs.
#[derive(Clone)]
pub(crate) struct Plans {
    forward: HashMap<usize, Arc<dyn Fft<f64>>>,
    inverse: HashMap<usize, Arc<dyn Fft<f64>>>,
}

impl Plans {
    pub(crate) fn new(lengths: impl IntoIterator<Item = usize>) -> Self {
        let mut planner = FftPlanner::new();
        let mut forward = HashMap::new();
        let mut inverse = HashMap::new();
        for len in lengths {
            forward.entry(len).or_insert_with(|| planner.plan_fft_forward(len));
            inverse.entry(len).or_insert_with(|| planner.plan_fft_inverse(len));
        }
        Plans { forward, inverse }
    }

    pub(crate) fn forward(&self, len: usize) -> &Arc<dyn Fft<f64>> {
        &self.forward[&len]
    }

    pub(crate) fn inverse(&self, len: usize) -> &Arc<dyn Fft<f64>> {
        &self.inverse[&len]
    }
}

impl std::fmt::Debug for Plans {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut lens: Vec<_> = self.forward.keys().collect();
        lens.sort();
        f.debug_struct("Plans").field("lengths", &lens).finish()
    }
}

/// Unnormalized 2D transform of a row-major `n x n` array.
pub(crate) fn fft2(data: &mut [Complex64], n: usize, fft: &dyn Fft<f64>, parallel: bool) {
    debug_assert_eq!(data.len(), n * n);
    rows(data, n, fft, parallel);
    let mut t = vec![Complex64::default(); n * n];
    transpose(data, &mut t, n);
    rows(&mut t, n, fft, parallel);
    transpose(&t, data, n);
}

fn rows(data: &mut [Complex64], n: usize, fft: &dyn Fft<f64>, parallel: bool) {
    let scratch_len = fft.get_inplace_scratch_len();
    if parallel {
        data.par_chunks_mut(n).for_each_init(
            || vec![Complex64::default(); scratch_len],
            |scratch, row| fft.process_with_scratch(row, scratch),
        );
    } else {
        let mut scratch = vec![Complex64::default(); scratch_len];
        fft.process_with_scratch(data, &mut scratch);
    }
}

fn transpose(src: &[Complex64], dst: &mut [Complex64], n: usize) {
    const TILE: usize = 32;
    for r0 in (0..n).step_by(TILE) {
        for c0 in (0..n).step_by(TILE) {
            for r in r0..(r0 + TILE).min(n) {
                for c in c0..(c0 + TILE).min(n) {
                    dst[c * n + r] = src[r * n + c];
                }
            }
        }
    }
}
