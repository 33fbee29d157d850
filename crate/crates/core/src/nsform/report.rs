use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::SparseNSForm;
use crate::error::{Error, Result};
use crate::kernel::DenseKernel;

const POWER_ITERATIONS: usize = 10;

/// Relative operator error of a compressed form against its dense kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L2ErrorEstimate {
    /// Max over random complex Gaussian `f` of `|(K - K~) f| / |K f|`.
    pub random_max: f64,
    /// Power-iteration estimate of `|K - K~|_2 / |K|_2`.
    pub power: f64,
}

fn gaussian_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..n).map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))).collect()
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn sub(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn power_norm(
    n: usize,
    rng: &mut ChaCha8Rng,
    op: impl Fn(&[Complex64]) -> Result<Vec<Complex64>>,
    adj: impl Fn(&[Complex64]) -> Result<Vec<Complex64>>,
) -> Result<f64> {
    let mut v = gaussian_vector(n, rng);
    let mut estimate = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let nv = norm(&v);
        if nv == 0.0 {
            return Ok(0.0);
        }
        v.iter_mut().for_each(|z| *z /= nv);
        let w = op(&v)?;
        estimate = norm(&w);
        v = adj(&w)?;
    }
    Ok(estimate)
}

/// Estimates the relative `l2` operator error of `form` with `trials` random
/// test vectors, plus a short power iteration on the difference operator.
pub fn estimate_l2_error(
    form: &SparseNSForm,
    kernel: &DenseKernel,
    trials: usize,
    seed: u64,
) -> Result<L2ErrorEstimate> {
    if trials < 5 {
        return Err(Error::domain(format!("need at least 5 trials, got {trials}")));
    }
    if kernel.n != form.n {
        return Err(Error::ShapeMismatch { expected: form.n, got: kernel.n });
    }
    let n = form.n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random_max: f64 = 0.0;
    for _ in 0..trials {
        let f = gaussian_vector(n, &mut rng);
        let dense = kernel.matvec(&f)?;
        let diff = norm(&sub(&dense, &form.apply(&f)?));
        let scale = norm(&dense);
        random_max = random_max.max(if scale > 0.0 { diff / scale } else { diff });
    }
    let diff_norm = power_norm(
        n,
        &mut rng,
        |v| Ok(sub(&kernel.matvec(v)?, &form.apply(v)?)),
        |v| Ok(sub(&kernel.matvec_adjoint(v)?, &form.apply_adjoint(v)?)),
    )?;
    let dense_norm = power_norm(n, &mut rng, |v| kernel.matvec(v), |v| kernel.matvec_adjoint(v))?;
    let power = if dense_norm > 0.0 { diff_norm / dense_norm } else { diff_norm };
    Ok(L2ErrorEstimate { random_max, power })
}

/// One row of the sparsity tables.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsityReport {
    pub k: f64,
    pub n: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub nnz: usize,
    pub per_row: f64,
    /// Random-vector estimate (the reported statistic).
    pub eps_l2: f64,
    /// Power-iteration estimate.
    pub eps_l2_power: f64,
}

impl SparsityReport {
    pub fn new(form: &SparseNSForm, estimate: L2ErrorEstimate) -> Self {
        SparsityReport {
            k: form.k,
            n: form.n,
            epsilon: form.epsilon,
            delta: form.delta,
            nnz: form.nnz(),
            per_row: form.per_row(),
            eps_l2: estimate.random_max,
            eps_l2_power: estimate.power,
        }
    }

    pub fn measure(form: &SparseNSForm, kernel: &DenseKernel, trials: usize, seed: u64) -> Result<Self> {
        Ok(SparsityReport::new(form, estimate_l2_error(form, kernel, trials, seed)?))
    }
}

/// Square bitmap of kept coefficients, `true` = kept.
///
/// Block `(j, m1, m2)` occupies rows `2^j m1 ..` and columns `2^j m2 ..` with
/// pixel `(n1, n2)` inside it, so low frequencies sit in the top-left corner
/// and each scale fills the L-shaped region around the coarser ones.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsityPattern {
    pub size: usize,
    pixels: Vec<bool>,
}

impl SparsityPattern {
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.pixels[row * self.size + col]
    }

    pub fn count(&self) -> usize {
        self.pixels.iter().filter(|&&p| p).count()
    }

    /// Binary PGM (P5), kept coefficients black on white.
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.size, self.size).into_bytes();
        out.extend(self.pixels.iter().map(|&p| if p { 0u8 } else { 255u8 }));
        out
    }
}

/// Pixel position of every 2D atom, see [`SparsityPattern`].
pub fn pattern_position(j: u32, m1: u32, m2: u32, n1: u32, n2: u32) -> (usize, usize) {
    let p = 1usize << j;
    (p * m1 as usize + n1 as usize, p * m2 as usize + n2 as usize)
}

pub fn sparsity_pattern(form: &SparseNSForm) -> SparsityPattern {
    let size = form.n;
    let mut pixels = vec![false; size * size];
    for (idx, _) in form.entries() {
        let (r, c) = pattern_position(idx.j, idx.m1, idx.m2, idx.n1, idx.n2);
        pixels[r * size + c] = true;
    }
    SparsityPattern { size, pixels }
}
