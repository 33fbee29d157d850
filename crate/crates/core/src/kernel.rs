//! Sampled Helmholtz layer kernels on the parameter square `[0, 1)^2`.
//!
//! Row `i` is the target `s_i = i / N`, column `j` the source `t_j = j / N`;
//! the speed `|x'(t_j)|` and the quadrature weight of node `j` are folded
//! into the column.

use std::f64::consts::PI;
use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{dot, Curve, CurvePoint};
use crate::quadrature::log_corrected_weight;
use crate::special_fn::{hankel1_unchecked, Order};

const DUMP_MAGIC: &[u8; 4] = b"WADK";
const DUMP_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    /// `k G0`, the single layer kernel scaled by the wavenumber.
    Single,
    /// `G1`, the normal derivative of `G0` in the source variable.
    Double,
    /// `G1 - i eta G0`.
    Combined,
}

impl KernelKind {
    pub fn code(self) -> u8 {
        match self {
            KernelKind::Single => 0,
            KernelKind::Double => 1,
            KernelKind::Combined => 2,
        }
    }

    pub fn from_code(code: u8) -> Result<Self> {
        match code {
            0 => Ok(KernelKind::Single),
            1 => Ok(KernelKind::Double),
            2 => Ok(KernelKind::Combined),
            _ => Err(Error::Format(format!("unknown kernel kind {code}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            KernelKind::Single => "single",
            KernelKind::Double => "double",
            KernelKind::Combined => "combined",
        }
    }
}

impl std::str::FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(KernelKind::Single),
            "double" => Ok(KernelKind::Double),
            "combined" => Ok(KernelKind::Combined),
            _ => Err(Error::domain(format!("unknown kernel '{s}' (expected single, double or combined)"))),
        }
    }
}

impl std::fmt::Display for KernelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Dense `N x N` kernel matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseKernel {
    pub k: f64,
    pub n: usize,
    pub kind: KernelKind,
    /// Coupling constant; zero unless `kind` is `Combined`.
    pub eta: f64,
    values: Vec<Complex64>,
}

/// Sample count for `k`: about eight points per unit of `k`, rounded up to a power of two.
pub fn default_samples(k: f64) -> usize {
    ((8.0 * k).ceil().max(16.0) as usize).next_power_of_two()
}

impl DenseKernel {
    pub fn from_values(k: f64, n: usize, kind: KernelKind, eta: f64, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::ShapeMismatch { expected: n * n, got: values.len() });
        }
        Ok(DenseKernel { k, n, kind, eta, values })
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `y_i = sum_j K_ij f_j`.
    pub fn matvec(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        if f.len() != self.n {
            return Err(Error::ShapeMismatch { expected: self.n, got: f.len() });
        }
        Ok(self.values.par_chunks(self.n).map(|row| row.iter().zip(f).map(|(a, b)| a * b).sum()).collect())
    }

    /// `y_j = sum_i conj(K_ij) f_i`.
    pub fn matvec_adjoint(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        if f.len() != self.n {
            return Err(Error::ShapeMismatch { expected: self.n, got: f.len() });
        }
        let mut y = vec![Complex64::default(); self.n];
        for (row, fi) in self.values.chunks(self.n).zip(f) {
            for (yj, a) in y.iter_mut().zip(row) {
                *yj += a.conj() * fi;
            }
        }
        Ok(y)
    }

    /// Writes the debugging dump: header then `N^2` pairs of little-endian `f32`.
    pub fn write_dump(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        out.write_all(DUMP_MAGIC)?;
        out.write_all(&DUMP_VERSION.to_le_bytes())?;
        out.write_all(&self.k.to_le_bytes())?;
        out.write_all(&(self.n as u32).to_le_bytes())?;
        out.write_all(&[self.kind.code()])?;
        out.write_all(&self.eta.to_le_bytes())?;
        for z in &self.values {
            out.write_all(&(z.re as f32).to_le_bytes())?;
            out.write_all(&(z.im as f32).to_le_bytes())?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads a dump written by [`DenseKernel::write_dump`] (values rounded to `f32`).
    pub fn read_dump(path: impl AsRef<Path>) -> Result<Self> {
        let mut bytes = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut bytes)?;
        let mut r = bytes.as_slice();
        let mut take = |len: usize| -> Result<&[u8]> {
            if r.len() < len {
                return Err(Error::Format("truncated kernel dump".into()));
            }
            let (head, tail) = r.split_at(len);
            r = tail;
            Ok(head)
        };
        if take(4)? != DUMP_MAGIC {
            return Err(Error::Format("bad kernel dump magic".into()));
        }
        let version = u32::from_le_bytes(take(4)?.try_into().unwrap());
        if version != DUMP_VERSION {
            return Err(Error::Format(format!("unsupported kernel dump version {version}")));
        }
        let k = f64::from_le_bytes(take(8)?.try_into().unwrap());
        let n = u32::from_le_bytes(take(4)?.try_into().unwrap()) as usize;
        let kind = KernelKind::from_code(take(1)?[0])?;
        let eta = f64::from_le_bytes(take(8)?.try_into().unwrap());
        let payload = take(n * n * 8)?;
        let values = payload
            .chunks_exact(8)
            .map(|c| {
                let re = f32::from_le_bytes(c[..4].try_into().unwrap());
                let im = f32::from_le_bytes(c[4..].try_into().unwrap());
                Complex64::new(re as f64, im as f64)
            })
            .collect();
        DenseKernel::from_values(k, n, kind, eta, values)
    }
}

fn check_args(k: f64, n: usize) -> Result<()> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::domain(format!("wavenumber must be positive and finite, got {k}")));
    }
    if n < 16 || !n.is_power_of_two() {
        return Err(Error::domain(format!("sample count must be a power of two >= 16, got {n}")));
    }
    Ok(())
}

/// Chord lengths and Hankel values for all pairs `i < j`, stored by row.
struct PairTable {
    rows: Vec<Vec<(Complex64, Complex64)>>,
}

impl PairTable {
    fn new(points: &[CurvePoint], k: f64, want_h0: bool, want_h1: bool) -> Self {
        let n = points.len();
        let rows = (0..n)
            .into_par_iter()
            .map(|i| {
                let xi = points[i].position;
                ((i + 1)..n)
                    .map(|j| {
                        let xj = points[j].position;
                        let kr = k * (xi[0] - xj[0]).hypot(xi[1] - xj[1]);
                        let h0 = if want_h0 { hankel1_unchecked(Order::Zero, kr) } else { Complex64::default() };
                        let h1 = if want_h1 { hankel1_unchecked(Order::One, kr) } else { Complex64::default() };
                        (h0, h1)
                    })
                    .collect()
            })
            .collect();
        PairTable { rows }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> (Complex64, Complex64) {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.rows[a][b - a - 1]
    }
}

fn single_entry(points: &[CurvePoint], k: f64, h0: Complex64, i: usize, j: usize) -> Complex64 {
    let n = points.len();
    Complex64::new(0.0, 0.25 * k) * h0 * (points[j].speed * log_corrected_weight(i, j, n))
}

fn double_entry(points: &[CurvePoint], k: f64, h1: Complex64, i: usize, j: usize) -> Complex64 {
    let n = points.len();
    let h = 1.0 / n as f64;
    let pj = &points[j];
    if i == j {
        return Complex64::from(-pj.curvature * pj.speed * h / (4.0 * PI));
    }
    let (xi, xj) = (points[i].position, pj.position);
    let d = [xi[0] - xj[0], xi[1] - xj[1]];
    let r = d[0].hypot(d[1]);
    Complex64::new(0.0, 0.25 * k) * h1 * (dot(d, pj.unit_normal) / r * pj.speed * h)
}

fn assemble(curve: &Curve, k: f64, n: usize, kind: KernelKind, eta: f64) -> Result<DenseKernel> {
    check_args(k, n)?;
    let points = curve.sample(n);
    let table = PairTable::new(&points, k, kind != KernelKind::Double, kind != KernelKind::Single);
    let mut values = vec![Complex64::default(); n * n];
    values.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        for (j, out) in row.iter_mut().enumerate() {
            let (h0, h1) = if i == j { Default::default() } else { table.get(i, j) };
            *out = match kind {
                KernelKind::Single => single_entry(&points, k, h0, i, j),
                KernelKind::Double => double_entry(&points, k, h1, i, j),
                KernelKind::Combined => {
                    double_entry(&points, k, h1, i, j)
                        - Complex64::new(0.0, eta / k) * single_entry(&points, k, h0, i, j)
                }
            };
        }
    });
    if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::domain("kernel has non-finite entries (coincident sample points?)"));
    }
    Ok(DenseKernel { k, n, kind, eta: if kind == KernelKind::Combined { eta } else { 0.0 }, values })
}

/// `k (i/4) H0(k |x(s_i) - x(t_j)|) |x'(t_j)| w_ij` with the sixth-order
/// log-corrected trapezoidal weights; the diagonal weight is zero.
pub fn assemble_single(curve: &Curve, k: f64, n: usize) -> Result<DenseKernel> {
    assemble(curve, k, n, KernelKind::Single, 0.0)
}

/// `(i k / 4) H1(k r) ((x_i - x_j) . n_j / r) |x'(t_j)| / N` with the diagonal
/// replaced by its limit `-kappa_j |x'(t_j)| / (4 pi N)`.
pub fn assemble_double(curve: &Curve, k: f64, n: usize) -> Result<DenseKernel> {
    assemble(curve, k, n, KernelKind::Double, 0.0)
}

/// Double layer minus `i eta` times the unscaled single layer.
pub fn assemble_combined(curve: &Curve, k: f64, n: usize, eta: f64) -> Result<DenseKernel> {
    if !(eta >= 0.0) || !eta.is_finite() {
        return Err(Error::domain(format!("coupling constant must be non-negative, got {eta}")));
    }
    assemble(curve, k, n, KernelKind::Combined, eta)
}

/// Dispatches on `kind`; `eta` is only used for the combined kernel.
pub fn assemble_kernel(curve: &Curve, kind: KernelKind, k: f64, n: usize, eta: f64) -> Result<DenseKernel> {
    match kind {
        KernelKind::Single => assemble_single(curve, k, n),
        KernelKind::Double => assemble_double(curve, k, n),
        KernelKind::Combined => assemble_combined(curve, k, n, eta),
    }
}
