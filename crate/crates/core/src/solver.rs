//! Sound-soft scattering: the combined-field equation `(I/2 + D - i eta S) phi = -u_inc`
//! solved by GMRES, and evaluation of the scattered and far fields.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{dot, Curve, CurvePoint, Vec2};
use crate::kernel::{assemble_combined, DenseKernel, KernelKind};
use crate::nsform::{analyze, compress, FormHeader, SparseNSForm, Threshold};
use crate::special_fn::{hankel1_unchecked, Order};

/// Plane wave `exp(i k d . x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncidentWave {
    pub direction: Vec2,
    pub k: f64,
}

impl IncidentWave {
    pub fn new(direction: Vec2, k: f64) -> Result<Self> {
        let len = direction[0].hypot(direction[1]);
        if (len - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!("incident direction must have unit length, got {len}")));
        }
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::domain(format!("wavenumber must be positive and finite, got {k}")));
        }
        Ok(IncidentWave { direction, k })
    }

    /// Wave travelling towards polar angle `angle`.
    pub fn from_angle(angle: f64, k: f64) -> Result<Self> {
        IncidentWave::new([angle.cos(), angle.sin()], k)
    }

    pub fn eval(&self, x: Vec2) -> Complex64 {
        Complex64::from_polar(1.0, self.k * dot(self.direction, x))
    }
}

/// Samples of the incident wave at the boundary nodes `t_j = j / n`.
pub fn incident_trace(curve: &Curve, wave: &IncidentWave, n: usize) -> Vec<Complex64> {
    curve.sample(n).iter().map(|p| wave.eval(p.position)).collect()
}

/// How the boundary operator is applied inside GMRES.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolveMode {
    Dense,
    /// Nonstandard form thresholded at this relative accuracy.
    Compressed(f64),
}

/// Combined-field boundary operator, applied densely or through a compressed form.
#[derive(Debug, Clone, Copy)]
pub enum BoundaryOperator<'a> {
    Dense(&'a DenseKernel),
    Compressed(&'a SparseNSForm),
}

impl BoundaryOperator<'_> {
    pub fn n(&self) -> usize {
        match self {
            BoundaryOperator::Dense(d) => d.n,
            BoundaryOperator::Compressed(f) => f.n,
        }
    }

    fn kind(&self) -> KernelKind {
        match self {
            BoundaryOperator::Dense(d) => d.kind,
            BoundaryOperator::Compressed(f) => f.kind,
        }
    }

    pub fn mode(&self) -> SolveMode {
        match self {
            BoundaryOperator::Dense(_) => SolveMode::Dense,
            BoundaryOperator::Compressed(f) => SolveMode::Compressed(f.epsilon),
        }
    }

    /// `(I/2 + K) phi`.
    pub fn apply(&self, phi: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut out = match self {
            BoundaryOperator::Dense(d) => d.matvec(phi)?,
            BoundaryOperator::Compressed(f) => f.apply(phi)?,
        };
        out.iter_mut().zip(phi).for_each(|(o, p)| *o += 0.5 * p);
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub density: Vec<Complex64>,
    /// Relative residual `|b - A x| / |b|` before the first and after every iteration.
    pub residual_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub mode: SolveMode,
}

impl SolveResult {
    pub fn final_residual(&self) -> f64 {
        *self.residual_history.last().unwrap_or(&0.0)
    }

    /// Turns a non-converged result into [`Error::NotConverged`].
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged { iterations: self.iterations, residual: self.final_residual() })
        }
    }
}

pub const DEFAULT_MAXIT: usize = 200;

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Givens rotation zeroing `b` in `(a, b)`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    if b.norm() == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if a.norm() == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let r = a.norm().hypot(b.norm());
    let c = a.norm() / r;
    let s = (a / a.norm()) * b.conj() / r;
    (c, s)
}

/// Unrestarted GMRES from a zero initial guess with modified Gram-Schmidt.
///
/// Stops when the relative residual drops to `tol`, after `maxit` iterations,
/// or when the Krylov space stops growing (reported as not converged if the
/// residual is still above `tol`).
pub fn gmres(
    op: impl Fn(&[Complex64]) -> Result<Vec<Complex64>>,
    rhs: &[Complex64],
    tol: f64,
    maxit: usize,
) -> Result<(Vec<Complex64>, Vec<f64>, bool)> {
    let n = rhs.len();
    let beta = norm(rhs);
    if beta == 0.0 {
        return Ok((vec![Complex64::default(); n], vec![0.0], true));
    }
    let mut basis: Vec<Vec<Complex64>> = vec![rhs.iter().map(|z| z / beta).collect()];
    let mut hess: Vec<Vec<Complex64>> = Vec::new();
    let mut rotations: Vec<(f64, Complex64)> = Vec::new();
    let mut g = vec![Complex64::new(beta, 0.0)];
    let mut history = vec![1.0];
    let mut converged = false;
    for it in 0..maxit {
        let mut w = op(&basis[it])?;
        if w.len() != n {
            return Err(Error::ShapeMismatch { expected: n, got: w.len() });
        }
        let mut h = vec![Complex64::default(); it + 2];
        for (i, v) in basis.iter().enumerate() {
            h[i] = inner(v, &w);
            w.iter_mut().zip(v).for_each(|(x, y)| *x -= h[i] * y);
        }
        let wn = norm(&w);
        h[it + 1] = Complex64::from(wn);
        for (i, &(c, s)) in rotations.iter().enumerate() {
            let (a, b) = (h[i], h[i + 1]);
            h[i] = c * a + s * b;
            h[i + 1] = -s.conj() * a + c * b;
        }
        let (c, s) = givens(h[it], h[it + 1]);
        let a = h[it];
        h[it] = c * a + s * h[it + 1];
        h[it + 1] = Complex64::default();
        rotations.push((c, s));
        let gi = g[it];
        g[it] = c * gi;
        g.push(-s.conj() * gi);
        hess.push(h);
        let residual = g[it + 1].norm() / beta;
        history.push(residual);
        if residual <= tol {
            converged = true;
            break;
        }
        if wn <= 1e-14 * beta {
            break;
        }
        basis.push(w.iter().map(|z| z / wn).collect());
    }
    // Back substitution on the rotated Hessenberg matrix.
    let m = hess.len();
    let mut y = vec![Complex64::default(); m];
    for i in (0..m).rev() {
        let mut acc = g[i];
        for (jj, yj) in y.iter().enumerate().skip(i + 1) {
            acc -= hess[jj][i] * yj;
        }
        y[i] = acc / hess[i][i];
    }
    let mut x = vec![Complex64::default(); n];
    for (v, yi) in basis.iter().zip(&y) {
        x.iter_mut().zip(v).for_each(|(a, b)| *a += yi * b);
    }
    Ok((x, history, converged))
}

/// Solves `(I/2 + K) phi = -u_inc` for a combined-field operator.
pub fn solve_with(
    op: BoundaryOperator<'_>,
    curve: &Curve,
    wave: &IncidentWave,
    tol: f64,
    maxit: usize,
) -> Result<SolveResult> {
    if !(tol > 1e-12 && tol < 1e-2) {
        return Err(Error::domain(format!("GMRES tolerance must lie in (1e-12, 1e-2), got {tol}")));
    }
    if op.kind() != KernelKind::Combined {
        return Err(Error::domain(format!("scattering solves need the combined kernel, got {}", op.kind())));
    }
    let rhs: Vec<Complex64> = incident_trace(curve, wave, op.n()).iter().map(|z| -z).collect();
    let (density, residual_history, converged) = gmres(|v| op.apply(v), &rhs, tol, maxit)?;
    Ok(SolveResult { iterations: residual_history.len() - 1, density, residual_history, converged, mode: op.mode() })
}

/// Assembles the combined kernel with `eta = k` on `n` nodes and solves,
/// densely or through a compressed form.
pub fn solve_bie(
    curve: &Curve,
    wave: &IncidentWave,
    n: usize,
    mode: SolveMode,
    tol: f64,
    maxit: usize,
) -> Result<SolveResult> {
    let kernel = assemble_combined(curve, wave.k, n, wave.k)?;
    match mode {
        SolveMode::Dense => solve_with(BoundaryOperator::Dense(&kernel), curve, wave, tol, maxit),
        SolveMode::Compressed(eps) => {
            let form = compress(FormHeader::from(&kernel), &analyze(&kernel)?, Threshold::Relative(eps))?;
            drop(kernel);
            solve_with(BoundaryOperator::Compressed(&form), curve, wave, tol, maxit)
        }
    }
}

fn check_density(curve_len: usize, density: &[Complex64]) -> Result<()> {
    if density.len() != curve_len {
        return Err(Error::ShapeMismatch { expected: curve_len, got: density.len() });
    }
    Ok(())
}

/// Field values at exterior points plus the points that sit closer than one
/// wavelength to the boundary nodes, where the trapezoidal rule loses accuracy.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldEvaluation {
    pub values: Vec<Complex64>,
    pub near_boundary: Vec<usize>,
}

/// `u(x) = sum_j (dG/dn_y - i eta G)(x, y_j) phi_j |x'(t_j)| / N`.
pub fn scattered_field(
    curve: &Curve,
    density: &[Complex64],
    k: f64,
    eta: f64,
    points: &[Vec2],
) -> Result<FieldEvaluation> {
    let n = density.len();
    if n == 0 {
        return Err(Error::domain("density must not be empty"));
    }
    let nodes = curve.sample(n);
    check_density(nodes.len(), density)?;
    let h = 1.0 / n as f64;
    let wavelength = 2.0 * PI / k;
    let results: Vec<(Complex64, bool)> = points
        .par_iter()
        .map(|&x| {
            let mut u = Complex64::default();
            let mut nearest = f64::INFINITY;
            for (p, phi) in nodes.iter().zip(density) {
                let d = [x[0] - p.position[0], x[1] - p.position[1]];
                let r = d[0].hypot(d[1]);
                nearest = nearest.min(r);
                let kernel = layer_kernel(p, d, r, k, eta);
                u += kernel * phi * (p.speed * h);
            }
            (u, nearest < wavelength)
        })
        .collect();
    let near_boundary = results.iter().enumerate().filter(|(_, r)| r.1).map(|(i, _)| i).collect();
    Ok(FieldEvaluation { values: results.into_iter().map(|r| r.0).collect(), near_boundary })
}

fn layer_kernel(p: &CurvePoint, d: Vec2, r: f64, k: f64, eta: f64) -> Complex64 {
    let kr = k * r;
    let h0 = hankel1_unchecked(Order::Zero, kr);
    let h1 = hankel1_unchecked(Order::One, kr);
    let double = Complex64::new(0.0, 0.25 * k) * h1 * (dot(d, p.unit_normal) / r);
    let single = Complex64::new(0.0, 0.25) * h0;
    double - Complex64::new(0.0, eta) * single
}

/// Far-field pattern `u(x) ~ exp(ikr) / sqrt(r) u_inf(x / r)`:
/// `u_inf(xh) = e^{i pi/4} / sqrt(8 pi k) sum_j (-i k xh . n_j - i eta) e^{-i k xh . y_j} phi_j |x'(t_j)| / N`.
pub fn far_field(curve: &Curve, density: &[Complex64], k: f64, eta: f64, angles: &[f64]) -> Result<Vec<Complex64>> {
    let n = density.len();
    if n == 0 {
        return Err(Error::domain("density must not be empty"));
    }
    let nodes = curve.sample(n);
    check_density(nodes.len(), density)?;
    let h = 1.0 / n as f64;
    let prefactor = Complex64::from_polar(1.0, FRAC_PI_4) / (8.0 * PI * k).sqrt();
    Ok(angles
        .par_iter()
        .map(|&theta| {
            let xh = [theta.cos(), theta.sin()];
            let sum: Complex64 = nodes
                .iter()
                .zip(density)
                .map(|(p, phi)| {
                    let weight = Complex64::new(0.0, -k * dot(xh, p.unit_normal) - eta);
                    weight * Complex64::from_polar(1.0, -k * dot(xh, p.position)) * phi * (p.speed * h)
                })
                .sum();
            prefactor * sum
        })
        .collect())
}

/// Bistatic radar cross section `2 pi |u_inf|^2`, linear and in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rcs {
    pub linear: f64,
    pub db: f64,
}

pub fn bistatic_rcs(far: &[Complex64]) -> Vec<Rcs> {
    far.iter()
        .map(|u| {
            let linear = 2.0 * PI * u.norm_sqr();
            Rcs { linear, db: 10.0 * linear.log10() }
        })
        .collect()
}
