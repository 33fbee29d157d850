//! Shared fixtures for the benchmarks.

use num_complex::Complex64;
use waveatom::kernel::{assemble_kernel, default_samples};
use waveatom::nsform::{analyze, compress};
use waveatom::{Curve, DenseKernel, FormHeader, KernelKind, SparseNSForm, Threshold};

/// Deterministic complex test signal.
pub fn signal(len: usize) -> Vec<Complex64> {
    (0..len).map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos())).collect()
}

/// Kite kernel at the default sampling and its compressed form.
pub fn kite_operator(kind: KernelKind, k: f64, eps: f64) -> (DenseKernel, SparseNSForm) {
    let kernel = assemble_kernel(&Curve::kite(), kind, k, default_samples(k), k).expect("kernel assembly");
    let coeffs = analyze(&kernel).expect("analysis");
    let form = compress(FormHeader::from(&kernel), &coeffs, Threshold::Relative(eps)).expect("compression");
    (kernel, form)
}
