//! Wave atom compression of two-dimensional Helmholtz boundary integral operators.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Quadrature and series coefficients are kept exactly as tabulated.
#![allow(clippy::excessive_precision)]

pub mod error;
pub mod geometry;
pub mod kernel;
pub mod nsform;
pub mod quadrature;
pub mod solver;
pub mod special_fn;
pub mod wave_atom;

pub use error::{Error, Result};
pub use geometry::{Curve, CurvePoint, Vec2};
pub use kernel::{DenseKernel, KernelKind};
pub use nsform::{FormHeader, SparseNSForm, SparsityReport, Threshold};
pub use solver::{IncidentWave, SolveMode, SolveResult};
pub use wave_atom::{AtomIndex1D, AtomIndex2D, CoefficientTable1D, CoefficientTable2D, Tiling};
