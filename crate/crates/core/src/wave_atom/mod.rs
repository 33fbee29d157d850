//! Discrete orthonormal wave atoms on periodic grids, computed by windowing
//! the DFT of the input and wrapping each band onto `2^j` samples.
//!
//! A 1D atom of band `(j, m)` has spectrum `sqrt(N / P) psi[k] exp(-2 pi i k n / P)`
//! with `P = 2^j` and `psi[k] = e^{i a} b(k) + e^{-i a} b(-k)` for a real bell
//! `b` and phase `a = pi/2 (m + 1/2)`. Atoms are real-valued.

mod fft;
mod tiling;
mod transform1d;
mod transform2d;

use serde::{Deserialize, Serialize};

pub use tiling::{ramp, Band, Tiling};
pub use transform1d::{
    adjoint1d, adjoint1d_extended, forward1d, forward1d_extended, synthesize_atom1d, CoefficientTable1D,
};
pub use transform2d::{adjoint2d, forward2d, synthesize_atom2d, Block2D, CoefficientTable2D};

/// Index `(j, m, n)` of a 1D atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AtomIndex1D {
    pub j: u32,
    pub m: u32,
    pub n: u32,
}

/// Index `(j, m1, m2, n1, n2)` of the tensor atom `phi_(j,m1,n1)(x1) phi_(j,m2,n2)(x2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AtomIndex2D {
    pub j: u32,
    pub m1: u32,
    pub m2: u32,
    pub n1: u32,
    pub n2: u32,
}

impl AtomIndex2D {
    pub fn row(&self) -> AtomIndex1D {
        AtomIndex1D { j: self.j, m: self.m1, n: self.n1 }
    }

    pub fn col(&self) -> AtomIndex1D {
        AtomIndex1D { j: self.j, m: self.m2, n: self.n2 }
    }
}
