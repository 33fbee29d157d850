use num_complex::Complex64;
use rayon::prelude::*;

use super::fft::fft2;
use super::{synthesize_atom1d, AtomIndex2D, Tiling};
use crate::error::{Error, Result};

/// Coefficients of one band pair `(j, m1, m2)`, row-major in `(n1, n2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Block2D {
    pub j: u32,
    pub m1: u32,
    pub m2: u32,
    pub translations: usize,
    pub values: Vec<Complex64>,
}

impl Block2D {
    pub fn get(&self, n1: usize, n2: usize) -> Complex64 {
        self.values[n1 * self.translations + n2]
    }
}

/// Coefficients in the 2D orthonormal system, blocks ordered by `(j, m1, m2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable2D {
    n: usize,
    blocks: Vec<Block2D>,
    /// Per scale: offset into `lookup` and number of bands.
    scale_offsets: Vec<(usize, usize)>,
    lookup: Vec<usize>,
}

const ABSENT: usize = usize::MAX;

impl CoefficientTable2D {
    pub fn zeros(tiling: &Tiling) -> Self {
        let mut blocks = Vec::new();
        let mut scale_offsets = Vec::new();
        let mut lookup = Vec::new();
        for j in 0..tiling.num_scales() as u32 {
            let count = tiling.scale(j).len();
            let p = 1usize << j;
            scale_offsets.push((lookup.len(), count));
            for m1 in 0..count as u32 {
                for m2 in 0..count as u32 {
                    if tiling.is_admissible_2d(j, m1, m2) {
                        lookup.push(blocks.len());
                        blocks.push(Block2D { j, m1, m2, translations: p, values: vec![Complex64::default(); p * p] });
                    } else {
                        lookup.push(ABSENT);
                    }
                }
            }
        }
        CoefficientTable2D { n: tiling.len(), blocks, scale_offsets, lookup }
    }

    pub fn signal_len(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Block2D] {
        &self.blocks
    }

    pub fn blocks_mut(&mut self) -> &mut [Block2D] {
        &mut self.blocks
    }

    pub fn block_id(&self, j: u32, m1: u32, m2: u32) -> Option<usize> {
        let &(offset, count) = self.scale_offsets.get(j as usize)?;
        if m1 as usize >= count || m2 as usize >= count {
            return None;
        }
        let id = self.lookup[offset + m1 as usize * count + m2 as usize];
        (id != ABSENT).then_some(id)
    }

    pub fn get(&self, idx: AtomIndex2D) -> Option<Complex64> {
        let b = &self.blocks[self.block_id(idx.j, idx.m1, idx.m2)?];
        let p = b.translations;
        if idx.n1 as usize >= p || idx.n2 as usize >= p {
            return None;
        }
        Some(b.get(idx.n1 as usize, idx.n2 as usize))
    }

    pub fn count(&self) -> usize {
        self.blocks.iter().map(|b| b.values.len()).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.blocks.iter().flat_map(|b| &b.values).map(|c| c.norm_sqr()).sum()
    }

    /// All coefficients with their indices, in block order.
    pub fn iter(&self) -> impl Iterator<Item = (AtomIndex2D, Complex64)> + '_ {
        self.blocks.iter().flat_map(|b| {
            let p = b.translations;
            b.values.iter().enumerate().map(move |(i, &c)| {
                let idx = AtomIndex2D { j: b.j, m1: b.m1, m2: b.m2, n1: (i / p) as u32, n2: (i % p) as u32 };
                (idx, c)
            })
        })
    }
}

/// Coefficients of the row-major `N x N` array `f` (entry `f[t1 N + t2]`
/// sampled at `(t1 / N, t2 / N)`) against every 2D atom.
pub fn forward2d(tiling: &Tiling, f: &[Complex64]) -> Result<CoefficientTable2D> {
    let n = tiling.len();
    if f.len() != n * n {
        return Err(Error::ShapeMismatch { expected: n * n, got: f.len() });
    }
    let mut spec = f.to_vec();
    fft2(&mut spec, n, tiling.plans.forward(n).as_ref(), true);
    let mut table = CoefficientTable2D::zeros(tiling);
    table.blocks.par_iter_mut().for_each(|block| {
        let p = block.translations;
        let s1 = tiling.band(block.j, block.m1).expect("band exists").spectrum();
        let s2 = tiling.band(block.j, block.m2).expect("band exists").spectrum();
        let g = &mut block.values;
        for &(k1, a) in s1 {
            let row = &spec[k1 * n..(k1 + 1) * n];
            let out = &mut g[(k1 % p) * p..(k1 % p + 1) * p];
            let a = a.conj();
            for &(k2, b) in s2 {
                out[k2 % p] += row[k2] * a * b.conj();
            }
        }
        fft2(g, p, tiling.plans.inverse(p).as_ref(), false);
        let scale = 1.0 / (n * p) as f64;
        g.iter_mut().for_each(|c| *c *= scale);
    });
    Ok(table)
}

/// `sum_mu c_mu Phi_mu` as a row-major `N x N` array; inverse of [`forward2d`].
pub fn adjoint2d(tiling: &Tiling, table: &CoefficientTable2D) -> Result<Vec<Complex64>> {
    let n = tiling.len();
    if table.n != n || table.blocks.len() != CoefficientTable2D::zeros(tiling).blocks.len() {
        return Err(Error::ShapeMismatch { expected: n, got: table.n });
    }
    let transformed: Vec<Vec<Complex64>> = table
        .blocks
        .par_iter()
        .map(|block| {
            let mut c = block.values.clone();
            fft2(&mut c, block.translations, tiling.plans.forward(block.translations).as_ref(), false);
            c
        })
        .collect();
    let mut spec = vec![Complex64::default(); n * n];
    for (block, c) in table.blocks.iter().zip(&transformed) {
        let p = block.translations;
        if c.len() != p * p {
            return Err(Error::ShapeMismatch { expected: p * p, got: c.len() });
        }
        let s1 = tiling.band(block.j, block.m1).expect("band exists").spectrum();
        let s2 = tiling.band(block.j, block.m2).expect("band exists").spectrum();
        let scale = n as f64 / p as f64;
        for &(k1, a) in s1 {
            let row = &mut spec[k1 * n..(k1 + 1) * n];
            let crow = &c[(k1 % p) * p..(k1 % p + 1) * p];
            let a = a * scale;
            for &(k2, b) in s2 {
                row[k2] += a * b * crow[k2 % p];
            }
        }
    }
    fft2(&mut spec, n, tiling.plans.inverse(n).as_ref(), true);
    let scale = 1.0 / (n * n) as f64;
    spec.iter_mut().for_each(|c| *c *= scale);
    Ok(spec)
}

/// Samples of `phi_(j,m1,n1)(x1) phi_(j,m2,n2)(x2)` as a row-major `N x N` array.
pub fn synthesize_atom2d(tiling: &Tiling, idx: AtomIndex2D) -> Result<Vec<Complex64>> {
    if !tiling.is_admissible_2d(idx.j, idx.m1, idx.m2) {
        return Err(Error::InvalidIndex(format!("{idx:?} is not in the 2D system")));
    }
    let a = synthesize_atom1d(tiling, idx.row())?;
    let b = synthesize_atom1d(tiling, idx.col())?;
    Ok(a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect())
}
