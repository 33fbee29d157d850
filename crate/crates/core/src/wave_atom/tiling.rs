use std::f64::consts::FRAC_PI_2;
use std::ops::Range;

use num_complex::Complex64;

use super::fft::Plans;
use crate::error::{Error, Result};

/// Smooth ramp with `ramp(x) + ramp(1 - x) = 1`, flat to third order at both ends.
pub fn ramp(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else if x > 0.5 {
        1.0 - ramp(1.0 - x)
    } else {
        x.powi(4) * (35.0 - 84.0 * x + 70.0 * x * x - 20.0 * x * x * x)
    }
}

/// One band boundary: the bell crosses over on `[position - half_width, position + half_width]`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Edge {
    position: f64,
    half_width: f64,
}

impl Edge {
    fn rising(&self, xi: f64) -> f64 {
        let x = (xi - self.position + self.half_width) / (2.0 * self.half_width);
        (FRAC_PI_2 * ramp(x)).sin()
    }

    fn falling(&self, xi: f64) -> f64 {
        let x = (xi - self.position + self.half_width) / (2.0 * self.half_width);
        (FRAC_PI_2 * ramp(1.0 - x)).sin()
    }
}

/// A frequency band `(j, m)` of the discrete basis.
#[derive(Debug, Clone)]
pub struct Band {
    pub j: u32,
    pub m: u32,
    /// Number of translates `n`, equal to `2^j`.
    pub translations: usize,
    /// Whether the band belongs to the orthonormal (non-extended) 1D basis.
    pub admissible: bool,
    /// Positive-frequency DFT bins touched by the window, transitions included.
    pub bins: Range<usize>,
    left: Edge,
    right: Edge,
    phase: f64,
    /// Sparse band spectrum on bins `0..N`, sorted by bin.
    spectrum: Vec<(usize, Complex64)>,
}

impl Band {
    /// Real bell profile at (possibly fractional) frequency `xi >= 0`.
    pub fn bell(&self, xi: f64) -> f64 {
        if xi <= self.left.position - self.left.half_width || xi >= self.right.position + self.right.half_width {
            return 0.0;
        }
        self.left.rising(xi) * self.right.falling(xi)
    }

    /// Nonzero entries `(k, psi[k])` of the band spectrum, `k` in `0..N`.
    pub fn spectrum(&self) -> &[(usize, Complex64)] {
        &self.spectrum
    }

    /// Modulation phase shared by the `+xi` and `-xi` halves of the bell.
    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// Center of the band in DFT bins.
    pub fn center(&self) -> f64 {
        0.5 * (self.left.position + self.right.position)
    }

    /// Nominal width of the band in DFT bins.
    pub fn width(&self) -> f64 {
        self.right.position - self.left.position
    }

    fn build_spectrum(&mut self, n: usize) {
        let reach = (self.right.position + self.right.half_width).ceil() as i64;
        let e = Complex64::from_polar(1.0, self.phase);
        let mut entries: Vec<(usize, Complex64)> = Vec::new();
        for xi in -reach..=reach {
            let x = xi as f64;
            let v = e * self.bell(x) + e.conj() * self.bell(-x);
            if v != Complex64::default() {
                entries.push((xi.rem_euclid(n as i64) as usize, v));
            }
        }
        entries.sort_by_key(|&(k, _)| k);
        let mut merged: Vec<(usize, Complex64)> = Vec::with_capacity(entries.len());
        for (k, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == k => last.1 += v,
                _ => merged.push((k, v)),
            }
        }
        self.spectrum = merged;
    }
}

/// The frequency layout of the discrete wave atom system for signals of length `N`.
///
/// Scale `j` covers bins `[2^(2j-1), 2^(2j+1))` with bands of width `2^(j-1)`
/// (scale 0 covers `[0, 2)` with four half-bin bands). Every scale also
/// carries extended bands `0 <= m < 2^j` that tile `[0, 2^(2j-1))` at the
/// same resolution.
#[derive(Debug, Clone)]
pub struct Tiling {
    n: usize,
    bands: Vec<Band>,
    scale_ranges: Vec<Range<usize>>,
    /// Start of each band within the flat extended coefficient vector.
    offsets: Vec<usize>,
    pub(crate) plans: Plans,
}

impl Tiling {
    pub fn new(n: usize) -> Result<Self> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::domain(format!("signal length must be a power of two >= 16, got {n}")));
        }
        let nyquist = (n / 2) as f64;
        let mut bands = Vec::new();
        let mut scale_ranges = Vec::new();
        let mut j = 0u32;
        loop {
            let width = 2f64.powi(j as i32 - 1);
            let start = if j == 0 { 0.0 } else { 2f64.powi(2 * j as i32 - 1) };
            if start >= nyquist {
                break;
            }
            let translations = 1usize << j;
            let first_admissible = if j == 0 { 0 } else { 1u32 << j };
            let count = ((1u64 << (j + 2)) as f64).min(nyquist / width) as u32;
            let first = bands.len();
            for m in 0..count {
                let lo = width * m as f64;
                let hi = width * (m + 1) as f64;
                let junction_below = j > 0 && m == first_admissible;
                let junction_above = j > 0 && m + 1 == first_admissible;
                let left = Edge { position: lo, half_width: if junction_below { width / 4.0 } else { width / 2.0 } };
                let right = Edge { position: hi, half_width: if junction_above { width / 4.0 } else { width / 2.0 } };
                let lo_bin = (lo - left.half_width).max(0.0).ceil() as usize;
                let hi_bin = ((hi + right.half_width).min(nyquist).floor() as usize) + 1;
                let mut band = Band {
                    j,
                    m,
                    translations,
                    admissible: m >= first_admissible,
                    bins: lo_bin..hi_bin,
                    left,
                    right,
                    phase: FRAC_PI_2 * (m as f64 + 0.5),
                    spectrum: Vec::new(),
                };
                band.build_spectrum(n);
                bands.push(band);
            }
            scale_ranges.push(first..bands.len());
            j += 1;
        }
        let mut lengths: Vec<usize> = scale_ranges.iter().enumerate().map(|(j, _)| 1usize << j).collect();
        lengths.push(n);
        let plans = Plans::new(lengths);
        let offsets = bands
            .iter()
            .scan(0, |acc, b: &Band| {
                let start = *acc;
                *acc += b.translations;
                Some(start)
            })
            .collect();
        Ok(Tiling { n, bands, scale_ranges, offsets, plans })
    }

    /// Signal length `N`.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn num_scales(&self) -> usize {
        self.scale_ranges.len()
    }

    /// All bands, extended ones included, ordered by `(j, m)`.
    pub fn bands(&self) -> &[Band] {
        &self.bands
    }

    /// Bands of scale `j`, indexed by `m`.
    pub fn scale(&self, j: u32) -> &[Band] {
        self.scale_ranges.get(j as usize).map_or(&[], |r| &self.bands[r.clone()])
    }

    /// Position of band `(j, m)` within [`Tiling::bands`].
    pub fn band_id(&self, j: u32, m: u32) -> Option<usize> {
        let r = self.scale_ranges.get(j as usize)?;
        let id = r.start + m as usize;
        (id < r.end).then_some(id)
    }

    pub fn band(&self, j: u32, m: u32) -> Option<&Band> {
        self.band_id(j, m).map(|id| &self.bands[id])
    }

    /// Position of `(j, m, n)` in the flat extended coefficient vector
    /// (bands in [`Tiling::bands`] order, translates contiguous).
    pub fn flat_index(&self, j: u32, m: u32, n: u32) -> Option<usize> {
        let id = self.band_id(j, m)?;
        ((n as usize) < self.bands[id].translations).then(|| self.offsets[id] + n as usize)
    }

    pub(crate) fn band_offset(&self, id: usize) -> usize {
        self.offsets[id]
    }

    pub fn admissible_bands(&self) -> impl Iterator<Item = &Band> {
        self.bands.iter().filter(|b| b.admissible)
    }

    /// First admissible band index at scale `j`.
    pub fn first_admissible(j: u32) -> u32 {
        if j == 0 {
            0
        } else {
            1 << j
        }
    }

    /// Membership in the 2D orthonormal system: all pairs at scale 0, and
    /// pairs with at least one admissible band at finer scales.
    pub fn is_admissible_2d(&self, j: u32, m1: u32, m2: u32) -> bool {
        let count = self.scale(j).len() as u32;
        if m1 >= count || m2 >= count {
            return false;
        }
        j == 0 || m1.max(m2) >= Self::first_admissible(j)
    }

    /// `max_k |sum_b |psi_b[k]|^2 - 1|` over the admissible bands.
    pub fn partition_of_unity_residual(&self) -> f64 {
        let mut energy = vec![0.0; self.n];
        for band in self.admissible_bands() {
            for &(k, v) in band.spectrum() {
                energy[k] += v.norm_sqr();
            }
        }
        energy.iter().map(|e| (e - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Number of admissible 1D coefficients (equals `N`).
    pub fn admissible_count(&self) -> usize {
        self.admissible_bands().map(|b| b.translations).sum()
    }

    /// Number of extended 1D coefficients.
    pub fn extended_count(&self) -> usize {
        self.bands.iter().map(|b| b.translations).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramp_is_complementary() {
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            assert!((ramp(x) + ramp(1.0 - x) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_lengths() {
        assert!(Tiling::new(8).is_err());
        assert!(Tiling::new(100).is_err());
        assert!(Tiling::new(0).is_err());
    }

    #[test]
    fn admissible_count_is_n() {
        for l in 4..=13 {
            let t = Tiling::new(1 << l).unwrap();
            assert_eq!(t.admissible_count(), 1 << l, "N = 2^{l}");
        }
    }

    #[test]
    fn partition_of_unity() {
        for n in [16, 32, 256, 1024, 2048] {
            let r = Tiling::new(n).unwrap().partition_of_unity_residual();
            assert!(r < 1e-12, "N = {n}: {r}");
        }
    }

    #[test]
    fn extended_bands_tile_the_low_range() {
        let t = Tiling::new(1024).unwrap();
        for j in 1..t.num_scales() as u32 {
            let lo_end = 2f64.powi(2 * j as i32 - 1);
            let tau = 2f64.powi(j as i32 - 3);
            for k in 0..((lo_end - tau).floor() as usize) {
                let e: f64 =
                    t.scale(j)[..1 << j].iter().map(|b| b.bell(k as f64).powi(2) + b.bell(-(k as f64)).powi(2)).sum();
                assert!((e - 1.0).abs() < 1e-12, "j = {j}, k = {k}: {e}");
            }
        }
    }

    #[test]
    fn parabolic_layout() {
        let t = Tiling::new(256).unwrap();
        let b = t.band(2, 4).unwrap();
        assert_eq!(b.center(), 9.0);
        assert_eq!(b.width(), 2.0);
        assert!(b.bins.start >= 7 && b.bins.end <= 12);
        assert_eq!(t.scale(3).len(), 32);
        // N = 256 stops at scale 3: [32, 128).
        assert_eq!(t.num_scales(), 4);
        assert!(t.band(4, 0).is_none());
    }
}
