//! Test oracles. This module holds the separation-of-variables solution for a
//! plane wave hitting the sound-soft unit circle; `hankel` holds point values.
#![allow(dead_code)]

pub mod hankel;

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use waveatom::special_fn::bessel_y;

/// `J_0(x), ..., J_nmax(x)` by Miller's backward recurrence, normalized with
/// `J_0 + 2 sum J_2k = 1`.
pub fn bessel_j_all(nmax: usize, x: f64) -> Vec<f64> {
    let start = nmax + 40 + (2.0 * x) as usize;
    let mut out = vec![0.0; nmax + 1];
    let (mut above, mut cur) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    for n in (1..=start).rev() {
        let below = 2.0 * n as f64 / x * cur - above;
        above = cur;
        cur = below;
        // `cur` now holds J_{n-1}.
        if n - 1 <= nmax {
            out[n - 1] = cur;
        }
        if (n - 1) % 2 == 0 && n - 1 > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            let s = 1e-250;
            cur *= s;
            above *= s;
            norm *= s;
            out.iter_mut().for_each(|v| *v *= s);
        }
    }
    norm += cur;
    out.iter().map(|v| v / norm).collect()
}

/// `Y_0(x), ..., Y_nmax(x)` by forward recurrence (stable for `Y`).
pub fn bessel_y_all(nmax: usize, x: f64) -> Vec<f64> {
    let mut out = vec![bessel_y(0, x).unwrap(), bessel_y(1, x).unwrap()];
    for n in 1..nmax {
        let next = 2.0 * n as f64 / x * out[n] - out[n - 1];
        out.push(next);
    }
    out.truncate(nmax + 1);
    out
}

pub fn hankel_all(nmax: usize, x: f64) -> Vec<Complex64> {
    bessel_j_all(nmax, x).into_iter().zip(bessel_y_all(nmax, x)).map(|(j, y)| Complex64::new(j, y)).collect()
}

fn order_count(k: f64) -> usize {
    (k + 60.0) as usize
}

/// Scattered field at polar point `(r, theta)` for incidence angle `theta_d`.
pub fn circle_scattered(k: f64, theta_d: f64, r: f64, theta: f64) -> Complex64 {
    let nmax = order_count(k);
    let jk = bessel_j_all(nmax, k);
    let hk = hankel_all(nmax, k);
    let hr = hankel_all(nmax, k * r);
    let mut u = Complex64::default();
    for n in 0..=nmax {
        let term = Complex64::i().powu(n as u32) * jk[n] / hk[n] * hr[n];
        let phase = n as f64 * (theta - theta_d);
        // Orders n and -n contribute equally up to the angular factor.
        let angular = if n == 0 { 1.0 } else { 2.0 * phase.cos() };
        u -= term * angular;
    }
    u
}

pub fn circle_far_field(k: f64, theta_d: f64, theta: f64) -> Complex64 {
    let nmax = order_count(k);
    let jk = bessel_j_all(nmax, k);
    let hk = hankel_all(nmax, k);
    let mut s = Complex64::default();
    for n in 0..=nmax {
        let angular = if n == 0 { 1.0 } else { 2.0 * (n as f64 * (theta - theta_d)).cos() };
        s += jk[n] / hk[n] * angular;
    }
    -(2.0 / (PI * k)).sqrt() * Complex64::from_polar(1.0, -FRAC_PI_4) * s
}

/// Sixteen exterior evaluation points (polar), a few wavelengths off the boundary.
pub fn exterior_points() -> Vec<(f64, f64)> {
    (0..16).map(|i| (1.5 + 0.25 * (i % 8) as f64, 2.0 * PI * (i as f64 * 0.37 + 0.05))).collect()
}
