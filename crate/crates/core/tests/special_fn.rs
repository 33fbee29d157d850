mod common;

use std::f64::consts::PI;

use common::hankel::{hankel_integral, hankel_small, log_grid, DERIVATIVE_ENVELOPE, LOWER_ENVELOPE, UPPER_ENVELOPE};
use num_complex::Complex64;
use waveatom::special_fn::{bessel_j, bessel_y, hankel1, hankel1_scaled};

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn agrees_with_integral_representation() {
    for x in log_grid(0.5, 1e6, 6) {
        for n in 0..2 {
            let h = hankel1(n, x).unwrap();
            let oracle = hankel_integral(n, x);
            assert!(rel(h, oracle) <= 1e-12, "H{n}({x}): {h} vs {oracle}");
        }
    }
}

#[test]
fn agrees_with_small_argument_expansion() {
    for x in log_grid(1e-8, 1e-4, 4) {
        for n in 0..2 {
            assert!(rel(hankel1(n, x).unwrap(), hankel_small(n, x)) <= 1e-12, "n={n} x={x}");
        }
    }
}

#[test]
fn wronskian() {
    for x in log_grid(1e-3, 1e5, 5).into_iter().chain([10.0]) {
        let (j0, y0) = (bessel_j(0, x).unwrap(), bessel_y(0, x).unwrap());
        let (j1, y1) = (bessel_j(1, x).unwrap(), bessel_y(1, x).unwrap());
        let w = j1 * y0 - j0 * y1;
        let expected = 2.0 / (PI * x);
        // Both orders reduce to the same combination through J0' = -J1, J1' = J0 - J1/x.
        assert!((w - expected).abs() <= 1e-12 * expected.max(j1.abs() * y0.abs() + j0.abs() * y1.abs()), "x={x}");
    }
}

#[test]
fn scaled_factor_is_non_oscillatory() {
    for x in log_grid(1e-3, 1e5, 7) {
        for n in 0..2 {
            let a = hankel1(n, x).unwrap().norm();
            assert!((hankel1_scaled(n, x).unwrap().norm() - a).abs() <= 1e-14 * a);
        }
    }
    let m = hankel1_scaled(0, 1000.0).unwrap().norm() * 1000f64.sqrt();
    assert!(m > 0.797 && m < 0.799, "{m}");

    for x in log_grid(1.0, 1e5, 6).into_iter().chain([100.0]) {
        for n in 0..2u32 {
            let step = 1e-4 * x;
            let d = (hankel1_scaled(n, x + step).unwrap() - hankel1_scaled(n, x - step).unwrap()) / (2.0 * step);
            assert!(
                d.norm() <= DERIVATIVE_ENVELOPE[n as usize] * x.powf(-1.5),
                "n={n} x={x}: {}",
                d.norm() * x.powf(1.5)
            );
        }
    }
}

#[test]
fn large_argument_envelopes() {
    for x in log_grid(1.0, 1e5, 20) {
        for n in 0..2u32 {
            let s = hankel1(n, x).unwrap().norm() * x.sqrt();
            assert!(s <= UPPER_ENVELOPE[n as usize], "n={n} x={x}: {s}");
            assert!(s >= LOWER_ENVELOPE[n as usize], "n={n} x={x}: {s}");
        }
    }
}

#[test]
fn small_argument_envelopes() {
    let grid = log_grid(1e-8, 1.0, 20);
    for &x in &grid {
        let log_bound = 1.0 + x.ln().abs();
        assert!(hankel1(0, x).unwrap().norm() <= log_bound, "x={x}");
        assert!(x * hankel1(1, x).unwrap().norm() <= 1.0, "x={x}");
    }
    // Finite differences of x H_1(x): first bounded, second O(1 + |log x|).
    // The second difference is taken of the first derivative x H_0(x), since
    // x H_1 -> -2i/pi leaves nothing but rounding in a direct second difference.
    let g = |x: f64| x * hankel1(1, x).unwrap();
    let dg = |x: f64| x * hankel1(0, x).unwrap();
    for &x in &grid[..grid.len() - 1] {
        let step = 1e-3 * x;
        let d1 = (g(x + step) - g(x - step)) / (2.0 * step);
        assert!((d1 - dg(x)).norm() <= 1e-4 * (1.0 + dg(x).norm()), "x={x}");
        let d2 = (dg(x + step) - dg(x - step)) / (2.0 * step);
        assert!(d1.norm() <= 1.0, "x={x}: {}", d1.norm());
        assert!(d2.norm() <= 1.5 * (1.0 + x.ln().abs()), "x={x}: {}", d2.norm());
    }
}

#[test]
fn small_argument_y1_pole() {
    let h = hankel1(1, 1e-6).unwrap();
    let expected = 2.0 / (PI * 1e-6);
    assert!((h.norm() - expected).abs() <= 1e-6 * expected);
}
