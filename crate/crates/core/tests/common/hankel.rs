//! Reference values for the Hankel functions: steepest-descent integral and
//! small-argument expansion.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

const EULER_GAMMA: f64 = 0.5772156649015329;

/// sup and inf of `|H_n(x)| sqrt(x)` over `[1, 1e5]`, fitted once and frozen.
pub const UPPER_ENVELOPE: [f64; 2] = [0.80, 0.90];
pub const LOWER_ENVELOPE: [f64; 2] = [0.77, 0.79];
/// `|d/dx e^{-ix} H_n(x)| <= C x^{-3/2}` on `[1, 1e5]`, fitted likewise.
pub const DERIVATIVE_ENVELOPE: [f64; 2] = [0.45, 1.25];

pub fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let count = (decades * per_decade as f64).round() as usize;
    (0..=count).map(|i| lo * 10f64.powf(decades * i as f64 / count as f64)).collect()
}

/// Integral representation along the steepest-descent ray (beta = 0):
/// `H_n(x) = sqrt(2/(pi x)) e^{i(x - n pi/2 - pi/4)} / Gamma(n + 1/2)
///           int_0^inf e^{-u} u^{n-1/2} (1 + iu/(2x))^{n-1/2} du`.
/// With `u = v^2` the integrand is even in `v`, so the trapezoidal rule on the
/// whole line converges geometrically.
pub fn hankel_integral(n: u32, x: f64) -> Complex64 {
    let nu = n as f64 - 0.5;
    let gamma = if n == 0 { PI.sqrt() } else { PI.sqrt() / 2.0 };
    // Branch points of the integrand sit about sqrt(x) off the real axis.
    let h = (0.1 * x.sqrt()).min(0.1);
    let steps = (12.0 / h).ceil() as i64;
    let mut sum = Complex64::default();
    for i in -steps..=steps {
        let v = i as f64 * h;
        let u = v * v;
        let factor = Complex64::new(1.0, u / (2.0 * x)).powf(nu);
        sum += factor * (v.abs().powi(2 * n as i32) * (-u).exp());
    }
    let integral = sum * h; // = 2 int_0^inf ... dv = int_0^inf ... du with du = 2v dv
                            // exp(ix) and the constant phase separately: x - pi/4 would round at large x.
    let phase = Complex64::from_polar(1.0, x) * Complex64::from_polar(1.0, -(n as f64) * PI / 2.0 - FRAC_PI_4);
    (2.0 / (PI * x)).sqrt() * phase * integral / gamma
}

/// Leading small-argument terms, accurate to O(x^4) relative.
pub fn hankel_small(n: u32, x: f64) -> Complex64 {
    let l = (x / 2.0).ln() + EULER_GAMMA;
    let q = x * x / 4.0;
    match n {
        0 => {
            let j = 1.0 - q;
            Complex64::new(j, 2.0 / PI * (l * j + q))
        }
        _ => {
            let j = x / 2.0 * (1.0 - q / 2.0);
            let y = -2.0 / (PI * x) + 2.0 / PI * (x / 2.0).ln() * j - (1.0 - 2.0 * EULER_GAMMA) * x / (2.0 * PI);
            Complex64::new(j, y)
        }
    }
}
