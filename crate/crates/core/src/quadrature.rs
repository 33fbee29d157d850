//! Corrected trapezoidal rules for periodic integrands with a logarithmic
//! singularity at the target point.
//!
//! The rule drops the singular node and replaces the weight `h` of the nodes
//! at distance `l h` on both sides by `h (1 + gamma_l)`. The corrections solve
//! `sum_l gamma_l l^(2q) = [q = 0] / 2` and
//! `sum_l gamma_l l^(2q) ln l = zeta'(-2q)` for `q = 0 .. order/2 - 1`.

/// Second-order corrections (one node on each side).
pub const KAPUR_ROKHLIN_2: [f64; 2] = [1.8257480647361594, -1.3257480647361594];

/// Sixth-order corrections for nodes at distance 1..=6.
pub const KAPUR_ROKHLIN_6: [f64; 6] = [
    4.9673629782877583,
    -16.205015048591261,
    25.851537618326388,
    -22.225994667918829,
    9.9301049980375379,
    -1.8179958781415941,
];

/// Periodic index distance `min(|i - j|, n - |i - j|)`.
#[inline]
pub fn periodic_distance(i: usize, j: usize, n: usize) -> usize {
    let d = i.abs_diff(j);
    d.min(n - d)
}

/// Weight of source node `j` for target node `i` on an `n`-point periodic grid
/// of spacing `1 / n`, under the sixth-order rule.
#[inline]
pub fn log_corrected_weight(i: usize, j: usize, n: usize) -> f64 {
    let h = 1.0 / n as f64;
    match periodic_distance(i, j, n) {
        0 => 0.0,
        d if d <= KAPUR_ROKHLIN_6.len() => h * (1.0 + KAPUR_ROKHLIN_6[d - 1]),
        _ => h,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_are_local() {
        let n = 64;
        for j in 0..n {
            let w = log_corrected_weight(10, j, n);
            if periodic_distance(10, j, n) > 6 {
                assert_eq!(w, 1.0 / n as f64);
            }
        }
        assert_eq!(log_corrected_weight(3, 3, n), 0.0);
        assert_eq!(log_corrected_weight(0, 63, n), log_corrected_weight(0, 1, n));
    }

    #[test]
    fn smooth_moments_vanish() {
        for gamma in [&KAPUR_ROKHLIN_2[..], &KAPUR_ROKHLIN_6[..]] {
            let s: f64 = gamma.iter().sum();
            assert!((s - 0.5).abs() < 1e-13);
        }
    }
}
