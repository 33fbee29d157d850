//! Smooth closed boundary curves given by truncated Fourier series in the
//! parameter `t` in `[0, 1)`.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec2 = [f64; 2];

#[inline]
pub fn dot(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn norm(a: Vec2) -> f64 {
    a[0].hypot(a[1])
}

/// A closed curve `x(t) = (x1(t), x2(t))` with
/// `xi(t) = sum_h cos_i[h] cos(2 pi h t) + sin_i[h] sin(2 pi h t)`.
///
/// Serializes as `{"cos1": [...], "sin1": [...], "cos2": [...], "sin2": [...], "H": n}`
/// where each array holds `H + 1` entries (index 0 is the constant term).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CurveRecord", into = "CurveRecord")]
pub struct Curve {
    cos1: Vec<f64>,
    sin1: Vec<f64>,
    cos2: Vec<f64>,
    sin2: Vec<f64>,
    /// +1 for counter-clockwise traversal, -1 for clockwise.
    orientation: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CurveRecord {
    cos1: Vec<f64>,
    sin1: Vec<f64>,
    cos2: Vec<f64>,
    sin2: Vec<f64>,
    #[serde(rename = "H")]
    harmonics: usize,
}

impl TryFrom<CurveRecord> for Curve {
    type Error = Error;

    fn try_from(r: CurveRecord) -> Result<Self> {
        let len = r.harmonics + 1;
        for (name, v) in [("cos1", &r.cos1), ("sin1", &r.sin1), ("cos2", &r.cos2), ("sin2", &r.sin2)] {
            if v.len() != len {
                return Err(Error::domain(format!("{name} has {} entries, expected H + 1 = {len}", v.len())));
            }
        }
        Curve::from_fourier(r.cos1, r.sin1, r.cos2, r.sin2)
    }
}

impl From<Curve> for CurveRecord {
    fn from(c: Curve) -> Self {
        CurveRecord { harmonics: c.harmonics(), cos1: c.cos1, sin1: c.sin1, cos2: c.cos2, sin2: c.sin2 }
    }
}

/// Position and differential quantities at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub position: Vec2,
    /// `dx/dt`
    pub velocity: Vec2,
    /// `d^2x/dt^2`
    pub acceleration: Vec2,
    pub speed: f64,
    /// Exterior unit normal.
    pub unit_normal: Vec2,
    /// Signed curvature, positive where the curve bends towards its interior.
    pub curvature: f64,
}

impl Curve {
    /// Builds a curve from its Fourier coefficients. All four arrays must
    /// have the same length `H + 1`.
    pub fn from_fourier(cos1: Vec<f64>, sin1: Vec<f64>, cos2: Vec<f64>, sin2: Vec<f64>) -> Result<Self> {
        let len = cos1.len();
        if len == 0 || sin1.len() != len || cos2.len() != len || sin2.len() != len {
            return Err(Error::domain("Fourier coefficient arrays must be non-empty and of equal length"));
        }
        if cos1.iter().chain(&sin1).chain(&cos2).chain(&sin2).any(|v| !v.is_finite()) {
            return Err(Error::domain("Fourier coefficients must be finite"));
        }
        let mut curve = Curve { cos1, sin1, cos2, sin2, orientation: 1.0 };
        let area = curve.signed_area();
        if area == 0.0 {
            return Err(Error::domain("curve encloses zero area"));
        }
        curve.orientation = area.signum();
        let min_speed = (0..4096).map(|i| curve.eval(i as f64 / 4096.0).speed).fold(f64::INFINITY, f64::min);
        if !(min_speed > 0.0) {
            return Err(Error::domain("curve parametrization is degenerate (zero speed)"));
        }
        Ok(curve)
    }

    /// `x(t) = (a cos 2 pi t, b sin 2 pi t)`.
    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
            return Err(Error::domain(format!("ellipse axes must be positive, got ({a}, {b})")));
        }
        Curve::from_fourier(vec![0.0, a], vec![0.0, 0.0], vec![0.0, 0.0], vec![0.0, b])
    }

    pub fn unit_circle() -> Self {
        Curve::ellipse(1.0, 1.0).expect("unit circle is valid")
    }

    /// The nonconvex kite `(cos 2 pi t + 0.65 cos 4 pi t - 0.65, 1.5 sin 2 pi t)`.
    pub fn kite() -> Self {
        Curve::from_fourier(vec![-0.65, 1.0, 0.65], vec![0.0; 3], vec![0.0; 3], vec![0.0, 1.5, 0.0])
            .expect("kite is valid")
    }

    /// Polar star `r(theta) = 1 + amplitude cos(lobes theta)`, `theta = 2 pi t`.
    pub fn star(lobes: usize, amplitude: f64) -> Result<Self> {
        if lobes < 3 {
            return Err(Error::domain(format!("star needs at least 3 lobes, got {lobes}")));
        }
        if !(amplitude > 0.0 && amplitude < 1.0) {
            return Err(Error::domain(format!("star amplitude must lie in (0, 1), got {amplitude}")));
        }
        let len = lobes + 2;
        let (mut c1, mut s2) = (vec![0.0; len], vec![0.0; len]);
        // r cos(theta) = cos(theta) + a/2 [cos((p+1) theta) + cos((p-1) theta)]
        // r sin(theta) = sin(theta) + a/2 [sin((p+1) theta) - sin((p-1) theta)]
        c1[1] = 1.0;
        s2[1] = 1.0;
        c1[lobes + 1] += 0.5 * amplitude;
        c1[lobes - 1] += 0.5 * amplitude;
        s2[lobes + 1] += 0.5 * amplitude;
        s2[lobes - 1] -= 0.5 * amplitude;
        Curve::from_fourier(c1, vec![0.0; len], vec![0.0; len], s2)
    }

    /// Reads a JSON curve record from disk.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    /// Highest harmonic index `H`.
    pub fn harmonics(&self) -> usize {
        self.cos1.len() - 1
    }

    pub fn is_counter_clockwise(&self) -> bool {
        self.orientation > 0.0
    }

    pub fn eval(&self, t: f64) -> CurvePoint {
        let t = t.rem_euclid(1.0);
        let mut p = [0.0; 2];
        let mut v = [0.0; 2];
        let mut a = [0.0; 2];
        for h in 0..self.cos1.len() {
            let w = 2.0 * PI * h as f64;
            let (s, c) = (w * t).sin_cos();
            for (dim, (cc, ss)) in [(&self.cos1, &self.sin1), (&self.cos2, &self.sin2)].into_iter().enumerate() {
                let (ch, sh) = (cc[h], ss[h]);
                p[dim] += ch * c + sh * s;
                v[dim] += w * (-ch * s + sh * c);
                a[dim] += -w * w * (ch * c + sh * s);
            }
        }
        let speed = norm(v);
        let o = self.orientation;
        let unit_normal = [o * v[1] / speed, -o * v[0] / speed];
        let curvature = o * (v[0] * a[1] - v[1] * a[0]) / (speed * speed * speed);
        CurvePoint { position: p, velocity: v, acceleration: a, speed, unit_normal, curvature }
    }

    /// Samples the curve at `t_j = j / n`.
    pub fn sample(&self, n: usize) -> Vec<CurvePoint> {
        (0..n).map(|j| self.eval(j as f64 / n as f64)).collect()
    }

    /// `phi(s, t) = |x(s) - x(t)|`.
    pub fn chord(&self, s: f64, t: f64) -> f64 {
        let (a, b) = (self.eval(s).position, self.eval(t).position);
        norm([a[0] - b[0], a[1] - b[1]])
    }

    fn signed_area(&self) -> f64 {
        // Exact for trigonometric polynomials once the grid exceeds 2H samples.
        let n = 4 * (self.harmonics() + 1) + 16;
        (0..n)
            .map(|i| {
                let p = self.eval(i as f64 / n as f64);
                p.position[0] * p.velocity[1] - p.position[1] * p.velocity[0]
            })
            .sum::<f64>()
            * 0.5
            / n as f64
    }

    /// Geometric regularity constant: the minimum over distinct grid points of
    /// `|x(s) - x(t)| / d(s, t)`. Returns 0 when the sampled polygon
    /// self-intersects.
    pub fn regularity_constant(&self, grid_size: usize) -> Result<f64> {
        if grid_size < 64 {
            return Err(Error::domain(format!("regularity grid needs at least 64 points, got {grid_size}")));
        }
        let pts: Vec<Vec2> = (0..grid_size).map(|i| self.eval(i as f64 / grid_size as f64).position).collect();
        if polygon_self_intersects(&pts) {
            return Ok(0.0);
        }
        let mut best = f64::INFINITY;
        for i in 0..grid_size {
            for j in (i + 1)..grid_size {
                let chord = norm([pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]]);
                let d = circle_distance(i as f64 / grid_size as f64, j as f64 / grid_size as f64);
                best = best.min(chord / d);
            }
        }
        Ok(best)
    }
}

/// `d(s, t) = |exp(2 pi i s) - exp(2 pi i t)|`, the chord length on the unit circle.
pub fn circle_distance(s: f64, t: f64) -> f64 {
    2.0 * (PI * (s - t)).sin().abs()
}

fn polygon_self_intersects(pts: &[Vec2]) -> bool {
    let n = pts.len();
    let seg = |i: usize| (pts[i], pts[(i + 1) % n]);
    for i in 0..n {
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (a, b) = seg(i);
            let (c, d) = seg(j);
            if segments_cross(a, b, c, d) {
                return true;
            }
        }
    }
    false
}

fn segments_cross(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool {
    let orient = |p: Vec2, q: Vec2, r: Vec2| (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
    let (o1, o2) = (orient(a, b, c), orient(a, b, d));
    let (o3, o4) = (orient(c, d, a), orient(c, d, b));
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn ellipse_positions() {
        let e = Curve::ellipse(1.0, 0.5).unwrap();
        let p0 = e.eval(0.0).position;
        let p1 = e.eval(0.25).position;
        assert!(close(p0[0], 1.0, 1e-15) && close(p0[1], 0.0, 1e-15));
        assert!(close(p1[0], 0.0, 1e-15) && close(p1[1], 0.5, 1e-15));
        assert!(e.is_counter_clockwise());
    }

    #[test]
    fn ellipse_regularity_is_minor_axis() {
        let e = Curve::ellipse(1.0, 0.5).unwrap();
        let d = e.regularity_constant(2048).unwrap();
        assert!(close(d, 0.5, 1e-6), "D = {d}");
    }

    #[test]
    fn star_tip() {
        let s = Curve::star(5, 0.3).unwrap();
        let p = s.eval(0.0).position;
        assert!(close(p[0], 1.3, 1e-14) && close(p[1], 0.0, 1e-14));
        let r = norm(s.eval(0.1).position);
        assert!(close(r, 1.0 + 0.3 * (5.0 * 2.0 * PI * 0.1).cos(), 1e-14));
    }

    #[test]
    fn unit_circle_curvature() {
        let c = Curve::unit_circle();
        for i in 0..17 {
            assert!(close(c.eval(i as f64 / 17.0).curvature, 1.0, 1e-10));
        }
    }

    #[test]
    fn clockwise_curves_keep_exterior_normal() {
        // x(t) = (cos, -sin) runs clockwise around the unit circle.
        let c = Curve::from_fourier(vec![0.0, 1.0], vec![0.0; 2], vec![0.0; 2], vec![0.0, -1.0]).unwrap();
        assert!(!c.is_counter_clockwise());
        let p = c.eval(0.13);
        assert!(close(dot(p.unit_normal, p.position), 1.0, 1e-12));
        assert!(close(p.curvature, 1.0, 1e-10));
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let curves = [Curve::kite(), Curve::star(5, 0.3).unwrap(), Curve::ellipse(2.0, 0.7).unwrap()];
        let h = 1e-6;
        for c in &curves {
            for i in 0..13 {
                let t = i as f64 / 13.0 + 0.01;
                let (m, p0, pl) = (c.eval(t - h), c.eval(t), c.eval(t + h));
                for d in 0..2 {
                    let fd = (pl.position[d] - m.position[d]) / (2.0 * h);
                    assert!(close(fd, p0.velocity[d], 1e-6 * p0.speed.max(1.0)));
                    let fd2 = (pl.velocity[d] - m.velocity[d]) / (2.0 * h);
                    assert!(close(fd2, p0.acceleration[d], 1e-5 * norm(p0.acceleration).max(1.0)));
                }
                assert!(close(dot(p0.unit_normal, p0.velocity), 0.0, 1e-12 * p0.speed));
                assert!(close(norm(p0.unit_normal), 1.0, 1e-14));
            }
        }
    }

    #[test]
    fn kite_is_regular() {
        let d = Curve::kite().regularity_constant(512).unwrap();
        assert!(d > 0.0 && d < 1.0, "D = {d}");
    }

    #[test]
    fn circle_distance_values() {
        assert!(close(circle_distance(0.0, 0.5), 2.0, 1e-15));
        assert!(close(circle_distance(0.3, 0.3), 0.0, 1e-15));
    }

    #[test]
    fn invalid_parameters() {
        assert!(Curve::ellipse(0.0, 1.0).is_err());
        assert!(Curve::ellipse(1.0, -1.0).is_err());
        assert!(Curve::star(2, 0.3).is_err());
        assert!(Curve::star(5, 1.0).is_err());
        assert!(Curve::unit_circle().regularity_constant(32).is_err());
    }

    #[test]
    fn self_intersecting_curve_has_zero_regularity() {
        // Figure eight: (sin 2 pi t, sin 4 pi t) has zero net area, so build a lopsided one.
        let c = Curve::from_fourier(vec![0.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.3, 0.0], vec![0.0, 0.0, 1.0])
            .unwrap();
        assert_eq!(c.regularity_constant(256).unwrap(), 0.0);
    }

    #[test]
    fn json_record_uses_expected_field_names() {
        let k = Curve::kite();
        let text = serde_json::to_string(&k).unwrap();
        for field in ["\"cos1\"", "\"sin1\"", "\"cos2\"", "\"sin2\"", "\"H\":2"] {
            assert!(text.contains(field), "{text}");
        }
        let back: Curve = serde_json::from_str(&text).unwrap();
        assert_eq!(back, k);
        let bad = r#"{"cos1":[0,1],"sin1":[0,0],"cos2":[0,0],"sin2":[0,1],"H":3}"#;
        assert!(serde_json::from_str::<Curve>(bad).is_err());
    }
}
