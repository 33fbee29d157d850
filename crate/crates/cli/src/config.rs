use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use waveatom::kernel::default_samples;
use waveatom::{Curve, KernelKind};

/// Invalid command-line input; maps to exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn config_err(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

/// Scatterer selected with `--shape`.
#[derive(Debug, Clone, PartialEq)]
pub enum ShapeSpec {
    Ellipse(f64, f64),
    Circle,
    Kite,
    Star(usize, f64),
    File(PathBuf),
}

impl ShapeSpec {
    pub fn build(&self) -> Result<Curve, ConfigError> {
        let curve = match self {
            ShapeSpec::Ellipse(a, b) => Curve::ellipse(*a, *b),
            ShapeSpec::Circle => Ok(Curve::unit_circle()),
            ShapeSpec::Kite => Ok(Curve::kite()),
            ShapeSpec::Star(p, a) => Curve::star(*p, *a),
            ShapeSpec::File(path) => Curve::load(path),
        };
        curve.map_err(|e| config_err(format!("shape {self}: {e}")))
    }
}

impl fmt::Display for ShapeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeSpec::Ellipse(a, b) => write!(f, "ellipse:{a},{b}"),
            ShapeSpec::Circle => f.write_str("circle"),
            ShapeSpec::Kite => f.write_str("kite"),
            ShapeSpec::Star(p, a) => write!(f, "star:{p},{a}"),
            ShapeSpec::File(path) => write!(f, "file:{}", path.display()),
        }
    }
}

fn parse_pair(args: &str, what: &str) -> Result<(f64, f64), ConfigError> {
    let parts: Vec<&str> = args.split(',').collect();
    if parts.len() != 2 {
        return Err(config_err(format!("{what} expects two comma-separated numbers, got '{args}'")));
    }
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| config_err(format!("bad number '{s}' in {what}")));
    Ok((num(parts[0])?, num(parts[1])?))
}

impl FromStr for ShapeSpec {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, args) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        match (name, args) {
            ("ellipse", None) => Ok(ShapeSpec::Ellipse(1.0, 0.5)),
            ("ellipse", Some(a)) => {
                let (a, b) = parse_pair(a, "ellipse")?;
                Ok(ShapeSpec::Ellipse(a, b))
            }
            ("circle", None) => Ok(ShapeSpec::Circle),
            ("kite", None) => Ok(ShapeSpec::Kite),
            ("star", None) => Ok(ShapeSpec::Star(5, 0.3)),
            ("star", Some(a)) => {
                let (p, amp) = parse_pair(a, "star")?;
                if p.fract() != 0.0 || p < 0.0 {
                    return Err(config_err(format!("star lobe count must be an integer, got {p}")));
                }
                Ok(ShapeSpec::Star(p as usize, amp))
            }
            ("file", Some(path)) if !path.is_empty() => Ok(ShapeSpec::File(PathBuf::from(path))),
            _ => Err(config_err(format!(
                "unknown shape '{s}' (expected ellipse[:a,b], circle, kite, star[:p,a] or file:path)"
            ))),
        }
    }
}

/// Parses a decimal number, also accepting a fractional exponent such as `1e-1.5`.
pub fn parse_number(s: &str) -> Result<f64, ConfigError> {
    let s = s.trim();
    if let Ok(v) = s.parse::<f64>() {
        return Ok(v);
    }
    let bad = || config_err(format!("bad number '{s}'"));
    let (mantissa, exponent) = s.split_once(['e', 'E']).ok_or_else(bad)?;
    let m: f64 = mantissa.parse().map_err(|_| bad())?;
    let e: f64 = exponent.parse().map_err(|_| bad())?;
    Ok(m * 10f64.powf(e))
}

pub fn parse_list(s: &str) -> Result<Vec<f64>, ConfigError> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(parse_number).collect()
}

pub fn parse_kernel(s: &str) -> Result<KernelKind, ConfigError> {
    s.parse().map_err(|e| config_err(format!("{e}")))
}

/// `--eta auto` resolves to `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EtaSpec {
    Auto,
    Value(f64),
}

impl EtaSpec {
    pub fn resolve(self, k: f64) -> f64 {
        match self {
            EtaSpec::Auto => k,
            EtaSpec::Value(v) => v,
        }
    }
}

impl FromStr for EtaSpec {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(EtaSpec::Auto);
        }
        let v = parse_number(s)?;
        if !(v >= 0.0) || !v.is_finite() {
            return Err(config_err(format!("eta must be a non-negative number, got {s}")));
        }
        Ok(EtaSpec::Value(v))
    }
}

/// `--n auto` resolves to `8k` rounded up to a power of two.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SamplesSpec {
    Auto,
    Fixed(usize),
}

impl SamplesSpec {
    pub fn resolve(self, k: f64) -> usize {
        match self {
            SamplesSpec::Auto => default_samples(k),
            SamplesSpec::Fixed(n) => n,
        }
    }
}

impl FromStr for SamplesSpec {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(SamplesSpec::Auto);
        }
        let n: usize = s.parse().map_err(|_| config_err(format!("bad sample count '{s}'")))?;
        if n < 16 || !n.is_power_of_two() {
            return Err(config_err(format!("sample count must be a power of two >= 16, got {n}")));
        }
        Ok(SamplesSpec::Fixed(n))
    }
}

pub fn check_wavenumbers(ks: &[f64]) -> Result<(), ConfigError> {
    for &k in ks {
        if !(k > 0.0) || !k.is_finite() {
            return Err(config_err(format!("wavenumber must be positive, got {k}")));
        }
    }
    Ok(())
}

pub fn check_epsilons(eps: &[f64]) -> Result<(), ConfigError> {
    if eps.is_empty() {
        return Err(config_err("at least one accuracy is required"));
    }
    for &e in eps {
        if !(e > 0.0 && e < 1.0) {
            return Err(config_err(format!("accuracy must lie in (0, 1), got {e}")));
        }
    }
    Ok(())
}
