//! Geometry of the finite-dimensional sequence spaces `ℓ_p^n`.
//!
//! Every exponent in `(0, ∞]` is admissible. For `p < 1` the functional
//! `‖·‖_p` is only a quasi-norm; the quasi-triangle constant and the
//! associated `ρ`-norm live here as well.

mod aoki;
mod distance;
mod volume;

pub use aoki::{aoki_norm, AokiEstimate, AokiSearch, RhoNorm};
pub use distance::{dist_to_subspace, DistanceMethod, SubspaceDistance};
pub use volume::{ball_volume, ln_ball_volume};

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};

/// An exponent `p ∈ (0, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Exponent(f64);

impl Exponent {
    pub const INFINITY: Exponent = Exponent(f64::INFINITY);
    pub const ONE: Exponent = Exponent(1.0);
    pub const TWO: Exponent = Exponent(2.0);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p <= 0.0 {
            return domain(format!("exponent must lie in (0, ∞], got {p}"));
        }
        Ok(Exponent(p))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn recip(self) -> f64 {
        if self.is_infinite() {
            0.0
        } else {
            1.0 / self.0
        }
    }

    /// `min(1, p)`, the exponent of the `p̄`-triangle inequality.
    pub fn bar(self) -> f64 {
        self.0.min(1.0)
    }

    /// Conjugate exponent `p′` with `1/p + 1/p′ = 1`; `p′ = ∞` for `p ≤ 1`.
    pub fn conjugate(self) -> Exponent {
        if self.0 <= 1.0 {
            Exponent::INFINITY
        } else if self.is_infinite() {
            Exponent::ONE
        } else {
            Exponent(self.0 / (self.0 - 1.0))
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => return Ok(Exponent::INFINITY),
            _ => {}
        }
        let value = if let Some((num, den)) = t.split_once('/') {
            let num: f64 = num
                .trim()
                .parse()
                .map_err(|_| Error::Domain(format!("invalid exponent `{s}`")))?;
            let den: f64 = den
                .trim()
                .parse()
                .map_err(|_| Error::Domain(format!("invalid exponent `{s}`")))?;
            num / den
        } else {
            t.parse()
                .map_err(|_| Error::Domain(format!("invalid exponent `{s}`")))?
        };
        Exponent::new(value)
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_infinite() {
            serializer.serialize_str("inf")
        } else {
            serializer.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        let parsed = match Repr::deserialize(deserializer)? {
            Repr::Num(v) => Exponent::new(v),
            Repr::Text(s) => s.parse(),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

/// Scalar field of a sequence space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    /// Real dimension contributed by one coordinate.
    pub fn real_dim(self) -> usize {
        match self {
            Field::Real => 1,
            Field::Complex => 2,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Real => "real",
            Field::Complex => "complex",
        })
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "real" | "r" => Ok(Field::Real),
            "complex" | "c" => Ok(Field::Complex),
            other => domain(format!("unknown field `{other}`")),
        }
    }
}

/// The space `ℓ_p^n` over a given field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub p: Exponent,
    pub n: usize,
    pub field: Field,
}

impl SpaceSpec {
    pub fn new(p: Exponent, n: usize, field: Field) -> Result<Self> {
        if n == 0 {
            return domain("dimension must be at least 1");
        }
        Ok(SpaceSpec { p, n, field })
    }

    /// Real dimension of the space: `n` over ℝ, `2n` over ℂ.
    pub fn volumetric_dim(&self) -> usize {
        self.n * self.field.real_dim()
    }

    pub fn quasi_norm_info(&self) -> QuasiNormInfo {
        QuasiNormInfo::from_constant(quasi_constant(self.p))
    }
}

/// Anything with a modulus; lets the norms accept real or complex coordinates.
pub trait Modulus: Copy {
    fn modulus(self) -> f64;
}

impl Modulus for f64 {
    fn modulus(self) -> f64 {
        self.abs()
    }
}

impl Modulus for Complex64 {
    fn modulus(self) -> f64 {
        self.norm()
    }
}

impl<T: Modulus> Modulus for &T {
    fn modulus(self) -> f64 {
        (*self).modulus()
    }
}

/// `(Σ|x_j|^p)^{1/p}`, or `max_j |x_j|` for `p = ∞`.
pub fn lp_norm<T: Modulus>(x: &[T], p: Exponent) -> f64 {
    let max = x.iter().map(|v| v.modulus()).fold(0.0, f64::max);
    if p.is_infinite() || max == 0.0 || !max.is_finite() {
        return max;
    }
    let p = p.value();
    // scaled by the largest modulus to keep powers in range
    let sum: f64 = x.iter().map(|v| (v.modulus() / max).powf(p)).sum();
    max * sum.powf(1.0 / p)
}

/// `‖x‖_p^p` for finite `p` (the `p`-homogeneous form used by `ρ`-triangle arguments).
pub fn lp_norm_pow<T: Modulus>(x: &[T], p: Exponent) -> f64 {
    debug_assert!(!p.is_infinite());
    x.iter().map(|v| v.modulus().powf(p.value())).sum()
}

/// Distance `‖x − y‖_p`.
pub fn lp_dist(x: &[Complex64], y: &[Complex64], p: Exponent) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    let max = x
        .iter()
        .zip(y)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if p.is_infinite() || max == 0.0 {
        return max;
    }
    let p = p.value();
    let sum: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| ((a - b).norm() / max).powf(p))
        .sum();
    max * sum.powf(1.0 / p)
}

/// Quasi-triangle constant of `ℓ_p`: `max(1, 2^{1/p − 1})`.
pub fn quasi_constant(p: Exponent) -> f64 {
    (2f64).powf(p.recip() - 1.0).max(1.0)
}

/// `ρ = ln 2 / ln(2C)`, the exponent of the equivalent `ρ`-norm.
pub fn rho_exponent(c: f64) -> Result<f64> {
    if c.is_nan() || c < 1.0 {
        return domain(format!("quasi-norm constant must be ≥ 1, got {c}"));
    }
    Ok(std::f64::consts::LN_2 / (2.0 * c).ln())
}

/// Constants attached to a quasi-norm with quasi-triangle constant `C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuasiNormInfo {
    pub c: f64,
    pub c0: f64,
    pub rho: f64,
}

impl QuasiNormInfo {
    /// Panics if `c < 1`.
    pub fn from_constant(c: f64) -> Self {
        let rho = rho_exponent(c).expect("quasi-norm constant must be at least 1");
        QuasiNormInfo { c, c0: 2.0 * c, rho }
    }
}
