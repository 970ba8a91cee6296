//! Scalar rings: exact rationals, the biquadratic tower Q(√c, √(1−c)), and f64.

mod complex;
mod rational;
mod tower;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use complex::ComplexScalar;
pub use rational::Rational;
pub use tower::{Tower, TowerScalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("tower parameter mismatch: c={0} vs c={1}")]
    TowerMismatch(String, String),
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0}")]
    Domain(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ring {
    Rational,
    Tower,
    Float64,
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ring::Rational => "rational",
            Ring::Tower => "tower",
            Ring::Float64 => "float64",
        })
    }
}

/// Minimal commutative-ring contract shared by real scalars and complex entries.
pub trait RingElem: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Exact zero test (literal `0.0` for floats).
    fn is_zero(&self) -> bool;

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self = self.add_ref(rhs);
    }

    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        *self = self.add_ref(&a.mul_ref(b));
    }
}

/// A real scalar ring usable for coordinates, subspaces and tensors.
pub trait Scalar: RingElem {
    const EXACT: bool;
    const RING: Ring;

    fn from_rational(q: &Rational) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(v))
    }

    fn inv(&self) -> Option<Self>;
    fn to_f64(&self) -> f64;

    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }

    fn to_json_string(&self) -> String;

    /// (√c, √(1−c)) in this ring, if representable.
    fn sqrt_pair(c: &Rational) -> Result<(Self, Self), ScalarError>;

    /// Float rings return an orthonormal basis of the row span; exact rings return `None`
    /// and fall back to reduced echelon form.
    fn orthonormal_rows(_rows: &[Vec<Self>]) -> Option<Vec<Vec<Self>>> {
        None
    }

    /// Float rings: orthonormal basis of the orthogonal complement of orthonormal `rows`.
    fn orthonormal_complement(_rows: &[Vec<Self>], _dim: usize) -> Option<Vec<Vec<Self>>> {
        None
    }

    fn div_ref(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul_ref(&r))
    }
}

impl RingElem for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;
    const RING: Ring = Ring::Rational;

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn inv(&self) -> Option<Self> {
        self.recip()
    }
    fn to_f64(&self) -> f64 {
        Rational::to_f64(self)
    }
    fn to_json_string(&self) -> String {
        self.to_string()
    }
    fn sqrt_pair(c: &Rational) -> Result<(Self, Self), ScalarError> {
        match (c.sqrt_exact(), c.one_minus().sqrt_exact()) {
            (Some(s), Some(t)) => Ok((s, t)),
            _ => Err(ScalarError::Domain(format!(
                "√{c} and √(1−{c}) are not both rational"
            ))),
        }
    }
}

impl RingElem for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const RING: Ring = Ring::Float64;

    fn from_rational(q: &Rational) -> Self {
        q.to_f64()
    }
    fn inv(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_json_string(&self) -> String {
        format!("{self:e}")
    }
    fn sqrt_pair(c: &Rational) -> Result<(Self, Self), ScalarError> {
        let cf = c.to_f64();
        if !(0.0..=1.0).contains(&cf) {
            return Err(ScalarError::Domain(format!("c={c} outside [0,1]")));
        }
        Ok((cf.sqrt(), (1.0 - cf).sqrt()))
    }

    fn orthonormal_rows(rows: &[Vec<Self>]) -> Option<Vec<Vec<Self>>> {
        Some(crate::linalg::float::orthonormal_rows(rows))
    }

    fn orthonormal_complement(rows: &[Vec<Self>], dim: usize) -> Option<Vec<Vec<Self>>> {
        Some(crate::linalg::float::orthonormal_complement(rows, dim))
    }
}
