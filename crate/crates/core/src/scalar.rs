//! Scalar fields used throughout the crate.
//!
//! Two backends implement [`Scalar`]: exact rationals ([`Rational`]) and
//! `f64`. Forms use `Complex<F>` over either one, so the exact backend is the
//! Gaussian rationals.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{Num, One, ToPrimitive, Zero};
use num::Complex;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::{Congruence, Matrix};

pub type Rational = BigRational;

/// Default relative zero tolerance of the float backend.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

pub trait Scalar:
    Clone + Debug + Display + PartialEq + PartialOrd + Send + Sync + 'static + Num + Neg<Output = Self>
{
    /// True when arithmetic is exact and zero tests need no tolerance.
    const EXACT: bool;

    fn from_rational(q: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
    fn parse_repr(s: &str) -> Result<Self>;

    /// Congruence diagonalization `P^T Q P = diag` of a symmetric matrix.
    fn diagonalize(q: &Matrix<Self>) -> Congruence<Self>;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }

    /// Zero test: exact equality for the exact backend, `|x| <= tol * scale` otherwise.
    fn negligible(&self, scale: f64, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.to_f64().abs() <= tol * scale
        }
    }
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"3"`, `"-1/2"` or a finite decimal such as `"0.125"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let err = || Error::Parse {
        position: 0,
        message: format!("not a rational number: `{s}`"),
    };
    if t.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        let digits = format!("{whole_digits}{frac}");
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let n: BigInt = digits.parse().map_err(|_| err())?;
        let d = num::pow(BigInt::from(10), frac.len());
        let q = Rational::new(n, d);
        return Ok(if negative { -q } else { q });
    }
    let n: BigInt = t.parse().map_err(|_| err())?;
    Ok(Rational::from_integer(n))
}

/// Exact binomial coefficient with `C(n, k) = 0` whenever `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> Rational {
    if k < 0 || n < 0 || k > n {
        return Rational::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => parse_rational(&n.to_string()),
            other => Err(Error::Json(format!("expected rational, found {other}"))),
        }
    }

    fn parse_repr(s: &str) -> Result<Self> {
        parse_rational(s)
    }

    fn diagonalize(q: &Matrix<Self>) -> Congruence<Self> {
        crate::linalg::congruence_diagonalize(q)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(q: &Rational) -> Self {
        ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or_else(|| Value::String(self.to_string()))
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| Error::Json(format!("not a float: {n}"))),
            Value::String(s) => Self::parse_repr(s),
            other => Err(Error::Json(format!("expected number, found {other}"))),
        }
    }

    fn parse_repr(s: &str) -> Result<Self> {
        if let Ok(x) = s.trim().parse::<f64>() {
            return Ok(x);
        }
        parse_rational(s).map(|q| <f64 as Scalar>::from_rational(&q))
    }

    fn diagonalize(q: &Matrix<Self>) -> Congruence<Self> {
        crate::linalg::eigen_diagonalize(q)
    }
}

/// `i^k` as a complex scalar.
pub fn i_pow<F: Scalar>(k: usize) -> Complex<F> {
    match k % 4 {
        0 => Complex::new(F::one(), F::zero()),
        1 => Complex::new(F::zero(), F::one()),
        2 => Complex::new(-F::one(), F::zero()),
        _ => Complex::new(F::zero(), -F::one()),
    }
}

pub fn complex_abs_f64<F: Scalar>(z: &Complex<F>) -> f64 {
    z.re.to_f64().hypot(z.im.to_f64())
}

pub fn complex_negligible<F: Scalar>(z: &Complex<F>, scale: f64, tol: f64) -> bool {
    z.re.negligible(scale, tol) && z.im.negligible(scale, tol)
}

pub fn to_complex_f64<F: Scalar>(z: &Complex<F>) -> Complex<f64> {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}

/// Strictly positive beyond the zero tolerance.
pub fn is_positive<F: Scalar>(x: &F, scale: f64, tol: f64) -> bool {
    !x.negligible(scale, tol) && *x > F::zero()
}
