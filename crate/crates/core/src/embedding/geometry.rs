//! Exact dyadic coordinates.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A rational with power-of-two denominator. Serialized as `"num/den"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dyadic(Rational64);

impl Dyadic {
    /// `num / 2^exp`.
    pub fn new(num: i64, exp: u32) -> Self {
        Dyadic(Rational64::new(num, 1i64 << exp))
    }

    pub fn int(v: i64) -> Self {
        Dyadic(Rational64::from_integer(v))
    }

    pub fn zero() -> Self {
        Dyadic(Rational64::zero())
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    /// `log2` of the reduced denominator.
    pub fn exp(&self) -> u32 {
        self.denom().trailing_zeros()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn floor(&self) -> i64 {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> i64 {
        self.0.ceil().to_integer()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Value times `2^exp` as an integer; `exp` must cover the denominator.
    pub fn scaled(&self, exp: u32) -> i128 {
        debug_assert!(self.exp() <= exp);
        self.numer() as i128 * (1i128 << (exp - self.exp()))
    }

    pub fn abs(&self) -> Self {
        if self.0 < Rational64::zero() {
            -*self
        } else {
            *self
        }
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        Dyadic(self.0 + rhs.0)
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        Dyadic(self.0 - rhs.0)
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        Dyadic(self.0 * rhs.0)
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic(-self.0)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a dyadic rational: {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let num: i64 = num.parse().map_err(|_| bad())?;
        let den: i64 = den.parse().map_err(|_| bad())?;
        if den <= 0 || den.count_ones() != 1 {
            return Err(bad());
        }
        Ok(Dyadic(Rational64::new(num, den)))
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A point of the plane, serialized as `[x, y]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[Dyadic; 2]", from = "[Dyadic; 2]")]
pub struct Point {
    pub x: Dyadic,
    pub y: Dyadic,
}

impl Point {
    pub fn new(x: Dyadic, y: Dyadic) -> Self {
        Point { x, y }
    }

    pub fn lattice(x: u64, y: u64) -> Self {
        Point::new(Dyadic::int(x as i64), Dyadic::int(y as i64))
    }

    pub fn is_lattice(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }
}

impl From<Point> for [Dyadic; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl From<[Dyadic; 2]> for Point {
    fn from([x, y]: [Dyadic; 2]) -> Self {
        Point { x, y }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}
