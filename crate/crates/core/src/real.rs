//! Fixed-point reals at a chosen binary precision, plus a small expression
//! language (`1/(2*pi)`, `sqrt(7) - 2`, `golden`) evaluated at that precision.
//!
//! A [`Fixed`] with `bits = p` stores `mant / 2^p` exactly. Arithmetic rounds
//! toward negative infinity; expressions are evaluated with extra guard bits
//! and truncated once at the end.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Guard bits used while evaluating expressions and constants.
const GUARD_BITS: u32 = 32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fixed {
    mant: BigInt,
    bits: u32,
}

impl Fixed {
    pub fn from_mantissa(mant: BigInt, bits: u32) -> Self {
        Fixed { mant, bits }
    }

    pub fn zero(bits: u32) -> Self {
        Fixed::from_mantissa(BigInt::zero(), bits)
    }

    pub fn one(bits: u32) -> Self {
        Fixed::from_int(1, bits)
    }

    pub fn from_int(value: i64, bits: u32) -> Self {
        Fixed::from_mantissa(BigInt::from(value) << bits, bits)
    }

    /// Largest fixed-point value not exceeding the rational `q`.
    pub fn from_rational_floor(q: &BigRational, bits: u32) -> Self {
        let scaled = q.numer() << bits;
        Fixed::from_mantissa(scaled.div_floor(q.denom()), bits)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// One unit in the last place.
    pub fn ulp(bits: u32) -> Self {
        Fixed::from_mantissa(BigInt::one(), bits)
    }

    /// `2^-exp` at the given precision (zero if `exp > bits`).
    pub fn pow2_neg(exp: u32, bits: u32) -> Self {
        if exp > bits {
            Fixed::zero(bits)
        } else {
            Fixed::from_mantissa(BigInt::one() << (bits - exp), bits)
        }
    }

    /// Re-express at another precision, truncating toward negative infinity.
    pub fn with_bits(&self, bits: u32) -> Self {
        let mant = match bits.cmp(&self.bits) {
            Ordering::Equal => self.mant.clone(),
            Ordering::Greater => &self.mant << (bits - self.bits),
            Ordering::Less => &self.mant >> (self.bits - bits),
        };
        Fixed::from_mantissa(mant, bits)
    }

    pub fn is_negative(&self) -> bool {
        self.mant.sign() == Sign::Minus
    }

    pub fn is_positive(&self) -> bool {
        self.mant.sign() == Sign::Plus
    }

    pub fn abs(&self) -> Self {
        Fixed::from_mantissa(self.mant.abs(), self.bits)
    }

    /// Fractional part in `[0, 1)`.
    pub fn frac(&self) -> Self {
        let modulus = BigInt::one() << self.bits;
        Fixed::from_mantissa(self.mant.mod_floor(&modulus), self.bits)
    }

    /// True if the value lies in `[0, 1)`.
    pub fn in_unit_interval(&self) -> bool {
        !self.is_negative() && self.mant.bits() <= u64::from(self.bits)
    }

    pub fn add(&self, other: &Fixed) -> Fixed {
        let (a, b, bits) = self.aligned(other);
        Fixed::from_mantissa(a + b, bits)
    }

    pub fn sub(&self, other: &Fixed) -> Fixed {
        let (a, b, bits) = self.aligned(other);
        Fixed::from_mantissa(a - b, bits)
    }

    pub fn mul(&self, other: &Fixed) -> Fixed {
        let (a, b, bits) = self.aligned(other);
        Fixed::from_mantissa((a * b) >> bits, bits)
    }

    pub fn mul_int(&self, k: i64) -> Fixed {
        Fixed::from_mantissa(&self.mant * k, self.bits)
    }

    pub fn div(&self, other: &Fixed) -> Result<Fixed> {
        let (a, b, bits) = self.aligned(other);
        if b.is_zero() {
            return Err(Error::InvalidParam("division by zero".into()));
        }
        Ok(Fixed::from_mantissa((a << bits).div_floor(&b), bits))
    }

    pub fn sqrt(&self) -> Result<Fixed> {
        if self.is_negative() {
            return Err(Error::InvalidParam("square root of a negative value".into()));
        }
        let scaled = (&self.mant << self.bits).to_biguint().expect("nonnegative");
        Ok(Fixed::from_mantissa(BigInt::from(scaled.sqrt()), self.bits))
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mant.clone(), BigInt::one() << self.bits)
    }

    pub fn to_f64(&self) -> f64 {
        let shift = self.bits.saturating_sub(60);
        let m = (&self.mant >> shift).to_f64().unwrap_or(f64::NAN);
        m / 2f64.powi((self.bits - shift) as i32)
    }

    fn aligned(&self, other: &Fixed) -> (BigInt, BigInt, u32) {
        let bits = self.bits.max(other.bits);
        (
            self.with_bits(bits).mant,
            other.with_bits(bits).mant,
            bits,
        )
    }

    /// Decimal expansion truncated to `digits` places.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let negative = self.is_negative();
        let mag = self.mant.abs();
        let int_part = &mag >> self.bits;
        let mut frac = &mag - (&int_part << self.bits);
        let mut out = String::new();
        if negative {
            out.push('-');
        }
        out.push_str(&int_part.to_string());
        if digits > 0 {
            out.push('.');
            for _ in 0..digits {
                frac *= 10;
                let d = &frac >> self.bits;
                frac -= &d << self.bits;
                out.push_str(&d.to_string());
            }
        }
        out
    }
}

impl PartialOrd for Fixed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fixed {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.bits == other.bits {
            self.mant.cmp(&other.mant)
        } else {
            let (a, b, _) = self.aligned(other);
            a.cmp(&b)
        }
    }
}

impl fmt::Display for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string(f.precision().unwrap_or(20)))
    }
}

/// pi by Machin's formula at `bits` precision (a few ulps low).
pub fn pi(bits: u32) -> Fixed {
    let w = bits + GUARD_BITS;
    let v = arctan_inv(5, w).mul_int(16).sub(&arctan_inv(239, w).mul_int(4));
    v.with_bits(bits)
}

fn arctan_inv(x: i64, bits: u32) -> Fixed {
    let x2 = BigInt::from(x * x);
    let mut power = (BigInt::one() << bits) / x;
    let mut sum = BigInt::zero();
    let mut k = 0i64;
    while !power.is_zero() {
        let term = &power / (2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    Fixed::from_mantissa(sum, bits)
}

/// The golden ratio (1 + sqrt 5) / 2.
pub fn golden(bits: u32) -> Fixed {
    let w = bits + GUARD_BITS;
    let root5 = Fixed::from_int(5, w).sqrt().expect("positive");
    Fixed::from_mantissa((root5.mant + (BigInt::one() << w)) >> 1, w).with_bits(bits)
}

pub fn sqrt2(bits: u32) -> Fixed {
    Fixed::from_int(2, bits + GUARD_BITS)
        .sqrt()
        .expect("positive")
        .with_bits(bits)
}

/// Parsed real-valued expression over decimals and the named constants
/// `pi`, `golden` (alias `phi`), `sqrt2`, with `+ - * /`, parentheses and
/// `sqrt(...)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealExpr {
    source: String,
    node: Node,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Node {
    Decimal(BigRational),
    Const(Constant),
    Neg(Box<Node>),
    Sqrt(Box<Node>),
    Bin(Op, Box<Node>, Box<Node>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Constant {
    Pi,
    Golden,
    Sqrt2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

impl RealExpr {
    pub fn parse(source: &str) -> Result<Self> {
        let mut parser = Parser {
            chars: source.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
        };
        let node = parser.expr()?;
        if parser.pos != parser.chars.len() {
            return Err(Error::Parse(format!(
                "unexpected '{}' in expression {source:?}",
                parser.chars[parser.pos]
            )));
        }
        Ok(RealExpr {
            source: source.trim().to_string(),
            node,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Evaluates with guard bits and truncates to `bits`.
    pub fn eval(&self, bits: u32) -> Result<Fixed> {
        Ok(eval_node(&self.node, bits + GUARD_BITS)?.with_bits(bits))
    }
}

fn eval_node(node: &Node, bits: u32) -> Result<Fixed> {
    Ok(match node {
        Node::Decimal(q) => Fixed::from_rational_floor(q, bits),
        Node::Const(Constant::Pi) => pi(bits),
        Node::Const(Constant::Golden) => golden(bits),
        Node::Const(Constant::Sqrt2) => sqrt2(bits),
        Node::Neg(inner) => {
            let v = eval_node(inner, bits)?;
            Fixed::from_mantissa(-v.mant, bits)
        }
        Node::Sqrt(inner) => eval_node(inner, bits)?.sqrt()?,
        Node::Bin(op, a, b) => {
            let a = eval_node(a, bits)?;
            let b = eval_node(b, bits)?;
            match op {
                Op::Add => a.add(&b),
                Op::Sub => a.sub(&b),
                Op::Mul => a.mul(&b),
                Op::Div => a.div(&b)?,
            }
        }
    })
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!("expected '{c}' at position {}", self.pos)))
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            let op = if c == '+' { Op::Add } else { Op::Sub };
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.factor()?;
        while let Some(c @ ('*' | '/')) = self.peek() {
            self.pos += 1;
            let rhs = self.factor()?;
            let op = if c == '*' { Op::Mul } else { Op::Div };
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Node> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(Node::Neg(Box::new(self.factor()?)))
            }
            Some('+') => {
                self.pos += 1;
                self.factor()
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.decimal(),
            Some(c) if c.is_ascii_alphabetic() => self.ident(),
            Some(c) => Err(Error::Parse(format!("unexpected '{c}' at position {}", self.pos))),
            None => Err(Error::Parse("unexpected end of expression".into())),
        }
    }

    fn decimal(&mut self) -> Result<Node> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '.') {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        parse_decimal(&text).map(Node::Decimal)
    }

    fn ident(&mut self) -> Result<Node> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        let name: String = self.chars[start..self.pos].iter().collect();
        match name.to_ascii_lowercase().as_str() {
            "pi" => Ok(Node::Const(Constant::Pi)),
            "golden" | "phi" => Ok(Node::Const(Constant::Golden)),
            "sqrt2" => Ok(Node::Const(Constant::Sqrt2)),
            "sqrt" => {
                self.expect('(')?;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(Node::Sqrt(Box::new(inner)))
            }
            _ => Err(Error::Parse(format!("unknown name {name:?}"))),
        }
    }
}

/// Exact value of a decimal literal such as `1.618` or `.25`.
pub fn parse_decimal(text: &str) -> Result<BigRational> {
    let (int_part, frac_part) = match text.split_once('.') {
        Some((i, f)) => (i, f),
        None => (text, ""),
    };
    if (int_part.is_empty() && frac_part.is_empty())
        || frac_part.contains('.')
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(Error::Parse(format!("bad decimal literal {text:?}")));
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits
        .parse()
        .map_err(|_| Error::Parse(format!("bad decimal literal {text:?}")))?;
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    Ok(BigRational::new(numer, denom))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_match_f64() {
        assert!((pi(128).to_f64() - std::f64::consts::PI).abs() < 1e-15);
        assert!((golden(128).to_f64() - 1.618_033_988_749_895).abs() < 1e-15);
        assert!((sqrt2(128).to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn pi_digits() {
        assert_eq!(
            pi(200).to_decimal_string(40),
            "3.1415926535897932384626433832795028841971"
        );
    }

    #[test]
    fn expressions() {
        let e = RealExpr::parse("1/(2*pi)").unwrap();
        let v = e.eval(128).unwrap().to_f64();
        assert!((v - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-15);

        let e = RealExpr::parse(" (1 + sqrt(5)) / 2 ").unwrap();
        assert_eq!(e.eval(96).unwrap(), golden(96));

        let e = RealExpr::parse("-0.25 + 1").unwrap();
        assert_eq!(e.eval(64).unwrap(), Fixed::from_mantissa(BigInt::from(3) << 62, 64));
    }

    #[test]
    fn bad_expressions() {
        assert!(RealExpr::parse("1/").is_err());
        assert!(RealExpr::parse("tau").is_err());
        assert!(RealExpr::parse("1.2.3").is_err());
        assert!(RealExpr::parse("(1").is_err());
        assert!(RealExpr::parse("1/0").unwrap().eval(64).is_err());
    }

    #[test]
    fn frac_and_unit_interval() {
        let x = Fixed::from_rational_floor(&BigRational::new((-3).into(), 4.into()), 8);
        assert_eq!(x.frac(), Fixed::from_rational_floor(&BigRational::new(1.into(), 4.into()), 8));
        assert!(x.frac().in_unit_interval());
        assert!(!Fixed::one(8).in_unit_interval());
        assert!(Fixed::zero(8).in_unit_interval());
    }
}
