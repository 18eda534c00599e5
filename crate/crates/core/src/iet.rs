//! Interval exchange transformations, the dyadic odometer, and the orbit
//! sequences they generate.
//!
//! A finite IET is given by a permutation of `1..=k` and subinterval lengths.
//! With `s_j` the left end of subinterval `j` and `s'_j` the left end of its
//! image, a point `x` in `[s_j, s_{j+1})` maps to `x - s_j + s'_j`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{Fixed, RealExpr};
use crate::sequence::{KroneckerParams, SeqValue, SortedSequence, DEFAULT_PRECISION_BITS};

/// How the permutation and lengths of an IET are read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// Subinterval `j` of the domain moves to position `perm[j]`.
    #[default]
    AsWritten,
    /// The permutation and lengths describe the image arrangement; the map
    /// is the inverse of the as-written one.
    Transposed,
}

impl Convention {
    pub fn other(self) -> Self {
        match self {
            Convention::AsWritten => Convention::Transposed,
            Convention::Transposed => Convention::AsWritten,
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::AsWritten => "as-written",
            Convention::Transposed => "transposed",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Piece {
    start: Fixed,
    shift: Fixed,
}

/// A finite interval exchange transformation at a fixed binary precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IetSpec {
    perm: Vec<usize>,
    lengths: Vec<Fixed>,
    breakpoints: Vec<Fixed>,
    images: Vec<Fixed>,
    convention: Convention,
    bits: u32,
    pieces: Vec<Piece>,
}

impl IetSpec {
    /// `perm` is 1-based. The lengths must share a precision and sum to 1
    /// within `2^-(p-4)`; the last length absorbs that residue so the
    /// subintervals tile `[0, 1)` exactly.
    pub fn new(perm: Vec<usize>, lengths: Vec<Fixed>, convention: Convention) -> Result<Self> {
        let k = perm.len();
        if k == 0 || lengths.len() != k {
            return Err(Error::InvalidPermutation(format!(
                "{k} permutation entries for {} lengths",
                lengths.len()
            )));
        }
        let mut inverse = vec![0usize; k + 1];
        for (j, &p) in perm.iter().enumerate() {
            if p == 0 || p > k || inverse[p] != 0 {
                return Err(Error::InvalidPermutation(format!("{perm:?} is not a bijection on 1..={k}")));
            }
            inverse[p] = j + 1;
        }
        let bits = lengths[0].bits();
        if lengths.iter().any(|l| l.bits() != bits) {
            return Err(Error::InvalidParam("lengths must share one precision".into()));
        }
        if let Some(index) = lengths.iter().position(|l| !l.is_positive()) {
            return Err(Error::NonpositiveLength { index });
        }
        let one = Fixed::one(bits);
        let sum = lengths.iter().fold(Fixed::zero(bits), |acc, l| acc.add(l));
        if sum.sub(&one).abs() >= Fixed::pow2_neg(bits.saturating_sub(4), bits) {
            return Err(Error::LengthsNotNormalized {
                sum: sum.to_decimal_string(30),
            });
        }
        let mut lengths = lengths;
        let head = lengths[..k - 1].iter().fold(Fixed::zero(bits), |acc, l| acc.add(l));
        lengths[k - 1] = one.sub(&head);
        if !lengths[k - 1].is_positive() {
            return Err(Error::NonpositiveLength { index: k - 1 });
        }

        // s_j = sum of lengths before j; s'_j = sum of lengths placed before
        // position perm[j].
        let mut breakpoints = Vec::with_capacity(k);
        let mut acc = Fixed::zero(bits);
        for l in &lengths {
            breakpoints.push(acc.clone());
            acc = acc.add(l);
        }
        let images: Vec<Fixed> = perm
            .iter()
            .map(|&target| {
                (1..target).fold(Fixed::zero(bits), |acc, pos| acc.add(&lengths[inverse[pos] - 1]))
            })
            .collect();

        let mut pieces: Vec<Piece> = (0..k)
            .map(|j| match convention {
                Convention::AsWritten => Piece {
                    start: breakpoints[j].clone(),
                    shift: images[j].sub(&breakpoints[j]),
                },
                Convention::Transposed => Piece {
                    start: images[j].clone(),
                    shift: breakpoints[j].sub(&images[j]),
                },
            })
            .collect();
        pieces.sort_by(|a, b| a.start.cmp(&b.start));

        Ok(IetSpec {
            perm,
            lengths,
            breakpoints,
            images,
            convention,
            bits,
            pieces,
        })
    }

    /// Lengths given as expressions; at most one may be `rest`, meaning
    /// one minus the others.
    pub fn from_exprs(
        perm: Vec<usize>,
        lengths: &[String],
        bits: u32,
        convention: Convention,
    ) -> Result<Self> {
        let mut values: Vec<Option<Fixed>> = Vec::with_capacity(lengths.len());
        for text in lengths {
            if text.trim().eq_ignore_ascii_case("rest") {
                values.push(None);
            } else {
                values.push(Some(RealExpr::parse(text)?.eval(bits)?));
            }
        }
        let rest_slots = values.iter().filter(|v| v.is_none()).count();
        if rest_slots > 1 {
            return Err(Error::Parse("at most one length may be `rest`".into()));
        }
        let known = values
            .iter()
            .flatten()
            .fold(Fixed::zero(bits), |acc, v| acc.add(v));
        let rest = Fixed::one(bits).sub(&known);
        let lengths = values
            .into_iter()
            .map(|v| v.unwrap_or_else(|| rest.clone()))
            .collect();
        IetSpec::new(perm, lengths, convention)
    }

    /// The two-interval exchange `perm = (2, 1)`, lengths
    /// `(theta mod 1, 1 - theta mod 1)`.
    pub fn kronecker(params: &KroneckerParams, n: usize, convention: Convention) -> Result<Self> {
        let bits = params.effective_bits(n);
        let alpha = params.theta.eval(bits)?.frac();
        if !alpha.is_positive() {
            return Err(Error::NonpositiveLength { index: 0 });
        }
        let rest = Fixed::one(bits).sub(&alpha);
        IetSpec::new(vec![2, 1], vec![alpha, rest], convention)
    }

    pub fn k(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn lengths(&self) -> &[Fixed] {
        &self.lengths
    }

    /// `s_j`, left ends of the domain subintervals.
    pub fn breakpoints(&self) -> &[Fixed] {
        &self.breakpoints
    }

    /// `s'_j`, left ends of the image subintervals.
    pub fn images(&self) -> &[Fixed] {
        &self.images
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn precision_bits(&self) -> u32 {
        self.bits
    }

    /// The same permutation and lengths read under the other convention.
    pub fn with_convention(&self, convention: Convention) -> Self {
        IetSpec::new(self.perm.clone(), self.lengths.clone(), convention)
            .expect("already validated")
    }

    pub fn apply(&self, x: &Fixed) -> Result<Fixed> {
        if !x.in_unit_interval() {
            return Err(Error::OutOfDomain(x.to_decimal_string(20)));
        }
        let x = x.with_bits(self.bits);
        let idx = self.pieces.partition_point(|p| p.start <= x) - 1;
        Ok(x.add(&self.pieces[idx].shift))
    }
}

/// `T(x) = x - (1 - 2^-n) + 2^-(n+1)` where `n` counts the leading ones of
/// the binary expansion of `x`: adding one from the left.
pub fn odometer_apply(x: &BigRational) -> Result<BigRational> {
    let one = BigRational::one();
    if x < &BigRational::zero() || x >= &one || !is_power_of_two(x.denom()) {
        return Err(Error::OutOfDomain(x.to_string()));
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut rest = x.clone();
    let mut n = 0u32;
    while rest >= half {
        rest = &rest * BigInt::from(2) - &one;
        n += 1;
    }
    let pow = |e: u32| BigRational::new(BigInt::one(), BigInt::one() << e);
    Ok(x - (&one - pow(n)) + pow(n + 1))
}

fn is_power_of_two(d: &BigInt) -> bool {
    d > &BigInt::zero() && (d & (d - BigInt::one())).is_zero()
}

/// A map of `[0, 1)` that can drive an orbit.
pub trait IntervalMap {
    fn apply_value(&self, x: &SeqValue) -> Result<SeqValue>;
}

impl IntervalMap for IetSpec {
    fn apply_value(&self, x: &SeqValue) -> Result<SeqValue> {
        let fx = match x {
            SeqValue::Real(f) => f.clone(),
            SeqValue::Rational(q) => {
                let f = Fixed::from_rational_floor(q, self.bits);
                if &f.to_rational() != q {
                    return Err(Error::OutOfDomain(format!("{q} is not representable at {} bits", self.bits)));
                }
                f
            }
        };
        self.apply(&fx).map(SeqValue::Real)
    }
}

/// The dyadic odometer acting on dyadic rationals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DyadicOdometer;

impl IntervalMap for DyadicOdometer {
    fn apply_value(&self, x: &SeqValue) -> Result<SeqValue> {
        odometer_apply(&x.to_rational()).map(SeqValue::Rational)
    }
}

/// Either kind of map a spec file can describe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IetMap {
    Finite(IetSpec),
    Odometer,
}

impl IntervalMap for IetMap {
    fn apply_value(&self, x: &SeqValue) -> Result<SeqValue> {
        match self {
            IetMap::Finite(t) => t.apply_value(x),
            IetMap::Odometer => DyadicOdometer.apply_value(x),
        }
    }
}

impl IetMap {
    /// The orbit start `0` in the value kind the map works on.
    pub fn origin(&self) -> SeqValue {
        match self {
            IetMap::Finite(t) => SeqValue::Real(Fixed::zero(t.precision_bits())),
            IetMap::Odometer => SeqValue::rational(0, 1),
        }
    }

    /// Default revisit tolerance: `2^-(p/2)` for finite maps, exact for the
    /// odometer.
    pub fn default_tolerance(&self) -> Tolerance {
        match self {
            IetMap::Finite(t) => Tolerance::pow2(t.precision_bits() / 2),
            IetMap::Odometer => Tolerance::Exact,
        }
    }
}

/// Closeness threshold for orbit and evolution checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tolerance {
    /// Values must be equal.
    Exact,
    /// Values must differ by strictly less than this.
    Below(BigRational),
}

impl Tolerance {
    pub fn pow2(neg_exp: u32) -> Self {
        Tolerance::Below(BigRational::new(BigInt::one(), BigInt::one() << neg_exp))
    }

    pub fn close(&self, a: &SeqValue, b: &SeqValue) -> bool {
        match self {
            Tolerance::Exact => a == b,
            Tolerance::Below(tol) => &a.abs_diff(b) < tol,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    pub points: Vec<SeqValue>,
    /// First index whose point lies within tolerance of an earlier one.
    pub revisit_index: Option<usize>,
    pub distinct_ok: bool,
}

impl OrbitReport {
    pub fn into_sequence(self) -> Result<SortedSequence> {
        SortedSequence::from_terms(self.points)
    }
}

/// `points[0] = x0`, `points[i + 1] = T(points[i])`, with revisit detection.
pub fn iet_orbit<T: IntervalMap + ?Sized>(
    map: &T,
    x0: SeqValue,
    n: usize,
    tolerance: &Tolerance,
) -> Result<OrbitReport> {
    if n == 0 {
        return Err(Error::InvalidParam("orbit length must be at least 1".into()));
    }
    let mut points = Vec::with_capacity(n);
    let mut seen: BTreeMap<SeqValue, usize> = BTreeMap::new();
    let mut revisit_index = None;
    let mut x = x0;
    for i in 0..n {
        if i > 0 {
            x = map.apply_value(&x)?;
        }
        if revisit_index.is_none() {
            let below = seen.range(..=&x).next_back().map(|(v, _)| v);
            let above = seen.range(&x..).next().map(|(v, _)| v);
            if below.into_iter().chain(above).any(|v| tolerance.close(v, &x)) {
                revisit_index = Some(i);
            }
        }
        seen.insert(x.clone(), i);
        points.push(x.clone());
    }
    Ok(OrbitReport {
        points,
        revisit_index,
        distinct_ok: revisit_index.is_none(),
    })
}

/// True iff `|T(a_i) - a_{i+1}|` is within tolerance for every consecutive pair.
pub fn verify_evolution<T: IntervalMap + ?Sized>(
    seq: &SortedSequence,
    map: &T,
    tolerance: &Tolerance,
) -> bool {
    seq.terms().windows(2).all(|w| match map.apply_value(&w[0]) {
        Ok(image) => tolerance.close(&image, &w[1]),
        Err(_) => false,
    })
}

/// The convention under which `spec` generates `seq`, trying the spec's own
/// convention first.
pub fn select_convention(seq: &SortedSequence, spec: &IetSpec, tolerance: &Tolerance) -> Option<Convention> {
    [spec.convention(), spec.convention().other()]
        .into_iter()
        .find(|&c| verify_evolution(seq, &spec.with_convention(c), tolerance))
}

/// On-disk IET description (TOML).
///
/// ```toml
/// perm = [3, 1, 4, 2]
/// lengths = ["1/(2*pi)", "1/(4*pi)", "1/(3*pi)", "rest"]
/// precision = 128            # optional
/// convention = "as-written"  # optional
/// ```
///
/// or `odometer = true` for the dyadic odometer.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IetConfig {
    #[serde(default)]
    pub perm: Vec<usize>,
    #[serde(default)]
    pub lengths: Vec<String>,
    pub precision: Option<u32>,
    pub convention: Option<Convention>,
    #[serde(default)]
    pub odometer: bool,
}

impl IetConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Builds the map; `precision` overrides the file's value when given.
    pub fn build(&self, precision: Option<u32>) -> Result<IetMap> {
        if self.odometer {
            if !self.perm.is_empty() || !self.lengths.is_empty() {
                return Err(Error::Parse("odometer spec takes no perm or lengths".into()));
            }
            return Ok(IetMap::Odometer);
        }
        let bits = precision.or(self.precision).unwrap_or(DEFAULT_PRECISION_BITS);
        if bits < 64 {
            return Err(Error::InvalidParam(format!("precision {bits} is below 64 bits")));
        }
        IetSpec::from_exprs(
            self.perm.clone(),
            &self.lengths,
            bits,
            self.convention.unwrap_or_default(),
        )
        .map(IetMap::Finite)
    }
}

/// Parameters of the two four- and six-interval examples, as spec text.
pub fn example_four_interval() -> IetConfig {
    IetConfig {
        perm: vec![3, 1, 4, 2],
        lengths: vec!["1/(2*pi)".into(), "1/(4*pi)".into(), "1/(3*pi)".into(), "rest".into()],
        ..IetConfig::default()
    }
}

pub fn example_six_interval() -> IetConfig {
    IetConfig {
        perm: vec![3, 1, 6, 5, 4, 2],
        lengths: vec![
            "1/pi".into(),
            "1/(2*pi)".into(),
            "1/(3*pi)".into(),
            "1/(4*pi)".into(),
            "1/(5*pi)".into(),
            "rest".into(),
        ],
        ..IetConfig::default()
    }
}

/// Number of leading ones in the binary expansion of a dyadic `x` in `[0,1)`.
pub fn leading_ones(x: &BigRational) -> Option<u32> {
    if x < &BigRational::zero() || x >= &BigRational::one() || !is_power_of_two(x.denom()) {
        return None;
    }
    let width = x.denom().bits() - 1;
    let n = (0..width).rev().take_while(|&pos| x.numer().bit(pos)).count();
    Some(n as u32)
}
