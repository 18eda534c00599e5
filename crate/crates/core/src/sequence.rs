//! Sequence prefixes, their sorting permutation and the successor map.
//!
//! Kronecker terms `frac(n * theta)` are fixed-point reals at a precision
//! high enough that the computed order is the true order; van der Corput
//! terms are exact rationals.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::real::{self, Fixed, RealExpr};

/// Default working precision for real-valued sequences.
pub const DEFAULT_PRECISION_BITS: u32 = 128;

/// One term of a sequence: an exact rational or a fixed-point real.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeqValue {
    Rational(BigRational),
    Real(Fixed),
}

impl SeqValue {
    pub fn to_rational(&self) -> BigRational {
        match self {
            SeqValue::Rational(q) => q.clone(),
            SeqValue::Real(x) => x.to_rational(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            SeqValue::Rational(q) => {
                q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
            }
            SeqValue::Real(x) => x.to_f64(),
        }
    }

    /// `|self - other|` as an exact rational.
    pub fn abs_diff(&self, other: &SeqValue) -> BigRational {
        match (self, other) {
            (SeqValue::Real(a), SeqValue::Real(b)) => a.sub(b).abs().to_rational(),
            _ => (self.to_rational() - other.to_rational()).abs(),
        }
    }

    pub fn rational(numer: i64, denom: i64) -> Self {
        SeqValue::Rational(BigRational::new(numer.into(), denom.into()))
    }
}

impl PartialOrd for SeqValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SeqValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (SeqValue::Real(a), SeqValue::Real(b)) => a.cmp(b),
            (SeqValue::Rational(a), SeqValue::Rational(b)) => a.cmp(b),
            _ => self.to_rational().cmp(&other.to_rational()),
        }
    }
}

impl fmt::Display for SeqValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeqValue::Rational(q) => write!(f, "{q}"),
            SeqValue::Real(x) => fmt::Display::fmt(x, f),
        }
    }
}

/// A permutation `pi` of `0..n` together with its inverse.
///
/// Read as a sorting permutation, `pi[k]` is the index of the `k`-th smallest
/// term and `pi_inv[i]` is the rank of term `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SortPermutation {
    pi: Vec<usize>,
    pi_inv: Vec<usize>,
}

impl SortPermutation {
    pub fn from_pi(pi: Vec<usize>) -> Result<Self> {
        let n = pi.len();
        let mut pi_inv = vec![usize::MAX; n];
        for (rank, &i) in pi.iter().enumerate() {
            if i >= n || pi_inv[i] != usize::MAX {
                return Err(Error::InvalidPermutation(format!("{pi:?} is not a permutation")));
            }
            pi_inv[i] = rank;
        }
        Ok(SortPermutation { pi, pi_inv })
    }

    pub fn len(&self) -> usize {
        self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi.is_empty()
    }

    pub fn pi(&self) -> &[usize] {
        &self.pi
    }

    pub fn pi_inv(&self) -> &[usize] {
        &self.pi_inv
    }

    /// `S(i) = pi(pi_inv(i) + 1 mod n)`; panics if `i` is out of range.
    pub fn successor_of(&self, i: usize) -> usize {
        self.pi[(self.pi_inv[i] + 1) % self.len()]
    }

    pub fn predecessor_of(&self, i: usize) -> usize {
        let n = self.len();
        self.pi[(self.pi_inv[i] + n - 1) % n]
    }

    pub fn successor(&self, i: usize) -> Result<usize> {
        if i >= self.len() {
            return Err(Error::OutOfRange {
                value: i as u64,
                bound: self.len() as u64,
            });
        }
        Ok(self.successor_of(i))
    }
}

/// Indices sorting `terms` strictly ascending; fails on ties.
pub fn sort_permutation(terms: &[SeqValue]) -> Result<SortPermutation> {
    let mut pi: Vec<usize> = (0..terms.len()).collect();
    pi.sort_by(|&a, &b| terms[a].cmp(&terms[b]).then(a.cmp(&b)));
    for w in pi.windows(2) {
        if terms[w[0]] == terms[w[1]] {
            return Err(Error::DuplicateValues {
                first: w[0].min(w[1]),
                second: w[0].max(w[1]),
            });
        }
    }
    SortPermutation::from_pi(pi)
}

/// The first `n` terms of a sequence with their sorting permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortedSequence {
    terms: Vec<SeqValue>,
    perm: SortPermutation,
}

impl SortedSequence {
    pub fn from_terms(terms: Vec<SeqValue>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidParam("a sequence needs at least one term".into()));
        }
        let perm = sort_permutation(&terms)?;
        Ok(SortedSequence { terms, perm })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[SeqValue] {
        &self.terms
    }

    pub fn permutation(&self) -> &SortPermutation {
        &self.perm
    }

    pub fn pi(&self) -> &[usize] {
        self.perm.pi()
    }

    pub fn pi_inv(&self) -> &[usize] {
        self.perm.pi_inv()
    }

    pub fn successor(&self, i: usize) -> Result<usize> {
        self.perm.successor(i)
    }

    /// The prefix of the first `n` terms, re-sorted.
    pub fn truncate(&self, n: usize) -> Result<SortedSequence> {
        if n == 0 || n > self.len() {
            return Err(Error::InvalidParam(format!(
                "prefix length {n} not in 1..={}",
                self.len()
            )));
        }
        SortedSequence::from_terms(self.terms[..n].to_vec())
    }
}

/// Free function form of [`SortedSequence::successor`].
pub fn successor(seq: &SortedSequence, i: usize) -> Result<usize> {
    seq.successor(i)
}

/// Rotation number of a Kronecker sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Theta {
    Golden,
    Sqrt2,
    Expr(RealExpr),
}

impl Theta {
    /// `golden`, `sqrt2`, or any expression accepted by [`RealExpr`].
    pub fn parse(text: &str) -> Result<Self> {
        match text.trim().to_ascii_lowercase().as_str() {
            "golden" | "phi" => Ok(Theta::Golden),
            "sqrt2" => Ok(Theta::Sqrt2),
            _ => Ok(Theta::Expr(RealExpr::parse(text)?)),
        }
    }

    pub fn eval(&self, bits: u32) -> Result<Fixed> {
        match self {
            Theta::Golden => Ok(real::golden(bits)),
            Theta::Sqrt2 => Ok(real::sqrt2(bits)),
            Theta::Expr(e) => e.eval(bits),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Theta::Golden => "golden".into(),
            Theta::Sqrt2 => "sqrt2".into(),
            Theta::Expr(e) => e.source().to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KroneckerParams {
    pub theta: Theta,
    pub precision_bits: u32,
}

impl KroneckerParams {
    pub fn new(theta: Theta) -> Self {
        KroneckerParams {
            theta,
            precision_bits: DEFAULT_PRECISION_BITS,
        }
    }

    pub fn with_precision(theta: Theta, precision_bits: u32) -> Self {
        KroneckerParams {
            theta,
            precision_bits,
        }
    }

    /// Working precision for `n` terms: at least `64 + 2 ceil(log2 n)`.
    pub fn effective_bits(&self, n: usize) -> u32 {
        self.precision_bits.max(64 + 2 * ceil_log2(n))
    }
}

fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// Kronecker terms `frac(k * theta)` for `k < n` at `bits` precision.
fn kronecker_terms(params: &KroneckerParams, n: usize, bits: u32) -> Result<Vec<Fixed>> {
    let alpha = params.theta.eval(bits)?.frac();
    let modulus = BigInt::one() << bits;
    let mut terms = Vec::with_capacity(n);
    let mut acc = BigInt::zero();
    for _ in 0..n {
        terms.push(Fixed::from_mantissa(acc.clone(), bits));
        acc += alpha.mantissa();
        if acc >= modulus {
            acc -= &modulus;
        }
    }
    Ok(terms)
}

fn precision_error(a: usize, b: usize, bits: u32) -> Error {
    Error::PrecisionInsufficient {
        first: a.min(b),
        second: a.max(b),
        precision_bits: bits,
        guard_bits: bits / 2,
    }
}

/// Terms closer than this (in ulps, on the circle) make the order untrustworthy.
fn guard_threshold(bits: u32) -> BigInt {
    BigInt::one() << (bits - bits / 2)
}

/// Circular distance from `lo` up to `hi` on the unit circle, in ulps.
fn circular_gap(lo: &Fixed, hi: &Fixed, bits: u32) -> BigInt {
    let d = hi.mantissa() - lo.mantissa();
    if d.is_negative() {
        d + (BigInt::one() << bits)
    } else {
        d
    }
}

/// First `n` Kronecker terms, sorted, with the minimal-gap guard applied.
pub fn kronecker_prefix(params: &KroneckerParams, n: usize) -> Result<SortedSequence> {
    if n == 0 {
        return Err(Error::InvalidParam("N must be at least 1".into()));
    }
    let bits = params.effective_bits(n);
    let fixed = kronecker_terms(params, n, bits)?;
    let terms: Vec<SeqValue> = fixed.iter().cloned().map(SeqValue::Real).collect();
    let perm = match sort_permutation(&terms) {
        Ok(p) => p,
        Err(Error::DuplicateValues { first, second }) => {
            return Err(precision_error(first, second, bits))
        }
        Err(e) => return Err(e),
    };
    let threshold = guard_threshold(bits);
    let pi = perm.pi();
    for k in 0..n {
        let (a, b) = (pi[k], pi[(k + 1) % n]);
        if a == b {
            continue;
        }
        let gap = if k + 1 == n {
            circular_gap(&fixed[a], &fixed[b], bits)
        } else {
            fixed[b].mantissa() - fixed[a].mantissa()
        };
        if gap <= threshold {
            return Err(precision_error(a, b, bits));
        }
    }
    Ok(SortedSequence { terms, perm })
}

/// Sorting permutations of every Kronecker prefix `1..=n_max`, built by
/// insertion so that scanning all prefixes costs one sort overall.
///
/// The precision is fixed up front for `n_max`, so every yielded order is
/// guarded at the same strength as `kronecker_prefix(params, n_max)`.
pub struct KroneckerOrders {
    terms: Vec<Fixed>,
    sorted: Vec<usize>,
    bits: u32,
    threshold: BigInt,
    failed: bool,
}

impl KroneckerOrders {
    pub fn new(params: &KroneckerParams, n_max: usize) -> Result<Self> {
        let bits = params.effective_bits(n_max);
        Ok(KroneckerOrders {
            terms: kronecker_terms(params, n_max, bits)?,
            sorted: Vec::with_capacity(n_max),
            bits,
            threshold: guard_threshold(bits),
            failed: false,
        })
    }

    pub fn precision_bits(&self) -> u32 {
        self.bits
    }

    pub fn terms(&self) -> &[Fixed] {
        &self.terms
    }

    fn insert_next(&mut self) -> Result<()> {
        let n = self.sorted.len();
        let t = &self.terms[n];
        let pos = self.sorted.partition_point(|&j| self.terms[j] < *t);
        if n > 0 {
            let below = self.sorted[(pos + n - 1) % n];
            let above = self.sorted[pos % n];
            for (lo, hi) in [(below, n), (n, above)] {
                if circular_gap(&self.terms[lo], &self.terms[hi], self.bits) <= self.threshold {
                    return Err(precision_error(lo, hi, self.bits));
                }
            }
        }
        self.sorted.insert(pos, n);
        Ok(())
    }
}

impl Iterator for KroneckerOrders {
    type Item = Result<SortPermutation>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed || self.sorted.len() == self.terms.len() {
            return None;
        }
        if let Err(e) = self.insert_next() {
            self.failed = true;
            return Some(Err(e));
        }
        Some(SortPermutation::from_pi(self.sorted.clone()))
    }
}

/// First `n` base-`base` van der Corput terms as exact rationals.
pub fn vdc_prefix(base: u64, n: usize) -> Result<SortedSequence> {
    if base < 2 {
        return Err(Error::InvalidParam(format!("base must be at least 2, got {base}")));
    }
    if n == 0 {
        return Err(Error::InvalidParam("N must be at least 1".into()));
    }
    let terms = (0..n as u64).map(|k| SeqValue::Rational(radical_inverse(k, base))).collect();
    SortedSequence::from_terms(terms)
}

/// Digit reversal of `k` in `base` across the radix point.
pub fn radical_inverse(mut k: u64, base: u64) -> BigRational {
    let mut numer = BigInt::zero();
    let mut denom = BigInt::one();
    while k > 0 {
        numer = numer * base + (k % base);
        denom *= base;
        k /= base;
    }
    BigRational::new(numer, denom)
}

/// Reverses the low `len` bits of `x`.
pub(crate) fn reverse_low_bits(x: u64, len: u32) -> u64 {
    if len == 0 {
        0
    } else {
        x.reverse_bits() >> (64 - len)
    }
}

/// Successor in the `4^m`-th binary van der Corput graph via binary
/// addition from the left: reverse the `2m` bits, add one, reverse back.
pub fn vdc_successor_bits(i: u64, m: u32) -> Result<u64> {
    if m == 0 || m > 31 {
        return Err(Error::InvalidParam(format!("m = {m} not in 1..=31")));
    }
    let len = 2 * m;
    let n = 1u64 << len;
    if i >= n {
        return Err(Error::OutOfRange { value: i, bound: n });
    }
    let bumped = (reverse_low_bits(i, len) + 1) & (n - 1);
    Ok(reverse_low_bits(bumped, len))
}
