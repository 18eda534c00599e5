//! Fixed-width binary strings of vertex labels.

use std::fmt;

use crate::error::{Error, Result};
use crate::sequence::reverse_low_bits;

/// A binary string of `len` bits, most significant first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BitString {
    value: u64,
    len: u32,
}

impl BitString {
    pub fn new(value: u64, len: u32) -> Result<Self> {
        if len > 63 {
            return Err(Error::InvalidParam(format!("bit length {len} exceeds 63")));
        }
        if value >> len != 0 {
            return Err(Error::OutOfRange {
                value,
                bound: 1 << len,
            });
        }
        Ok(BitString { value, len })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn reverse(&self) -> Self {
        BitString {
            value: reverse_low_bits(self.value, self.len),
            len: self.len,
        }
    }

    pub fn is_all_ones(&self) -> bool {
        self.value.count_ones() == self.len
    }

    /// 1-based position of the first zero reading from the left.
    pub fn first_zero_from_left(&self) -> Option<u32> {
        (1..=self.len).find(|&pos| self.value >> (self.len - pos) & 1 == 0)
    }

    /// 1-based position of the first zero reading from the right.
    pub fn first_zero_from_right(&self) -> Option<u32> {
        (1..=self.len).find(|&pos| self.value >> (pos - 1) & 1 == 0)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for pos in (0..self.len).rev() {
            f.write_str(if self.value >> pos & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// `b(i)`: the `2m`-bit representation of `i < 4^m`.
pub fn bits(i: u64, m: u32) -> Result<BitString> {
    if m == 0 || m > 31 {
        return Err(Error::InvalidParam(format!("m = {m} not in 1..=31")));
    }
    BitString::new(i, 2 * m)
}

pub fn reverse_bits(b: &BitString) -> BitString {
    b.reverse()
}

/// `(b_0(i), b_1(i))`: the first and last `m` bits of `b(i)`.
pub fn split_b0_b1(i: u64, m: u32) -> Result<(BitString, BitString)> {
    let b = bits(i, m)?;
    let low = b.value & ((1 << m) - 1);
    Ok((
        BitString {
            value: b.value >> m,
            len: m,
        },
        BitString { value: low, len: m },
    ))
}

/// `psi(i) = (b_1(i), r(b_0(i)))` read as integers.
pub fn psi(i: u64, m: u32) -> Result<(u64, u64)> {
    let (b0, b1) = split_b0_b1(i, m)?;
    Ok((b1.value, b0.reverse().value))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(bits(1, 2).unwrap().to_string(), "0001");
        assert_eq!(bits(1, 2).unwrap().reverse().to_string(), "1000");
        assert_eq!(bits(10, 2).unwrap().to_string(), "1010");
        assert_eq!(bits(10, 2).unwrap().reverse().to_string(), "0101");
        let (b0, b1) = split_b0_b1(10, 2).unwrap();
        assert_eq!((b0.to_string(), b1.to_string()), ("10".into(), "10".into()));
        let (b0, b1) = split_b0_b1(1, 2).unwrap();
        assert_eq!((b0.to_string(), b1.to_string()), ("00".into(), "01".into()));

        assert_eq!(bits(0, 1).unwrap().to_string(), "00");
        assert_eq!(bits(0, 1).unwrap().reverse().to_string(), "00");
        let (b0, b1) = split_b0_b1(0, 1).unwrap();
        assert_eq!((b0.to_string(), b1.to_string()), ("0".into(), "0".into()));
        assert!(matches!(bits(16, 2), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi(1, 2).unwrap(), (1, 0));
        assert_eq!(psi(10, 2).unwrap(), (2, 1));
        assert_eq!(psi(15, 2).unwrap(), (3, 3));
    }

    #[test]
    fn zero_positions() {
        let b = BitString::new(0b1101, 4).unwrap();
        assert_eq!(b.first_zero_from_left(), Some(3));
        assert_eq!(b.first_zero_from_right(), Some(2));
        assert_eq!(BitString::new(0b11, 2).unwrap().first_zero_from_left(), None);
        assert!(BitString::new(0b111, 3).unwrap().is_all_ones());
    }
}
