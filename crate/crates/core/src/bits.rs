//! Bit strings with the most-significant-first convention used throughout the crate.
//!
//! A string `ξ_1 ξ_2 … ξ_m` has index `Σ ξ_l 2^{m-l}`, so `ξ_1` is the most
//! significant bit. Slices are 1-indexed and inclusive, `ξ_{a:b}`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Longest string representable. Lengths are capped by the `u64` backing word.
pub const MAX_BITS: usize = 64;

/// An ordered sequence of bits, stored as its MSB-first integer value and a length.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitString {
    // Ordering derives on (len, value): for equal lengths this is lexicographic.
    len: u8,
    value: u64,
}

impl BitString {
    pub const EMPTY: BitString = BitString { len: 0, value: 0 };

    /// Builds the string of `len` bits whose MSB-first value is `value`.
    pub fn from_index(value: u64, len: usize) -> Result<Self> {
        if len > MAX_BITS {
            return Err(Error::invalid(format!("bit string length {len} exceeds {MAX_BITS}")));
        }
        if len < MAX_BITS && value >> len != 0 {
            return Err(Error::invalid(format!("index {value} out of range for {len} bits")));
        }
        Ok(BitString { len: len as u8, value })
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::from_index(0, len)
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        if bits.len() > MAX_BITS {
            return Err(Error::invalid(format!("bit string length {} exceeds {MAX_BITS}", bits.len())));
        }
        let value = bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
        Ok(BitString { len: bits.len() as u8, value })
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// MSB-first integer value.
    pub fn index(&self) -> u64 {
        self.value
    }

    /// Bit `i`, 1-indexed from the left.
    pub fn bit(&self, i: usize) -> bool {
        assert!(i >= 1 && i <= self.len(), "bit {i} out of range 1..={}", self.len);
        (self.value >> (self.len() - i)) & 1 == 1
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (1..=self.len()).map(move |i| self.bit(i))
    }

    /// The inclusive 1-indexed slice `ξ_{a:b}`. An empty slice is returned when `b < a`.
    pub fn slice(&self, a: usize, b: usize) -> BitString {
        if b < a {
            return BitString::EMPTY;
        }
        assert!(a >= 1 && b <= self.len(), "slice {a}:{b} out of range for length {}", self.len);
        let width = b - a + 1;
        let shifted = self.value >> (self.len() - b);
        BitString { len: width as u8, value: shifted & mask(width) }
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &BitString) -> Result<BitString> {
        let len = self.len() + other.len();
        if len > MAX_BITS {
            return Err(Error::invalid(format!("concatenation length {len} exceeds {MAX_BITS}")));
        }
        let value = if other.len() == MAX_BITS { other.value } else { (self.value << other.len()) | other.value };
        Ok(BitString { len: len as u8, value })
    }

    /// Bits in reverse order.
    pub fn reversed(&self) -> BitString {
        let value = reverse_bits(self.value, self.len());
        BitString { len: self.len, value }
    }

    /// `0.b_1 b_2 … b_m` in base two, with an extra trailing `1` when `append_one` is set.
    pub fn binary_fraction(&self, append_one: bool) -> f64 {
        let mut acc = 0.0;
        let mut weight = 0.5;
        for b in self.bits() {
            if b {
                acc += weight;
            }
            weight *= 0.5;
        }
        if append_one {
            acc += weight;
        }
        acc
    }
}

/// `Σ ξ_l 2^{m-l}`.
pub fn bits_to_index(bits: &BitString) -> u64 {
    bits.index()
}

pub fn index_to_bits(j: u64, length: usize) -> Result<BitString> {
    BitString::from_index(j, length)
}

pub fn binary_fraction(bits: &BitString, append_one: bool) -> f64 {
    bits.binary_fraction(append_one)
}

pub(crate) fn mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// Reverses the low `width` bits of `v`.
pub(crate) fn reverse_bits(v: u64, width: usize) -> u64 {
    if width == 0 {
        0
    } else {
        v.reverse_bits() >> (64 - width)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString(\"{self}\")")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::invalid(format!("'{other}' is not a bit in \"{s}\""))),
            })
            .collect::<Result<Vec<_>>>()?;
        BitString::from_bits(&bits)
    }
}

impl serde::Serialize for BitString {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn index_examples() {
        assert_eq!(bits_to_index(&bs("101")), 5);
        assert_eq!(bits_to_index(&bs("000")), 0);
        assert_eq!(bits_to_index(&bs("0001")), 1);
        assert_eq!(index_to_bits(5, 3).unwrap().to_string(), "101");
        assert_eq!(index_to_bits(0, 4).unwrap().to_string(), "0000");
        assert_eq!(index_to_bits(7, 3).unwrap().to_string(), "111");
    }

    #[test]
    fn index_out_of_range() {
        assert!(matches!(index_to_bits(8, 3), Err(Error::InvalidArgument(_))));
        assert!(index_to_bits(1, 0).is_err());
        assert_eq!(index_to_bits(0, 0).unwrap(), BitString::EMPTY);
    }

    #[test]
    fn fractions() {
        assert_eq!(binary_fraction(&bs("01"), true), 0.375);
        assert_eq!(binary_fraction(&BitString::EMPTY, true), 0.5);
        assert_eq!(binary_fraction(&bs("1"), false), 0.5);
        assert_eq!(binary_fraction(&BitString::EMPTY, false), 0.0);
    }

    #[test]
    fn slicing_and_concat() {
        let s = bs("011010");
        assert_eq!(s.slice(2, 4).to_string(), "110");
        assert_eq!(s.slice(1, 6), s);
        assert_eq!(s.slice(4, 3), BitString::EMPTY);
        assert_eq!(bs("01").concat(&bs("110")).unwrap().to_string(), "01110");
        assert_eq!(bs("0111").reversed().to_string(), "1110");
        assert!(s.bit(2) && !s.bit(1));
        assert!("01a".parse::<BitString>().is_err());
    }

    #[test]
    fn round_trip_exhaustive_small() {
        for m in 0..=12 {
            for j in 0..(1u64 << m) {
                assert_eq!(bits_to_index(&index_to_bits(j, m).unwrap()), j);
            }
        }
    }

    proptest! {
        #[test]
        fn round_trip(m in 0usize..=20, seed in any::<u64>()) {
            let j = seed & mask(m);
            let s = index_to_bits(j, m).unwrap();
            prop_assert_eq!(bits_to_index(&s), j);
            prop_assert_eq!(s.to_string().parse::<BitString>().unwrap(), s);
        }

        #[test]
        fn fraction_monotone(m in 1usize..=20, a in any::<u64>(), b in any::<u64>()) {
            let (a, b) = (a & mask(m), b & mask(m));
            let (sa, sb) = (index_to_bits(a, m).unwrap(), index_to_bits(b, m).unwrap());
            for append in [false, true] {
                let (fa, fb) = (sa.binary_fraction(append), sb.binary_fraction(append));
                prop_assert_eq!(a.cmp(&b), fa.partial_cmp(&fb).unwrap());
                prop_assert!((0.0..1.0).contains(&fa));
            }
        }
    }
}
