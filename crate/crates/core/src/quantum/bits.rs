use std::fmt;
use std::ops::BitXor;

use rand::Rng;
use serde::{Deserialize, Serialize};

/// Two classical bits.
///
/// The same value plays three roles in the dialogue: the Pauli code `(k, l)`
/// Bob uses to prepare his pair, the message symbol `(i, j)` Alice encodes,
/// and the Bell-measurement outcome `(x, y)` Bob broadcasts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "[u8; 2]", try_from = "[u8; 2]")]
pub struct BitPair {
    a: bool,
    b: bool,
}

impl BitPair {
    pub const ZERO: BitPair = BitPair::new(false, false);

    /// All four values in index order `(0,0), (0,1), (1,0), (1,1)`.
    pub const ALL: [BitPair; 4] = [
        BitPair::new(false, false),
        BitPair::new(false, true),
        BitPair::new(true, false),
        BitPair::new(true, true),
    ];

    pub const fn new(a: bool, b: bool) -> Self {
        Self { a, b }
    }

    /// Builds a pair from two integer bits, rejecting anything but 0 or 1.
    pub fn from_bits(a: u8, b: u8) -> Option<Self> {
        match (a, b) {
            (0 | 1, 0 | 1) => Some(Self::new(a == 1, b == 1)),
            _ => None,
        }
    }

    /// Inverse of [`BitPair::index`]; only the low two bits of `index` are used.
    pub const fn from_index(index: usize) -> Self {
        Self::new(index & 0b10 != 0, index & 0b01 != 0)
    }

    /// `2a + b`.
    pub const fn index(self) -> usize {
        ((self.a as usize) << 1) | self.b as usize
    }

    pub const fn a(self) -> bool {
        self.a
    }

    pub const fn b(self) -> bool {
        self.b
    }

    pub fn bits(self) -> [u8; 2] {
        [self.a as u8, self.b as u8]
    }

    /// Component-wise addition mod 2.
    pub const fn xor(self, other: BitPair) -> BitPair {
        BitPair::new(self.a ^ other.a, self.b ^ other.b)
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::from_index(rng.random_range(0..4))
    }
}

impl BitXor for BitPair {
    type Output = BitPair;

    fn bitxor(self, rhs: BitPair) -> BitPair {
        self.xor(rhs)
    }
}

impl fmt::Display for BitPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a as u8, self.b as u8)
    }
}

impl From<BitPair> for [u8; 2] {
    fn from(pair: BitPair) -> Self {
        pair.bits()
    }
}

impl TryFrom<[u8; 2]> for BitPair {
    type Error = String;

    fn try_from(bits: [u8; 2]) -> Result<Self, Self::Error> {
        BitPair::from_bits(bits[0], bits[1]).ok_or_else(|| format!("not a bit pair: {bits:?}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        for (idx, pair) in BitPair::ALL.iter().enumerate() {
            assert_eq!(pair.index(), idx);
            assert_eq!(BitPair::from_index(idx), *pair);
        }
    }

    #[test]
    fn rejects_non_bits() {
        assert!(BitPair::from_bits(2, 0).is_none());
        assert_eq!(BitPair::from_bits(1, 0), Some(BitPair::new(true, false)));
    }

    #[test]
    fn serializes_as_integer_array() {
        let json = serde_json::to_string(&BitPair::new(true, false)).unwrap();
        assert_eq!(json, "[1,0]");
        assert!(serde_json::from_str::<BitPair>("[0,3]").is_err());
    }
}
