use serde::{Deserialize, Serialize};

use super::ProtocolError;
use crate::quantum::BitPair;

/// A secret message of `2N` bits, held as `N` consecutive bit pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Message {
    pairs: Vec<BitPair>,
    /// Set when an odd-length input was completed with a trailing 0.
    padded: bool,
}

impl Message {
    pub fn from_pairs(pairs: Vec<BitPair>) -> Result<Self, ProtocolError> {
        if pairs.is_empty() {
            return Err(ProtocolError::EmptyMessage);
        }
        Ok(Self { pairs, padded: false })
    }

    pub fn random<R: rand::Rng + ?Sized>(n_pairs: usize, rng: &mut R) -> Result<Self, ProtocolError> {
        Self::from_pairs((0..n_pairs).map(|_| BitPair::random(rng)).collect())
    }

    /// Groups raw bits into consecutive pairs; an odd-length input is padded
    /// with a trailing 0 and flagged.
    pub fn frame(raw_bits: &[bool]) -> Result<Self, ProtocolError> {
        if raw_bits.is_empty() {
            return Err(ProtocolError::EmptyMessage);
        }
        let padded = raw_bits.len() % 2 == 1;
        let pairs = raw_bits
            .chunks(2)
            .map(|chunk| BitPair::new(chunk[0], chunk.get(1).copied().unwrap_or(false)))
            .collect();
        Ok(Self { pairs, padded })
    }

    /// Inverse of [`Message::frame`]; drops the pad bit if one was added.
    pub fn unframe(&self) -> Vec<bool> {
        let mut bits: Vec<bool> = self.pairs.iter().flat_map(|p| [p.a(), p.b()]).collect();
        if self.padded {
            bits.pop();
        }
        bits
    }

    pub fn pairs(&self) -> &[BitPair] {
        &self.pairs
    }

    /// Half-length `N`.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_padded(&self) -> bool {
        self.padded
    }

    /// Number of differing bits against another message, counting missing
    /// pairs as two errors each.
    pub fn bit_errors(&self, other: &Message) -> usize {
        let common: usize = self
            .pairs
            .iter()
            .zip(&other.pairs)
            .map(|(a, b)| usize::from(a.a() != b.a()) + usize::from(a.b() != b.b()))
            .sum();
        common + 2 * self.len().abs_diff(other.len())
    }

    pub(crate) fn partial(pairs: Vec<BitPair>, padded: bool) -> Self {
        Self { pairs, padded }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn frames_in_order() {
        let m = Message::frame(&[false, true, true, false]).unwrap();
        assert_eq!(m.pairs(), &[BitPair::new(false, true), BitPair::new(true, false)]);
        assert!(!m.is_padded());
    }

    #[test]
    fn odd_input_is_padded() {
        let m = Message::frame(&[true, false, true]).unwrap();
        assert_eq!(m.pairs(), &[BitPair::new(true, false), BitPair::new(true, false)]);
        assert!(m.is_padded());
        assert_eq!(m.unframe(), vec![true, false, true]);
    }

    #[test]
    fn empty_input_is_rejected() {
        assert_eq!(Message::frame(&[]), Err(ProtocolError::EmptyMessage));
    }

    proptest! {
        #[test]
        fn frame_unframe_round_trip(bits in proptest::collection::vec(any::<bool>(), 1..200)) {
            let m = Message::frame(&bits).unwrap();
            prop_assert_eq!(m.len(), bits.len().div_ceil(2));
            prop_assert_eq!(m.unframe(), bits);
        }
    }
}
