//! Computational-basis labels.

use crate::error::{Error, Result};

/// Largest register this crate will index. Kept well below `usize::BITS` so
/// `1 << n` never overflows.
pub const MAX_QUBITS: usize = 30;

/// An `n`-bit computational-basis label. Bit `i` is the classical value of
/// qubit `i`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex {
    value: usize,
    n: usize,
}

impl BasisIndex {
    pub fn new(value: usize, n: usize) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::InvalidSize { n, reason: "register too large" });
        }
        if value >= 1 << n {
            return Err(Error::Invalid(format!("basis value {value} does not fit in {n} qubits")));
        }
        Ok(Self { value, n })
    }

    /// Builds a label from qubit values listed in qubit order (qubit 0 first).
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let value = bits
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &b)| acc | (usize::from(b) << i));
        Self::new(value, bits.len())
    }

    pub fn value(self) -> usize {
        self.value
    }

    pub fn n(self) -> usize {
        self.n
    }

    pub fn bit(self, qubit: usize) -> bool {
        debug_assert!(qubit < self.n);
        bit(self.value, qubit)
    }

    pub fn hamming_weight(self) -> usize {
        hamming_weight(self.value)
    }

    pub fn parity(self) -> bool {
        parity(self.value)
    }

    /// Renders the label as a bit string, qubit 0 first.
    pub fn to_bit_string(self) -> String {
        (0..self.n).map(|q| if self.bit(q) { '1' } else { '0' }).collect()
    }
}

#[inline]
pub fn bit(x: usize, qubit: usize) -> bool {
    (x >> qubit) & 1 == 1
}

/// Number of set bits of `x`.
#[inline]
pub fn hamming_weight(x: usize) -> usize {
    x.count_ones() as usize
}

/// `true` for odd parity.
#[inline]
pub fn parity(x: usize) -> bool {
    x.count_ones() & 1 == 1
}

/// Checks that `targets` are distinct and all below `n`.
pub fn validate_targets(targets: &[usize], n: usize) -> Result<()> {
    let mut seen = 0usize;
    for &t in targets {
        if t >= n {
            return Err(Error::QubitOutOfRange { index: t, n });
        }
        if seen & (1 << t) != 0 {
            return Err(Error::DuplicateTarget(t));
        }
        seen |= 1 << t;
    }
    Ok(())
}

/// For a gate acting on `targets`, `offsets[l]` is the global index
/// contribution of gate-local index `l` (local bit `j` lands on qubit
/// `targets[j]`).
pub(crate) fn local_offsets(targets: &[usize]) -> Vec<usize> {
    (0..1usize << targets.len())
        .map(|l| {
            targets
                .iter()
                .enumerate()
                .filter(|(j, _)| bit(l, *j))
                .fold(0, |acc, (_, &q)| acc | (1 << q))
        })
        .collect()
}

pub(crate) fn target_mask(targets: &[usize]) -> usize {
    targets.iter().fold(0, |acc, &q| acc | (1 << q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_examples() {
        assert_eq!(BasisIndex::new(0, 4).unwrap().hamming_weight(), 0);
        assert_eq!(BasisIndex::new(0b101, 3).unwrap().hamming_weight(), 2);
        for n in 1..=12 {
            assert_eq!(BasisIndex::new((1 << n) - 1, n).unwrap().hamming_weight(), n);
        }
    }

    #[test]
    fn bits_round_trip() {
        let x = BasisIndex::from_bits(&[true, false, true, true]).unwrap();
        assert_eq!(x.value(), 0b1101);
        assert_eq!(x.to_bit_string(), "1011");
        assert!(x.bit(0) && !x.bit(1) && x.bit(3));
        assert!(x.parity());
    }

    #[test]
    fn rejects_out_of_range_value() {
        assert!(BasisIndex::new(8, 3).is_err());
        assert!(BasisIndex::new(0, MAX_QUBITS + 1).is_err());
    }

    #[test]
    fn target_validation() {
        assert!(validate_targets(&[0, 2], 3).is_ok());
        assert_eq!(validate_targets(&[1, 1], 3), Err(Error::DuplicateTarget(1)));
        assert_eq!(validate_targets(&[3], 3), Err(Error::QubitOutOfRange { index: 3, n: 3 }));
    }

    #[test]
    fn offsets_follow_target_order() {
        assert_eq!(local_offsets(&[2, 0]), vec![0, 4, 1, 5]);
    }
}
