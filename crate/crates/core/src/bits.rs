//! Fixed-length bitstrings.
//!
//! Position `j` is stored in bit `j` of a `u64` mask. The textual form lists
//! positions left to right, so `"100"` has a one at position 0. Ordering is
//! lexicographic on that textual form.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Longest bitstring representable by the mask encoding.
pub const MAX_BITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitstringError {
    #[error("bitstring length {0} outside 1..={MAX_BITS}")]
    Length(usize),
    #[error("mask {mask:#x} has bits beyond length {n}")]
    MaskOverflow { n: usize, mask: u64 },
    #[error("position {index} out of range for length {n}")]
    Position { n: usize, index: usize },
    #[error("invalid character {0:?} in bitstring")]
    Character(char),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bitstring {
    n: usize,
    mask: u64,
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl Bitstring {
    pub fn new(n: usize, mask: u64) -> Result<Self, BitstringError> {
        if n == 0 || n > MAX_BITS {
            return Err(BitstringError::Length(n));
        }
        if mask & !full_mask(n) != 0 {
            return Err(BitstringError::MaskOverflow { n, mask });
        }
        Ok(Bitstring { n, mask })
    }

    pub(crate) fn from_mask_unchecked(n: usize, mask: u64) -> Self {
        debug_assert!((1..=MAX_BITS).contains(&n) && mask & !full_mask(n) == 0);
        Bitstring { n, mask }
    }

    pub fn zeros(n: usize) -> Result<Self, BitstringError> {
        Bitstring::new(n, 0)
    }

    /// The string with a single one at position `j`.
    pub fn basis(n: usize, j: usize) -> Result<Self, BitstringError> {
        if j >= n {
            return Err(BitstringError::Position { n, index: j });
        }
        Bitstring::new(n, 1u64 << j)
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self, BitstringError> {
        let mask = bits
            .iter()
            .enumerate()
            .fold(0u64, |m, (j, &b)| if b { m | (1u64 << j) } else { m });
        if bits.len() > MAX_BITS {
            return Err(BitstringError::Length(bits.len()));
        }
        Bitstring::new(bits.len(), mask)
    }

    /// Ones exactly at the listed positions.
    pub fn from_support(n: usize, support: &[usize]) -> Result<Self, BitstringError> {
        let mut mask = 0u64;
        for &j in support {
            if j >= n {
                return Err(BitstringError::Position { n, index: j });
            }
            mask |= 1u64 << j;
        }
        Bitstring::new(n, mask)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn get(&self, j: usize) -> bool {
        j < self.n && self.mask >> j & 1 == 1
    }

    pub fn weight(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.get(j))
    }

    pub fn complement(&self) -> Self {
        Bitstring {
            n: self.n,
            mask: !self.mask & full_mask(self.n),
        }
    }

    /// Spin value `2x_j - 1` at position `j`.
    pub fn spin(&self, j: usize) -> i8 {
        if self.get(j) {
            1
        } else {
            -1
        }
    }

    /// Key whose integer order is the lexicographic order of the strings.
    pub fn lex_key(&self) -> u64 {
        lex_key(self.n, self.mask)
    }
}

pub(crate) fn lex_key(n: usize, mask: u64) -> u64 {
    mask.reverse_bits() >> (64 - n)
}

impl Ord for Bitstring {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.lex_key().cmp(&other.lex_key()))
    }
}

impl PartialOrd for Bitstring {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.n {
            f.write_str(if self.get(j) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bitstring({self})")
    }
}

impl FromStr for Bitstring {
    type Err = BitstringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(BitstringError::Character(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Bitstring::from_bits(&bits)
    }
}
