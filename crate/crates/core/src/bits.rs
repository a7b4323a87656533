//! Bit strings and Hamming distance.

use std::fmt;
use std::ops::Index;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rng::SimRng;

/// An ordered sequence of bits.
///
/// Stored one bit per byte; all stored values are 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    bits: Vec<u8>,
}

impl BitString {
    /// Builds a bit string, rejecting any element outside `{0, 1}`.
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidInput(format!(
                "bit string element {bad} is not a bit"
            )));
        }
        Ok(Self { bits })
    }

    /// The all-zero string of length `len`.
    pub fn zeros(len: usize) -> Self {
        Self { bits: vec![0; len] }
    }

    /// Parses a string of `'0'`/`'1'` characters.
    pub fn parse(text: &str) -> Result<Self> {
        text.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidInput(format!(
                    "bit string character {other:?} is not '0' or '1'"
                ))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(|bits| Self { bits })
    }

    /// A uniformly random string of length `len`.
    pub fn random(len: usize, rng: &mut SimRng) -> Self {
        Self {
            bits: (0..len).map(|_| rng.bit()).collect(),
        }
    }

    /// Number of bits.
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    /// True when the string is empty.
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Read-only view of the raw bits.
    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    /// Appends one bit.
    pub fn push(&mut self, bit: u8) {
        assert!(bit <= 1, "pushed value {bit} is not a bit");
        self.bits.push(bit);
    }

    /// Flips the bit at `index`.
    pub fn flip(&mut self, index: usize) {
        self.bits[index] ^= 1;
    }

    /// The substring at the given positions, in the order supplied.
    pub fn restrict(&self, positions: &[usize]) -> Self {
        Self {
            bits: positions.iter().map(|&k| self.bits[k]).collect(),
        }
    }

    /// Position-wise XOR.
    pub fn xor(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(Self {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a ^ b)
                .collect(),
        })
    }

    /// Iterator over the bits.
    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.bits.iter().copied()
    }
}

impl Index<usize> for BitString {
    type Output = u8;

    fn index(&self, index: usize) -> &u8 {
        &self.bits[index]
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromIterator<u8> for BitString {
    fn from_iter<I: IntoIterator<Item = u8>>(iter: I) -> Self {
        let bits: Vec<u8> = iter.into_iter().collect();
        Self::new(bits).expect("collected non-bit value into BitString")
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Self::parse(&text).map_err(D::Error::custom)
    }
}

/// Number of positions at which two equal-length strings differ.
pub fn hamming_distance(x: &BitString, y: &BitString) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(x.iter().zip(y.iter()).filter(|(a, b)| a != b).count())
}
