//! Multiindices with 0/1 components.
//!
//! A [`MultiIndex`] of dimension `n` is an element of `{0,1}^n`, stored as a
//! bitmask where bit `i` holds component `i`. It selects coordinate subsets
//! (truncations), corner offsets of a rectangle, and summation ranges.
//!
//! Enumeration order is lexicographic with the first component most
//! significant, so `(0,1) < (1,0)`. Every sum built from these enumerations is
//! therefore deterministic.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::binomial;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest supported dimension. Enumerations are `2^n`-sized.
pub const MAX_DIMENSION: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultiIndexError {
    #[error("dimension {0} exceeds the supported maximum of {MAX_DIMENSION}")]
    DimensionTooLarge(usize),
    #[error("component {index} is {value}; only 0 and 1 are allowed")]
    NonBinaryComponent { index: usize, value: u8 },
    #[error("empty truncation: the multiindex is zero")]
    EmptyTruncation,
    #[error("empty interval: lower multiindex is not below the upper one")]
    EmptyInterval,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("invalid multiindex literal {0:?}")]
    InvalidLiteral(String),
}

/// Parity of the order `|θ|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(order: usize) -> Self {
        if order.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Parity restriction for [`MultiIndex::enumerate_leq`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParityFilter {
    All,
    Even,
    Odd,
}

impl ParityFilter {
    fn accepts(self, p: Parity) -> bool {
        match self {
            ParityFilter::All => true,
            ParityFilter::Even => p == Parity::Even,
            ParityFilter::Odd => p == Parity::Odd,
        }
    }
}

impl From<Parity> for ParityFilter {
    fn from(p: Parity) -> Self {
        match p {
            Parity::Even => ParityFilter::Even,
            Parity::Odd => ParityFilter::Odd,
        }
    }
}

/// An element of `{0,1}^n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    bits: u32,
    dim: u8,
}

fn check_dim(dim: usize) -> Result<(), MultiIndexError> {
    if dim > MAX_DIMENSION {
        Err(MultiIndexError::DimensionTooLarge(dim))
    } else {
        Ok(())
    }
}

impl MultiIndex {
    pub fn new(components: &[u8]) -> Result<Self, MultiIndexError> {
        check_dim(components.len())?;
        let mut bits = 0u32;
        for (index, &value) in components.iter().enumerate() {
            match value {
                0 => {}
                1 => bits |= 1 << index,
                _ => return Err(MultiIndexError::NonBinaryComponent { index, value }),
            }
        }
        Ok(MultiIndex {
            bits,
            dim: components.len() as u8,
        })
    }

    /// Builds a multiindex from a bitmask (bit `i` is component `i`).
    /// Bits at positions `>= dim` are discarded.
    pub fn from_bits(bits: u32, dim: usize) -> Result<Self, MultiIndexError> {
        check_dim(dim)?;
        Ok(MultiIndex {
            bits: bits & Self::full_mask(dim),
            dim: dim as u8,
        })
    }

    pub fn zeros(dim: usize) -> Result<Self, MultiIndexError> {
        Self::from_bits(0, dim)
    }

    pub fn ones(dim: usize) -> Result<Self, MultiIndexError> {
        Self::from_bits(u32::MAX, dim)
    }

    /// The multiindex with a single 1 at position `i`.
    pub fn unit(dim: usize, i: usize) -> Result<Self, MultiIndexError> {
        if i >= dim {
            return Err(MultiIndexError::DimensionMismatch { left: i + 1, right: dim });
        }
        Self::from_bits(1 << i, dim)
    }

    fn full_mask(dim: usize) -> u32 {
        if dim >= 32 {
            u32::MAX
        } else {
            (1u32 << dim) - 1
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn get(&self, i: usize) -> u8 {
        ((self.bits >> i) & 1) as u8
    }

    pub fn is_set(&self, i: usize) -> bool {
        i < self.dim() && self.get(i) == 1
    }

    pub fn components(&self) -> Vec<u8> {
        (0..self.dim()).map(|i| self.get(i)).collect()
    }

    /// Positions of the unit components, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim()).filter(move |&i| self.get(i) == 1)
    }

    /// `|θ| = θ₁ + … + θₙ`.
    pub fn order(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.order())
    }

    pub fn is_even(&self) -> bool {
        self.parity() == Parity::Even
    }

    pub fn is_odd(&self) -> bool {
        self.parity() == Parity::Odd
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn is_ones(&self) -> bool {
        self.bits == Self::full_mask(self.dim())
    }

    fn assert_same_dim(&self, other: &MultiIndex) {
        assert_eq!(
            self.dim, other.dim,
            "multiindex dimension mismatch: {} vs {}",
            self.dim, other.dim
        );
    }

    /// Componentwise `θ ≤ α`.
    pub fn leq(&self, other: &MultiIndex) -> bool {
        self.dim == other.dim && self.bits & !other.bits == 0
    }

    /// Componentwise maximum `α ∨ θ = α + θ − αθ`.
    pub fn join(&self, other: &MultiIndex) -> MultiIndex {
        self.assert_same_dim(other);
        MultiIndex {
            bits: self.bits | other.bits,
            dim: self.dim,
        }
    }

    /// Componentwise product `αθ`.
    pub fn meet(&self, other: &MultiIndex) -> MultiIndex {
        self.assert_same_dim(other);
        MultiIndex {
            bits: self.bits & other.bits,
            dim: self.dim,
        }
    }

    /// `1 − α`.
    pub fn complement(&self) -> MultiIndex {
        MultiIndex {
            bits: !self.bits & Self::full_mask(self.dim()),
            dim: self.dim,
        }
    }

    /// Sum of two multiindices with disjoint supports.
    pub fn disjoint_sum(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.assert_same_dim(other);
        (self.bits & other.bits == 0).then_some(MultiIndex {
            bits: self.bits | other.bits,
            dim: self.dim,
        })
    }

    /// `α − θ` for `θ ≤ α`.
    pub fn difference(&self, other: &MultiIndex) -> Option<MultiIndex> {
        other.leq(self).then_some(MultiIndex {
            bits: self.bits & !other.bits,
            dim: self.dim,
        })
    }

    /// Toggles component `i`.
    pub fn flip(&self, i: usize) -> MultiIndex {
        assert!(i < self.dim(), "component {i} out of range for dimension {}", self.dim);
        MultiIndex {
            bits: self.bits ^ (1 << i),
            dim: self.dim,
        }
    }

    /// Every `θ ≤ self` whose parity passes `filter`, in lexicographic order.
    pub fn enumerate_leq(&self, filter: ParityFilter) -> Vec<MultiIndex> {
        let support: Vec<usize> = self.support().collect();
        let k = support.len();
        let mut out = Vec::with_capacity(1 << k);
        for code in 0u32..(1u32 << k) {
            if !filter.accepts(Parity::of(code.count_ones() as usize)) {
                continue;
            }
            let mut bits = 0u32;
            for (t, &pos) in support.iter().enumerate() {
                if (code >> (k - 1 - t)) & 1 == 1 {
                    bits |= 1 << pos;
                }
            }
            out.push(MultiIndex { bits, dim: self.dim });
        }
        out
    }

    /// The whole cube `{θ : θ ≤ 1}` filtered by parity.
    pub fn all(dim: usize, filter: ParityFilter) -> Result<Vec<MultiIndex>, MultiIndexError> {
        Ok(Self::ones(dim)?.enumerate_leq(filter))
    }

    /// `{α : 0 ≠ α ≤ 1}` in lexicographic order.
    pub fn nonzero(dim: usize) -> Result<Vec<MultiIndex>, MultiIndexError> {
        let mut all = Self::all(dim, ParityFilter::All)?;
        all.retain(|a| !a.is_zero());
        Ok(all)
    }
}

/// `x⌊α`: the coordinates of `x` at the unit positions of `α`, in order.
pub fn truncate_point<T: Copy>(x: &[T], alpha: &MultiIndex) -> Result<Vec<T>, MultiIndexError> {
    if x.len() != alpha.dim() {
        return Err(MultiIndexError::DimensionMismatch {
            left: x.len(),
            right: alpha.dim(),
        });
    }
    if alpha.is_zero() {
        return Err(MultiIndexError::EmptyTruncation);
    }
    Ok(alpha.support().map(|i| x[i]).collect())
}

/// Number of `α` with `β ≤ α ≤ γ` and the requested parity.
///
/// Counted from binomial coefficients: with `k = |γ| − |β|` free positions,
/// choosing `i` of them gives order `|β| + i`.
pub fn count_between(
    beta: &MultiIndex,
    gamma: &MultiIndex,
    parity: Parity,
) -> Result<u64, MultiIndexError> {
    if beta.dim() != gamma.dim() {
        return Err(MultiIndexError::DimensionMismatch {
            left: beta.dim(),
            right: gamma.dim(),
        });
    }
    if !beta.leq(gamma) {
        return Err(MultiIndexError::EmptyInterval);
    }
    let k = (gamma.order() - beta.order()) as u64;
    Ok((0..=k)
        .filter(|&i| Parity::of(beta.order() + i as usize) == parity)
        .map(|i| binomial(k, i))
        .sum())
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dim.cmp(&other.dim).then_with(|| {
            for i in 0..self.dim() {
                match self.get(i).cmp(&other.get(i)) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Rendered as a bit string, first component first: `(1,0,1)` is `"101"`.
impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim() {
            write!(f, "{}", self.get(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiIndex({self})")
    }
}

impl FromStr for MultiIndex {
    type Err = MultiIndexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let components = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(MultiIndexError::InvalidLiteral(s.to_string())),
            })
            .collect::<Result<Vec<u8>, _>>()?;
        MultiIndex::new(&components)
    }
}

impl Serialize for MultiIndex {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MultiIndex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
