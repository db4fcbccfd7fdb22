//! Commutative semigroups carrying a translation-invariant metric.
//!
//! Four concrete spaces are provided: real numbers, finite-dimensional
//! normed vectors, axis-aligned boxes under Minkowski addition with the
//! Hausdorff distance, and finite multisets under union. [`Value`] wraps
//! any of them so grid functions can be loaded without knowing the space
//! at compile time.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SemigroupError {
    #[error("value space mismatch: {left} vs {right}")]
    SpaceMismatch { left: ValueSpace, right: ValueSpace },
    #[error("empty semigroup sum")]
    EmptySum,
    #[error("value space {0} has no compactness support")]
    NoCompactness(ValueSpace),
    #[error("unbounded sequence: spread {spread} exceeds the cap {cap}")]
    Unbounded { spread: f64, cap: f64 },
    #[error("unbounded sequence: spread grows from {half} over the first half to {full} over the window")]
    Growing { half: f64, full: f64 },
    #[error("invalid box: lower bound {lo} exceeds upper bound {hi} on axis {axis}")]
    InvalidBox { axis: usize, lo: f64, hi: f64 },
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("empty index window")]
    EmptyWindow,
}

/// Norm on `R^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    L1,
    L2,
    Linf,
}

impl Norm {
    pub fn apply(self, v: impl IntoIterator<Item = f64>) -> f64 {
        let it = v.into_iter().map(f64::abs);
        match self {
            Norm::L1 => it.sum(),
            Norm::L2 => it.map(|a| a * a).sum::<f64>().sqrt(),
            Norm::Linf => it.fold(0.0, f64::max),
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Norm::L1 => "l1",
            Norm::L2 => "l2",
            Norm::Linf => "linf",
        })
    }
}

impl FromStr for Norm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "l1" => Ok(Norm::L1),
            "l2" => Ok(Norm::L2),
            "linf" => Ok(Norm::Linf),
            other => Err(format!("unknown norm {other:?}")),
        }
    }
}

/// Identifies a value space. Text form: `real`, `vector:<k>:<norm>`,
/// `box:<k>`, `multiset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValueSpace {
    Real,
    Vector { dim: usize, norm: Norm },
    Box { dim: usize },
    Multiset,
}

impl fmt::Display for ValueSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueSpace::Real => f.write_str("real"),
            ValueSpace::Vector { dim, norm } => write!(f, "vector:{dim}:{norm}"),
            ValueSpace::Box { dim } => write!(f, "box:{dim}"),
            ValueSpace::Multiset => f.write_str("multiset"),
        }
    }
}

impl Serialize for ValueSpace {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ValueSpace {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for ValueSpace {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let dim = |p: &str| -> Result<usize, String> {
            match p.parse::<usize>() {
                Ok(d) if d > 0 => Ok(d),
                _ => Err(format!("invalid dimension in value space {s:?}")),
            }
        };
        match parts.as_slice() {
            ["real"] => Ok(ValueSpace::Real),
            ["multiset"] => Ok(ValueSpace::Multiset),
            ["box", k] => Ok(ValueSpace::Box { dim: dim(k)? }),
            ["vector", k] => Ok(ValueSpace::Vector {
                dim: dim(k)?,
                norm: Norm::L2,
            }),
            ["vector", k, n] => Ok(ValueSpace::Vector {
                dim: dim(k)?,
                norm: n.parse()?,
            }),
            _ => Err(format!("unknown value space {s:?}")),
        }
    }
}

/// A commutative semigroup with a translation-invariant metric.
pub trait MetricSemigroup: Clone + fmt::Debug {
    fn space(&self) -> ValueSpace;

    fn add(&self, other: &Self) -> Result<Self, SemigroupError>;

    fn dist(&self, other: &Self) -> Result<f64, SemigroupError>;

    /// Real coordinates for Bolzano–Weierstrass extraction, or `None` when
    /// the space has no compactness support.
    fn coordinates(&self) -> Option<Vec<f64>> {
        None
    }

    /// Inverse of [`coordinates`](Self::coordinates), using `self` as the
    /// template for the space.
    #[allow(clippy::wrong_self_convention)]
    fn from_coordinates(&self, _coords: &[f64]) -> Option<Self> {
        None
    }

    /// Upper bound on the distance between two values whose coordinates
    /// differ by at most `widths` componentwise.
    fn coordinate_diameter(&self, widths: &[f64]) -> f64 {
        let _ = widths;
        f64::INFINITY
    }
}

fn mismatch<T>(a: ValueSpace, b: ValueSpace) -> Result<T, SemigroupError> {
    Err(SemigroupError::SpaceMismatch { left: a, right: b })
}

impl MetricSemigroup for f64 {
    fn space(&self) -> ValueSpace {
        ValueSpace::Real
    }

    fn add(&self, other: &Self) -> Result<Self, SemigroupError> {
        Ok(self + other)
    }

    fn dist(&self, other: &Self) -> Result<f64, SemigroupError> {
        Ok((self - other).abs())
    }

    fn coordinates(&self) -> Option<Vec<f64>> {
        Some(vec![*self])
    }

    fn from_coordinates(&self, coords: &[f64]) -> Option<Self> {
        coords.first().copied()
    }

    fn coordinate_diameter(&self, widths: &[f64]) -> f64 {
        widths.first().copied().unwrap_or(0.0)
    }
}

/// A vector in `R^k` with a fixed norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorValue {
    pub components: Vec<f64>,
    pub norm: Norm,
}

impl VectorValue {
    pub fn new(components: Vec<f64>, norm: Norm) -> Self {
        VectorValue { components, norm }
    }

    pub fn zero(dim: usize, norm: Norm) -> Self {
        VectorValue::new(vec![0.0; dim], norm)
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn magnitude(&self) -> f64 {
        self.norm.apply(self.components.iter().copied())
    }

    /// `⟨v, u*⟩` for a dual functional given by its coefficients.
    pub fn pairing(&self, dual: &[f64]) -> f64 {
        self.components.iter().zip(dual).map(|(a, b)| a * b).sum()
    }

    fn check(&self, other: &Self) -> Result<(), SemigroupError> {
        if self.space() != other.space() {
            return mismatch(self.space(), other.space());
        }
        Ok(())
    }
}

impl MetricSemigroup for VectorValue {
    fn space(&self) -> ValueSpace {
        ValueSpace::Vector {
            dim: self.dim(),
            norm: self.norm,
        }
    }

    fn add(&self, other: &Self) -> Result<Self, SemigroupError> {
        self.check(other)?;
        Ok(VectorValue::new(
            self.components.iter().zip(&other.components).map(|(a, b)| a + b).collect(),
            self.norm,
        ))
    }

    fn dist(&self, other: &Self) -> Result<f64, SemigroupError> {
        self.check(other)?;
        Ok(self
            .norm
            .apply(self.components.iter().zip(&other.components).map(|(a, b)| a - b)))
    }

    fn coordinates(&self) -> Option<Vec<f64>> {
        Some(self.components.clone())
    }

    fn from_coordinates(&self, coords: &[f64]) -> Option<Self> {
        (coords.len() == self.dim()).then(|| VectorValue::new(coords.to_vec(), self.norm))
    }

    fn coordinate_diameter(&self, widths: &[f64]) -> f64 {
        self.norm.apply(widths.iter().copied())
    }
}

/// An axis-aligned box `Π [lo_i, hi_i]` in `R^k`.
///
/// Boxes add by Minkowski sum and are compared by Hausdorff distance with
/// the sup-norm as ground metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxValue {
    bounds: Vec<(f64, f64)>,
}

impl BoxValue {
    pub fn new(bounds: Vec<(f64, f64)>) -> Result<Self, SemigroupError> {
        for (axis, &(lo, hi)) in bounds.iter().enumerate() {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(SemigroupError::NonFinite);
            }
            if lo > hi {
                return Err(SemigroupError::InvalidBox { axis, lo, hi });
            }
        }
        Ok(BoxValue { bounds })
    }

    /// A degenerate box holding the single point `p`.
    pub fn point(p: &[f64]) -> Self {
        BoxValue {
            bounds: p.iter().map(|&v| (v, v)).collect(),
        }
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    fn check(&self, other: &Self) -> Result<(), SemigroupError> {
        if self.dim() != other.dim() {
            return mismatch(self.space(), other.space());
        }
        Ok(())
    }
}

impl MetricSemigroup for BoxValue {
    fn space(&self) -> ValueSpace {
        ValueSpace::Box { dim: self.dim() }
    }

    fn add(&self, other: &Self) -> Result<Self, SemigroupError> {
        self.check(other)?;
        Ok(BoxValue {
            bounds: self
                .bounds
                .iter()
                .zip(&other.bounds)
                .map(|(a, b)| (a.0 + b.0, a.1 + b.1))
                .collect(),
        })
    }

    /// Hausdorff distance under the sup-norm. For boxes this separates per
    /// axis: the farthest point of one box from the other is a corner, and
    /// along each axis the excess is `max(|Δlo|, |Δhi|)`.
    fn dist(&self, other: &Self) -> Result<f64, SemigroupError> {
        self.check(other)?;
        Ok(self
            .bounds
            .iter()
            .zip(&other.bounds)
            .map(|(a, b)| (a.0 - b.0).abs().max((a.1 - b.1).abs()))
            .fold(0.0, f64::max))
    }

    fn coordinates(&self) -> Option<Vec<f64>> {
        Some(self.bounds.iter().flat_map(|&(lo, hi)| [lo, hi]).collect())
    }

    fn from_coordinates(&self, coords: &[f64]) -> Option<Self> {
        if coords.len() != 2 * self.dim() {
            return None;
        }
        // Means of valid boxes are valid; clamp guards rounding only.
        Some(BoxValue {
            bounds: coords
                .chunks(2)
                .map(|c| (c[0].min(c[1]), c[1].max(c[0])))
                .collect(),
        })
    }

    fn coordinate_diameter(&self, widths: &[f64]) -> f64 {
        widths.iter().copied().fold(0.0, f64::max)
    }
}

/// A finite multiset of string atoms. Addition is multiset union and the
/// distance is the total multiplicity of the symmetric difference.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultisetValue {
    atoms: BTreeMap<String, u64>,
}

impl MultisetValue {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn singleton(atom: impl Into<String>) -> Self {
        Self::from_counts([(atom.into(), 1)])
    }

    pub fn from_counts(counts: impl IntoIterator<Item = (String, u64)>) -> Self {
        let mut atoms = BTreeMap::new();
        for (k, c) in counts {
            if c > 0 {
                *atoms.entry(k).or_insert(0) += c;
            }
        }
        MultisetValue { atoms }
    }

    pub fn from_atoms<S: Into<String>>(atoms: impl IntoIterator<Item = S>) -> Self {
        Self::from_counts(atoms.into_iter().map(|a| (a.into(), 1)))
    }

    pub fn count(&self, atom: &str) -> u64 {
        self.atoms.get(atom).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.atoms
    }

    /// Total multiplicity.
    pub fn len(&self) -> u64 {
        self.atoms.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `self − other` when `other ⊆ self`.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let mut atoms = self.atoms.clone();
        for (k, &c) in &other.atoms {
            let slot = atoms.get_mut(k)?;
            *slot = slot.checked_sub(c)?;
            if *slot == 0 {
                atoms.remove(k);
            }
        }
        Some(MultisetValue { atoms })
    }

    fn union(&self, other: &Self) -> Self {
        let mut atoms = self.atoms.clone();
        for (k, &c) in &other.atoms {
            *atoms.entry(k.clone()).or_insert(0) += c;
        }
        MultisetValue { atoms }
    }

    fn symmetric_difference_size(&self, other: &Self) -> u64 {
        let mut total = 0;
        for (k, &c) in &self.atoms {
            total += c.abs_diff(other.count(k));
        }
        for (k, &c) in &other.atoms {
            if !self.atoms.contains_key(k) {
                total += c;
            }
        }
        total
    }
}

impl MetricSemigroup for MultisetValue {
    fn space(&self) -> ValueSpace {
        ValueSpace::Multiset
    }

    fn add(&self, other: &Self) -> Result<Self, SemigroupError> {
        Ok(self.union(other))
    }

    fn dist(&self, other: &Self) -> Result<f64, SemigroupError> {
        Ok(self.symmetric_difference_size(other) as f64)
    }
}

/// A value from any of the supported spaces.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Real(f64),
    Vector(VectorValue),
    Box(BoxValue),
    Multiset(MultisetValue),
}

impl Value {
    pub fn as_real(&self) -> Option<f64> {
        match self {
            Value::Real(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_vector(&self) -> Option<&VectorValue> {
        match self {
            Value::Vector(v) => Some(v),
            _ => None,
        }
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Real(v)
    }
}

impl From<VectorValue> for Value {
    fn from(v: VectorValue) -> Self {
        Value::Vector(v)
    }
}

impl From<BoxValue> for Value {
    fn from(v: BoxValue) -> Self {
        Value::Box(v)
    }
}

impl From<MultisetValue> for Value {
    fn from(v: MultisetValue) -> Self {
        Value::Multiset(v)
    }
}

impl MetricSemigroup for Value {
    fn space(&self) -> ValueSpace {
        match self {
            Value::Real(v) => v.space(),
            Value::Vector(v) => v.space(),
            Value::Box(v) => v.space(),
            Value::Multiset(v) => v.space(),
        }
    }

    fn add(&self, other: &Self) -> Result<Self, SemigroupError> {
        match (self, other) {
            (Value::Real(a), Value::Real(b)) => a.add(b).map(Value::Real),
            (Value::Vector(a), Value::Vector(b)) => a.add(b).map(Value::Vector),
            (Value::Box(a), Value::Box(b)) => a.add(b).map(Value::Box),
            (Value::Multiset(a), Value::Multiset(b)) => a.add(b).map(Value::Multiset),
            _ => mismatch(self.space(), other.space()),
        }
    }

    fn dist(&self, other: &Self) -> Result<f64, SemigroupError> {
        match (self, other) {
            (Value::Real(a), Value::Real(b)) => a.dist(b),
            (Value::Vector(a), Value::Vector(b)) => a.dist(b),
            (Value::Box(a), Value::Box(b)) => a.dist(b),
            (Value::Multiset(a), Value::Multiset(b)) => a.dist(b),
            _ => mismatch(self.space(), other.space()),
        }
    }

    fn coordinates(&self) -> Option<Vec<f64>> {
        match self {
            Value::Real(v) => v.coordinates(),
            Value::Vector(v) => v.coordinates(),
            Value::Box(v) => v.coordinates(),
            Value::Multiset(v) => v.coordinates(),
        }
    }

    fn from_coordinates(&self, coords: &[f64]) -> Option<Self> {
        match self {
            Value::Real(v) => v.from_coordinates(coords).map(Value::Real),
            Value::Vector(v) => v.from_coordinates(coords).map(Value::Vector),
            Value::Box(v) => v.from_coordinates(coords).map(Value::Box),
            Value::Multiset(_) => None,
        }
    }

    fn coordinate_diameter(&self, widths: &[f64]) -> f64 {
        match self {
            Value::Real(v) => v.coordinate_diameter(widths),
            Value::Vector(v) => v.coordinate_diameter(widths),
            Value::Box(v) => v.coordinate_diameter(widths),
            Value::Multiset(v) => v.coordinate_diameter(widths),
        }
    }
}

/// Left-to-right sum of a non-empty sequence.
pub fn sum<'a, V, I>(values: I) -> Result<V, SemigroupError>
where
    V: MetricSemigroup + 'a,
    I: IntoIterator<Item = &'a V>,
{
    let mut it = values.into_iter();
    let first = it.next().ok_or(SemigroupError::EmptySum)?.clone();
    it.try_fold(first, |acc, v| acc.add(v))
}

/// Sum under the omission convention: an empty range yields `None`, the
/// neutral element of the formal sum.
pub fn formal_sum<'a, V, I>(values: I) -> Result<Option<V>, SemigroupError>
where
    V: MetricSemigroup + 'a,
    I: IntoIterator<Item = &'a V>,
{
    match sum(values) {
        Ok(v) => Ok(Some(v)),
        Err(SemigroupError::EmptySum) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Adds two formal sums, where `None` is the omitted term.
pub fn formal_add<V: MetricSemigroup>(
    a: Option<V>,
    b: Option<V>,
) -> Result<Option<V>, SemigroupError> {
    match (a, b) {
        (Some(a), Some(b)) => a.add(&b).map(Some),
        (a, None) => Ok(a),
        (None, b) => Ok(b),
    }
}

/// Limits on how far a probed window may spread before it is declared
/// unbounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundednessCap {
    /// Absolute cap on `max_j d(v_j, v_first)`.
    pub max_spread: f64,
    /// The window is also rejected when its spread exceeds this multiple of
    /// the spread over its first half, by more than `growth_floor`.
    pub growth_ratio: f64,
    pub growth_floor: f64,
    /// Shorter windows skip the growth test.
    pub growth_window: usize,
}

impl Default for BoundednessCap {
    fn default() -> Self {
        BoundednessCap {
            max_spread: 1e6,
            growth_ratio: 1.5,
            growth_floor: 1e-3,
            growth_window: 32,
        }
    }
}

impl BoundednessCap {
    /// Checks a sequence of spreads `R(m) = max_{i<m} d(v_i, v_0)`.
    pub fn check(&self, distances_from_first: &[f64]) -> Result<(), SemigroupError> {
        let n = distances_from_first.len();
        if n == 0 {
            return Ok(());
        }
        let full = distances_from_first.iter().copied().fold(0.0, f64::max);
        if !full.is_finite() || full > self.max_spread {
            return Err(SemigroupError::Unbounded {
                spread: full,
                cap: self.max_spread,
            });
        }
        if n >= self.growth_window.max(2) {
            let half = distances_from_first[..n / 2].iter().copied().fold(0.0, f64::max);
            if full > self.growth_ratio * half + self.growth_floor {
                return Err(SemigroupError::Growing { half, full });
            }
        }
        Ok(())
    }
}

/// Outcome of [`bw_extract`].
#[derive(Debug, Clone)]
pub struct Extraction<V> {
    /// Surviving indices, ascending.
    pub indices: Vec<usize>,
    /// Coordinatewise mean of the survivors.
    pub limit: V,
    /// `max d(v_j, limit)` over the survivors.
    pub radius: f64,
}

/// Bolzano–Weierstrass extraction on a finite probe window.
///
/// Repeatedly halves the widest coordinate of the survivors' bounding box
/// until its metric diameter is at most `eps`. At each split the lower half
/// is kept when it is recurrent, meaning it still holds one of the later
/// half of the current survivors, and the upper half is kept otherwise.
pub fn bw_extract<V, F>(
    indices: &[usize],
    mut value: F,
    eps: f64,
    cap: &BoundednessCap,
) -> Result<Extraction<V>, SemigroupError>
where
    V: MetricSemigroup,
    F: FnMut(usize) -> V,
{
    let first_index = *indices.first().ok_or(SemigroupError::EmptyWindow)?;
    let template = value(first_index);
    let space = template.space();
    let mut members: Vec<(usize, Vec<f64>)> = Vec::with_capacity(indices.len());
    let mut spreads = Vec::with_capacity(indices.len());
    for &j in indices {
        let v = value(j);
        if v.space() != space {
            return mismatch(space, v.space());
        }
        spreads.push(v.dist(&template)?);
        let coords = v.coordinates().ok_or(SemigroupError::NoCompactness(space))?;
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(SemigroupError::NonFinite);
        }
        members.push((j, coords));
    }
    cap.check(&spreads)?;

    let k = members[0].1.len();
    loop {
        let mut lo = vec![f64::INFINITY; k];
        let mut hi = vec![f64::NEG_INFINITY; k];
        for (_, c) in &members {
            for i in 0..k {
                lo[i] = lo[i].min(c[i]);
                hi[i] = hi[i].max(c[i]);
            }
        }
        let widths: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| b - a).collect();
        if template.coordinate_diameter(&widths) <= eps {
            break;
        }
        let axis = (0..k)
            .max_by(|&a, &b| widths[a].total_cmp(&widths[b]))
            .expect("k > 0 when the diameter is positive");
        let mid = lo[axis] + widths[axis] / 2.0;
        let tail_start = members.len() / 2;
        let lower_recurrent = members[tail_start..].iter().any(|(_, c)| c[axis] <= mid);
        members.retain(|(_, c)| (c[axis] <= mid) == lower_recurrent);
    }

    let mean = coordinate_mean(members.iter().map(|(_, c)| c.as_slice()), k);
    let limit = template
        .from_coordinates(&mean)
        .ok_or(SemigroupError::NoCompactness(space))?;
    let mut radius: f64 = 0.0;
    for &(j, _) in &members {
        radius = radius.max(value(j).dist(&limit)?);
    }
    Ok(Extraction {
        indices: members.into_iter().map(|(j, _)| j).collect(),
        limit,
        radius,
    })
}

pub(crate) fn coordinate_mean<'a>(rows: impl Iterator<Item = &'a [f64]>, k: usize) -> Vec<f64> {
    let mut acc = vec![0.0; k];
    let mut n = 0usize;
    for row in rows {
        for (a, &c) in acc.iter_mut().zip(row) {
            *a += c;
        }
        n += 1;
    }
    acc.iter().map(|a| a / n as f64).collect()
}
