//! Brute-force reference implementations.
//!
//! Nothing here calls into the variation engine. Mixed differences are
//! recomputed with plain bit loops and the Vitali variation is the literal
//! maximum over every net partition, so agreement with the engine is a real
//! cross-check. Everything is exponential and guarded by explicit caps.

use std::collections::BTreeMap;

use num_integer::binomial;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::grid::{Grid, GridError, GridFunction, NetPartition, SubRectangle};
use crate::multiindex::{count_between, MultiIndex, Parity};
use crate::random;
use crate::semigroup::{MetricSemigroup, MultisetValue, SemigroupError};
use crate::variation::{vitali_variation, VariationError};

/// Default limit on the number of partitions a single enumeration may visit.
pub const DEFAULT_PARTITION_CAP: u64 = 1 << 20;
pub const MAX_IDENTITY_DIMENSION: usize = 6;
pub const MAX_BINOMIAL_ORDER: usize = 12;
/// Largest dimension for the multiset-valued double-sum identities.
pub const MAX_MULTISET_DIMENSION: usize = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("cap exceeded: {count} partitions requested, cap is {cap}")]
    CapExceeded { count: u128, cap: u64 },
    #[error("cap exceeded: {what} is {value}, cap is {cap}")]
    BoundExceeded { what: &'static str, value: usize, cap: usize },
    #[error("degenerate rectangle: axis {axis} has zero width")]
    DegenerateRectangle { axis: usize },
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error(transparent)]
    Variation(#[from] VariationError),
}

type Result<T> = std::result::Result<T, OracleError>;

/// Every net partition of a rectangle, in a fixed order.
///
/// Each axis of length `m` has `m − 2` interior nodes that are either in or
/// out, so the stream has `Π 2^{m_i − 2}` elements. The cursor is a single
/// counter whose bits toggle the interior nodes.
#[derive(Debug, Clone)]
pub struct PartitionEnumeration {
    shape: Vec<usize>,
    lo: Vec<usize>,
    hi: Vec<usize>,
    next: u64,
    total: u64,
}

impl PartitionEnumeration {
    pub fn total(&self) -> u64 {
        self.total
    }
}

impl Iterator for PartitionEnumeration {
    type Item = NetPartition;

    fn next(&mut self) -> Option<NetPartition> {
        if self.next >= self.total {
            return None;
        }
        let code = self.next;
        self.next += 1;
        let mut bit = 0;
        let per_axis = (0..self.shape.len())
            .map(|i| {
                let mut pts = vec![self.lo[i]];
                for node in self.lo[i] + 1..self.hi[i] {
                    if (code >> bit) & 1 == 1 {
                        pts.push(node);
                    }
                    bit += 1;
                }
                pts.push(self.hi[i]);
                pts
            })
            .collect();
        Some(NetPartition::new(&self.shape, per_axis).expect("valid by construction"))
    }
}

pub fn enumerate_partitions(grid: &Grid, rect: &SubRectangle) -> Result<PartitionEnumeration> {
    enumerate_partitions_capped(grid, rect, DEFAULT_PARTITION_CAP)
}

pub fn enumerate_partitions_capped(
    grid: &Grid,
    rect: &SubRectangle,
    cap: u64,
) -> Result<PartitionEnumeration> {
    grid.check_index(rect.lo())?;
    grid.check_index(rect.hi())?;
    if let Some(&axis) = rect.degenerate_axes().first() {
        return Err(OracleError::DegenerateRectangle { axis });
    }
    let interior: u32 = (0..grid.dim())
        .map(|i| (rect.hi()[i] - rect.lo()[i] - 1) as u32)
        .sum();
    let count = 1u128 << interior.min(127);
    if count > cap as u128 {
        return Err(OracleError::CapExceeded { count, cap });
    }
    Ok(PartitionEnumeration {
        shape: grid.shape(),
        lo: rect.lo().to_vec(),
        hi: rect.hi().to_vec(),
        next: 0,
        total: count as u64,
    })
}

/// Mixed difference recomputed from scratch: corners are visited by masks
/// over the full cube and sorted into even and odd sums by popcount.
fn oracle_mixed_difference<V: MetricSemigroup>(
    f: &GridFunction<V>,
    alpha_bits: u32,
    x: &[usize],
    y: &[usize],
    z: &[usize],
) -> Result<f64> {
    let n = f.dim();
    let mut even: Option<V> = None;
    let mut odd: Option<V> = None;
    for mask in 0u32..(1 << n) {
        if mask & !alpha_bits != 0 {
            continue;
        }
        let node: Vec<usize> = (0..n)
            .map(|i| {
                if (alpha_bits >> i) & 1 == 0 {
                    z[i]
                } else if (mask >> i) & 1 == 1 {
                    y[i]
                } else {
                    x[i]
                }
            })
            .collect();
        let v = f.get(&node)?;
        let slot = if mask.count_ones() % 2 == 0 { &mut even } else { &mut odd };
        *slot = Some(match slot.take() {
            None => v.clone(),
            Some(acc) => acc.add(v)?,
        });
    }
    let (e, o) = (even.expect("θ = 0 is even"), odd.expect("α ≠ 0 has an odd corner"));
    Ok(e.dist(&o)?)
}

fn oracle_prevariation<V: MetricSemigroup>(
    f: &GridFunction<V>,
    alpha_bits: u32,
    support: &[usize],
    base: &[usize],
    partition: &NetPartition,
) -> Result<f64> {
    let mut total = 0.0;
    for cell in partition.cells() {
        let mut x = base.to_vec();
        let mut y = base.to_vec();
        for (k, &i) in support.iter().enumerate() {
            x[i] = cell.lo()[k];
            y[i] = cell.hi()[k];
        }
        total += oracle_mixed_difference(f, alpha_bits, &x, &y, base)?;
    }
    Ok(total)
}

/// The literal supremum of the prevariation of `f_α^base` over every net
/// partition of `rect⌊α`.
pub fn brute_force_variation<V: MetricSemigroup>(
    f: &GridFunction<V>,
    alpha: &MultiIndex,
    base: &[usize],
    rect: &SubRectangle,
) -> Result<f64> {
    brute_force_variation_capped(f, alpha, base, rect, DEFAULT_PARTITION_CAP)
}

pub fn brute_force_variation_capped<V: MetricSemigroup>(
    f: &GridFunction<V>,
    alpha: &MultiIndex,
    base: &[usize],
    rect: &SubRectangle,
    cap: u64,
) -> Result<f64> {
    let grid = f.grid();
    grid.check_index(base)?;
    let support: Vec<usize> = (0..f.dim()).filter(|&i| alpha.is_set(i)).collect();
    if support.is_empty() {
        return Err(VariationError::ZeroMultiIndex.into());
    }
    if support.iter().any(|&i| rect.lo()[i] == rect.hi()[i]) {
        return Ok(0.0);
    }
    let tgrid = Grid::new(support.iter().map(|&i| grid.axis(i).to_vec()).collect())?;
    let trect = SubRectangle::new(
        support.iter().map(|&i| rect.lo()[i]).collect(),
        support.iter().map(|&i| rect.hi()[i]).collect(),
    )?;
    let mut best: f64 = 0.0;
    for p in enumerate_partitions_capped(&tgrid, &trect, cap)? {
        best = best.max(oracle_prevariation(f, alpha.bits(), &support, base, &p)?);
    }
    Ok(best)
}

/// `Σ_{α≠0}` of brute-force variations based at `lo`.
pub fn brute_force_total_variation<V: MetricSemigroup>(
    f: &GridFunction<V>,
    lo: &[usize],
    hi: &[usize],
) -> Result<f64> {
    let rect = SubRectangle::within(f.grid(), lo.to_vec(), hi.to_vec())?;
    let n = f.dim();
    let mut total = 0.0;
    for bits in 1u32..(1 << n) {
        let alpha = MultiIndex::from_bits(bits, n).expect("dimension already validated");
        total += brute_force_variation(f, &alpha, lo, &rect)?;
    }
    Ok(total)
}

/// One checked instance of an identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub family: &'static str,
    pub instance: String,
    pub passed: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// `(passed, total)` per family.
    pub fn summary(&self) -> BTreeMap<&'static str, (usize, usize)> {
        let mut out = BTreeMap::new();
        for c in &self.checks {
            let e = out.entry(c.family).or_insert((0, 0));
            e.0 += c.passed as usize;
            e.1 += 1;
        }
        out
    }

    fn push(&mut self, family: &'static str, instance: String, passed: bool) {
        self.checks.push(IdentityCheck {
            family,
            instance,
            passed,
        });
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentitySuiteConfig {
    pub n_max: usize,
    pub m_max: usize,
    /// Random instances per pattern of the metric inequality.
    pub trials: usize,
    pub seed: u64,
}

impl Default for IdentitySuiteConfig {
    fn default() -> Self {
        IdentitySuiteConfig {
            n_max: MAX_IDENTITY_DIMENSION,
            m_max: MAX_BINOMIAL_ORDER,
            trials: 100,
            seed: 0,
        }
    }
}

pub const FAMILY_BINOMIAL: &str = "binomial-halves";
pub const FAMILY_PARITY: &str = "parity-balance";
pub const FAMILY_DOUBLE_SUM: &str = "nested-parity-sums";
pub const FAMILY_COMPLEMENT: &str = "complement-split";
pub const FAMILY_METRIC: &str = "metric-inequality";

/// Runs every identity family up to the configured bounds.
pub fn verify_identity_suite(cfg: &IdentitySuiteConfig) -> Result<IdentityReport> {
    if cfg.n_max > MAX_IDENTITY_DIMENSION {
        return Err(OracleError::BoundExceeded {
            what: "n_max",
            value: cfg.n_max,
            cap: MAX_IDENTITY_DIMENSION,
        });
    }
    if cfg.m_max > MAX_BINOMIAL_ORDER {
        return Err(OracleError::BoundExceeded {
            what: "m_max",
            value: cfg.m_max,
            cap: MAX_BINOMIAL_ORDER,
        });
    }
    let mut report = IdentityReport::default();
    check_binomial_halves(cfg.m_max, &mut report);
    for n in 1..=cfg.n_max {
        check_parity_balance(n, &mut report);
    }
    for n in 1..=cfg.n_max.min(MAX_MULTISET_DIMENSION) {
        check_nested_parity_sums(n, &mut report);
        check_complement_split(n, &mut report);
    }
    check_metric_inequality(cfg.trials, cfg.seed, &mut report);
    Ok(report)
}

/// For `0 ≤ k < m`, the even and the odd binomial half-sums of `m − k` both
/// equal `2^{m−k−1}`.
fn check_binomial_halves(m_max: usize, report: &mut IdentityReport) {
    for m in 1..=m_max as i64 {
        for k in 0..m {
            let expected = 1u64 << (m - k - 1);
            let even: u64 = ((k + 1) / 2..=m / 2)
                .map(|i| binomial((m - k) as u64, (2 * i - k) as u64))
                .sum();
            let odd: u64 = ((k + 2) / 2..=(m + 1) / 2)
                .map(|i| binomial((m - k) as u64, (2 * i - 1 - k) as u64))
                .sum();
            report.push(
                FAMILY_BINOMIAL,
                format!("m={m} k={k}"),
                even == expected && odd == expected,
            );
        }
    }
}

/// Between `β < γ` there are as many even as odd multiindices. Also checks
/// the engine's closed-form counter against direct enumeration.
fn check_parity_balance(n: usize, report: &mut IdentityReport) {
    let full = 1u32 << n;
    let mut pairs = 0usize;
    let mut ok = true;
    for gamma in 0..full {
        for beta in 0..full {
            if beta & !gamma != 0 {
                continue;
            }
            pairs += 1;
            let (mut even, mut odd) = (0u64, 0u64);
            for alpha in 0..full {
                if beta & !alpha == 0 && alpha & !gamma == 0 {
                    if alpha.count_ones() % 2 == 0 {
                        even += 1;
                    } else {
                        odd += 1;
                    }
                }
            }
            if beta != gamma && even != odd {
                ok = false;
            }
            let b = MultiIndex::from_bits(beta, n).unwrap();
            let g = MultiIndex::from_bits(gamma, n).unwrap();
            if count_between(&b, &g, Parity::Even) != Ok(even)
                || count_between(&b, &g, Parity::Odd) != Ok(odd)
            {
                ok = false;
            }
        }
    }
    report.push(FAMILY_PARITY, format!("n={n} pairs={pairs}"), ok);
}

/// The atom `h(θ)`: a singleton tagged by the bit string of `θ`.
fn h(bits: u32, n: usize) -> MultisetValue {
    MultisetValue::singleton(
        (0..n)
            .map(|i| if (bits >> i) & 1 == 1 { '1' } else { '0' })
            .collect::<String>(),
    )
}

fn subsets(of: u32, n: usize) -> impl Iterator<Item = u32> {
    (0u32..(1 << n)).filter(move |s| s & !of == 0)
}

fn parity_ok(bits: u32, even: bool) -> bool {
    bits.count_ones().is_multiple_of(2) == even
}

/// Formal multiset sum where `None` stands for an omitted (empty) sum.
fn formal(items: impl IntoIterator<Item = MultisetValue>) -> Option<MultisetValue> {
    items.into_iter().fold(None, |acc, v| match acc {
        None => Some(v),
        Some(a) => Some(a.add(&v).expect("multisets always add")),
    })
}

fn join(a: Option<MultisetValue>, b: Option<MultisetValue>) -> Option<MultisetValue> {
    formal(a.into_iter().chain(b))
}

/// `Σ_{outer ≤ top, parity p} Σ_{θ ≤ outer+shift, parity q} h(θ)`.
fn nested(n: usize, top: u32, outer_even: bool, shift: u32, inner_even: bool) -> Option<MultisetValue> {
    formal(
        subsets(top, n)
            .filter(|&b| parity_ok(b, outer_even))
            .flat_map(|b| {
                subsets(b | shift, n)
                    .filter(move |&t| parity_ok(t, inner_even))
                    .map(move |t| h(t, n))
            }),
    )
}

/// For every `γ ≤ 1`, with `h(θ)` a distinct atom per `θ`:
/// even-outer sums exceed odd-outer sums by exactly `h(γ)` when the parities
/// of `γ` and the inner sum agree, and match otherwise.
fn check_nested_parity_sums(n: usize, report: &mut IdentityReport) {
    for gamma in 0u32..(1 << n) {
        let g_even = parity_ok(gamma, true);
        // Even inner terms.
        let left = nested(n, gamma, true, 0, true);
        let right = join(g_even.then(|| h(gamma, n)), nested(n, gamma, false, 0, true));
        report.push(
            FAMILY_DOUBLE_SUM,
            format!("n={n} gamma={} inner=even", h_label(gamma, n)),
            left == right,
        );
        // Odd inner terms.
        let left = nested(n, gamma, false, 0, false);
        let right = join((!g_even).then(|| h(gamma, n)), nested(n, gamma, true, 0, false));
        report.push(
            FAMILY_DOUBLE_SUM,
            format!("n={n} gamma={} inner=odd", h_label(gamma, n)),
            left == right,
        );
    }
}

fn h_label(bits: u32, n: usize) -> String {
    MultiIndex::from_bits(bits, n).unwrap().to_string()
}

/// For every `α ≤ 1` with complement `c = 1 − α`, splitting the nested sums
/// over `β ≤ c` by the parity of `β` leaves a remainder made of the terms
/// `h(c + θ)` with `θ ≤ α`.
fn check_complement_split(n: usize, report: &mut IdentityReport) {
    let full = (1u32 << n) - 1;
    for alpha in 0u32..(1 << n) {
        let c = full & !alpha;
        let c_even = parity_ok(c, true);
        for inner_even in [true, false] {
            let (left, right) = if c_even {
                let head = formal(
                    subsets(alpha, n)
                        .filter(|&t| parity_ok(t, inner_even))
                        .map(|t| h(c | t, n)),
                );
                (
                    join(head, nested(n, c, false, alpha, inner_even)),
                    nested(n, c, true, alpha, inner_even),
                )
            } else {
                let head = formal(
                    subsets(full, n)
                        .filter(|&t| t & c == c && parity_ok(t, inner_even))
                        .map(|t| h(t, n)),
                );
                (
                    join(head, nested(n, c, true, alpha, inner_even)),
                    nested(n, c, false, alpha, inner_even),
                )
            };
            report.push(
                FAMILY_COMPLEMENT,
                format!(
                    "n={n} alpha={} inner={}",
                    h_label(alpha, n),
                    if inner_even { "even" } else { "odd" }
                ),
                left == right,
            );
        }
    }
}

/// The three balanced shapes of the metric inequality's hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BalancePattern {
    /// Odd `m`: `u + Σ u_{2i} = Σ u_{2i−1}`, and likewise for `v`.
    Odd,
    /// Even `m`: `u + Σ u_{2i} = v + Σ u_{2i−1}` and `Σ v_{2i} = Σ v_{2i−1}`.
    EvenShared,
    /// Even `m`: `Σ u_{2i} = v + Σ u_{2i−1}` and `Σ v_{2i} = u + Σ v_{2i−1}`.
    EvenCrossed,
}

/// A tuple `(u, v, u_1..u_m, v_1..v_m)` in the multiset semigroup.
#[derive(Debug, Clone)]
pub struct BalancedInstance {
    pub pattern: BalancePattern,
    pub u: MultisetValue,
    pub v: MultisetValue,
    pub us: Vec<MultisetValue>,
    pub vs: Vec<MultisetValue>,
}

impl BalancedInstance {
    /// Interleaves odd-position pieces (`j = 1, 3, …`) and even-position pieces.
    fn assemble(odd: Vec<MultisetValue>, even: Vec<MultisetValue>) -> Vec<MultisetValue> {
        let m = odd.len() + even.len();
        let (mut o, mut e) = (odd.into_iter(), even.into_iter());
        (1..=m)
            .map(|j| if j % 2 == 1 { o.next() } else { e.next() }.unwrap())
            .collect()
    }

    pub fn generate<R: Rng>(rng: &mut R, pattern: BalancePattern, half: usize) -> Self {
        let half = half.max(1);
        let rand_vec = |rng: &mut R, k: usize| (0..k).map(|_| random::multiset(rng)).collect::<Vec<_>>();
        let total = |parts: &[MultisetValue], extra: Option<&MultisetValue>| {
            parts
                .iter()
                .chain(extra)
                .fold(MultisetValue::empty(), |a, b| a.add(b).unwrap())
        };
        match pattern {
            BalancePattern::Odd => {
                // m = 2·half − 1: half odd-position pieces, half − 1 even ones.
                let side = |rng: &mut R| {
                    let head = random::multiset(rng);
                    let evens = rand_vec(rng, half - 1);
                    let odds = random::split_multiset(rng, &total(&evens, Some(&head)), half);
                    (head, Self::assemble(odds, evens))
                };
                let (u, us) = side(rng);
                let (v, vs) = side(rng);
                BalancedInstance { pattern, u, v, us, vs }
            }
            BalancePattern::EvenShared => {
                let u = random::multiset(rng);
                let u_even = rand_vec(rng, half);
                let mut pieces = random::split_multiset(rng, &total(&u_even, Some(&u)), half + 1);
                let v = pieces.pop().unwrap();
                let us = Self::assemble(pieces, u_even);
                let pool = random::multiset(rng);
                let v_odd = random::split_multiset(rng, &pool, half);
                let v_even = random::split_multiset(rng, &pool, half);
                BalancedInstance {
                    pattern,
                    u,
                    v,
                    us,
                    vs: Self::assemble(v_odd, v_even),
                }
            }
            BalancePattern::EvenCrossed => {
                let u_even = rand_vec(rng, half);
                let mut pieces = random::split_multiset(rng, &total(&u_even, None), half + 1);
                let v = pieces.pop().unwrap();
                let v_even = rand_vec(rng, half);
                let mut vpieces = random::split_multiset(rng, &total(&v_even, None), half + 1);
                let u = vpieces.pop().unwrap();
                BalancedInstance {
                    pattern,
                    u,
                    v,
                    us: Self::assemble(pieces, u_even),
                    vs: Self::assemble(vpieces, v_even),
                }
            }
        }
    }

    /// `Σ u_{2i} + u + Σ v_{2i−1} = Σ v_{2i} + v + Σ u_{2i−1}`.
    pub fn is_balanced(&self) -> bool {
        let pick = |xs: &[MultisetValue], odd: bool| {
            xs.iter()
                .enumerate()
                .filter(move |(k, _)| (k % 2 == 0) == odd)
                .map(|(_, x)| x.clone())
                .collect::<Vec<_>>()
        };
        let left = formal(
            pick(&self.us, false)
                .into_iter()
                .chain([self.u.clone()])
                .chain(pick(&self.vs, true)),
        );
        let right = formal(
            pick(&self.vs, false)
                .into_iter()
                .chain([self.v.clone()])
                .chain(pick(&self.us, true)),
        );
        left == right
    }

    /// `(d(u, v), Σ_j d(u_j, v_j))`.
    pub fn sides(&self) -> (f64, f64) {
        let lhs = self.u.dist(&self.v).unwrap();
        let rhs = self.us.iter().zip(&self.vs).map(|(a, b)| a.dist(b).unwrap()).sum();
        (lhs, rhs)
    }
}

fn check_metric_inequality(trials: usize, seed: u64, report: &mut IdentityReport) {
    let mut rng = random::rng(seed);
    for pattern in [BalancePattern::Odd, BalancePattern::EvenShared, BalancePattern::EvenCrossed] {
        for t in 0..trials {
            let half = rng.random_range(1..=4);
            let inst = BalancedInstance::generate(&mut rng, pattern, half);
            let (lhs, rhs) = inst.sides();
            report.push(
                FAMILY_METRIC,
                format!("{pattern:?} m={} trial={t}", inst.us.len()),
                inst.is_balanced() && lhs <= rhs,
            );
        }
    }
}

/// Settings for [`equivalence_sweep`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceConfig {
    pub trials: usize,
    pub seed: u64,
    /// Maximum partitions per brute-force supremum.
    pub grid_cap: u64,
    pub tolerance: f64,
}

impl Default for EquivalenceConfig {
    fn default() -> Self {
        EquivalenceConfig {
            trials: 25,
            seed: 0,
            grid_cap: 1 << 12,
            tolerance: 1e-12,
        }
    }
}

/// Engine versus brute force for one `(function, α)` pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceCheck {
    pub space: String,
    pub shape: Vec<usize>,
    pub alpha: MultiIndex,
    pub engine: f64,
    pub oracle: f64,
    pub passed: bool,
}

/// Random grid functions in every value space; for each nonzero `α` the
/// engine's Vitali variation is compared with the brute-force supremum.
pub fn equivalence_sweep(cfg: &EquivalenceConfig) -> Result<Vec<EquivalenceCheck>> {
    let mut rng = random::rng(cfg.seed);
    let mut out = Vec::new();
    for _ in 0..cfg.trials {
        for space in random::spaces(&mut rng) {
            let dims = rng.random_range(1..=3);
            let max_len = if dims == 3 { 3 } else { 5 };
            let shape = loop {
                let s = random::shape(&mut rng, dims, 2, max_len);
                let interior: usize = s.iter().map(|m| m - 2).sum();
                if (1u64 << interior) <= cfg.grid_cap {
                    break s;
                }
            };
            let grid = random::grid(&mut rng, &shape);
            let f = random::dynamic_function(&mut rng, grid.clone(), space);
            let rect = SubRectangle::full(&grid);
            let base = random::node(&mut rng, &grid);
            for alpha in MultiIndex::nonzero(dims).expect("small dimension") {
                let engine = vitali_variation(&f, &alpha, &base, &rect)?.value;
                let oracle = brute_force_variation_capped(&f, &alpha, &base, &rect, cfg.grid_cap)?;
                out.push(EquivalenceCheck {
                    space: space.to_string(),
                    shape: shape.clone(),
                    alpha,
                    engine,
                    oracle,
                    passed: (engine - oracle).abs() <= cfg.tolerance,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let g = Grid::uniform(&[2]).unwrap();
        assert_eq!(enumerate_partitions(&g, &SubRectangle::full(&g)).unwrap().count(), 1);
        let g = Grid::uniform(&[3, 3]).unwrap();
        let all: Vec<NetPartition> = enumerate_partitions(&g, &SubRectangle::full(&g)).unwrap().collect();
        assert_eq!(all.len(), 4);
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                assert_ne!(a, b);
            }
        }
        assert!(all.contains(&NetPartition::finest(&g, &SubRectangle::full(&g)).unwrap()));
    }

    #[test]
    fn counts_match_product_formula() {
        for shape in [[2, 5], [3, 4], [5, 5], [4, 2]] {
            let g = Grid::uniform(&shape).unwrap();
            let n = enumerate_partitions(&g, &SubRectangle::full(&g)).unwrap().count();
            let expected: usize = shape.iter().map(|m| 1usize << (m - 2)).product();
            assert_eq!(n, expected);
        }
    }

    #[test]
    fn cap_fails_loudly() {
        let g = Grid::uniform(&[12, 12]).unwrap();
        let err = enumerate_partitions_capped(&g, &SubRectangle::full(&g), 1 << 10).unwrap_err();
        assert_eq!(err, OracleError::CapExceeded { count: 1 << 20, cap: 1 << 10 });
    }

    #[test]
    fn brute_force_examples() {
        let line = Grid::new(vec![vec![0.0, 0.5, 1.0]]).unwrap();
        let f = GridFunction::from_fn(line.clone(), |p, _| p[0]).unwrap();
        let a: MultiIndex = "1".parse().unwrap();
        assert_eq!(brute_force_variation(&f, &a, &[0], &SubRectangle::full(&line)).unwrap(), 1.0);

        let sq = Grid::new(vec![vec![0.0, 0.5, 1.0]; 2]).unwrap();
        let f = GridFunction::from_fn(sq.clone(), |p, _| p[0] * p[1]).unwrap();
        let a: MultiIndex = "11".parse().unwrap();
        assert_eq!(brute_force_variation(&f, &a, &[0, 0], &SubRectangle::full(&sq)).unwrap(), 1.0);

        let c = GridFunction::from_fn(sq.clone(), |_, _| 3.0).unwrap();
        assert_eq!(brute_force_total_variation(&c, &[0, 0], &[2, 2]).unwrap(), 0.0);
    }

    #[test]
    fn small_identity_suite_passes() {
        let report = verify_identity_suite(&IdentitySuiteConfig {
            n_max: 3,
            m_max: 6,
            trials: 10,
            seed: 1,
        })
        .unwrap();
        assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
        assert!(report.checks.iter().any(|c| c.family == FAMILY_BINOMIAL && c.instance == "m=1 k=0"));
    }

    #[test]
    fn identity_bounds_are_enforced() {
        let cfg = IdentitySuiteConfig {
            n_max: 7,
            ..Default::default()
        };
        assert!(matches!(verify_identity_suite(&cfg), Err(OracleError::BoundExceeded { .. })));
    }

    #[test]
    fn nested_sum_example_two_dimensions() {
        // γ = 11: left holds h(00) twice and h(11) once.
        let left = nested(2, 0b11, true, 0, true).unwrap();
        assert_eq!(left.count("00"), 2);
        assert_eq!(left.count("11"), 1);
        assert_eq!(left.len(), 3);
    }

    #[test]
    fn unbalanced_tuples_are_detected() {
        let mut rng = random::rng(3);
        let mut inst = BalancedInstance::generate(&mut rng, BalancePattern::EvenShared, 2);
        assert!(inst.is_balanced());
        inst.u = inst.u.add(&MultisetValue::singleton("z")).unwrap();
        assert!(!inst.is_balanced());
    }
}
