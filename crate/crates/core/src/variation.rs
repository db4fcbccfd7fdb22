//! Mixed differences, Vitali variation and total variation of grid maps.
//!
//! For a nonzero multiindex `α` and nodes `x ≤ y`, `z`, the mixed difference
//! compares the semigroup sums of `f` over the even and odd corners of the
//! `α`-face through `z`:
//!
//! ```text
//! md(f_α^z, I_x^y⌊α) = d( Σ_{θ≤α, |θ| even} f(z + α(x−z) + θ(y−x)),
//!                         Σ_{θ≤α, |θ| odd } f(z + α(x−z) + θ(y−x)) )
//! ```
//!
//! The Vitali variation is the sum of mixed differences over the cells of a
//! partition. Refining a partition never decreases that sum, so the finest
//! partition attains the supremum. Total variation adds the Vitali
//! variations of every truncation `α ≠ 0` based at the lower corner.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::grid::{Grid, GridError, GridFunction, NetPartition, SubRectangle};
use crate::multiindex::{MultiIndex, MultiIndexError, ParityFilter};
use crate::numeric::compensated_sum;
use crate::semigroup::{sum, MetricSemigroup, SemigroupError, ValueSpace};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VariationError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error(transparent)]
    MultiIndex(#[from] MultiIndexError),
    #[error("the zero multiindex has no mixed difference")]
    ZeroMultiIndex,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("nodes are not ordered: {x:?} is not below {y:?}")]
    NotOrdered { x: Vec<usize>, y: Vec<usize> },
}

type Result<T> = std::result::Result<T, VariationError>;

fn check_alpha(f_dim: usize, alpha: &MultiIndex) -> Result<()> {
    if alpha.dim() != f_dim {
        return Err(VariationError::DimensionMismatch {
            expected: f_dim,
            found: alpha.dim(),
        });
    }
    if alpha.is_zero() {
        return Err(VariationError::ZeroMultiIndex);
    }
    Ok(())
}

/// The node `z + α(x−z) + θ(y−x)`.
fn corner(alpha: &MultiIndex, theta: &MultiIndex, x: &[usize], y: &[usize], z: &[usize]) -> Vec<usize> {
    (0..z.len())
        .map(|i| match (alpha.get(i), theta.get(i)) {
            (0, _) => z[i],
            (_, 0) => x[i],
            _ => y[i],
        })
        .collect()
}

/// `md_{|α|}(f_α^z, I_x^y⌊α)`. Zero when `x_i = y_i` on some axis of `α`.
pub fn mixed_difference<V: MetricSemigroup>(
    f: &GridFunction<V>,
    alpha: &MultiIndex,
    x: &[usize],
    y: &[usize],
    z: &[usize],
) -> Result<f64> {
    check_alpha(f.dim(), alpha)?;
    let grid = f.grid();
    grid.check_index(x)?;
    grid.check_index(y)?;
    grid.check_index(z)?;
    Ok(mixed_difference_unchecked(f, alpha, x, y, z)?)
}

pub(crate) fn mixed_difference_unchecked<V: MetricSemigroup>(
    f: &GridFunction<V>,
    alpha: &MultiIndex,
    x: &[usize],
    y: &[usize],
    z: &[usize],
) -> std::result::Result<f64, SemigroupError> {
    if alpha.support().any(|i| x[i] == y[i]) {
        return Ok(0.0);
    }
    let side = |filter| -> std::result::Result<V, SemigroupError> {
        let terms: Vec<&V> = alpha
            .enumerate_leq(filter)
            .iter()
            .map(|theta| f.at(&corner(alpha, theta, x, y, z)))
            .collect();
        sum(terms)
    };
    side(ParityFilter::Even)?.dist(&side(ParityFilter::Odd)?)
}

/// Expands a node of `G⌊α` to a node of `G` using `base` off the support.
fn expand(alpha: &MultiIndex, truncated: &[usize], base: &[usize]) -> Vec<usize> {
    let mut out = base.to_vec();
    for (k, i) in alpha.support().enumerate() {
        out[i] = truncated[k];
    }
    out
}

/// Prevariation `Σ_{cells} md` of `f_α^base` over a net partition of the
/// truncated grid `G⌊α`.
pub fn prevariation<V: MetricSemigroup>(
    f: &GridFunction<V>,
    alpha: &MultiIndex,
    base: &[usize],
    partition: &NetPartition,
) -> Result<f64> {
    check_alpha(f.dim(), alpha)?;
    f.grid().check_index(base)?;
    let tgrid = f.grid().truncate(alpha)?;
    if partition.shape() != tgrid.shape().as_slice() {
        return Err(VariationError::DimensionMismatch {
            expected: alpha.order(),
            found: partition.dim(),
        });
    }
    let terms = partition
        .cells()
        .iter()
        .map(|cell| {
            let x = expand(alpha, cell.lo(), base);
            let y = expand(alpha, cell.hi(), base);
            mixed_difference_unchecked(f, alpha, &x, &y, base)
        })
        .collect::<std::result::Result<Vec<f64>, _>>()?;
    Ok(compensated_sum(terms))
}

/// Result of [`vitali_variation`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VitaliVariation {
    pub value: f64,
    /// Set when the rectangle has zero width along some axis of `α`.
    pub degenerate: bool,
}

/// `V(f_α^base, rect⌊α)`, evaluated on the finest partition.
pub fn vitali_variation<V: MetricSemigroup>(
    f: &GridFunction<V>,
    alpha: &MultiIndex,
    base: &[usize],
    rect: &SubRectangle,
) -> Result<VitaliVariation> {
    check_alpha(f.dim(), alpha)?;
    f.grid().check_index(base)?;
    f.grid().check_index(rect.lo())?;
    f.grid().check_index(rect.hi())?;
    if rect.is_degenerate_along(alpha) {
        return Ok(VitaliVariation {
            value: 0.0,
            degenerate: true,
        });
    }
    let tgrid = f.grid().truncate(alpha)?;
    let partition = NetPartition::finest(&tgrid, &rect.truncate(alpha))?;
    Ok(VitaliVariation {
        value: prevariation(f, alpha, base, &partition)?,
        degenerate: false,
    })
}

/// Total variation with its per-truncation breakdown.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariationReport {
    pub tv: f64,
    /// `V(f_α^x, I_x^y⌊α)` keyed by `α`.
    pub per_alpha: BTreeMap<MultiIndex, f64>,
    /// Number of Vitali terms in the sum, `2^n − 1`.
    pub vitali_terms: usize,
    pub shape: Vec<usize>,
    pub space: ValueSpace,
}

/// `TV(f, I_x^y) = Σ_{α≠0} V(f_α^x, I_x^y⌊α)`.
pub fn total_variation_on<V: MetricSemigroup>(
    f: &GridFunction<V>,
    rect: &SubRectangle,
) -> Result<VariationReport> {
    let mut per_alpha = BTreeMap::new();
    for alpha in MultiIndex::nonzero(f.dim())? {
        let v = vitali_variation(f, &alpha, rect.lo(), rect)?;
        per_alpha.insert(alpha, v.value);
    }
    Ok(VariationReport {
        tv: compensated_sum(per_alpha.values().copied()),
        vitali_terms: per_alpha.len(),
        per_alpha,
        shape: f.grid().shape(),
        space: f.space(),
    })
}

/// `TV(f, G)` over the whole grid.
pub fn total_variation<V: MetricSemigroup>(f: &GridFunction<V>) -> Result<VariationReport> {
    total_variation_on(f, &SubRectangle::full(f.grid()))
}

/// `TV(f, I_lo^hi)` as a number.
pub fn tv_between<V: MetricSemigroup>(f: &GridFunction<V>, lo: &[usize], hi: &[usize]) -> Result<f64> {
    let rect = SubRectangle::within(f.grid(), lo.to_vec(), hi.to_vec())?;
    Ok(total_variation_on(f, &rect)?.tv)
}

/// `TV(f, I_x^{x+γ(y−x)})`.
pub fn tv_subrectangle<V: MetricSemigroup>(
    f: &GridFunction<V>,
    x: &[usize],
    y: &[usize],
    gamma: &MultiIndex,
) -> Result<f64> {
    check_ordered(f.grid(), x, y)?;
    if gamma.dim() != f.dim() {
        return Err(VariationError::DimensionMismatch {
            expected: f.dim(),
            found: gamma.dim(),
        });
    }
    let top: Vec<usize> = (0..x.len()).map(|i| if gamma.is_set(i) { y[i] } else { x[i] }).collect();
    tv_between(f, x, &top)
}

fn check_ordered(grid: &Grid, x: &[usize], y: &[usize]) -> Result<()> {
    grid.check_index(x)?;
    grid.check_index(y)?;
    if x.iter().zip(y).any(|(a, b)| a > b) {
        return Err(VariationError::NotOrdered {
            x: x.to_vec(),
            y: y.to_vec(),
        });
    }
    Ok(())
}

/// The total variation function `ν_f(x) = TV(f, I_a^x)`.
///
/// For each `α` the mixed differences of the cells of `G⌊α` based at `a`
/// are accumulated into prefix sums, so every node costs one lookup per
/// `α` rather than a fresh rectangle sweep.
pub fn total_variation_function<V: MetricSemigroup>(f: &GridFunction<V>) -> Result<GridFunction<f64>> {
    let grid = f.grid();
    let a = grid.lower();
    let mut nu = vec![0.0; grid.node_count()];
    for alpha in MultiIndex::nonzero(f.dim())? {
        let tgrid = grid.truncate(&alpha)?;
        let tshape = tgrid.shape();
        // prefix[t] = Σ md over cells whose upper corner is ≤ t.
        let mut prefix = vec![0.0; tgrid.node_count()];
        for (k, t) in tgrid.nodes().enumerate() {
            if t.iter().all(|&ti| ti >= 1) {
                let lo: Vec<usize> = t.iter().map(|&ti| ti - 1).collect();
                let x = expand(&alpha, &lo, &a);
                let y = expand(&alpha, &t, &a);
                prefix[k] = mixed_difference_unchecked(f, &alpha, &x, &y, &a)?;
            }
        }
        let mut stride = 1;
        for axis in (0..tshape.len()).rev() {
            let m = tshape[axis];
            for k in 0..prefix.len() {
                if (k / stride) % m != 0 {
                    prefix[k] += prefix[k - stride];
                }
            }
            stride *= m;
        }
        for (k, node) in grid.nodes().enumerate() {
            let t: Vec<usize> = alpha.support().map(|i| node[i]).collect();
            nu[k] += prefix[tgrid.linear_index(&t)];
        }
    }
    Ok(GridFunction::new(grid.clone(), nu)?)
}

/// The two sides of the pointwise bound
/// `d(f(x), f(y)) ≤ Σ_{α≠0} md(f_α^x, I_x^y⌊α) ≤ TV(f, I_x^y)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointwiseBound {
    pub distance: f64,
    pub mixed_sum: f64,
    pub tv: f64,
}

impl PointwiseBound {
    pub fn holds(&self, tol: f64) -> bool {
        self.distance <= self.mixed_sum + tol && self.mixed_sum <= self.tv + tol
    }
}

pub fn pointwise_bound<V: MetricSemigroup>(
    f: &GridFunction<V>,
    x: &[usize],
    y: &[usize],
) -> Result<PointwiseBound> {
    check_ordered(f.grid(), x, y)?;
    let distance = f.at(x).dist(f.at(y))?;
    let terms = MultiIndex::nonzero(f.dim())?
        .iter()
        .map(|alpha| mixed_difference_unchecked(f, alpha, x, y, x))
        .collect::<std::result::Result<Vec<f64>, _>>()?;
    Ok(PointwiseBound {
        distance,
        mixed_sum: compensated_sum(terms),
        tv: tv_between(f, x, y)?,
    })
}

/// A cell where a real function fails to be totally monotone.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityWitness {
    pub alpha: MultiIndex,
    pub lo: Vec<usize>,
    pub hi: Vec<usize>,
    /// The signed increment `Σ_{θ≤α} (−1)^{|α|−|θ|} g(x+θ(y−x))`.
    pub increment: f64,
}

/// Checks that every signed increment over every adjacent cell of every
/// truncation is at least `−tol`. Returns the most negative one otherwise.
pub fn monotonicity_witness(g: &GridFunction<f64>, tol: f64) -> Result<Option<MonotonicityWitness>> {
    let grid = g.grid();
    let shape = grid.shape();
    let mut worst: Option<MonotonicityWitness> = None;
    for alpha in MultiIndex::nonzero(g.dim())? {
        let corners = alpha.enumerate_leq(ParityFilter::All);
        for x in grid.nodes() {
            if alpha.support().any(|i| x[i] + 1 >= shape[i]) {
                continue;
            }
            let y: Vec<usize> = (0..x.len()).map(|i| x[i] + alpha.get(i) as usize).collect();
            let increment = compensated_sum(corners.iter().map(|theta| {
                let v = *g.at(&corner(&alpha, theta, &x, &y, &x));
                if (alpha.order() - theta.order()) % 2 == 0 {
                    v
                } else {
                    -v
                }
            }));
            if increment < -tol && worst.as_ref().is_none_or(|w| increment < w.increment) {
                worst = Some(MonotonicityWitness {
                    alpha,
                    lo: x,
                    hi: y,
                    increment,
                });
            }
        }
    }
    Ok(worst)
}

pub fn is_totally_monotone(g: &GridFunction<f64>, tol: f64) -> Result<bool> {
    Ok(monotonicity_witness(g, tol)?.is_none())
}

/// `g = ν − π` with `ν = ν_g` and `π = ν_g − g`, both totally monotone.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanDecomposition {
    pub nu: GridFunction<f64>,
    pub pi: GridFunction<f64>,
}

pub fn jordan_decomposition(g: &GridFunction<f64>) -> Result<JordanDecomposition> {
    let nu = total_variation_function(g)?;
    let pi = GridFunction::new(
        g.grid().clone(),
        nu.values().iter().zip(g.values()).map(|(n, v)| n - v).collect(),
    )?;
    Ok(JordanDecomposition { nu, pi })
}
