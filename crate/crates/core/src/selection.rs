//! Helly-type selection on a finite probe window.
//!
//! An infinite sequence is modelled as a pure generator `j ↦ f_j` plus a
//! window `j = 1..=probe`. Selection returns a strictly increasing list of
//! indices along which every node's values lie within `ε` of the reported
//! limit, together with the total-variation bookkeeping.
//!
//! Precompactness of an abstract generator cannot be decided; the window is
//! instead tested against a [`BoundednessCap`], which is a surrogate and not
//! an equivalent condition.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

use crate::grid::{Grid, GridError, GridFunction};
use crate::semigroup::{bw_extract, coordinate_mean, BoundednessCap, MetricSemigroup, SemigroupError, VectorValue};
use crate::variation::{total_variation, total_variation_function, VariationError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SelectionError {
    #[error("empty probe window")]
    EmptyWindow,
    #[error("term {j} is defined on a different grid")]
    GridChanged { j: usize },
    #[error("term {j} changes value space")]
    SpaceChanged { j: usize },
    #[error("at node {node:?}: {source}")]
    Node {
        node: Vec<usize>,
        #[source]
        source: SemigroupError,
    },
    #[error("total variation estimate diverges: {source}")]
    TvDiverging {
        #[source]
        source: SemigroupError,
    },
    #[error("dual set is degenerate: {0}")]
    DegenerateDuals(String),
    #[error("not pointwise convergent: worst node {node:?} is {error} from the limit")]
    NotConvergent { node: Vec<usize>, error: f64 },
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error(transparent)]
    Variation(#[from] VariationError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

impl SelectionError {
    /// Whether the failure comes from the boundedness surrogate.
    pub fn is_unbounded(&self) -> bool {
        let bounded = |e: &SemigroupError| matches!(e, SemigroupError::Unbounded { .. } | SemigroupError::Growing { .. });
        match self {
            SelectionError::Node { source, .. } => bounded(source),
            SelectionError::TvDiverging { .. } => true,
            SelectionError::Semigroup(e) => bounded(e),
            _ => false,
        }
    }

    /// Whether the failure is a value space without compactness support.
    pub fn is_unsupported(&self) -> bool {
        matches!(
            self,
            SelectionError::Node { source: SemigroupError::NoCompactness(_), .. }
                | SelectionError::Semigroup(SemigroupError::NoCompactness(_))
        )
    }
}

type Result<T> = std::result::Result<T, SelectionError>;

type NodeGenerator<V> = dyn Fn(usize, &[f64], &[usize]) -> V;

/// A deterministic sequence of grid functions on a fixed grid, indexed from 1.
pub struct FunctionSequence<V> {
    grid: Grid,
    generator: Box<NodeGenerator<V>>,
}

impl<V: MetricSemigroup> FunctionSequence<V> {
    /// `generator(j, point, index)` is the value of `f_j` at a node.
    pub fn new(grid: Grid, generator: impl Fn(usize, &[f64], &[usize]) -> V + 'static) -> Self {
        FunctionSequence {
            grid,
            generator: Box::new(generator),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn term(&self, j: usize) -> Result<GridFunction<V>> {
        Ok(GridFunction::from_fn(self.grid.clone(), |p, idx| (self.generator)(j, p, idx))?)
    }

    /// `f_1, …, f_probe`, checked to share one value space.
    pub fn window(&self, probe: usize) -> Result<Vec<GridFunction<V>>> {
        if probe == 0 {
            return Err(SelectionError::EmptyWindow);
        }
        let terms = (1..=probe).map(|j| self.term(j)).collect::<Result<Vec<_>>>()?;
        let space = terms[0].space();
        if let Some(k) = terms.iter().position(|t| t.space() != space) {
            return Err(SelectionError::SpaceChanged { j: k + 1 });
        }
        Ok(terms)
    }

    /// Applies `f` to every value of every term.
    pub fn map<W: MetricSemigroup>(self, f: impl Fn(V) -> W + 'static) -> FunctionSequence<W>
    where
        V: 'static,
    {
        let inner = self.generator;
        FunctionSequence {
            grid: self.grid,
            generator: Box::new(move |j, p, idx| f(inner(j, p, idx))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionConfig {
    pub epsilon: f64,
    pub probe: usize,
    pub tolerance: f64,
    pub cap: BoundednessCap,
}

impl Default for SelectionConfig {
    fn default() -> Self {
        SelectionConfig {
            epsilon: 1e-6,
            probe: 256,
            tolerance: crate::DEFAULT_TOLERANCE,
            cap: BoundednessCap::default(),
        }
    }
}

/// Outcome of a selection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionResult<V> {
    /// Chosen `j`, strictly increasing.
    pub indices: Vec<usize>,
    #[serde(skip)]
    pub limit: GridFunction<V>,
    /// `max_j TV(f_j)` over the window.
    pub sup_tv: f64,
    pub limit_tv: f64,
    /// Largest node distance between the last two chosen terms.
    pub max_residual: f64,
    /// Largest node distance from a chosen term to the limit; at most `ε`.
    pub certified_radius: f64,
    /// Largest node gap between the total variation functions of the last
    /// two chosen terms.
    pub nu_spread: f64,
}

impl<V> SelectionResult<V> {
    pub fn within_bound(&self, tol: f64) -> bool {
        self.limit_tv <= self.sup_tv + tol
    }
}

/// TV of every term plus the divergence check on the window.
fn window_tvs<V: MetricSemigroup>(terms: &[GridFunction<V>], cap: &BoundednessCap) -> Result<Vec<f64>> {
    let tvs = terms
        .iter()
        .map(|t| total_variation(t).map(|r| r.tv))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let spreads: Vec<f64> = tvs.iter().map(|t| (t - tvs[0]).abs()).collect();
    cap.check(&spreads)
        .map_err(|source| SelectionError::TvDiverging { source })?;
    Ok(tvs)
}

/// Runs [`bw_extract`] node by node in row-major order, threading the
/// surviving positions. `values(pos, linear_node)` reads the window.
fn diagonal<W: MetricSemigroup>(
    grid: &Grid,
    mut survivors: Vec<usize>,
    values: impl Fn(usize, usize) -> W,
    epsilon: f64,
    cap: &BoundednessCap,
) -> Result<Vec<usize>> {
    for (k, node) in grid.nodes().enumerate() {
        let ex = bw_extract(&survivors, |pos| values(pos, k), epsilon, cap)
            .map_err(|source| SelectionError::Node { node, source })?;
        survivors = ex.indices;
    }
    Ok(survivors)
}

fn nodewise_mean<V: MetricSemigroup>(terms: &[GridFunction<V>], positions: &[usize]) -> Result<GridFunction<V>> {
    let grid = terms[0].grid().clone();
    let values = (0..grid.node_count())
        .map(|k| {
            let template = &terms[positions[0]].values()[k];
            let rows: Vec<Vec<f64>> = positions
                .iter()
                .map(|&p| terms[p].values()[k].coordinates())
                .collect::<Option<_>>()
                .ok_or(SemigroupError::NoCompactness(template.space()))?;
            let k_dim = rows[0].len();
            template
                .from_coordinates(&coordinate_mean(rows.iter().map(Vec::as_slice), k_dim))
                .ok_or(SemigroupError::NoCompactness(template.space()))
        })
        .collect::<std::result::Result<Vec<V>, _>>()?;
    Ok(GridFunction::new(grid, values)?)
}

fn max_node_distance<V: MetricSemigroup>(a: &GridFunction<V>, b: &GridFunction<V>) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (x, y) in a.values().iter().zip(b.values()) {
        worst = worst.max(x.dist(y)?);
    }
    Ok(worst)
}

fn finish<V: MetricSemigroup>(
    terms: &[GridFunction<V>],
    positions: Vec<usize>,
    limit: GridFunction<V>,
    sup_tv: f64,
) -> Result<SelectionResult<V>> {
    let mut certified_radius: f64 = 0.0;
    for &p in &positions {
        certified_radius = certified_radius.max(max_node_distance(&terms[p], &limit)?);
    }
    let (max_residual, nu_spread) = match positions.as_slice() {
        [.., a, b] => {
            let nu_a = total_variation_function(&terms[*a])?;
            let nu_b = total_variation_function(&terms[*b])?;
            (max_node_distance(&terms[*a], &terms[*b])?, max_node_distance(&nu_a, &nu_b)?)
        }
        _ => (0.0, 0.0),
    };
    Ok(SelectionResult {
        indices: positions.iter().map(|p| p + 1).collect(),
        limit_tv: total_variation(&limit)?.tv,
        limit,
        sup_tv,
        max_residual,
        certified_radius,
        nu_spread,
    })
}

/// Pointwise selection: a subsequence whose values at every node are within
/// `ε` of the reported limit.
pub fn helly_select<V: MetricSemigroup>(
    seq: &FunctionSequence<V>,
    cfg: &SelectionConfig,
) -> Result<SelectionResult<V>> {
    let terms = seq.window(cfg.probe)?;
    let tvs = window_tvs(&terms, &cfg.cap)?;
    let sup_tv = tvs.iter().copied().fold(0.0, f64::max);
    let positions = diagonal(
        seq.grid(),
        (0..terms.len()).collect(),
        |pos, k| terms[pos].values()[k].clone(),
        cfg.epsilon,
        &cfg.cap,
    )?;
    let limit = nodewise_mean(&terms, &positions)?;
    finish(&terms, positions, limit, sup_tv)
}

/// Weak selection for vector values, with the extra bounds it reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeakSelection {
    #[serde(flatten)]
    pub selection: SelectionResult<VectorValue>,
    /// `max_x ‖limit(x)‖ − min_{chosen j} ‖f_j(x)‖`; non-positive up to `ε`.
    pub norm_excess: f64,
    /// `c(a) + C` with `c(a) = max_j ‖f_j(a)‖`.
    pub corner_bound: f64,
    /// `max_{j,x} ‖f_j(x)‖`, which never exceeds `corner_bound`.
    pub max_norm: f64,
}

impl WeakSelection {
    pub fn checks_hold(&self, epsilon: f64, tol: f64) -> bool {
        self.selection.within_bound(tol)
            && self.norm_excess <= epsilon + tol
            && self.max_norm <= self.corner_bound + tol
    }
}

/// Selection through `k` linearly independent functionals on `R^k`.
///
/// Each scalar sequence `⟨f_j(·), u*_i⟩` is extracted in turn, threading the
/// surviving indices across functionals and nodes. The limit vector is
/// recovered by solving `D v = g`, where row `i` of `D` is `u*_i`.
pub fn weak_helly_select(
    seq: &FunctionSequence<VectorValue>,
    duals: &[Vec<f64>],
    cfg: &SelectionConfig,
) -> Result<WeakSelection> {
    let terms = seq.window(cfg.probe)?;
    let k = terms[0].values()[0].dim();
    if duals.len() != k || duals.iter().any(|d| d.len() != k) {
        return Err(SelectionError::DegenerateDuals(format!(
            "expected {k} functionals of length {k}"
        )));
    }
    let d = DMatrix::from_fn(k, k, |r, c| duals[r][c]);
    let svd = d.clone().svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin.is_nan() || smin <= 1e-12 * smax.max(1.0) {
        return Err(SelectionError::DegenerateDuals("functionals are not a basis".into()));
    }
    let inverse = d.clone().try_inverse().ok_or_else(|| SelectionError::DegenerateDuals("singular".into()))?;
    // Scalar tolerance so the reconstructed vectors stay within ε in any of
    // the supported norms: ‖v‖ ≤ k·‖v‖_∞ ≤ k·‖D⁻¹‖_∞·max_i |g_i|.
    let row_sum = inverse.row_iter().map(|r| r.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max);
    let scalar_eps = cfg.epsilon / (k as f64 * row_sum.max(f64::MIN_POSITIVE));

    let tvs = window_tvs(&terms, &cfg.cap)?;
    let sup_tv = tvs.iter().copied().fold(0.0, f64::max);
    let norms: Vec<Vec<f64>> = terms
        .iter()
        .map(|t| t.values().iter().map(VectorValue::magnitude).collect())
        .collect();
    for k_node in 0..seq.grid().node_count() {
        let col: Vec<f64> = norms.iter().map(|n| (n[k_node] - norms[0][k_node]).abs()).collect();
        cfg.cap.check(&col).map_err(|source| SelectionError::Node {
            node: seq.grid().node_index(k_node),
            source,
        })?;
    }

    let mut positions: Vec<usize> = (0..terms.len()).collect();
    for dual in duals {
        positions = diagonal(
            seq.grid(),
            positions,
            |pos, node| terms[pos].values()[node].pairing(dual),
            scalar_eps,
            &cfg.cap,
        )?;
    }

    let norm = terms[0].values()[0].norm;
    let values = (0..seq.grid().node_count())
        .map(|node| {
            let g = DVector::from_iterator(
                k,
                duals.iter().map(|dual| {
                    positions.iter().map(|&p| terms[p].values()[node].pairing(dual)).sum::<f64>()
                        / positions.len() as f64
                }),
            );
            VectorValue::new((&inverse * g).iter().copied().collect(), norm)
        })
        .collect();
    let limit = GridFunction::new(seq.grid().clone(), values)?;

    let norm_excess = (0..seq.grid().node_count())
        .map(|node| {
            let tail_min = positions.iter().map(|&p| norms[p][node]).fold(f64::INFINITY, f64::min);
            limit.values()[node].magnitude() - tail_min
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let corner_bound = norms.iter().map(|n| n[0]).fold(0.0, f64::max) + sup_tv;
    let max_norm = norms.iter().flatten().copied().fold(0.0, f64::max);
    Ok(WeakSelection {
        selection: finish(&terms, positions, limit, sup_tv)?,
        norm_excess,
        corner_bound,
        max_norm,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LscConfig {
    pub probe: usize,
    /// Largest node distance tolerated over the last quarter of the window.
    pub convergence_tolerance: f64,
    pub tolerance: f64,
}

impl Default for LscConfig {
    fn default() -> Self {
        LscConfig {
            probe: 256,
            convergence_tolerance: 1e-6,
            tolerance: crate::DEFAULT_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LscReport {
    pub limit_tv: f64,
    /// `min TV(f_j)` over the second half of the window.
    pub tail_min_tv: f64,
    /// Running minimum of `TV(f_j)` over the second half, one entry per `j`.
    pub running_min: Vec<f64>,
    pub holds: bool,
    /// `tail_min_tv − limit_tv`.
    pub gap: f64,
    pub worst_convergence_error: f64,
}

/// Checks `TV(f) ≤ liminf TV(f_j)` for a sequence converging pointwise to `f`.
pub fn lower_semicontinuity_check<V: MetricSemigroup>(
    seq: &FunctionSequence<V>,
    limit: &GridFunction<V>,
    cfg: &LscConfig,
) -> Result<LscReport> {
    if limit.grid() != seq.grid() {
        return Err(SelectionError::GridChanged { j: 0 });
    }
    let terms = seq.window(cfg.probe)?;
    let quarter = terms.len() - (terms.len() / 4).max(1);
    let mut worst = (0.0f64, 0usize);
    for t in &terms[quarter..] {
        for (k, (a, b)) in t.values().iter().zip(limit.values()).enumerate() {
            let e = a.dist(b)?;
            if e > worst.0 {
                worst = (e, k);
            }
        }
    }
    if worst.0 > cfg.convergence_tolerance {
        return Err(SelectionError::NotConvergent {
            node: seq.grid().node_index(worst.1),
            error: worst.0,
        });
    }
    let tail = &terms[terms.len() / 2..];
    let mut running_min = Vec::with_capacity(tail.len());
    let mut m = f64::INFINITY;
    for t in tail {
        m = m.min(total_variation(t)?.tv);
        running_min.push(m);
    }
    let limit_tv = total_variation(limit)?.tv;
    Ok(LscReport {
        limit_tv,
        tail_min_tv: m,
        running_min,
        holds: limit_tv <= m + cfg.tolerance,
        gap: m - limit_tv,
        worst_convergence_error: worst.0,
    })
}
