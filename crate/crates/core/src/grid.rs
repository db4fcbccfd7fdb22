//! Product grids, grid functions, sub-rectangles and net partitions.
//!
//! Nodes are addressed by integer index tuples. Flattened storage is
//! row-major with axis 0 varying slowest.

use thiserror::Error;

use crate::multiindex::{MultiIndex, MAX_DIMENSION};
use crate::semigroup::{MetricSemigroup, Value, ValueSpace};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("grid has no axes")]
    NoAxes,
    #[error("grid dimension {0} exceeds the supported maximum of {MAX_DIMENSION}")]
    TooManyDimensions(usize),
    #[error("axis {axis} has {len} nodes; at least 2 are required")]
    AxisTooShort { axis: usize, len: usize },
    #[error("axis {axis} is not strictly increasing")]
    AxisNotIncreasing { axis: usize },
    #[error("axis {axis} contains a non-finite coordinate")]
    NonFinite { axis: usize },
    #[error("value count mismatch: expected {expected}, found {found}")]
    ValueCountMismatch { expected: usize, found: usize },
    #[error("grid function mixes value spaces {first} and {other}")]
    MixedValueSpaces { first: ValueSpace, other: ValueSpace },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index {index:?} is outside the grid of shape {shape:?}")]
    IndexOutOfRange { index: Vec<usize>, shape: Vec<usize> },
    #[error("rectangle corner {lo:?} is not below {hi:?}")]
    InvertedRectangle { lo: Vec<usize>, hi: Vec<usize> },
    #[error("degenerate rectangle: axis {axis} has zero width")]
    DegenerateRectangle { axis: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("partition mismatch: {0}")]
    PartitionMismatch(String),
    #[error("grid mismatch")]
    GridMismatch,
}

/// A product grid `G = Π G_i` with strictly increasing axes.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    axes: Vec<Vec<f64>>,
}

impl Grid {
    pub fn new(axes: Vec<Vec<f64>>) -> Result<Self, GridError> {
        if axes.is_empty() {
            return Err(GridError::NoAxes);
        }
        if axes.len() > MAX_DIMENSION {
            return Err(GridError::TooManyDimensions(axes.len()));
        }
        for (axis, coords) in axes.iter().enumerate() {
            if coords.len() < 2 {
                return Err(GridError::AxisTooShort { axis, len: coords.len() });
            }
            if coords.iter().any(|c| !c.is_finite()) {
                return Err(GridError::NonFinite { axis });
            }
            if coords.windows(2).any(|w| w[0] >= w[1]) {
                return Err(GridError::AxisNotIncreasing { axis });
            }
        }
        Ok(Grid { axes })
    }

    /// A grid with axis `i` equal to `0, 1, …, shape[i] − 1`.
    pub fn uniform(shape: &[usize]) -> Result<Self, GridError> {
        Grid::new(
            shape
                .iter()
                .map(|&m| (0..m).map(|i| i as f64).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Vec<f64>] {
        &self.axes
    }

    pub fn axis(&self, i: usize) -> &[f64] {
        &self.axes[i]
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Vec::len).collect()
    }

    pub fn node_count(&self) -> usize {
        self.axes.iter().map(Vec::len).product()
    }

    /// Index of the lower corner `a`.
    pub fn lower(&self) -> Vec<usize> {
        vec![0; self.dim()]
    }

    /// Index of the upper corner `b`.
    pub fn upper(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.len() - 1).collect()
    }

    pub fn check_index(&self, index: &[usize]) -> Result<(), GridError> {
        if index.len() != self.dim() {
            return Err(GridError::DimensionMismatch {
                expected: self.dim(),
                found: index.len(),
            });
        }
        if index.iter().zip(&self.axes).any(|(&i, a)| i >= a.len()) {
            return Err(GridError::IndexOutOfRange {
                index: index.to_vec(),
                shape: self.shape(),
            });
        }
        Ok(())
    }

    /// Row-major position of a node. The index must be in range.
    pub fn linear_index(&self, index: &[usize]) -> usize {
        index
            .iter()
            .zip(&self.axes)
            .fold(0, |acc, (&i, a)| acc * a.len() + i)
    }

    pub fn node_index(&self, mut linear: usize) -> Vec<usize> {
        let mut out = vec![0; self.dim()];
        for (slot, a) in out.iter_mut().zip(&self.axes).rev() {
            *slot = linear % a.len();
            linear /= a.len();
        }
        out
    }

    /// Real coordinates of a node.
    pub fn point(&self, index: &[usize]) -> Vec<f64> {
        index.iter().zip(&self.axes).map(|(&i, a)| a[i]).collect()
    }

    /// All node indices in row-major order.
    pub fn nodes(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.node_count()).map(|k| self.node_index(k))
    }

    /// The grid `G⌊α` made of the axes selected by `α`.
    pub fn truncate(&self, alpha: &MultiIndex) -> Result<Grid, GridError> {
        if alpha.dim() != self.dim() {
            return Err(GridError::DimensionMismatch {
                expected: self.dim(),
                found: alpha.dim(),
            });
        }
        Grid::new(alpha.support().map(|i| self.axes[i].clone()).collect())
    }
}

/// A map from the nodes of a grid into a metric semigroup.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction<V> {
    grid: Grid,
    values: Vec<V>,
}

impl<V: MetricSemigroup> GridFunction<V> {
    /// `values` is row-major. All values must share one value space.
    pub fn new(grid: Grid, values: Vec<V>) -> Result<Self, GridError> {
        if values.len() != grid.node_count() {
            return Err(GridError::ValueCountMismatch {
                expected: grid.node_count(),
                found: values.len(),
            });
        }
        let first = values[0].space();
        if let Some(v) = values.iter().find(|v| v.space() != first) {
            return Err(GridError::MixedValueSpaces {
                first,
                other: v.space(),
            });
        }
        Ok(GridFunction { grid, values })
    }

    /// Evaluates `f(point, index)` at every node.
    pub fn from_fn(
        grid: Grid,
        mut f: impl FnMut(&[f64], &[usize]) -> V,
    ) -> Result<Self, GridError> {
        let values = grid
            .nodes()
            .map(|idx| f(&grid.point(&idx), &idx))
            .collect();
        Self::new(grid, values)
    }

    pub fn space(&self) -> ValueSpace {
        self.values[0].space()
    }

    pub fn map<W: MetricSemigroup>(&self, f: impl FnMut(&V) -> W) -> Result<GridFunction<W>, GridError> {
        GridFunction::new(self.grid.clone(), self.values.iter().map(f).collect())
    }
}

impl<V> GridFunction<V> {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    pub fn into_values(self) -> Vec<V> {
        self.values
    }

    pub fn get(&self, index: &[usize]) -> Result<&V, GridError> {
        self.grid.check_index(index)?;
        Ok(&self.values[self.grid.linear_index(index)])
    }

    /// Unchecked lookup for indices known to be in range.
    pub fn at(&self, index: &[usize]) -> &V {
        &self.values[self.grid.linear_index(index)]
    }
}

impl GridFunction<Value> {
    /// Narrows to a real-valued function when every value is real.
    pub fn to_real(&self) -> Option<GridFunction<f64>> {
        let values = self.values.iter().map(Value::as_real).collect::<Option<Vec<_>>>()?;
        Some(GridFunction {
            grid: self.grid.clone(),
            values,
        })
    }
}

impl<V: Into<Value> + Clone> GridFunction<V> {
    pub fn to_dynamic(&self) -> GridFunction<Value> {
        GridFunction {
            grid: self.grid.clone(),
            values: self.values.iter().cloned().map(Into::into).collect(),
        }
    }
}

/// The rectangle `I_x^y` between two nodes with `x ≤ y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubRectangle {
    lo: Vec<usize>,
    hi: Vec<usize>,
}

impl SubRectangle {
    pub fn new(lo: Vec<usize>, hi: Vec<usize>) -> Result<Self, GridError> {
        if lo.len() != hi.len() {
            return Err(GridError::DimensionMismatch {
                expected: lo.len(),
                found: hi.len(),
            });
        }
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(GridError::InvertedRectangle { lo, hi });
        }
        Ok(SubRectangle { lo, hi })
    }

    /// Like [`new`](Self::new) and additionally checks both corners lie in `grid`.
    pub fn within(grid: &Grid, lo: Vec<usize>, hi: Vec<usize>) -> Result<Self, GridError> {
        grid.check_index(&lo)?;
        grid.check_index(&hi)?;
        Self::new(lo, hi)
    }

    pub fn full(grid: &Grid) -> Self {
        SubRectangle {
            lo: grid.lower(),
            hi: grid.upper(),
        }
    }

    pub fn lo(&self) -> &[usize] {
        &self.lo
    }

    pub fn hi(&self) -> &[usize] {
        &self.hi
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn degenerate_axes(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.lo[i] == self.hi[i]).collect()
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(a, b)| a == b)
    }

    /// `I_x^y⌊α`.
    pub fn truncate(&self, alpha: &MultiIndex) -> SubRectangle {
        SubRectangle {
            lo: alpha.support().map(|i| self.lo[i]).collect(),
            hi: alpha.support().map(|i| self.hi[i]).collect(),
        }
    }

    /// Whether `(x_i = y_i)` for some `i` in the support of `α`.
    pub fn is_degenerate_along(&self, alpha: &MultiIndex) -> bool {
        alpha.support().any(|i| self.lo[i] == self.hi[i])
    }
}

/// A net partition: for each axis, an increasing list of grid indices whose
/// consecutive pairs bound the cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetPartition {
    shape: Vec<usize>,
    per_axis: Vec<Vec<usize>>,
}

impl NetPartition {
    /// `shape` is the node count per axis of the underlying grid.
    pub fn new(shape: &[usize], per_axis: Vec<Vec<usize>>) -> Result<Self, GridError> {
        if per_axis.len() != shape.len() {
            return Err(GridError::DimensionMismatch {
                expected: shape.len(),
                found: per_axis.len(),
            });
        }
        for (axis, (pts, &m)) in per_axis.iter().zip(shape).enumerate() {
            if pts.len() < 2 {
                return Err(GridError::InvalidPartition(format!(
                    "axis {axis} needs at least two breakpoints"
                )));
            }
            if pts.windows(2).any(|w| w[0] >= w[1]) {
                return Err(GridError::InvalidPartition(format!(
                    "axis {axis} breakpoints are not strictly increasing"
                )));
            }
            if *pts.last().unwrap() >= m {
                return Err(GridError::InvalidPartition(format!(
                    "axis {axis} breakpoint outside the grid"
                )));
            }
        }
        Ok(NetPartition {
            shape: shape.to_vec(),
            per_axis,
        })
    }

    /// The partition of `rect` by every grid node inside it.
    pub fn finest(grid: &Grid, rect: &SubRectangle) -> Result<Self, GridError> {
        grid.check_index(rect.lo())?;
        grid.check_index(rect.hi())?;
        if let Some(&axis) = rect.degenerate_axes().first() {
            return Err(GridError::DegenerateRectangle { axis });
        }
        Self::new(
            &grid.shape(),
            (0..grid.dim()).map(|i| (rect.lo[i]..=rect.hi[i]).collect()).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn per_axis(&self) -> &[Vec<usize>] {
        &self.per_axis
    }

    /// The rectangle this partition covers.
    pub fn rectangle(&self) -> SubRectangle {
        SubRectangle {
            lo: self.per_axis.iter().map(|p| p[0]).collect(),
            hi: self.per_axis.iter().map(|p| *p.last().unwrap()).collect(),
        }
    }

    pub fn cell_count(&self) -> usize {
        self.per_axis.iter().map(|p| p.len() - 1).product()
    }

    /// The common refinement: per-axis union of breakpoints.
    pub fn refine(&self, other: &NetPartition) -> Result<NetPartition, GridError> {
        if self.shape != other.shape {
            return Err(GridError::PartitionMismatch("different grids".into()));
        }
        if self.rectangle() != other.rectangle() {
            return Err(GridError::PartitionMismatch("different rectangles".into()));
        }
        let per_axis = self
            .per_axis
            .iter()
            .zip(&other.per_axis)
            .map(|(a, b)| {
                let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
                u.sort_unstable();
                u.dedup();
                u
            })
            .collect();
        Ok(NetPartition {
            shape: self.shape.clone(),
            per_axis,
        })
    }

    /// Whether every breakpoint of `other` is a breakpoint of `self`.
    pub fn refines(&self, other: &NetPartition) -> bool {
        self.shape == other.shape
            && self.rectangle() == other.rectangle()
            && self
                .per_axis
                .iter()
                .zip(&other.per_axis)
                .all(|(mine, theirs)| theirs.iter().all(|t| mine.binary_search(t).is_ok()))
    }

    /// Cells in row-major order.
    pub fn cells(&self) -> Vec<SubRectangle> {
        let counts: Vec<usize> = self.per_axis.iter().map(|p| p.len() - 1).collect();
        let total: usize = counts.iter().product();
        let mut out = Vec::with_capacity(total);
        let mut k = vec![0usize; self.dim()];
        for _ in 0..total {
            out.push(SubRectangle {
                lo: k.iter().zip(&self.per_axis).map(|(&i, p)| p[i]).collect(),
                hi: k.iter().zip(&self.per_axis).map(|(&i, p)| p[i + 1]).collect(),
            });
            for axis in (0..self.dim()).rev() {
                k[axis] += 1;
                if k[axis] < counts[axis] {
                    break;
                }
                k[axis] = 0;
            }
        }
        out
    }
}
