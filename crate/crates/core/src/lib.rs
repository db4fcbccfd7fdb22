//! Total variation of maps on finite product grids with values in metric
//! semigroups, in the Vitali and Hardy–Krause sense, plus Helly-type
//! selection on finite probe windows.
//!
//! The modules build on each other:
//!
//! - [`multiindex`]: `{0,1}^n` multiindices, parity classes, truncation.
//! - [`semigroup`]: the [`MetricSemigroup`] trait and the real, vector, box
//!   and multiset spaces, with Bolzano–Weierstrass extraction.
//! - [`grid`]: grids, grid functions, rectangles and net partitions.
//! - [`variation`]: mixed differences, Vitali and total variation, the total
//!   variation function, total monotonicity and the Jordan decomposition.
//! - [`selection`]: pointwise and weak selection, and the lower
//!   semicontinuity check.
//! - [`oracle`]: brute-force references and the identity suite.
//!
//! ```
//! use vhk_core::{Grid, GridFunction, total_variation};
//!
//! let grid = Grid::new(vec![vec![0.0, 0.5, 1.0]; 2]).unwrap();
//! let f = GridFunction::from_fn(grid, |p, _| p[0] * p[1]).unwrap();
//! assert_eq!(total_variation(&f).unwrap().tv, 1.0);
//! ```

pub mod expression;
pub mod grid;
pub mod io;
pub mod multiindex;
pub mod numeric;
pub mod oracle;
pub mod random;
pub mod selection;
pub mod semigroup;
pub mod variation;

pub use grid::{Grid, GridError, GridFunction, NetPartition, SubRectangle};
pub use multiindex::{MultiIndex, MultiIndexError, Parity, ParityFilter};
pub use selection::{
    helly_select, lower_semicontinuity_check, weak_helly_select, FunctionSequence, SelectionConfig,
    SelectionError, SelectionResult,
};
pub use semigroup::{BoxValue, MetricSemigroup, MultisetValue, Norm, SemigroupError, Value, ValueSpace, VectorValue};
pub use variation::{
    is_totally_monotone, jordan_decomposition, mixed_difference, pointwise_bound, prevariation,
    total_variation, total_variation_function, total_variation_on, tv_between, tv_subrectangle,
    vitali_variation, VariationError, VariationReport,
};

/// Default comparison tolerance for floating-point checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
