//! JSON documents for grid functions.
//!
//! ```json
//! { "dims": 2,
//!   "axes": [[0, 1], [0, 0.5, 1]],
//!   "space": "real",
//!   "values": [0, 1, 2, 3, 4, 5] }
//! ```
//!
//! `values` is row-major with axis 0 slowest. Entries are numbers for
//! `real`, arrays of `k` numbers for `vector:<k>:<norm>`, arrays of `k`
//! `[lo, hi]` pairs for `box:<k>`, and either `{"atom": count}` objects or
//! arrays of atom strings for `multiset`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};
use thiserror::Error;

use crate::grid::{Grid, GridError, GridFunction};
use crate::semigroup::{BoxValue, MultisetValue, Value, ValueSpace, VectorValue};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DocumentError {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("unknown value space {0:?}")]
    UnknownValueSpace(String),
    #[error("dims is {dims} but {axes} axes were given")]
    DimsMismatch { dims: usize, axes: usize },
    #[error("value {index}: {reason}")]
    InvalidValue { index: usize, reason: String },
    #[error(transparent)]
    Grid(#[from] GridError),
}

impl DocumentError {
    /// Stable short code for reports.
    pub fn code(&self) -> &'static str {
        match self {
            DocumentError::Malformed(_) => "malformed",
            DocumentError::UnknownValueSpace(_) => "unknown_value_space",
            DocumentError::DimsMismatch { .. } => "dims_mismatch",
            DocumentError::InvalidValue { .. } => "invalid_value",
            DocumentError::Grid(GridError::AxisNotIncreasing { .. }) => "axis_not_increasing",
            DocumentError::Grid(GridError::ValueCountMismatch { .. }) => "value_count_mismatch",
            DocumentError::Grid(_) => "invalid_grid",
        }
    }
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    dims: usize,
    axes: Vec<Vec<f64>>,
    space: String,
    values: Vec<Json>,
}

/// Grid header shared with sequence specifications.
#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct GridHeader {
    pub dims: usize,
    pub axes: Vec<Vec<f64>>,
}

impl GridHeader {
    pub fn build(&self) -> Result<Grid, DocumentError> {
        if self.dims != self.axes.len() {
            return Err(DocumentError::DimsMismatch {
                dims: self.dims,
                axes: self.axes.len(),
            });
        }
        Ok(Grid::new(self.axes.clone())?)
    }
}

pub fn parse_space(s: &str) -> Result<ValueSpace, DocumentError> {
    s.parse().map_err(|_| DocumentError::UnknownValueSpace(s.to_string()))
}

fn numbers(v: &Json, len: usize, what: &str) -> Result<Vec<f64>, String> {
    let arr = v.as_array().ok_or_else(|| format!("expected an array for {what}"))?;
    if arr.len() != len {
        return Err(format!("expected {len} entries for {what}, found {}", arr.len()));
    }
    arr.iter()
        .map(|x| x.as_f64().ok_or_else(|| format!("non-numeric entry in {what}")))
        .collect()
}

/// Decodes one value entry of the given space.
pub fn decode_value(space: ValueSpace, v: &Json) -> Result<Value, String> {
    match space {
        ValueSpace::Real => v.as_f64().map(Value::Real).ok_or_else(|| "expected a number".into()),
        ValueSpace::Vector { dim, norm } => {
            Ok(Value::Vector(VectorValue::new(numbers(v, dim, "a vector")?, norm)))
        }
        ValueSpace::Box { dim } => {
            let arr = v.as_array().ok_or("expected an array of [lo, hi] pairs")?;
            if arr.len() != dim {
                return Err(format!("expected {dim} intervals, found {}", arr.len()));
            }
            let bounds = arr
                .iter()
                .map(|p| numbers(p, 2, "an interval").map(|b| (b[0], b[1])))
                .collect::<Result<Vec<_>, _>>()?;
            BoxValue::new(bounds).map(Value::Box).map_err(|e| e.to_string())
        }
        ValueSpace::Multiset => match v {
            Json::Object(map) => {
                let counts = map
                    .iter()
                    .map(|(k, c)| {
                        c.as_u64()
                            .map(|c| (k.clone(), c))
                            .ok_or_else(|| format!("multiplicity of {k:?} is not a non-negative integer"))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Value::Multiset(MultisetValue::from_counts(counts)))
            }
            Json::Array(items) => {
                let atoms = items
                    .iter()
                    .map(|a| a.as_str().map(str::to_string).ok_or("multiset atoms must be strings"))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Value::Multiset(MultisetValue::from_atoms(atoms)))
            }
            _ => Err("expected an object or an array of atoms".into()),
        },
    }
}

/// Encodes a value as a document entry.
pub fn encode_value(v: &Value) -> Json {
    match v {
        Value::Real(x) => json!(x),
        Value::Vector(x) => json!(x.components),
        Value::Box(b) => Json::Array(b.bounds().iter().map(|&(lo, hi)| json!([lo, hi])).collect()),
        Value::Multiset(m) => json!(m.counts()),
    }
}

/// Parses a grid-function document.
pub fn load_grid_function(text: &str) -> Result<GridFunction<Value>, DocumentError> {
    let raw: RawDocument =
        serde_json::from_str(text).map_err(|e| DocumentError::Malformed(e.to_string()))?;
    let grid = GridHeader {
        dims: raw.dims,
        axes: raw.axes,
    }
    .build()?;
    let space = parse_space(&raw.space)?;
    if raw.values.len() != grid.node_count() {
        return Err(GridError::ValueCountMismatch {
            expected: grid.node_count(),
            found: raw.values.len(),
        }
        .into());
    }
    let values = raw
        .values
        .iter()
        .enumerate()
        .map(|(index, v)| decode_value(space, v).map_err(|reason| DocumentError::InvalidValue { index, reason }))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GridFunction::new(grid, values)?)
}

/// Serialises a grid function as a document.
pub fn grid_function_document(f: &GridFunction<Value>) -> Json {
    json!({
        "dims": f.dim(),
        "axes": f.grid().axes(),
        "space": f.space().to_string(),
        "values": f.values().iter().map(encode_value).collect::<Vec<_>>(),
    })
}
