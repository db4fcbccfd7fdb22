//! Sequence specifications driven by arithmetic expressions.
//!
//! ```json
//! { "grid": {"dims": 2, "axes": [[0, 0.5, 1], [0, 0.5, 1]]},
//!   "space": "real",
//!   "kind": "expression",
//!   "expression": "x1*x2 + (-1)^j/j",
//!   "probe": 1000 }
//! ```
//!
//! Expressions use `+ - * / ^`, `abs`, `min`, `max` and the usual
//! elementary functions, over the variables `x1..xn` (node coordinates) and
//! `j` (the sequence index, from 1). The `expression` field mirrors the
//! value shape: a string for `real`, an array of `k` strings for
//! `vector:<k>:<norm>`, and an array of `k` `[lo, hi]` string pairs for
//! `box:<k>`. Parsing is delegated to `meval`.
//!
//! Write `(-1)^j`, not `-1^j`: unary minus binds looser than `^`.

use meval::{Context, Expr};
use serde::Deserialize;
use serde_json::Value as Json;
use thiserror::Error;

use crate::io::{parse_space, DocumentError, GridHeader};
use crate::selection::FunctionSequence;
use crate::semigroup::{BoxValue, Value, ValueSpace, VectorValue};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error(transparent)]
    Document(#[from] DocumentError),
    #[error("unknown sequence kind {0:?}")]
    UnknownKind(String),
    #[error("expression error: {0}")]
    Expression(String),
    #[error("value space {0} is not supported for expression sequences")]
    Unsupported(ValueSpace),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    grid: GridHeader,
    space: String,
    kind: String,
    expression: Json,
    probe: Option<usize>,
}

/// A parsed specification.
pub struct SequenceSpec {
    pub sequence: FunctionSequence<Value>,
    pub space: ValueSpace,
    pub probe: Option<usize>,
}

struct Compiled {
    expr: Expr,
    text: String,
}

fn compile(v: &Json) -> Result<Compiled, SpecError> {
    let text = v
        .as_str()
        .ok_or_else(|| SpecError::Expression(format!("expected an expression string, found {v}")))?;
    let expr: Expr = text
        .parse()
        .map_err(|e| SpecError::Expression(format!("{text:?}: {e}")))?;
    Ok(Compiled {
        expr,
        text: text.to_string(),
    })
}

fn compile_array(v: &Json, len: usize) -> Result<Vec<Compiled>, SpecError> {
    let arr = v
        .as_array()
        .ok_or_else(|| SpecError::Expression("expected an array of expressions".into()))?;
    if arr.len() != len {
        return Err(SpecError::Expression(format!(
            "expected {len} expressions, found {}",
            arr.len()
        )));
    }
    arr.iter().map(compile).collect()
}

/// Evaluator for one compiled expression list.
struct Evaluator {
    exprs: Vec<Compiled>,
    names: Vec<String>,
    builtins: Context<'static>,
}

impl Evaluator {
    fn new(exprs: Vec<Compiled>, dims: usize) -> Self {
        let mut names: Vec<String> = (1..=dims).map(|i| format!("x{i}")).collect();
        names.push("j".into());
        Evaluator {
            exprs,
            names,
            builtins: Context::new(),
        }
    }

    fn eval_all(&self, j: usize, point: &[f64]) -> Result<Vec<f64>, SpecError> {
        let vars: Vec<(&str, f64)> = self
            .names
            .iter()
            .map(String::as_str)
            .zip(point.iter().copied().chain([j as f64]))
            .collect();
        self.exprs
            .iter()
            .map(|c| {
                c.expr
                    .eval_with_context((&vars, &self.builtins))
                    .map_err(|e| SpecError::Expression(format!("{:?}: {e}", c.text)))
            })
            .collect()
    }
}

fn to_value(space: ValueSpace, raw: &[f64]) -> Value {
    match space {
        ValueSpace::Real => Value::Real(raw[0]),
        ValueSpace::Vector { norm, .. } => Value::Vector(VectorValue::new(raw.to_vec(), norm)),
        // An inverted interval is reordered; the expressions name its ends.
        ValueSpace::Box { .. } => Value::Box(
            BoxValue::new(raw.chunks(2).map(|p| (p[0].min(p[1]), p[0].max(p[1]))).collect())
                .unwrap_or_else(|_| BoxValue::point(&vec![f64::NAN; raw.len() / 2])),
        ),
        ValueSpace::Multiset => unreachable!("rejected at load time"),
    }
}

/// Parses a sequence specification. Every expression is evaluated once at
/// `j = 1` on every node so unknown variables surface here.
pub fn load_sequence_spec(text: &str) -> Result<SequenceSpec, SpecError> {
    let raw: RawSpec =
        serde_json::from_str(text).map_err(|e| DocumentError::Malformed(e.to_string()))?;
    if raw.kind != "expression" {
        return Err(SpecError::UnknownKind(raw.kind));
    }
    let grid = raw.grid.build()?;
    let space = parse_space(&raw.space)?;
    let exprs = match space {
        ValueSpace::Real => vec![compile(&raw.expression)?],
        ValueSpace::Vector { dim, .. } => compile_array(&raw.expression, dim)?,
        ValueSpace::Box { dim } => {
            let pairs = raw
                .expression
                .as_array()
                .filter(|a| a.len() == dim)
                .ok_or_else(|| SpecError::Expression(format!("expected {dim} [lo, hi] pairs")))?;
            let mut out = Vec::with_capacity(2 * dim);
            for p in pairs {
                out.extend(compile_array(p, 2)?);
            }
            out
        }
        ValueSpace::Multiset => return Err(SpecError::Unsupported(space)),
    };
    let eval = Evaluator::new(exprs, grid.dim());
    for node in grid.nodes() {
        eval.eval_all(1, &grid.point(&node))?;
    }
    let sequence = FunctionSequence::new(grid, move |j, p, _| {
        // Validated above; later failures can only be arithmetic and
        // surface as NaN through the value.
        let raw = eval.eval_all(j, p).unwrap_or_else(|_| vec![f64::NAN; eval.exprs.len()]);
        to_value(space, &raw)
    });
    Ok(SequenceSpec {
        sequence,
        space,
        probe: raw.probe,
    })
}
