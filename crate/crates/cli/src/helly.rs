use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value as Json};
use vhk_core::expression::load_sequence_spec;
use vhk_core::io::grid_function_document;
use vhk_core::selection::{helly_select, weak_helly_select, SelectionConfig};
use vhk_core::semigroup::ValueSpace;

use crate::error::CliError;
use crate::report::{digest, read_file, Report};

pub struct HellyArgs<'a> {
    pub spec: &'a Path,
    pub epsilon: f64,
    pub probe: Option<usize>,
    pub weak: Option<&'a Path>,
    pub json_out: Option<&'a Path>,
    pub tolerance: f64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum DualsDocument {
    Bare(Vec<Vec<f64>>),
    Wrapped { duals: Vec<Vec<f64>> },
}

fn parse_duals(text: &str) -> Result<Vec<Vec<f64>>, CliError> {
    match serde_json::from_str(text) {
        Ok(DualsDocument::Bare(d) | DualsDocument::Wrapped { duals: d }) => Ok(d),
        Err(e) => Err(CliError::input("malformed", format!("duals: {e}"))),
    }
}

pub fn run(args: HellyArgs<'_>) -> Result<(), CliError> {
    if !(args.epsilon.is_finite() && args.epsilon > 0.0) {
        return Err(CliError::input("epsilon", "epsilon must be positive"));
    }
    let text = read_file(args.spec)?;
    let spec = load_sequence_spec(&text)?;
    let probe = args.probe.or(spec.probe).unwrap_or(SelectionConfig::default().probe);
    let cfg = SelectionConfig {
        epsilon: args.epsilon,
        probe,
        tolerance: args.tolerance,
        ..Default::default()
    };
    let mut command = json!({
        "name": "helly",
        "spec": args.spec.display().to_string(),
        "epsilon": args.epsilon,
        "probe": probe,
    });

    let (results, within, digest) = match args.weak {
        None => {
            let r = helly_select(&spec.sequence, &cfg)?;
            let mut out = serde_json::to_value(&r).expect("results serialise");
            out["limit"] = grid_function_document(&r.limit);
            (out, r.within_bound(args.tolerance), digest(&[text.as_bytes()]))
        }
        Some(path) => {
            if !matches!(spec.space, ValueSpace::Vector { .. }) {
                return Err(CliError::Unsupported {
                    space: spec.space,
                    operation: "weak selection",
                });
            }
            let duals_text = read_file(path)?;
            let duals = parse_duals(&duals_text)?;
            let seq = spec
                .sequence
                .map(|v| v.as_vector().cloned().expect("vector space checked above"));
            let w = weak_helly_select(&seq, &duals, &cfg)?;
            let mut out: Json = serde_json::to_value(&w).expect("results serialise");
            out["limit"] = grid_function_document(&w.selection.limit.to_dynamic());
            out["duals"] = json!(duals);
            command["weak"] = json!(path.display().to_string());
            let ok = w.checks_hold(args.epsilon, args.tolerance);
            (out, ok, digest(&[text.as_bytes(), duals_text.as_bytes()]))
        }
    };
    Report::new(command, digest, results, args.tolerance).emit(args.json_out)?;
    if within {
        Ok(())
    } else {
        Err(CliError::Verification("limit bounds do not hold".into()))
    }
}
