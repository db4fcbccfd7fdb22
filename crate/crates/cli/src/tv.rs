use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{json, Value as Json};
use vhk_core::io::load_grid_function;
use vhk_core::multiindex::MultiIndex;
use vhk_core::variation::{total_variation, VariationReport};

use crate::error::CliError;
use crate::report::{digest, read_file, Report};

/// Readable name of the term `V_{|α|}(f_α^a, I_a^b⌊α)`, e.g. `V(f(·,a2))`
/// or `V_2(f(·,·,a3))`. Frozen coordinates sit at the lower corner `a`.
pub fn expansion_label(alpha: &MultiIndex) -> String {
    let n = alpha.dim();
    let k = alpha.order();
    let head = if k == 1 { "V".to_string() } else { format!("V_{k}") };
    if k == n {
        return format!("{head}(f)");
    }
    let args: Vec<String> = (0..n)
        .map(|i| if alpha.is_set(i) { "·".to_string() } else { format!("a{}", i + 1) })
        .collect();
    format!("{head}(f({}))", args.join(","))
}

pub fn results(report: &VariationReport) -> Json {
    let per_alpha: BTreeMap<String, f64> = report.per_alpha.iter().map(|(a, v)| (a.to_string(), *v)).collect();
    let mut out = json!({
        "tv": report.tv,
        "per_alpha": per_alpha,
        "vitali_terms": report.vitali_terms,
        "shape": report.shape,
        "space": report.space.to_string(),
    });
    if report.shape.len() <= 3 {
        let labels: BTreeMap<String, String> =
            report.per_alpha.keys().map(|a| (a.to_string(), expansion_label(a))).collect();
        out["expansion"] = json!(labels);
    }
    out
}

pub fn run(input: &Path, json_out: Option<&Path>, tolerance: f64) -> Result<(), CliError> {
    let text = read_file(input)?;
    let f = load_grid_function(&text)?;
    let report = total_variation(&f).map_err(|e| CliError::input("variation", e.to_string()))?;
    Report::new(
        json!({"name": "tv", "input": input.display().to_string()}),
        digest(&[text.as_bytes()]),
        results(&report),
        tolerance,
    )
    .emit(json_out)
}
