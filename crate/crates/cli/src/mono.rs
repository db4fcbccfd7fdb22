use std::path::Path;

use serde_json::{json, Value as Json};
use vhk_core::grid::GridFunction;
use vhk_core::io::{grid_function_document, load_grid_function};
use vhk_core::semigroup::Value;
use vhk_core::variation::{jordan_decomposition, monotonicity_witness, VariationError};

use crate::error::CliError;
use crate::report::{digest, read_file, write_file, Report};

fn variation(e: VariationError) -> CliError {
    CliError::input("variation", e.to_string())
}

fn load_real(text: &str) -> Result<GridFunction<f64>, CliError> {
    let f = load_grid_function(text)?;
    f.to_real().ok_or(CliError::Unsupported {
        space: f.space(),
        operation: "total monotonicity",
    })
}

fn document(f: &GridFunction<f64>) -> String {
    let dynamic = f.map(|v| Value::Real(*v)).expect("same grid");
    let mut text = serde_json::to_string_pretty(&grid_function_document(&dynamic)).expect("documents serialise");
    text.push('\n');
    text
}

fn verdict(g: &GridFunction<f64>, tolerance: f64) -> Result<Json, CliError> {
    let witness = monotonicity_witness(g, tolerance).map_err(variation)?;
    Ok(json!({"totally_monotone": witness.is_none(), "witness": witness}))
}

/// Writes `nu.json` and `pi.json` into `dir`, reloads both from disk and
/// rechecks them.
fn decompose(g: &GridFunction<f64>, dir: &Path, tolerance: f64) -> Result<Json, CliError> {
    let j = jordan_decomposition(g).map_err(variation)?;
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let (nu_path, pi_path) = (dir.join("nu.json"), dir.join("pi.json"));
    write_file(&nu_path, &document(&j.nu))?;
    write_file(&pi_path, &document(&j.pi))?;

    let nu = load_real(&read_file(&nu_path)?)?;
    let pi = load_real(&read_file(&pi_path)?)?;
    let nu_check = verdict(&nu, tolerance)?;
    let pi_check = verdict(&pi, tolerance)?;
    let recombination_error = nu
        .values()
        .iter()
        .zip(pi.values())
        .zip(g.values())
        .map(|((n, p), v)| (n - p - v).abs())
        .fold(0.0, f64::max);
    let passed = nu_check["totally_monotone"] == true
        && pi_check["totally_monotone"] == true
        && recombination_error <= tolerance;
    Ok(json!({
        "nu": {"path": nu_path.display().to_string(), "check": nu_check},
        "pi": {"path": pi_path.display().to_string(), "check": pi_check},
        "recombination_error": recombination_error,
        "recheck_passed": passed,
    }))
}

pub fn run(input: &Path, decompose_dir: Option<&Path>, json_out: Option<&Path>, tolerance: f64) -> Result<(), CliError> {
    let text = read_file(input)?;
    let g = load_real(&text)?;
    let mut results = verdict(&g, tolerance)?;
    let monotone = results["totally_monotone"] == true;
    println!("totally monotone: {monotone}");
    if let Some(w) = results["witness"].as_object() {
        println!(
            "witness: alpha {} cell {}..{} increment {}",
            w["alpha"].as_str().unwrap_or_default(),
            w["lo"],
            w["hi"],
            w["increment"]
        );
    }
    let mut recheck = true;
    if let Some(dir) = decompose_dir {
        let d = decompose(&g, dir, tolerance)?;
        recheck = d["recheck_passed"] == true;
        println!("decomposition recheck: {}", if recheck { "passed" } else { "failed" });
        results["decomposition"] = d;
    }
    if let Some(path) = json_out {
        let report = Report::new(
            json!({"name": "mono", "input": input.display().to_string()}),
            digest(&[text.as_bytes()]),
            results,
            tolerance,
        );
        write_file(path, &report.to_pretty())?;
    }
    if recheck {
        Ok(())
    } else {
        Err(CliError::Verification("jordan decomposition recheck".into()))
    }
}
