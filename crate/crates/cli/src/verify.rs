use std::collections::BTreeMap;

use serde_json::{json, Value as Json};
use vhk_core::oracle::{
    equivalence_sweep, verify_identity_suite, EquivalenceConfig, IdentitySuiteConfig, DEFAULT_PARTITION_CAP,
};

use crate::error::CliError;
use crate::report::{digest, Report};

#[derive(Debug, Clone, Copy)]
pub struct VerifyArgs {
    pub n_max: usize,
    pub m_max: usize,
    pub trials: usize,
    pub seed: u64,
    pub grid_cap: u64,
    pub tolerance: f64,
    /// Perturbs the first engine value so the failure path can be exercised.
    pub inject_fault: bool,
}

struct Row {
    passed: usize,
    total: usize,
}

fn matrix_text(rows: &BTreeMap<String, Row>) -> String {
    let width = rows.keys().map(String::len).max().unwrap_or(0).max(6);
    let mut out = format!("{:<width$}  {:>7}  {:>7}  status\n", "family", "passed", "total");
    for (name, r) in rows {
        let status = if r.passed == r.total { "PASS" } else { "FAIL" };
        out.push_str(&format!("{name:<width$}  {:>7}  {:>7}  {status}\n", r.passed, r.total));
    }
    out
}

pub fn run(args: VerifyArgs, json_out: Option<&std::path::Path>) -> Result<bool, CliError> {
    if args.grid_cap == 0 || args.grid_cap > DEFAULT_PARTITION_CAP {
        return Err(CliError::input(
            "cap_exceeded",
            format!("grid cap must be in 1..={DEFAULT_PARTITION_CAP}, got {}", args.grid_cap),
        ));
    }
    let identity = verify_identity_suite(&IdentitySuiteConfig {
        n_max: args.n_max,
        m_max: args.m_max,
        trials: args.trials,
        seed: args.seed,
    })?;
    let mut sweep = equivalence_sweep(&EquivalenceConfig {
        trials: args.trials,
        seed: args.seed,
        grid_cap: args.grid_cap,
        tolerance: args.tolerance,
    })?;
    if args.inject_fault {
        if let Some(c) = sweep.first_mut() {
            c.engine += 1e-3;
            c.passed = (c.engine - c.oracle).abs() <= args.tolerance;
        }
    }

    let mut rows: BTreeMap<String, Row> = identity
        .summary()
        .into_iter()
        .map(|(family, (passed, total))| (format!("identity {family}"), Row { passed, total }))
        .collect();
    for c in &sweep {
        let kind = c.space.split(':').next().unwrap_or_default();
        let row = rows
            .entry(format!("equivalence {kind}"))
            .or_insert(Row { passed: 0, total: 0 });
        row.total += 1;
        row.passed += usize::from(c.passed);
    }
    print!("{}", matrix_text(&rows));

    let counterexample: Option<Json> = identity
        .failures()
        .next()
        .map(|f| json!({"kind": "identity", "check": f}))
        .or_else(|| {
            sweep
                .iter()
                .find(|c| !c.passed)
                .map(|c| json!({"kind": "equivalence", "check": c}))
        });
    let all_passed = counterexample.is_none();
    if let Some(c) = &counterexample {
        eprintln!("first counterexample: {c}");
    }
    let matrix: BTreeMap<&String, Json> = rows
        .iter()
        .map(|(k, r)| (k, json!({"passed": r.passed, "total": r.total})))
        .collect();
    let command = json!({
        "name": "verify",
        "n_max": args.n_max,
        "m_max": args.m_max,
        "trials": args.trials,
        "grid_cap": args.grid_cap,
        "seed": args.seed,
    });
    let config = command.to_string();
    let mut report = Report::new(
        command,
        digest(&[config.as_bytes()]),
        json!({"all_passed": all_passed, "matrix": matrix, "first_counterexample": counterexample}),
        args.tolerance,
    );
    report.seed = Some(args.seed);
    if let Some(path) = json_out {
        crate::report::write_file(path, &report.to_pretty())?;
    }
    println!("{}", if all_passed { "all checks passed" } else { "verification failed" });
    Ok(all_passed)
}
