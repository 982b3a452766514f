//! Deterministic JSON reports (schema v1) and CSV matrix emission.
//! Timings go to stderr only, so reports are byte-identical for a fixed
//! (config, seed) across warm and cold caches.

use crate::config::RunConfig;
use qschur_core::repkit::DecompMatrix;
use qschur_core::subquot::Check;
use std::fs;
use std::path::Path;

pub fn checks_json(checks: &[Check]) -> serde_json::Value {
    serde_json::Value::Array(
        checks
            .iter()
            .map(|c| {
                serde_json::json!({
                    "check": c.id,
                    "instance": c.instance,
                    "status": if c.pass { "pass" } else { "fail" },
                    "witness": c.witness,
                })
            })
            .collect(),
    )
}

pub fn matrix_json(m: &DecompMatrix) -> serde_json::Value {
    serde_json::json!({
        "rows": m.row_labels.iter().map(|l| l.serialize()).collect::<Vec<_>>(),
        "cols": m.col_labels.iter().map(|l| l.serialize()).collect::<Vec<_>>(),
        "entries": m.entries,
    })
}

/// Assemble the schema-v1 report.
pub fn build(
    cfg: &RunConfig,
    command: &str,
    checks: &[Check],
    matrices: &[(String, DecompMatrix)],
    dims: Option<serde_json::Value>,
) -> serde_json::Value {
    let mut mat_obj = serde_json::Map::new();
    for (name, m) in matrices {
        mat_obj.insert(name.clone(), matrix_json(m));
    }
    serde_json::json!({
        "schema": 1,
        "command": command,
        "config": cfg.echo(),
        "checks": checks_json(checks),
        "matrices": serde_json::Value::Object(mat_obj),
        "dims": dims.unwrap_or(serde_json::Value::Null),
        "status": if checks.iter().all(|c| c.pass) { "ok" } else { "check-failure" },
    })
}

/// Write the report (pretty JSON, trailing newline) to a file, or stdout
/// when no path is given.
pub fn emit(report: &serde_json::Value, out: Option<&Path>) -> anyhow::Result<()> {
    let text = format!("{}\n", serde_json::to_string_pretty(report)?);
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Write each decomposition matrix as CSV next to the report.
pub fn emit_csv(
    matrices: &[(String, DecompMatrix)],
    out: Option<&Path>,
) -> anyhow::Result<Vec<String>> {
    let mut written = Vec::new();
    for (name, m) in matrices {
        let csv = m.to_csv();
        match out {
            Some(path) => {
                let stem = path.file_stem().unwrap_or_default().to_string_lossy();
                let target = path.with_file_name(format!("{stem}-{name}.csv"));
                fs::write(&target, csv)?;
                written.push(target.display().to_string());
            }
            None => {
                println!("# {name}");
                print!("{csv}");
                written.push(name.clone());
            }
        }
    }
    Ok(written)
}
