//! Output: a JSON envelope or a flat CSV table, to a file or stdout.

use std::io::Write;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::{ExperimentConfig, Format};

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    command: &'a str,
    config: &'a ExperimentConfig,
    ok: bool,
    records: &'a [T],
}

/// Nested objects become dotted column names. Arrays are dropped, except that
/// a record with `residuals` expands into one row per iteration.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, Value)>) {
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        Value::Array(_) => {}
        other => out.push((prefix.to_string(), other.clone())),
    }
}

fn cell(v: &Value) -> String {
    let text = match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(f) if !n.is_i64() && !n.is_u64() => format!("{f:.16e}"),
            _ => n.to_string(),
        },
        other => other.to_string(),
    };
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text
    }
}

pub fn to_csv<T: Serialize>(records: &[T]) -> Result<String> {
    let mut rows: Vec<Vec<(String, Value)>> = Vec::new();
    for rec in records {
        let value = serde_json::to_value(rec)?;
        let mut base = Vec::new();
        flatten("", &value, &mut base);
        match value.get("residuals").and_then(Value::as_array) {
            Some(res) => {
                for (i, r) in res.iter().enumerate() {
                    let mut row = base.clone();
                    row.push(("iter".into(), Value::from(i)));
                    row.push(("residual".into(), r.clone()));
                    rows.push(row);
                }
            }
            None => rows.push(base),
        }
    }
    let mut header: Vec<String> = Vec::new();
    for row in &rows {
        for (k, _) in row {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let lookup: Map<String, Value> = row.into_iter().collect();
        let line: Vec<String> =
            header.iter().map(|k| lookup.get(k).map(cell).unwrap_or_default()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    Ok(out)
}

pub fn emit<T: Serialize>(
    command: &str,
    cfg: &ExperimentConfig,
    records: &[T],
    ok: bool,
) -> Result<()> {
    let text = match cfg.format {
        Format::Json => {
            let env = Envelope { command, config: cfg, ok, records };
            let mut s = serde_json::to_string_pretty(&env)?;
            s.push('\n');
            s
        }
        Format::Csv => to_csv(records)?,
    };
    match &cfg.output {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("output: cannot write {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_flattens_and_expands_residuals() {
        let recs = vec![
            serde_json::json!({"pair": "a,b", "rho": 0.5, "checks": {"ok": true}, "residuals": [1.0, 0.5]}),
        ];
        let csv = to_csv(&recs).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "pair,rho,checks.ok,iter,residual");
        assert_eq!(lines[1], "\"a,b\",5.0000000000000000e-1,true,0,1.0000000000000000e0");
        assert_eq!(lines.len(), 3);
    }
}
