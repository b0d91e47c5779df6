//! Rendering reports as JSON, CSV or plain text.

use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Entries of a matrix-shaped value: a non-empty array of equally long,
/// non-empty arrays of numbers.
fn as_matrix(v: &Value) -> Option<Vec<&Vec<Value>>> {
    let rows = v.as_array()?;
    let first = rows.first()?.as_array()?;
    let rows: Vec<&Vec<Value>> = rows.iter().map(Value::as_array).collect::<Option<_>>()?;
    let numeric = rows.iter().all(|r| r.len() == first.len() && r.iter().all(Value::is_number));
    (numeric && !first.is_empty()).then_some(rows)
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Flattens nested objects into dotted keys. Matrices become `m_i_j`
/// columns (row-major); other arrays are indexed. In `inline` mode arrays
/// of scalars stay whole, for text output.
pub fn flatten(prefix: &str, v: &Value, inline: bool, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(&join(prefix, k), x, inline, out);
            }
        }
        Value::Array(items) => {
            if inline && items.iter().all(|x| !x.is_object() && !x.is_array()) {
                out.push((prefix.to_string(), v.to_string()));
            } else if let Some(rows) = as_matrix(v).filter(|_| !inline) {
                for (i, row) in rows.iter().enumerate() {
                    for (j, x) in row.iter().enumerate() {
                        out.push((join(prefix, &format!("m_{i}_{j}")), scalar(x)));
                    }
                }
            } else if inline && as_matrix(v).is_some() {
                out.push((prefix.to_string(), v.to_string()));
            } else {
                for (i, x) in items.iter().enumerate() {
                    flatten(&join(prefix, &i.to_string()), x, inline, out);
                }
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

/// One CSV row per element when `v` is an array of records, else one row.
pub fn to_csv(v: &Value) -> String {
    let records: Vec<&Value> = match v {
        Value::Array(items) if items.iter().all(Value::is_object) => items.iter().collect(),
        other => vec![other],
    };
    let rows: Vec<Vec<(String, String)>> = records
        .iter()
        .map(|r| {
            let mut row = Vec::new();
            flatten("", r, false, &mut row);
            row
        })
        .collect();
    let mut header: Vec<String> = Vec::new();
    for row in &rows {
        for (k, _) in row {
            if !header.contains(k) {
                header.push(k.clone());
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).expect("writing to memory");
    for row in &rows {
        let cells = header.iter().map(|h| row.iter().find(|(k, _)| k == h).map_or("", |(_, x)| x.as_str()));
        w.write_record(cells).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is UTF-8")
}

/// `key: value` lines; arrays of records are separated by blank lines.
pub fn to_text(v: &Value) -> String {
    let records: Vec<&Value> = match v {
        Value::Array(items) if items.iter().all(Value::is_object) => items.iter().collect(),
        other => vec![other],
    };
    let mut s = String::new();
    for (i, r) in records.iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        let mut lines = Vec::new();
        flatten("", r, true, &mut lines);
        for (k, x) in lines {
            s.push_str(&format!("{k}: {x}\n"));
        }
    }
    s
}

pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("value serializes") + "\n",
        Format::Csv => to_csv(v),
        Format::Text => to_text(v),
    }
}

/// Rows of a `k × k`-blocked symmetric matrix, for matrix-shaped output.
pub fn rows(m: &mwg_core::SymMatrix) -> Vec<Vec<f64>> {
    (0..m.dim()).map(|i| (0..m.dim()).map(|j| m.get(i, j)).collect()).collect()
}
