//! Aligned-text rendering of JSON reports.

use serde_json::{Map, Value};

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            format!("[{}]", a.iter().map(scalar).collect::<Vec<_>>().join(", "))
        }
        other => other.to_string(),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Object(_) => false,
        Value::Array(a) => a.iter().all(|x| !x.is_object() && !x.is_array()),
        _ => true,
    }
}

fn render_rows(rows: &[&Map<String, Value>], indent: &str, out: &mut String) {
    let mut cols: Vec<String> = Vec::new();
    for r in rows {
        for k in r.keys() {
            if !cols.contains(k) {
                cols.push(k.clone());
            }
        }
    }
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| cols.iter().map(|c| r.get(c).map_or_else(|| "-".into(), scalar)).collect())
        .collect();
    let widths: Vec<usize> = cols
        .iter()
        .enumerate()
        .map(|(i, c)| cells.iter().map(|r| r[i].chars().count()).chain([c.chars().count()]).max().unwrap_or(0))
        .collect();
    let line = |vals: &[String]| -> String {
        let parts: Vec<String> = vals.iter().zip(&widths).map(|(v, w)| format!("{v:<w$}")).collect();
        format!("{indent}{}\n", parts.join("  ").trim_end())
    };
    out.push_str(&line(&cols));
    for r in &cells {
        out.push_str(&line(r));
    }
}

fn render_into(v: &Value, indent: &str, out: &mut String) {
    match v {
        Value::Object(m) => {
            let width = m.keys().filter(|k| is_flat(&m[*k])).map(|k| k.chars().count()).max().unwrap_or(0);
            for (k, x) in m {
                if is_flat(x) {
                    out.push_str(&format!("{indent}{k:<width$}  {}\n", scalar(x)));
                }
            }
            for (k, x) in m {
                if !is_flat(x) {
                    out.push_str(&format!("{indent}{k}:\n"));
                    render_into(x, &format!("{indent}  "), out);
                }
            }
        }
        Value::Array(a) if !a.is_empty() && a.iter().all(Value::is_object) => {
            let rows: Vec<&Map<String, Value>> = a.iter().filter_map(Value::as_object).collect();
            if rows.iter().all(|r| r.values().all(is_flat)) {
                render_rows(&rows, indent, out);
            } else {
                for (i, x) in a.iter().enumerate() {
                    out.push_str(&format!("{indent}[{i}]\n"));
                    render_into(x, &format!("{indent}  "), out);
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                if is_flat(x) {
                    out.push_str(&format!("{indent}{}\n", scalar(x)));
                } else {
                    render_into(x, indent, out);
                }
            }
        }
        other => out.push_str(&format!("{indent}{}\n", scalar(other))),
    }
}

/// Renders a report as aligned text; values are printed verbatim.
pub fn render(v: &Value) -> String {
    let mut out = String::new();
    render_into(v, "", &mut out);
    out
}
