//! Plain-text rendering of command output as aligned tables.

use serde_json::{Map, Value};

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.is_empty() => Some("-".into()),
        Value::Object(m) if m.is_empty() => Some("-".into()),
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            Some(items.iter().filter_map(scalar).collect::<Vec<_>>().join(", "))
        }
        Value::Array(items)
            if items.iter().all(|x| {
                x.as_array()
                    .is_some_and(|a| a.iter().all(|y| !y.is_array() && !y.is_object()))
            }) =>
        {
            let parts: Vec<String> = items
                .iter()
                .map(|x| format!("{{{}}}", scalar(x).unwrap_or_default()))
                .collect();
            Some(parts.join(" "))
        }
        Value::Object(m)
            if m.values()
                .all(|x| matches!(x, Value::Number(_) | Value::String(_) | Value::Bool(_))) =>
        {
            let parts: Vec<String> = m
                .iter()
                .map(|(k, x)| format!("{k}={}", scalar(x).unwrap_or_default()))
                .collect();
            Some(parts.join(" "))
        }
        _ => None,
    }
}

/// Rows of objects sharing the same scalar-valued keys.
fn table(items: &[Value]) -> Option<Vec<Vec<String>>> {
    let first = items.first()?.as_object()?;
    let keys: Vec<&String> = first.keys().collect();
    let mut rows = vec![keys.iter().map(|k| k.to_string()).collect::<Vec<_>>()];
    for item in items {
        let obj = item.as_object()?;
        if obj.len() != keys.len() {
            return None;
        }
        let row: Option<Vec<String>> = keys.iter().map(|k| obj.get(*k).and_then(scalar)).collect();
        rows.push(row?);
    }
    Some(rows)
}

fn push_rows(out: &mut String, rows: &[Vec<String>], indent: usize) {
    let cols = rows[0].len();
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    for r in rows {
        let cells: Vec<String> = r.iter().zip(&widths).map(|(cell, w)| format!("{cell:<w$}")).collect();
        out.push_str(&" ".repeat(indent));
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
}

fn object(out: &mut String, m: &Map<String, Value>, indent: usize) {
    let width = m.keys().map(|k| k.chars().count()).max().unwrap_or(0);
    let pad = " ".repeat(indent);
    for (k, v) in m {
        if let Some(s) = scalar(v) {
            out.push_str(&format!("{pad}{k:<width$}  {s}\n"));
            continue;
        }
        out.push_str(&format!("{pad}{k}:\n"));
        value(out, v, indent + 2);
    }
}

fn value(out: &mut String, v: &Value, indent: usize) {
    match v {
        Value::Object(m) => object(out, m, indent),
        Value::Array(items) => {
            if let Some(rows) = table(items) {
                push_rows(out, &rows, indent);
                return;
            }
            for (i, item) in items.iter().enumerate() {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{}[{i}] {s}\n", " ".repeat(indent))),
                    None => {
                        out.push_str(&format!("{}[{i}]\n", " ".repeat(indent)));
                        value(out, item, indent + 2);
                    }
                }
            }
        }
        other => {
            out.push_str(&" ".repeat(indent));
            out.push_str(&scalar(other).unwrap_or_default());
            out.push('\n');
        }
    }
}

pub fn text(v: &Value) -> String {
    let mut out = String::new();
    value(&mut out, v, 0);
    out
}
