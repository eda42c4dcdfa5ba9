//! Human-readable rendering of reports as aligned tables.

use serde_json::Value;

use crate::report::Report;

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Object(m) => m.iter().map(|(k, v)| format!("{k}={}", scalar(v))).collect::<Vec<_>>().join(", "),
        Value::Array(a) => format!("[{}]", a.iter().map(nested).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn nested(v: &Value) -> String {
    match v {
        Value::Object(_) => format!("{{{}}}", scalar(v)),
        _ => scalar(v),
    }
}

fn table(out: &mut String, header: &[&str], rows: &[Vec<String>]) {
    let columns = rows.iter().map(Vec::len).chain([header.len()]).max().unwrap_or(0);
    let mut widths = vec![0; columns];
    for row in rows.iter().map(|r| r.iter().map(String::as_str).collect::<Vec<_>>()).chain([header.to_vec()]) {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<String>| {
        let padded: Vec<String> =
            cells.iter().zip(&widths).map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
        format!("  {}\n", padded.join("  ").trim_end())
    };
    if !header.is_empty() {
        out.push_str(&line(header.iter().map(|h| h.to_string()).collect()));
    }
    for row in rows {
        out.push_str(&line(row.clone()));
    }
}

fn key_values(out: &mut String, title: &str, m: &serde_json::Map<String, Value>) {
    if m.is_empty() {
        return;
    }
    out.push_str(title);
    out.push('\n');
    let rows: Vec<Vec<String>> = m.iter().map(|(k, v)| vec![k.clone(), scalar(v)]).collect();
    table(out, &[], &rows);
}

pub fn render(report: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!("{}\n\n", report.title));
    key_values(&mut out, "inputs", &report.inputs);
    key_values(&mut out, "result", &report.result);

    if let Value::Array(steps) = &report.trace {
        if !steps.is_empty() {
            out.push_str("trace\n");
            let rows: Vec<Vec<String>> = steps
                .iter()
                .map(|s| {
                    ["step", "operation", "inputs", "outputs", "citation"].iter().map(|k| scalar(&s[*k])).collect()
                })
                .collect();
            table(&mut out, &["step", "operation", "inputs", "outputs", "citation"], &rows);
        }
    }

    if let Some(cases) = report.verdict.get("cases").and_then(Value::as_array) {
        out.push_str("verdict\n");
        if cases.is_empty() {
            out.push_str("  excluded\n");
        } else {
            let rows: Vec<Vec<String>> = cases
                .iter()
                .map(|c| ["tag", "ksq", "existence", "attributes"].iter().map(|k| scalar(&c[*k])).collect())
                .collect();
            table(&mut out, &["tag", "ksq", "existence", "attributes"], &rows);
        }
    }

    out.push_str(&format!("\n{}\ncontent hash {}\n", crate::report::TOOL_VERSION, report.content_hash()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Map;

    #[test]
    fn columns_line_up() {
        let mut out = String::new();
        table(&mut out, &["a", "bbb"], &[vec!["xxxx".into(), "y".into()], vec!["z".into(), "w".into()]]);
        assert_eq!(out, "  a     bbb\n  xxxx  y\n  z     w\n");
    }

    #[test]
    fn render_mentions_hash() {
        let mut r = Report::new("t", Map::new());
        r.set("det", "-2");
        let s = render(&r);
        assert!(s.contains("det  -2"));
        assert!(s.contains(&r.content_hash()));
    }
}
