//! Table and report emission. CSV numbers use `{:.16e}` (17 significant
//! digits, round-trip exact); JSON uses serde_json's shortest round-trip form.

use serde_json::{json, Map, Value};
use std::fmt::Write as _;

use crate::config::Format;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Table(Table),
    /// Ordered key/value pairs.
    Report(Vec<(String, Value)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    /// Header lines, emitted unless `--no-header`.
    pub metadata: Vec<(String, Value)>,
    pub body: Body,
    /// Trailing summary, always emitted.
    pub summary: Vec<(String, Value)>,
}

pub fn render(doc: &Document, format: Format, header: bool) -> String {
    match format {
        Format::Csv => render_csv(doc, header),
        Format::Json => render_json(doc, header),
    }
}

fn number(x: f64) -> String {
    format!("{x:.16e}")
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => n.as_f64().map(number).unwrap_or_else(|| n.to_string()),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render_csv(doc: &Document, header: bool) -> String {
    let mut out = String::new();
    if header {
        for (k, v) in &doc.metadata {
            let _ = writeln!(out, "# {k}: {}", scalar(v));
        }
    }
    match &doc.body {
        Body::Table(t) => {
            let _ = writeln!(out, "{}", t.columns.join(","));
            for row in &t.rows {
                let cells: Vec<String> = row.iter().map(|&x| number(x)).collect();
                let _ = writeln!(out, "{}", cells.join(","));
            }
        }
        Body::Report(items) => {
            let _ = writeln!(out, "key,value");
            for (k, v) in items {
                let _ = writeln!(out, "{k},{}", scalar(v));
            }
        }
    }
    for (k, v) in &doc.summary {
        let _ = writeln!(out, "# summary {k}: {}", scalar(v));
    }
    out
}

fn object(items: &[(String, Value)]) -> Value {
    Value::Object(items.iter().cloned().collect::<Map<_, _>>())
}

fn render_json(doc: &Document, header: bool) -> String {
    let mut root = Map::new();
    if header {
        root.insert("metadata".into(), object(&doc.metadata));
    }
    match &doc.body {
        Body::Table(t) => {
            root.insert("columns".into(), json!(t.columns));
            root.insert("rows".into(), json!(t.rows));
        }
        Body::Report(items) => {
            root.insert("report".into(), object(items));
        }
    }
    root.insert("summary".into(), object(&doc.summary));
    let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("json values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc() -> Document {
        Document {
            metadata: vec![("command".into(), json!("test"))],
            body: Body::Table(Table { columns: vec!["x".into(), "y".into()], rows: vec![vec![0.1, 1.0 / 3.0]] }),
            summary: vec![("max".into(), json!(2.5))],
        }
    }

    #[test]
    fn csv_round_trips_numbers() {
        let text = render(&doc(), Format::Csv, true);
        let row = text.lines().find(|l| !l.starts_with('#') && !l.starts_with('x')).unwrap();
        let y: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(y, 1.0 / 3.0);
        assert!(text.starts_with("# command: test\n"));
        assert!(text.ends_with("# summary max: 2.5000000000000000e0\n"));
    }

    #[test]
    fn header_can_be_disabled() {
        let text = render(&doc(), Format::Csv, false);
        assert!(text.starts_with("x,y\n"));
        let json: Value = serde_json::from_str(&render(&doc(), Format::Json, false)).unwrap();
        assert!(json.get("metadata").is_none());
        assert_eq!(json["rows"][0][1].as_f64().unwrap(), 1.0 / 3.0);
    }
}
