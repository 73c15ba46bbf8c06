//! Tabular reports with JSON, CSV and plain-text renderings.
//!
//! JSON output is a single object: any metadata fields, then a `rows`
//! array of objects keyed by column name. CSV output always carries a
//! header line.

use serde_json::{Map, Value};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    meta: Vec<(String, Value)>,
    columns: Vec<String>,
    rows: Vec<Vec<Value>>,
}

/// A JSON number for `x`, folding `-0.0` into `0.0`. Non-finite values
/// become strings (`inf`, `-inf`, `NaN`).
pub fn float(x: f64) -> Value {
    let x = if x == 0.0 { 0.0 } else { x };
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(format!("{x}")))
}

fn cell_text(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) => match (n.as_u64(), n.as_i64(), n.as_f64()) {
            (Some(u), _, _) => u.to_string(),
            (_, Some(i), _) => i.to_string(),
            (_, _, Some(f)) => format!("{f}"),
            _ => n.to_string(),
        },
        other => other.to_string(),
    }
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self { meta: Vec::new(), columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn meta(mut self, key: &str, value: Value) -> Self {
        self.meta.push((key.to_string(), value));
        self
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match header");
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Value>] {
        &self.rows
    }

    pub fn to_json_value(&self) -> Value {
        let mut obj = Map::new();
        for (k, v) in &self.meta {
            obj.insert(k.clone(), v.clone());
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut r = Map::new();
                for (c, v) in self.columns.iter().zip(row) {
                    r.insert(c.clone(), v.clone());
                }
                Value::Object(r)
            })
            .collect();
        obj.insert("rows".to_string(), Value::Array(rows));
        Value::Object(obj)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value()).expect("json values always serialize");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidArgument(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(cell_text)).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Space-aligned columns, preceded by `# key: value` lines.
    pub fn to_plain(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k}: {}\n", cell_text(v)));
        }
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(cell_text).collect()).collect();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, c)| cells.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0))
            .collect();
        let line = |items: &[String]| {
            let parts: Vec<String> = items.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
            parts.join("  ").trim_end().to_string() + "\n"
        };
        out.push_str(&line(&self.columns));
        for r in &cells {
            out.push_str(&line(r));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> Table {
        let mut t = Table::new(["m", "n", "re"]).meta("rank", json!(2));
        t.push(vec![json!(1), json!(0), float(0.5)]);
        t.push(vec![json!(1), json!(1), float(-0.0)]);
        t
    }

    #[test]
    fn csv_has_header() {
        assert_eq!(sample().to_csv().unwrap(), "m,n,re\n1,0,0.5\n1,1,0\n");
    }

    #[test]
    fn json_shape() {
        let v = sample().to_json_value();
        assert_eq!(v["rank"], json!(2));
        assert_eq!(v["rows"][0]["re"], json!(0.5));
        assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn plain_alignment() {
        let s = sample().to_plain();
        assert!(s.starts_with("# rank: 2\nm  n  re\n1  0  0.5\n"));
    }

    #[test]
    fn non_finite_floats() {
        assert_eq!(float(f64::INFINITY), json!("inf"));
    }
}
