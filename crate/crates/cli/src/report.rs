//! Report assembly and serialization: RFC-4180 CSV with a commented config
//! header, or a JSON array of flat objects whose first element is the
//! header record. Decimals carry 12 significant digits; identical runs
//! serialize byte-identically.

use std::collections::BTreeMap;
use std::io::Write;

/// One typed cell.
#[derive(Debug, Clone)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Int(v) => format!("{v}"),
            Cell::Num(v) => {
                if v.is_infinite() {
                    if *v > 0.0 {
                        "inf".into()
                    } else {
                        "-inf".into()
                    }
                } else if v.is_nan() {
                    "nan".into()
                } else {
                    format!("{v:.11e}")
                }
            }
            Cell::Text(s) => s.clone(),
        }
    }
}

/// A report: fixed column set, one row per record, plus the echoed config.
pub struct Report {
    pub header: BTreeMap<String, String>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(columns: Vec<&'static str>, header: BTreeMap<String, String>) -> Self {
        Report {
            header,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn csv_quote(field: &str) -> String {
        if field.contains(',') || field.contains('"') || field.contains('\n') {
            format!("\"{}\"", field.replace('"', "\"\""))
        } else {
            field.to_string()
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.header {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|c| Self::csv_quote(&c.render())).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut records: Vec<serde_json::Value> = Vec::with_capacity(self.rows.len() + 1);
        let mut head = serde_json::Map::new();
        head.insert("record".into(), serde_json::Value::String("header".into()));
        for (k, v) in &self.header {
            head.insert(k.clone(), serde_json::Value::String(v.clone()));
        }
        records.push(serde_json::Value::Object(head));
        for row in &self.rows {
            let mut obj = serde_json::Map::new();
            obj.insert("record".into(), serde_json::Value::String("row".into()));
            for (col, cell) in self.columns.iter().zip(row) {
                obj.insert(col.to_string(), serde_json::Value::String(cell.render()));
            }
            records.push(serde_json::Value::Object(obj));
        }
        let mut text = serde_json::to_string_pretty(&records).expect("string-only json");
        text.push('\n');
        text
    }

    pub fn write(
        &self,
        format: super::config::OutputFormat,
        path: Option<&std::path::Path>,
    ) -> std::io::Result<()> {
        let text = match format {
            super::config::OutputFormat::Csv => self.to_csv(),
            super::config::OutputFormat::Json => self.to_json(),
        };
        match path {
            Some(p) => std::fs::write(p, text),
            None => std::io::stdout().write_all(text.as_bytes()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quoting_and_significant_digits() {
        let mut report = Report::new(vec!["name", "value"], BTreeMap::new());
        report.push(vec![
            Cell::Text("a,b\"c".into()),
            Cell::Num(std::f64::consts::PI),
        ]);
        let csv = report.to_csv();
        assert!(csv.contains("\"a,b\"\"c\""));
        assert!(csv.contains("3.14159265359e0"));
    }

    #[test]
    fn empty_report_is_header_only() {
        let mut header = BTreeMap::new();
        header.insert("command".into(), "modulus".into());
        let report = Report::new(vec!["n", "value"], header);
        let csv = report.to_csv();
        assert_eq!(csv, "# command = modulus\nn,value\n");
        let json: Vec<serde_json::Value> = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(json.len(), 1);
    }
}
