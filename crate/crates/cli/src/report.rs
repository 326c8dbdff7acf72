use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::args::Format;

#[derive(Clone, Debug, Default, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }
    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// Everything a subcommand prints.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub version: &'static str,
    pub config: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// `(key, value)` pairs of the leaves of a JSON value, with dotted keys.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) && !is_complex(v) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), x, out);
            }
        }
        _ => out.push((prefix.to_string(), scalar(v))),
    }
}

fn is_complex(v: &Value) -> bool {
    matches!(v, Value::Array(a) if a.len() == 2 && a.iter().all(Value::is_number))
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("serializable") + "\n",
            Format::Csv => self.csv(),
            Format::Text => self.text(),
        }
    }

    fn csv(&self) -> String {
        let mut s = String::new();
        if let Some(t) = &self.table {
            let line = |r: &[String]| r.iter().map(|x| csv_field(x)).collect::<Vec<_>>().join(",");
            s += &line(&t.columns);
            s.push('\n');
            for r in &t.rows {
                s += &line(r);
                s.push('\n');
            }
            return s;
        }
        s += "key,value\n";
        let mut kv = Vec::new();
        flatten("", &self.result, &mut kv);
        if let Some(p) = self.pass {
            kv.push(("pass".into(), p.to_string()));
        }
        for (k, v) in kv {
            let _ = writeln!(s, "{},{}", csv_field(&k), csv_field(&v));
        }
        s
    }

    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "indeftheta {} {}", self.version, self.command);
        let mut kv = Vec::new();
        flatten("", &self.result, &mut kv);
        let w = kv.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in kv {
            let _ = writeln!(s, "  {k:<w$}  {v}");
        }
        if let Some(t) = &self.table {
            let widths: Vec<usize> = (0..t.columns.len())
                .map(|i| t.rows.iter().map(|r| r[i].len()).chain([t.columns[i].len()]).max().unwrap_or(0))
                .collect();
            let line = |r: &[String]| {
                r.iter().zip(&widths).map(|(x, w)| format!("{x:>w$}")).collect::<Vec<_>>().join("  ")
            };
            let _ = writeln!(s, "{}", line(&t.columns));
            for r in &t.rows {
                let _ = writeln!(s, "{}", line(r));
            }
        }
        if let Some(p) = self.pass {
            let _ = writeln!(s, "{}", if p { "PASS" } else { "FAIL" });
        }
        s
    }
}
