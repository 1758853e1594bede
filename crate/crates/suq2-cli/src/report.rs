//! Report assembly: stable JSON by default, with CSV and markdown renderers
//! for tabular output.

use clap::ValueEnum;
use num::{BigRational, ToPrimitive};
use serde_json::{json, Map, Value};
use std::io::Write;
use std::path::Path;
use suq2::action::TableRow;
use suq2::qfield::QScalar;
use suq2::suites::CheckResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Md,
}

pub struct Report {
    format: OutputFormat,
    object: Map<String, Value>,
    lines: Vec<String>,
}

fn coeff_array(coeffs: &[num::BigInt]) -> Value {
    Value::Array(
        coeffs
            .iter()
            .map(|c| match c.to_i64() {
                Some(v) => json!(v),
                None => json!(c.to_string()),
            })
            .collect(),
    )
}

fn scalar_value(x: &QScalar, at: Option<&BigRational>) -> Result<(Value, Value), String> {
    let result = json!({
        "num": coeff_array(x.numerator().coeffs()),
        "den": coeff_array(x.denominator().coeffs()),
        "display": x.to_string(),
    });
    let value_at_q = match at {
        Some(q0) => {
            let v = x.eval_at(q0).map_err(|e| e.to_string())?;
            json!(v.to_f64())
        }
        None => Value::Null,
    };
    Ok((result, value_at_q))
}

impl Report {
    pub fn new(format: OutputFormat) -> Self {
        let mut object = Map::new();
        object.insert("notes".into(), json!([]));
        Report { format, object, lines: Vec::new() }
    }

    pub fn query(&mut self, q: String) {
        self.object.insert("query".into(), json!(q));
        if !matches!(self.format, OutputFormat::Json) {
            self.lines.push(format!("# {q}"));
        }
    }

    pub fn scalar(
        &mut self,
        key: &str,
        x: &QScalar,
        at: Option<&BigRational>,
    ) -> Result<(), String> {
        let (result, value_at_q) = scalar_value(x, at)?;
        if key == "result" {
            self.object.insert("result".into(), result);
            self.object.insert("value_at_q".into(), value_at_q.clone());
        } else {
            let mut entry = Map::new();
            entry.insert("result".into(), result);
            entry.insert("value_at_q".into(), value_at_q.clone());
            self.object.insert(key.into(), Value::Object(entry));
        }
        match value_at_q {
            Value::Null => self.lines.push(format!("{key},{x}")),
            v => self.lines.push(format!("{key},{x},{v}")),
        }
        Ok(())
    }

    pub fn number(&mut self, key: &str, v: f64) {
        self.object.insert(key.into(), json!(v));
        self.lines.push(format!("{key},{v}"));
    }

    pub fn table(&mut self, rows: &[TableRow], at: Option<&BigRational>) -> Result<(), String> {
        const HEADERS: [&str; 8] = [
            "form",
            "I A|D|^-3",
            "I A^2|D|^-3",
            "I A^3|D|^-3",
            "I A|D|^-2",
            "I A^2|D|^-2",
            "I A|D|^-1",
            "zeta_{D_A}(0)",
        ];
        let mut json_rows = Vec::new();
        for row in rows {
            let mut cells = Vec::new();
            let mut obj = Map::new();
            obj.insert("form".into(), json!(row.label));
            for (h, v) in HEADERS[1..].iter().zip(&row.values) {
                let (result, value_at_q) = scalar_value(v, at)?;
                let mut entry = Map::new();
                entry.insert("result".into(), result);
                entry.insert("value_at_q".into(), value_at_q);
                obj.insert((*h).into(), Value::Object(entry));
                cells.push(v.to_string());
            }
            json_rows.push(Value::Object(obj));
            match self.format {
                OutputFormat::Md => {
                    self.lines.push(format!("| {} | {} |", row.label, cells.join(" | ")));
                }
                _ => self.lines.push(format!("{},{}", row.label, cells.join(","))),
            }
        }
        if matches!(self.format, OutputFormat::Md) {
            let header = format!("| {} |", HEADERS.join(" | "));
            let rule = format!("|{}|", vec!["---"; HEADERS.len()].join("|"));
            self.lines.splice(
                self.lines.len() - rows.len()..self.lines.len() - rows.len(),
                [header, rule],
            );
        } else if matches!(self.format, OutputFormat::Csv) {
            self.lines
                .splice(self.lines.len() - rows.len()..self.lines.len() - rows.len(), [
                    HEADERS.join(","),
                ]);
        }
        self.object.insert("rows".into(), Value::Array(json_rows));
        Ok(())
    }

    pub fn checks(&mut self, results: &[CheckResult]) {
        let arr: Vec<Value> = results
            .iter()
            .map(|r| {
                json!({
                    "name": r.name,
                    "passed": r.passed,
                    "details": r.details,
                })
            })
            .collect();
        self.object.insert("checks".into(), Value::Array(arr));
        self.object.insert(
            "passed".into(),
            json!(results.iter().all(|r| r.passed)),
        );
        for r in results {
            self.lines.push(format!(
                "[{}] {}{}",
                if r.passed { "ok" } else { "FAIL" },
                r.name,
                if r.details.is_empty() { String::new() } else { format!(": {}", r.details) }
            ));
        }
    }

    pub fn emit(&self, out: Option<&Path>) -> std::io::Result<()> {
        let text = match self.format {
            OutputFormat::Json => serde_json::to_string_pretty(&Value::Object(self.object.clone()))
                .expect("serializable"),
            _ => self.lines.join("\n"),
        };
        match out {
            Some(path) => std::fs::write(path, text + "\n"),
            None => {
                let stdout = std::io::stdout();
                let mut h = stdout.lock();
                writeln!(h, "{text}")
            }
        }
    }
}

impl Report {
    pub fn flag(&mut self, key: &str, v: bool) {
        self.object.insert(key.into(), json!(v));
        self.lines.push(format!("{key},{v}"));
    }
}
