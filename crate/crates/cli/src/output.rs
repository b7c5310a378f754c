use std::io::Write;
use std::path::Path;

use anyhow::Context;
use clap::ValueEnum;
use rado_lab::RadoValue;
use serde::Serialize;
use serde_json::{json, Value};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Serialize, Debug, Clone)]
pub struct TableRow {
    pub m: u32,
    pub c: i64,
    pub a: u32,
    pub formula: String,
    pub brute: String,
    /// Empty when search ran out of budget below the formula value.
    pub agree: Option<bool>,
    pub nodes: u64,
    pub seconds: f64,
}

/// Everything a command produces. The JSON envelope has the keys
/// `command, params, result, certificate?, diagnostics, budget_used`.
#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    pub params: Value,
    pub result: Value,
    pub certificate: Option<Value>,
    pub diagnostics: Vec<String>,
    pub budget_used: Value,
    pub text: String,
    pub rows: Option<Vec<TableRow>>,
    pub exit: u8,
}

impl Report {
    pub fn new(command: &'static str, params: Value, result: Value, text: String) -> Self {
        Report {
            command,
            params,
            result,
            certificate: None,
            diagnostics: Vec::new(),
            budget_used: Value::Null,
            text,
            rows: None,
            exit: EXIT_OK,
        }
    }

    fn envelope(&self) -> Value {
        let mut v = json!({
            "command": self.command,
            "params": self.params,
            "result": self.result,
            "diagnostics": self.diagnostics,
            "budget_used": self.budget_used,
        });
        if let Some(cert) = &self.certificate {
            v["certificate"] = cert.clone();
        }
        v
    }

    fn render(&self, format: Format) -> anyhow::Result<Vec<u8>> {
        Ok(match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.envelope())?;
                s.push('\n');
                s.into_bytes()
            }
            Format::Text => {
                let mut s = self.text.clone();
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                s.into_bytes()
            }
            Format::Csv => {
                let Some(rows) = &self.rows else {
                    anyhow::bail!("csv output is only available for `table`");
                };
                let mut w = csv::Writer::from_writer(Vec::new());
                for row in rows {
                    w.serialize(row)?;
                }
                w.into_inner()?
            }
        })
    }

    /// Write the primary output and return the exit code.
    pub fn emit(self, format: Format, out: Option<&Path>) -> anyhow::Result<u8> {
        let bytes = self.render(format)?;
        match out {
            Some(path) => std::fs::write(path, &bytes)
                .with_context(|| format!("writing {}", path.display()))?,
            None => std::io::stdout().write_all(&bytes)?,
        }
        if format != Format::Json {
            for d in &self.diagnostics {
                eprintln!("{d}");
            }
        }
        Ok(self.exit)
    }
}

pub fn value_json(v: &RadoValue) -> Value {
    match v {
        RadoValue::Finite(n) => json!({"kind": "finite", "value": n, "display": v.to_string()}),
        RadoValue::Infinite(why) => {
            json!({"kind": "infinite", "reason": why.label(), "display": v.to_string()})
        }
        RadoValue::UnknownAbove(n) => {
            json!({"kind": "unknown_above", "value": n, "display": v.to_string()})
        }
    }
}
