use std::io::Write;
use std::path::Path;

use anyhow::Context;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Format;

/// A flat table: header plus rows of cells.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn widths(&self) -> Vec<usize> {
        let mut w: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                w[i] = w[i].max(cell.chars().count());
            }
        }
        w
    }

    pub fn render(&self) -> String {
        let w = self.widths();
        let line = |cells: &[String]| -> String {
            let padded: Vec<String> = cells
                .iter()
                .enumerate()
                .map(|(i, c)| format!("{c}{}", " ".repeat(w[i] - c.chars().count())))
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        let mut out = line(&self.header);
        out.push('\n');
        out.push_str(
            &w.iter()
                .map(|&n| "-".repeat(n))
                .collect::<Vec<_>>()
                .join("  "),
        );
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row));
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

/// The outcome of one command: its JSON body, an optional flat view, and
/// whether every asserted law held.
#[derive(Debug, Clone)]
pub struct Report {
    pub kind: &'static str,
    pub ok: bool,
    pub parameters: Value,
    pub result: Value,
    pub table: Option<Table>,
    /// Lines printed above the table in pretty mode.
    pub headline: Vec<String>,
    /// Emit `result` alone, for documents that carry their own schema.
    pub bare: bool,
}

impl Report {
    pub fn new(
        kind: &'static str,
        ok: bool,
        parameters: Value,
        result: impl Serialize,
    ) -> anyhow::Result<Self> {
        Ok(Report {
            kind,
            ok,
            parameters,
            result: serde_json::to_value(result)?,
            table: None,
            headline: Vec::new(),
            bare: false,
        })
    }

    /// A report whose JSON form is `result` itself.
    pub fn bare(
        kind: &'static str,
        ok: bool,
        parameters: Value,
        result: impl Serialize,
    ) -> anyhow::Result<Self> {
        let mut r = Report::new(kind, ok, parameters, result)?;
        r.bare = true;
        Ok(r)
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn with_headline(mut self, line: impl Into<String>) -> Self {
        self.headline.push(line.into());
        self
    }

    pub fn schema(&self) -> String {
        format!("signlab.{}/1", self.kind)
    }

    pub fn to_json(&self) -> anyhow::Result<String> {
        if self.bare {
            let mut s = serde_json::to_string_pretty(&self.result)?;
            s.push('\n');
            return Ok(s);
        }
        let envelope = json!({
            "schema": self.schema(),
            "ok": self.ok,
            "parameters": self.parameters,
            "result": self.result,
        });
        let mut s = serde_json::to_string_pretty(&envelope)?;
        s.push('\n');
        Ok(s)
    }

    pub fn render(&self, format: Format) -> anyhow::Result<String> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => match &self.table {
                Some(t) => t.to_csv(),
                None => anyhow::bail!("{} has no flat view", self.kind),
            },
            Format::Pretty => {
                let mut out = String::new();
                for line in &self.headline {
                    out.push_str(line);
                    out.push('\n');
                }
                if let Some(t) = &self.table {
                    if !self.headline.is_empty() {
                        out.push('\n');
                    }
                    out.push_str(&t.render());
                }
                out.push_str(if self.ok {
                    "status: ok\n"
                } else {
                    "status: FAILED\n"
                });
                Ok(out)
            }
        }
    }
}

/// Writes to `path` through a temporary sibling so a failed run never leaves a partial file.
pub fn emit(text: &str, path: Option<&Path>) -> anyhow::Result<()> {
    match path {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
        Some(path) => {
            let mut tmp = path.as_os_str().to_owned();
            tmp.push(".partial");
            std::fs::write(&tmp, text).with_context(|| format!("writing {}", path.display()))?;
            std::fs::rename(&tmp, path).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(())
}
