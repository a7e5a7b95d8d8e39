use std::fmt::Write as _;
use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Table => "table",
        }
    }
}

/// Rows for the csv and table renderings. `notes` are extra lines shown
/// above the table only.
#[derive(Debug, Default)]
pub struct Table {
    pub notes: Vec<String>,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Self {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            ..Self::default()
        }
    }

    pub fn note(mut self, line: impl Into<String>) -> Self {
        self.notes.push(line.into());
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn render_text(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:<w$}"))
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        let mut out = String::new();
        for note in &self.notes {
            let _ = writeln!(out, "{note}");
        }
        if !self.headers.is_empty() {
            let _ = writeln!(out, "{}", line(&self.headers));
            let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
            let _ = writeln!(out, "{}", line(&rule));
            for row in &self.rows {
                let _ = writeln!(out, "{}", line(row));
            }
        }
        out
    }

    fn render_csv(&self) -> io::Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&self.headers)?;
        for row in &self.rows {
            writer.write_record(row)?;
        }
        let bytes = writer.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// What a command produced: the JSON payload, its tabular view, and whether
/// every mathematical check passed.
pub struct Report {
    pub command: &'static str,
    pub params: Value,
    pub result: Value,
    pub table: Table,
    pub passed: bool,
}

impl Report {
    pub fn envelope(&self, format: Format) -> Value {
        json!({
            "command": self.command,
            "params": self.params,
            "result": self.result,
            "format": format.name(),
        })
    }

    pub fn render(&self, format: Format) -> io::Result<String> {
        Ok(match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.envelope(format))
                    .expect("envelope serializes");
                s.push('\n');
                s
            }
            Format::Csv => self.table.render_csv()?,
            Format::Table => self.table.render_text(),
        })
    }

    pub fn emit(&self, format: Format) -> io::Result<()> {
        let text = self.render(format)?;
        let mut out = io::stdout().lock();
        out.write_all(text.as_bytes())?;
        out.flush()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut table = Table::new(&["n", "value"]).note("title line");
        table.push(vec!["1".into(), "a,b".into()]);
        table.push(vec!["10".into(), "c".into()]);
        Report {
            command: "demo",
            params: json!({"p": 3}),
            result: json!({"x": "123"}),
            table,
            passed: true,
        }
    }

    #[test]
    fn renderings() {
        let r = sample();
        let v: Value = serde_json::from_str(&r.render(Format::Json).unwrap()).unwrap();
        assert_eq!(v["command"], "demo");
        assert_eq!(v["format"], "json");
        assert_eq!(v["result"]["x"], "123");
        assert_eq!(r.render(Format::Csv).unwrap(), "n,value\n1,\"a,b\"\n10,c\n");
        let text = r.render(Format::Table).unwrap();
        assert_eq!(
            text.lines().collect::<Vec<_>>(),
            ["title line", "n   value", "--  -----", "1   a,b", "10  c"]
        );
    }
}
