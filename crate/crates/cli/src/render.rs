use std::fmt::Write as _;
use std::io::Write;

use serde_json::Value;
use spectra_core::SurdSum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Whether a result is complete or leaves items undecided.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Done,
    Unresolved,
}

/// A command result in all three output shapes.
pub struct Report {
    pub json: Value,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Replaces the aligned table in text mode.
    pub text: Option<String>,
    pub status: Status,
}

impl Report {
    pub fn table<S: Into<String>>(json: Value, headers: Vec<S>, rows: Vec<Vec<String>>) -> Self {
        Report {
            json,
            headers: headers.into_iter().map(Into::into).collect(),
            rows,
            text: None,
            status: Status::Done,
        }
    }

    /// A single record: one CSV row, `key: value` lines as text.
    pub fn record(json: Value, fields: Vec<(&str, String)>) -> Self {
        let text = fields.iter().fold(String::new(), |mut s, (k, v)| {
            let _ = writeln!(s, "{k}: {v}");
            s
        });
        let (headers, row): (Vec<String>, Vec<String>) =
            fields.into_iter().map(|(k, v)| (k.to_string(), v)).unzip();
        Report {
            json,
            headers,
            rows: vec![row],
            text: Some(text),
            status: Status::Done,
        }
    }

    pub fn with_status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.json)?;
                writeln!(out)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.headers)?;
                for r in &self.rows {
                    w.write_record(r)?;
                }
                w.flush()
            }
            Format::Text => match &self.text {
                Some(t) => out.write_all(t.as_bytes()),
                None => out.write_all(aligned(&self.headers, &self.rows).as_bytes()),
            },
        }
    }
}

fn aligned(headers: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            widths[i] = widths[i].max(c.chars().count());
        }
    }
    let mut s = String::new();
    let mut line = |cells: &[String]| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}", w = *w))
            .collect();
        let _ = writeln!(s, "{}", parts.join("  ").trim_end());
    };
    line(headers);
    for r in rows {
        line(r);
    }
    s
}

/// Decimal shadow with its precision tag, truncated toward −∞.
pub fn shadow(x: &SurdSum, digits: usize) -> String {
    format!("{}… [{digits} digits]", x.to_decimal(digits))
}

/// Exact symbolic form followed by the decimal shadow.
pub fn exact(x: &SurdSum, digits: usize) -> String {
    format!("{} ≈ {}", x.pretty(), shadow(x, digits))
}

pub fn surd_json(x: &SurdSum, digits: usize) -> Value {
    serde_json::json!({
        "exact": x.pretty(),
        "decimal": x.to_decimal(digits),
        "digits": digits,
    })
}

/// Fixed-precision float rendering, so output bytes do not depend on float formatting.
pub fn float(x: f64) -> String {
    format!("{x:.12}")
}
