//! CSV and JSON encodings of a coefficient table. Betas are always decimal
//! strings so no entry is ever squeezed through a fixed-width number.

use std::io::Write;

use lambert_coeffs::{CoefficientTable, ExactInt};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

/// One `(n, k, beta)` line of the CSV encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputRecord {
    pub n: usize,
    pub k: usize,
    pub beta: String,
    pub route: Option<String>,
}

impl OutputRecord {
    fn csv_line(&self) -> String {
        match &self.route {
            Some(route) => format!("{},{},{},{}\n", self.n, self.k, self.beta, route),
            None => format!("{},{},{}\n", self.n, self.k, self.beta),
        }
    }
}

pub fn records<'a>(
    table: &'a CoefficientTable,
    route: Option<&'a str>,
) -> impl Iterator<Item = OutputRecord> + 'a {
    table.rows().flat_map(move |(n, row)| {
        row.iter().enumerate().map(move |(k, b)| OutputRecord {
            n,
            k,
            beta: b.to_string(),
            route: route.map(str::to_owned),
        })
    })
}

#[derive(Serialize, Deserialize)]
struct JsonTable {
    n_max: usize,
    rows: Vec<Vec<String>>,
}

pub fn write_table<W: Write>(
    out: &mut W,
    table: &CoefficientTable,
    format: TableFormat,
    route: Option<&str>,
) -> Result<(), CliError> {
    match format {
        TableFormat::Csv => {
            let header = if route.is_some() {
                "n,k,beta,route\n"
            } else {
                "n,k,beta\n"
            };
            out.write_all(header.as_bytes())?;
            for rec in records(table, route) {
                out.write_all(rec.csv_line().as_bytes())?;
            }
        }
        TableFormat::Json => {
            let doc = JsonTable {
                n_max: table.n_max(),
                rows: table
                    .rows()
                    .map(|(_, r)| r.iter().map(|b| b.to_string()).collect())
                    .collect(),
            };
            serde_json::to_writer(&mut *out, &doc).map_err(|e| CliError::Io(e.into()))?;
            out.write_all(b"\n")?;
        }
    }
    Ok(())
}

pub fn table_to_string(table: &CoefficientTable, format: TableFormat) -> String {
    let mut buf = Vec::new();
    write_table(&mut buf, table, format, None).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("output is ASCII")
}

fn parse_int(s: &str, what: &str) -> Result<ExactInt, CliError> {
    s.trim()
        .parse::<ExactInt>()
        .map_err(|_| CliError::Parse(format!("{what}: {s:?} is not an integer")))
}

/// Parses either encoding; JSON is recognized by a leading `{`.
pub fn parse_table(text: &str) -> Result<CoefficientTable, CliError> {
    let rows = if text.trim_start().starts_with('{') {
        let doc: JsonTable =
            serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        if doc.n_max != doc.rows.len() {
            return Err(CliError::Parse(format!(
                "n_max = {} but {} rows present",
                doc.n_max,
                doc.rows.len()
            )));
        }
        doc.rows
            .iter()
            .map(|r| r.iter().map(|s| parse_int(s, "beta")).collect())
            .collect::<Result<Vec<Vec<_>>, _>>()?
    } else {
        parse_csv(text)?
    };
    CoefficientTable::from_rows(rows).map_err(|e| CliError::Parse(e.to_string()))
}

fn parse_csv(text: &str) -> Result<Vec<Vec<ExactInt>>, CliError> {
    let mut lines = text.lines();
    match lines.next().map(str::trim) {
        Some("n,k,beta") | Some("n,k,beta,route") => {}
        other => return Err(CliError::Parse(format!("unexpected CSV header {other:?}"))),
    }
    let mut rows: Vec<Vec<ExactInt>> = Vec::new();
    for (lineno, line) in lines.enumerate().map(|(i, l)| (i + 2, l)) {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() < 3 {
            return Err(CliError::Parse(format!("line {lineno}: expected n,k,beta")));
        }
        let n: usize = fields[0]
            .trim()
            .parse()
            .map_err(|_| CliError::Parse(format!("line {lineno}: bad n")))?;
        let k: usize = fields[1]
            .trim()
            .parse()
            .map_err(|_| CliError::Parse(format!("line {lineno}: bad k")))?;
        let expected = match rows.last() {
            Some(row) if row.len() < rows.len() => (rows.len(), row.len()),
            _ => (rows.len() + 1, 0),
        };
        if (n, k) != expected {
            return Err(CliError::Parse(format!(
                "line {lineno}: expected entry ({}, {}), got ({n}, {k})",
                expected.0, expected.1
            )));
        }
        if k == 0 {
            rows.push(Vec::new());
        }
        let beta = parse_int(fields[2], &format!("line {lineno}"))?;
        rows.last_mut().expect("row pushed above").push(beta);
    }
    Ok(rows)
}
