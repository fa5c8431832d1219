//! JSON, CSV and plain-text renderings of command results.

use std::io::Write;

use rug::Rational;
use serde_json::Value;

use super::Format;
use crate::algebra::Series;
use crate::error::{Error, Result};

/// A command result in every supported rendering.
pub struct Output {
    pub json: Value,
    /// header and rows, when the result has a natural table form
    pub table: Option<(Vec<String>, Vec<Vec<String>>)>,
    pub pretty: String,
    /// a verification inside the command failed
    pub failed: bool,
}

impl Output {
    pub fn new(json: Value, pretty: String) -> Output {
        Output { json, table: None, pretty, failed: false }
    }

    pub fn with_table(mut self, header: &[&str], rows: Vec<Vec<String>>) -> Output {
        self.table = Some((header.iter().map(|h| h.to_string()).collect(), rows));
        self
    }

    pub fn failed_if(mut self, failed: bool) -> Output {
        self.failed = failed;
        self
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        let io = |e: std::io::Error| Error::Invalid(format!("write failed: {e}"));
        match format {
            Format::Json => {
                let text = serde_json::to_string_pretty(&self.json).expect("serializable");
                writeln!(out, "{text}").map_err(io)
            }
            Format::Pretty => write!(out, "{}", self.pretty).map_err(io),
            Format::Csv => {
                let (header, rows) =
                    self.table.as_ref().ok_or_else(|| Error::Invalid("this result has no CSV form".into()))?;
                let mut w = csv::Writer::from_writer(out);
                let csv_err = |e: csv::Error| Error::Invalid(format!("csv: {e}"));
                w.write_record(header).map_err(csv_err)?;
                for r in rows {
                    w.write_record(r).map_err(csv_err)?;
                }
                w.flush().map_err(io)
            }
        }
    }
}

/// One row per stored exponent: doubled exponent and exact coefficient.
pub fn series_rows(s: &Series<Rational>) -> Vec<Vec<String>> {
    s.terms().map(|(e, c)| vec![e.to_string(), c.to_string()]).collect()
}

/// `c Q^(e/2)` terms joined by ` + `, followed by the truncation.
pub fn series_text(s: &Series<Rational>) -> String {
    let mut parts = Vec::new();
    for (e, c) in s.terms() {
        let q = match e {
            0 => String::new(),
            2 => " Q".into(),
            e if e % 2 == 0 => format!(" Q^{}", e / 2),
            e => format!(" Q^({e}/2)"),
        };
        parts.push(format!("{c}{q}"));
    }
    if parts.is_empty() {
        parts.push("0".into());
    }
    let tr = s.trunc();
    let tail = if tr % 2 == 0 { format!("O(Q^{})", tr / 2 + 1) } else { format!("O(Q^({}/2))", tr + 1) };
    format!("{} + {tail}\n", parts.join(" + "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_series() {
        let s = Series::from_terms(&(), [(0, Rational::from(1)), (1, Rational::from((2, 3))), (4, Rational::from(-1))], 4);
        assert_eq!(series_text(&s), "1 + 2/3 Q^(1/2) + -1 Q^2 + O(Q^3)\n");
        assert_eq!(series_rows(&s)[1], vec!["1", "2/3"]);
        let out = Output::new(s.to_json(), series_text(&s)).with_table(&["exp2", "coeff"], series_rows(&s));
        let mut buf = Vec::new();
        out.write(Format::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "exp2,coeff\n0,1\n1,2/3\n4,-1\n");
    }
}
