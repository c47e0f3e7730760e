use std::io::Write;

use anyhow::Result;
use serde::Serialize;

use crate::config::Format;

/// A row of tabular output. CSV cells come from `cells`, JSON from serde.
pub trait Record: Serialize {
    fn header() -> Vec<&'static str>;
    fn cells(&self) -> Vec<String>;
}

/// Seventeen significant digits; non-finite values become empty cells and
/// callers carry the reason in a status column.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        String::new()
    }
}

pub fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn emit<R: Record, W: Write>(records: &[R], format: Format, out: W) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(R::header())?;
            for r in records {
                w.write_record(r.cells())?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, records)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Replaces non-finite numbers by `None` so JSON output never carries NaN.
pub fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}
