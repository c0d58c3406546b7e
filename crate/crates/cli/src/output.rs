//! Tabular and JSON writers. Floats in CSV use 17 significant digits so
//! every value round-trips exactly.

use std::io::Write;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

pub fn float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "NaN".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn opt_float(v: Option<f64>) -> String {
    v.map(float).unwrap_or_default()
}

/// A row of a CSV table.
pub trait Row {
    fn header() -> &'static [&'static str];
    fn record(&self) -> Vec<String>;
}

pub fn write_csv<R: Row, W: Write>(rows: &[R], w: W) -> anyhow::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(R::header())?;
    for r in rows {
        out.write_record(r.record())?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize + ?Sized, W: Write>(value: &T, mut w: W) -> anyhow::Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

/// Writes `rows` as CSV, or `json` as JSON.
pub fn emit<R: Row, T: Serialize + ?Sized, W: Write>(
    format: Format,
    rows: &[R],
    json: &T,
    w: W,
) -> anyhow::Result<()> {
    match format {
        Format::Csv => write_csv(rows, w),
        Format::Json => write_json(json, w),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, 2.0f64.sqrt(), 1e-300, 0.0, -7.25] {
            assert_eq!(float(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(float(0.5), "5.0000000000000000e-1");
        assert_eq!(float(f64::INFINITY), "inf");
    }
}
