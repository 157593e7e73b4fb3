//! Bit-stable artifact export: CSV norm series (17 significant digits,
//! round-trip exact, LF line endings) and JSON summaries embedding the
//! resolved configuration.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::decay::NormSeries;
use crate::error::{Error, Result};
use crate::solver::TrajectoryRecord;

pub const NORM_SERIES_HEADER: &str = "t,l2_sq,h_alpha_sq,l_beta1_pow,w_l2_sq";

/// 17 significant digits: enough for an exact f64 round trip.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write the norm series of a trajectory as CSV. A missing difference
/// column leaves the trailing cells empty; the header never changes.
pub fn export_norm_series(record: &TrajectoryRecord, path: &Path) -> Result<()> {
    let s = &record.norm_series;
    if s.is_empty() {
        return Err(Error::InvalidParams("cannot export an empty record".into()));
    }
    let mut out = BufWriter::new(File::create(path)?);
    out.write_all(NORM_SERIES_HEADER.as_bytes())?;
    out.write_all(b"\n")?;
    for i in 0..s.len() {
        let w_cell = match &s.w_l2_sq {
            Some(w) => fmt_f64(w[i]),
            None => String::new(),
        };
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(s.times[i]),
            fmt_f64(s.l2_sq[i]),
            fmt_f64(s.h_alpha_sq[i]),
            fmt_f64(s.l_beta_plus_1_pow[i]),
            w_cell
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Read a norm-series CSV back; values reproduce the exported ones
/// bit-exactly.
pub fn import_norm_series(path: &Path) -> Result<NormSeries> {
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::InvalidParams("empty norm-series file".into()))??;
    if header.trim_end() != NORM_SERIES_HEADER {
        return Err(Error::InvalidParams(format!(
            "unexpected header '{header}', expected '{NORM_SERIES_HEADER}'"
        )));
    }
    let mut times = Vec::new();
    let mut l2_sq = Vec::new();
    let mut h_alpha_sq = Vec::new();
    let mut l_beta_plus_1_pow = Vec::new();
    let mut w_l2_sq: Vec<f64> = Vec::new();
    let mut has_w = true;
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 5 {
            return Err(Error::InvalidParams(format!(
                "line {}: expected 5 cells, found {}",
                lineno + 2,
                cells.len()
            )));
        }
        let parse = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|e| Error::InvalidParams(format!("line {}: {e}", lineno + 2)))
        };
        times.push(parse(cells[0])?);
        l2_sq.push(parse(cells[1])?);
        h_alpha_sq.push(parse(cells[2])?);
        l_beta_plus_1_pow.push(parse(cells[3])?);
        if cells[4].is_empty() {
            has_w = false;
        } else {
            w_l2_sq.push(parse(cells[4])?);
        }
    }
    NormSeries::new(
        times,
        l2_sq,
        h_alpha_sq,
        l_beta_plus_1_pow,
        has_w.then_some(w_l2_sq),
    )
}

/// Serialize any summary to pretty JSON with a trailing newline.
pub fn write_json<T: serde::Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::InvalidParams(format!("JSON serialization failed: {e}")))?;
    out.write_all(text.as_bytes())?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

/// Write CSV rows with a fixed header; every numeric cell goes through
/// [`fmt_f64`].
pub fn write_csv(path: &Path, header: &str, rows: &[Vec<String>]) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    out.write_all(header.as_bytes())?;
    out.write_all(b"\n")?;
    for row in rows {
        out.write_all(row.join(",").as_bytes())?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}
