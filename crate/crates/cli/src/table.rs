//! CSV tables: fixed headers, atomic writes, schema check before commit.

use std::path::Path;

use crate::config::Experiment;
use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cell {
    Int(u64),
    Real(f64),
}

impl Cell {
    fn render(self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            // 17 significant digits round-trip every f64
            // adding zero folds -0 into 0
            Cell::Real(v) => format!("{:.16e}", v + 0.0),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

pub fn header(e: Experiment) -> &'static [&'static str] {
    match e {
        Experiment::Tomography => &["d", "n", "trial", "seed", "op_norm_error", "scaled_error"],
        Experiment::Moments | Experiment::Renyi => &["d", "k", "n", "trial", "estimate", "truth"],
        Experiment::Bucket => {
            &["d", "B", "eps", "n", "trial", "seed", "large_err", "miscls", "alignment_err", "rank_r"]
        }
        Experiment::Spectrum => &["d", "eps", "trial", "seed", "tv_error", "alignment_err", "miscls", "rank_r"],
        Experiment::Classical => &["d", "eps", "n", "trial", "seed", "tv_error"],
        Experiment::Game => &["d", "n", "m", "seed", "success"],
        Experiment::Scan => &["family_k", "d", "n_min", "m", "threshold", "seed"],
        Experiment::Fit => &["family_k", "a", "c", "b", "rss"],
    }
}

pub type Row = Vec<Cell>;

/// Checks a written table: exact header, full rows, every field numeric.
pub fn validate(path: &Path, e: Experiment, rows: usize) -> Result<(), Failure> {
    let broken = |msg: String| Failure::Runtime(format!("schema check of {}: {msg}", path.display()));
    let mut reader = csv::Reader::from_path(path).map_err(|err| broken(err.to_string()))?;
    let head = reader.headers().map_err(|err| broken(err.to_string()))?.clone();
    if head.iter().ne(header(e).iter().copied()) {
        return Err(broken(format!("header {head:?}")));
    }
    let mut seen = 0;
    for rec in reader.records() {
        let rec = rec.map_err(|err| broken(err.to_string()))?;
        if rec.len() != head.len() {
            return Err(broken(format!("row {seen} has {} fields", rec.len())));
        }
        if let Some(f) = rec.iter().find(|f| f.parse::<f64>().is_err()) {
            return Err(broken(format!("row {seen}: {f:?} is not a number")));
        }
        seen += 1;
    }
    if seen != rows {
        return Err(broken(format!("{seen} rows, expected {rows}")));
    }
    Ok(())
}

/// Writes to a temporary file next to `path`, validates it, then renames it
/// into place. Nothing is left behind on failure.
pub fn write_atomic(path: &Path, e: Experiment, rows: &[Row]) -> Result<(), Failure> {
    let io = |err: std::io::Error| Failure::Runtime(format!("{}: {err}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    {
        let mut w = csv::Writer::from_writer(tmp.as_file_mut());
        w.write_record(header(e)).map_err(|err| Failure::Runtime(err.to_string()))?;
        for row in rows {
            w.write_record(row.iter().map(|c| c.render())).map_err(|err| Failure::Runtime(err.to_string()))?;
        }
        w.flush().map_err(io)?;
    }
    tmp.as_file_mut().sync_all().map_err(io)?;
    validate(tmp.path(), e, rows.len())?;
    tmp.persist(path).map_err(|err| io(err.error))?;
    Ok(())
}
