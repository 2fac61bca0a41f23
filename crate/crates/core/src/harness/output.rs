//! Result rows and the CSV + JSON writers.

use serde::{Deserialize, Serialize};
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// One output record. Sweep summaries use `epoch = -1`; convergence rows
/// carry the epoch index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub method: String,
    pub users: usize,
    pub antennas: usize,
    pub snr_db: f64,
    pub epoch: i64,
    pub mean_sum_rate: f64,
    pub std_sum_rate: f64,
    pub pf_value: f64,
    pub seed: u64,
}

/// The JSON mirror lives next to the CSV with the extension swapped.
pub fn json_sibling(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

/// Write the rows as CSV (single header line) plus the JSON mirror.
/// Output is byte-stable: same rows, same bytes.
pub fn write_results(rows: &[ResultRow], csv_path: &Path) -> Result<PathBuf> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| Error::io(csv_path, std::io::Error::other(e)))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::io(csv_path, std::io::Error::other(e)))?;
    fs::write(csv_path, bytes).map_err(|e| Error::io(csv_path, e))?;

    let json_path = json_sibling(csv_path);
    let mut json = serde_json::to_vec_pretty(rows)
        .map_err(|e| Error::io(&json_path, std::io::Error::other(e)))?;
    json.push(b'\n');
    fs::write(&json_path, json).map_err(|e| Error::io(&json_path, e))?;
    Ok(json_path)
}

/// Mean and population standard deviation of a sample.
pub(crate) fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.max(0.0).sqrt())
}
