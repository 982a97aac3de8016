//! CSV artifacts and the run summary.
//!
//! Floats are written in scientific notation with 16 significant digits, so a
//! written waveform re-reads to the same vector up to the last bit or two and
//! reruns produce byte-identical files.

use mimo_agp::metrics::BeampatternSample;
use mimo_agp::{Complex64, RunRecord, Waveform};
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::CliError;

pub const WAVEFORM_FILE: &str = "waveform.csv";
pub const REFERENCE_FILE: &str = "reference_waveform.csv";
pub const TRAJECTORY_FILE: &str = "sinr_trajectory.csv";
pub const BEAMPATTERN_REFERENCE_FILE: &str = "beampattern_reference.csv";
pub const BEAMPATTERN_OPTIMIZED_FILE: &str = "beampattern_optimized.csv";
pub const SUMMARY_FILE: &str = "run_summary.toml";

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.15e}")
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn write_rows(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_error(path, e))?;
    w.write_record(header).map_err(|e| io_error(path, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| io_error(path, e))?;
    }
    w.flush().map_err(|e| io_error(path, e))
}

/// Columns `index, real, imag, phase_rad`, one row per entry in
/// sample-major order (index 0 is antenna 0 at sample 0).
pub fn write_waveform(path: &Path, t: &Waveform) -> Result<(), CliError> {
    write_rows(
        path,
        &["index", "real", "imag", "phase_rad"],
        t.as_slice()
            .iter()
            .enumerate()
            .map(|(k, z)| vec![k.to_string(), fmt_f64(z.re), fmt_f64(z.im), fmt_f64(z.arg())]),
    )
}

#[derive(Debug, Deserialize)]
struct WaveformRow {
    index: usize,
    real: f64,
    imag: f64,
    #[allow(dead_code)]
    phase_rad: f64,
}

/// Reads a waveform CSV. Rows must appear in index order starting at 0; the
/// phase column is informational and ignored.
pub fn read_waveform(path: &Path) -> Result<Waveform, CliError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| io_error(path, e))?;
    let mut entries = Vec::new();
    for (expected, row) in r.deserialize::<WaveformRow>().enumerate() {
        let row = row.map_err(|e| io_error(path, e))?;
        if row.index != expected {
            return Err(io_error(path, format!("row {} has index {}, expected {expected}", expected + 1, row.index)));
        }
        entries.push(Complex64::new(row.real, row.imag));
    }
    if entries.is_empty() {
        return Err(io_error(path, "no waveform rows"));
    }
    Ok(Waveform::from_vec(entries))
}

/// Columns `refinement, delta_rad, sinr_db`. Row 0 is the reference waveform,
/// listed with width 0 since it is the only point of a zero-width region;
/// row `i` is the solve over the `i`-th (halved) region.
pub fn write_trajectory(path: &Path, run: &RunRecord) -> Result<(), CliError> {
    let first = vec!["0".to_string(), fmt_f64(0.0), fmt_f64(run.reference_sinr_db)];
    let rest = run
        .per_refinement_delta
        .iter()
        .zip(&run.sinr_trajectory_db)
        .take(run.refinements)
        .enumerate()
        .map(|(i, (d, s))| vec![(i + 1).to_string(), fmt_f64(*d), fmt_f64(*s)]);
    write_rows(path, &["refinement", "delta_rad", "sinr_db"], std::iter::once(first).chain(rest))
}

pub fn write_beampattern(path: &Path, samples: &[BeampatternSample]) -> Result<(), CliError> {
    write_rows(
        path,
        &["angle_deg", "power_db"],
        samples.iter().map(|s| vec![fmt_f64(s.angle_deg), fmt_f64(s.power_db)]),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub final_sinr_db: f64,
    pub reference_sinr_db: f64,
    pub refinements: usize,
    pub converged: bool,
    pub wall_time_s: f64,
    pub epsilon: f64,
    pub seed: u64,
}

pub fn write_summary(path: &Path, summary: &RunSummary) -> Result<(), CliError> {
    let text = toml::to_string(summary).map_err(|e| io_error(path, e))?;
    std::fs::write(path, text).map_err(|e| io_error(path, e))
}

pub fn read_summary(path: &Path) -> Result<RunSummary, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    toml::from_str(&text).map_err(|e| io_error(path, e))
}
