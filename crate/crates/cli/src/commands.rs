//! The four subcommands as library functions, so tests can drive them
//! without spawning processes.

use mimo_agp::echo::simulate_receive;
use mimo_agp::metrics::{beampattern as beampattern_samples, default_grid};
use mimo_agp::scene::{optimal_filter, sinr};
use mimo_agp::{chirp_reference, optimize_waveform, Waveform};
use std::path::Path;
use std::time::Instant;

use crate::artifacts::{self, RunSummary};
use crate::scenario::ScenarioFile;
use crate::CliError;

/// Writes the orthogonal chirp reference for `(num_tx, num_samples)`.
pub fn generate_reference(num_tx: usize, num_samples: usize, out: &Path) -> Result<Waveform, CliError> {
    let reference = chirp_reference(num_tx, num_samples)?;
    artifacts::write_waveform(out, &reference.vector)?;
    Ok(reference.vector)
}

/// Runs the design pipeline from the chirp reference and writes the full
/// artifact bundle into `out_dir` (created if missing).
///
/// Non-convergence of an inner solve is not an error: it is reported as
/// `converged = false` in the summary.
pub fn optimize(scenario: &ScenarioFile, out_dir: &Path) -> Result<RunSummary, CliError> {
    scenario.validate()?;
    let scene = scenario.scene()?;
    let config = scenario.pipeline_config();
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::Io(format!("{}: {e}", out_dir.display())))?;

    let start = Instant::now();
    let t0 = chirp_reference(scenario.num_tx, scenario.num_samples)?.vector;
    let run = optimize_waveform(&scene, &t0, &config)?;
    let grid = default_grid();
    let bp_reference = beampattern_samples(&t0, scenario.num_tx, scenario.num_samples, &grid)?;
    let bp_optimized = beampattern_samples(&run.final_waveform, scenario.num_tx, scenario.num_samples, &grid)?;
    let wall_time_s = start.elapsed().as_secs_f64();

    artifacts::write_waveform(&out_dir.join(artifacts::REFERENCE_FILE), &t0)?;
    artifacts::write_waveform(&out_dir.join(artifacts::WAVEFORM_FILE), &run.final_waveform)?;
    artifacts::write_trajectory(&out_dir.join(artifacts::TRAJECTORY_FILE), &run)?;
    artifacts::write_beampattern(&out_dir.join(artifacts::BEAMPATTERN_REFERENCE_FILE), &bp_reference)?;
    artifacts::write_beampattern(&out_dir.join(artifacts::BEAMPATTERN_OPTIMIZED_FILE), &bp_optimized)?;

    let summary = RunSummary {
        final_sinr_db: run.final_sinr_db,
        reference_sinr_db: run.reference_sinr_db,
        refinements: run.refinements,
        converged: run.all_converged(),
        wall_time_s,
        epsilon: scenario.epsilon,
        seed: scenario.seed,
    };
    artifacts::write_summary(&out_dir.join(artifacts::SUMMARY_FILE), &summary)?;
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub analytic_sinr: f64,
    pub empirical_sinr: f64,
    pub std_error: f64,
    pub draws: usize,
    pub passed: bool,
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "analytic SINR:  {:.12e}", self.analytic_sinr)?;
        writeln!(f, "empirical SINR: {:.12e}", self.empirical_sinr)?;
        writeln!(f, "std error:      {:.12e}", self.std_error)?;
        writeln!(f, "draws:          {}", self.draws)?;
        write!(f, "result:         {}", if self.passed { "PASS" } else { "FAIL" })
    }
}

/// Monte Carlo cross-check of the analytic SINR of the waveform in
/// `waveform_path` with its optimal filter. Passes when the two agree within
/// three standard errors.
pub fn validate(scenario: &ScenarioFile, waveform_path: &Path, draws: usize, seed: u64) -> Result<ValidationReport, CliError> {
    scenario.validate()?;
    let scene = scenario.scene()?;
    let t = artifacts::read_waveform(waveform_path)?;
    if t.len() != scene.waveform_len() {
        return Err(CliError::Config(format!(
            "{}: waveform has {} entries, scenario needs numTx·numSamples = {}",
            waveform_path.display(),
            t.len(),
            scene.waveform_len()
        )));
    }
    let f = optimal_filter(&t, &scene)?;
    let analytic_sinr = sinr(&t, &f, &scene)?;
    let est = simulate_receive(&t, &f, &scene, seed, draws)?;
    Ok(ValidationReport {
        analytic_sinr,
        empirical_sinr: est.empirical_sinr,
        std_error: est.std_error,
        draws: est.draws,
        passed: (est.empirical_sinr - analytic_sinr).abs() <= 3.0 * est.std_error,
    })
}

/// Writes the peak-normalized beampattern of a waveform file on the 361-point
/// grid.
pub fn beampattern(waveform_path: &Path, num_tx: usize, num_samples: usize, out: &Path) -> Result<(), CliError> {
    let t = artifacts::read_waveform(waveform_path)?;
    let samples = beampattern_samples(&t, num_tx, num_samples, &default_grid())?;
    artifacts::write_beampattern(out, &samples)
}
