//! Scenario files.
//!
//! A scenario is a TOML document whose keys mirror the experiment description:
//!
//! ```toml
//! numTx = 4
//! numRx = 8
//! numSamples = 16
//! targetAngleDeg = 15.0
//! targetPowerDb = 10.0
//! epsilon = 0.5
//! seed = 0
//!
//! [[clutter]]
//! angleDeg = -50.0
//! powerDb = 30.0
//!
//! [solver]
//! zeta = 1e-6
//! maxIterations = 5000
//!
//! [pipeline]
//! deltaMinRad = 0.001
//! ```
//!
//! Every key is optional; omitted keys take the defaults shown above (with
//! clutters at −50°, −10° and 40°, all 30 dB, and `deltaMinRad` derived from
//! the initial arc width). Unknown keys are rejected. Powers are in dB
//! relative to unit noise; this module is the only place dB and degrees are
//! converted.

use mimo_agp::metrics::from_db;
use mimo_agp::{Clutter, PipelineConfig, Scene, SolverConfig};
use serde::Deserialize;
use std::path::Path;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct ClutterSpec {
    pub angle_deg: f64,
    pub power_db: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct SolverOverrides {
    pub zeta: Option<f64>,
    pub max_iterations: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct PipelineOverrides {
    pub delta_min_rad: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase", default)]
pub struct ScenarioFile {
    pub num_tx: usize,
    pub num_rx: usize,
    pub num_samples: usize,
    pub target_angle_deg: f64,
    pub target_power_db: f64,
    pub clutter: Vec<ClutterSpec>,
    pub epsilon: f64,
    pub solver: SolverOverrides,
    pub pipeline: PipelineOverrides,
    pub seed: u64,
}

impl Default for ScenarioFile {
    fn default() -> Self {
        Self {
            num_tx: 4,
            num_rx: 8,
            num_samples: 16,
            target_angle_deg: 15.0,
            target_power_db: 10.0,
            clutter: [-50.0, -10.0, 40.0]
                .iter()
                .map(|&angle_deg| ClutterSpec { angle_deg, power_db: 30.0 })
                .collect(),
            epsilon: 0.5,
            solver: SolverOverrides::default(),
            pipeline: PipelineOverrides::default(),
            seed: 0,
        }
    }
}

fn field_error(field: &str, why: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{field}: {why}"))
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let scenario: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Checks every field before any computation runs.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.num_tx == 0 {
            return Err(field_error("numTx", "must be at least 1"));
        }
        if self.num_rx == 0 {
            return Err(field_error("numRx", "must be at least 1"));
        }
        if self.num_samples == 0 {
            return Err(field_error("numSamples", "must be at least 1"));
        }
        if self.num_tx > self.num_samples {
            return Err(field_error(
                "numTx",
                format!("{} exceeds numSamples = {}; the orthogonal reference needs numTx ≤ numSamples", self.num_tx, self.num_samples),
            ));
        }
        check_angle("targetAngleDeg", self.target_angle_deg)?;
        check_finite("targetPowerDb", self.target_power_db)?;
        for (i, c) in self.clutter.iter().enumerate() {
            check_angle(&format!("clutter[{i}].angleDeg"), c.angle_deg)?;
            check_finite(&format!("clutter[{i}].powerDb"), c.power_db)?;
        }
        if !(0.0..=2.0).contains(&self.epsilon) {
            return Err(field_error("epsilon", format!("{} must lie in [0, 2]", self.epsilon)));
        }
        if let Some(zeta) = self.solver.zeta {
            if !(zeta > 0.0 && zeta.is_finite()) {
                return Err(field_error("solver.zeta", format!("{zeta} must be positive")));
            }
        }
        if self.solver.max_iterations == Some(0) {
            return Err(field_error("solver.maxIterations", "must be at least 1"));
        }
        if let Some(d) = self.pipeline.delta_min_rad {
            if !(d > 0.0 && d.is_finite()) {
                return Err(field_error("pipeline.deltaMinRad", format!("{d} must be positive")));
            }
        }
        Ok(())
    }

    pub fn scene(&self) -> Result<Scene, CliError> {
        Scene::new(
            self.num_tx,
            self.num_rx,
            self.num_samples,
            self.target_angle_deg.to_radians(),
            from_db(self.target_power_db),
            self.clutter
                .iter()
                .map(|c| Clutter {
                    angle: c.angle_deg.to_radians(),
                    power_ratio: from_db(c.power_db),
                })
                .collect(),
        )
        .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn pipeline_config(&self) -> PipelineConfig {
        let defaults = SolverConfig::default();
        PipelineConfig {
            epsilon: self.epsilon,
            delta_min: self.pipeline.delta_min_rad,
            solver: SolverConfig {
                zeta: self.solver.zeta.unwrap_or(defaults.zeta),
                max_iterations: self.solver.max_iterations.unwrap_or(defaults.max_iterations),
                ..defaults
            },
            ..PipelineConfig::default()
        }
    }
}

fn check_finite(field: &str, x: f64) -> Result<(), CliError> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(field_error(field, "must be finite"))
    }
}

fn check_angle(field: &str, deg: f64) -> Result<(), CliError> {
    if (-90.0..=90.0).contains(&deg) {
        Ok(())
    } else {
        Err(field_error(field, format!("{deg} must lie in [-90, 90] degrees")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_the_default_scene() {
        let s = ScenarioFile::parse("").unwrap();
        assert_eq!(s, ScenarioFile::default());
        let scene = s.scene().unwrap();
        assert_eq!(scene.clutters().len(), 3);
        assert!((scene.target_power_ratio() - 10.0).abs() < 1e-12);
        assert!((scene.clutters()[0].power_ratio - 1000.0).abs() < 1e-9);
    }

    #[test]
    fn overrides_reach_the_pipeline() {
        let s = ScenarioFile::parse("epsilon = 1.2\n[solver]\nzeta = 1e-8\nmaxIterations = 77\n[pipeline]\ndeltaMinRad = 0.01\n").unwrap();
        let c = s.pipeline_config();
        assert_eq!(c.epsilon, 1.2);
        assert_eq!(c.solver.zeta, 1e-8);
        assert_eq!(c.solver.max_iterations, 77);
        assert_eq!(c.delta_min, Some(0.01));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = ScenarioFile::parse("numTX = 4\n").unwrap_err();
        assert!(err.to_string().contains("numTX"), "{err}");
        let err = ScenarioFile::parse("[solver]\ntolerance = 1.0\n").unwrap_err();
        assert!(err.to_string().contains("tolerance"), "{err}");
    }

    #[test]
    fn invalid_values_name_the_field() {
        for (text, field) in [
            ("numTx = 0", "numTx"),
            ("numTx = 32", "numTx"),
            ("epsilon = 2.5", "epsilon"),
            ("targetAngleDeg = 120.0", "targetAngleDeg"),
            ("[solver]\nzeta = -1.0", "solver.zeta"),
            ("[[clutter]]\nangleDeg = 95.0\npowerDb = 30.0", "clutter[0].angleDeg"),
        ] {
            let err = ScenarioFile::parse(text).unwrap_err();
            assert_eq!(err.exit_code(), 1);
            assert!(err.to_string().contains(field), "{text}: {err}");
        }
    }

    #[test]
    fn empty_clutter_list_is_allowed() {
        let s = ScenarioFile::parse("clutter = []").unwrap();
        assert!(s.scene().unwrap().clutters().is_empty());
    }
}
