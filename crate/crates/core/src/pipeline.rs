//! Outer sequential-relaxation loop.
//!
//! Each refinement fixes `Ψ` at the current waveform, solves the relaxed
//! subproblem over the current arc hulls, records the SINR reached with the
//! optimal receive filter, and halves every arc, keeping the half that holds
//! the new phase. The loop stops once the arc width drops to `delta_min`.

use crate::error::{Error, Result};
use crate::metrics::to_db;
use crate::projection::{similarity_half_width, ArcRegion};
use crate::scene::{optimal_filter, psi, sinr, ReceiveFilter, Scene, Waveform};
use crate::solver::{agp_solve, SolverConfig};

/// Phase tolerance accepted by [`halve_region`].
pub const REFINEMENT_PHASE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    /// Similarity `ε ∈ [0, 2]`.
    pub epsilon: f64,
    /// Refinement stop width in radians; `None` picks
    /// `max(1e-3, δ_0 / 2^10)`.
    pub delta_min: Option<f64>,
    pub solver: SolverConfig,
    /// Rebuild `Ψ` from the latest waveform at every refinement. When false,
    /// `Ψ` is built once from the reference.
    pub psi_update_each_refinement: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.5,
            delta_min: None,
            solver: SolverConfig::default(),
            psi_update_each_refinement: true,
        }
    }
}

impl PipelineConfig {
    pub fn with_epsilon(epsilon: f64) -> Self {
        Self {
            epsilon,
            ..Self::default()
        }
    }

    /// Stop width actually used for an initial width `delta0 > 0`.
    pub fn resolved_delta_min(&self, delta0: f64) -> Result<f64> {
        match self.delta_min {
            Some(d) => {
                if !(d > 0.0 && d < delta0) {
                    return Err(Error::InvalidConfig(format!(
                        "deltaMin {d} must lie in (0, {delta0})"
                    )));
                }
                Ok(d)
            }
            None => {
                let d = (1e-3f64).max(delta0 / 1024.0);
                Ok(if d < delta0 { d } else { delta0 / 2.0 })
            }
        }
    }
}

/// One solved subproblem.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinementStep {
    pub delta: f64,
    pub sinr: f64,
    pub sinr_db: f64,
    pub inner_iterations: usize,
    pub converged: bool,
    /// Relaxed objective per inner iteration.
    pub objective_trace: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub reference_sinr_db: f64,
    pub sinr_trajectory_db: Vec<f64>,
    pub per_refinement_delta: Vec<f64>,
    pub steps: Vec<RefinementStep>,
    /// Best waveform seen, including the reference.
    pub final_waveform: Waveform,
    pub final_filter: ReceiveFilter,
    pub final_sinr: f64,
    pub final_sinr_db: f64,
    pub refinements: usize,
}

impl RunRecord {
    pub fn all_converged(&self) -> bool {
        self.steps.iter().all(|s| s.converged)
    }

    /// Running maximum of the per-refinement SINR, in dB.
    pub fn best_so_far_db(&self) -> Vec<f64> {
        self.sinr_trajectory_db
            .iter()
            .scan(self.reference_sinr_db, |best, &x| {
                *best = best.max(x);
                Some(*best)
            })
            .collect()
    }
}

/// Halves every arc, keeping the half `[ω_k, ω_k + δ/2]` or
/// `[ω_k + δ/2, ω_k + δ]` that contains the solved phase. A phase exactly at
/// the midpoint stays in the lower half.
pub fn halve_region(region: &ArcRegion, solved: &Waveform) -> Result<ArcRegion> {
    if solved.len() != region.len() {
        return Err(Error::Dimension {
            expected: region.len(),
            got: solved.len(),
        });
    }
    let delta = region.delta();
    let half = delta / 2.0;
    let omega = solved
        .as_slice()
        .iter()
        .enumerate()
        .map(|(k, z)| {
            let phase = z.arg();
            let lower = region.omega()[k];
            if !region.contains_phase(k, phase, REFINEMENT_PHASE_TOL) {
                return Err(Error::InfeasibleRefinement {
                    index: k,
                    phase,
                    lower,
                    upper: lower + delta,
                });
            }
            let offset = region.offset_of(k, phase, REFINEMENT_PHASE_TOL);
            Ok(if offset <= half { lower } else { lower + half })
        })
        .collect::<Result<Vec<_>>>()?;
    ArcRegion::new(omega, half)
}

/// Designs a waveform for `scene` starting from the reference `t0`.
pub fn optimize_waveform(scene: &Scene, t0: &Waveform, config: &PipelineConfig) -> Result<RunRecord> {
    config.solver.validate()?;
    if t0.len() != scene.waveform_len() {
        return Err(Error::Dimension {
            expected: scene.waveform_len(),
            got: t0.len(),
        });
    }
    if !t0.is_constant_modulus(1e-9) {
        return Err(Error::InvalidConfig("reference waveform is not constant-modulus".into()));
    }
    let half = similarity_half_width(config.epsilon)?;

    let reference_filter = optimal_filter(t0, scene)?;
    let reference_sinr = sinr(t0, &reference_filter, scene)?;
    let reference_sinr_db = to_db(reference_sinr)?;

    if half == 0.0 {
        return Ok(RunRecord {
            reference_sinr_db,
            sinr_trajectory_db: vec![reference_sinr_db],
            per_refinement_delta: vec![0.0],
            steps: vec![RefinementStep {
                delta: 0.0,
                sinr: reference_sinr,
                sinr_db: reference_sinr_db,
                inner_iterations: 0,
                converged: true,
                objective_trace: Vec::new(),
            }],
            final_waveform: t0.clone(),
            final_filter: reference_filter,
            final_sinr: reference_sinr,
            final_sinr_db: reference_sinr_db,
            refinements: 0,
        });
    }

    let mut region = ArcRegion::from_similarity(t0, config.epsilon)?;
    let delta_min = config.resolved_delta_min(region.delta())?;
    let frozen_psi = if config.psi_update_each_refinement {
        None
    } else {
        Some(psi(t0, scene)?)
    };

    let mut current = t0.clone();
    let mut best = (reference_sinr, t0.clone(), reference_filter);
    let mut steps = Vec::new();
    loop {
        let psi_matrix = match &frozen_psi {
            Some(p) => p.clone(),
            None => psi(&current, scene)?,
        };
        let solved = agp_solve(&psi_matrix, &region, &current, &config.solver)?;
        let filter = optimal_filter(&solved.waveform, scene)?;
        let value = sinr(&solved.waveform, &filter, scene)?;
        steps.push(RefinementStep {
            delta: region.delta(),
            sinr: value,
            sinr_db: to_db(value)?,
            inner_iterations: solved.iterations,
            converged: solved.converged,
            objective_trace: solved.objective_trace,
        });
        if value > best.0 {
            best = (value, solved.waveform.clone(), filter);
        }
        current = solved.waveform;
        region = halve_region(&region, &current)?;
        if region.delta() <= delta_min {
            break;
        }
    }

    let (final_sinr, final_waveform, final_filter) = best;
    Ok(RunRecord {
        reference_sinr_db,
        sinr_trajectory_db: steps.iter().map(|s| s.sinr_db).collect(),
        per_refinement_delta: steps.iter().map(|s| s.delta).collect(),
        refinements: steps.len(),
        steps,
        final_waveform,
        final_filter,
        final_sinr,
        final_sinr_db: to_db(final_sinr)?,
    })
}
