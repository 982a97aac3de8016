//! Accelerated gradient projection for one relaxed QCQP subproblem.
//!
//! With `Ψ` fixed, the waveform subproblem is
//!
//! ```text
//! maximize  t^H P t   over  t(k) ∈ hull of the arc k (radius 1/√(N_T·N))
//! ```
//!
//! where `P = Ψ − λI` and `λ ≥ λ_max(Ψ)`, so `P` is negative semidefinite and
//! the objective is concave. On constant-modulus vectors (`‖t‖² = 1`) the
//! shift only subtracts `λ`, so `Ψ` and `P` share maximizers there.
//!
//! Each iteration takes a FISTA-interpolated point
//! `v = t_n + (n−1)/(n+2)·(t_n − t_{n−1})`, a gradient-ascent step
//! `v + τ·2Pv` with `τ = 1/(2λ)`, and the closed-form projection onto the
//! arc hulls. The final iterate is pushed back to constant modulus by keeping
//! only its phases.
//!
//! Cost per iteration is one dense `P·v` product (`O(N_T²N²)`) plus an
//! `O(N_T·N)` projection.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::max_eigenvalue;
use crate::projection::{project_waveform, ArcRegion};
use crate::scene::Waveform;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Stop once `‖t_n − t_{n−1}‖₂ ≤ zeta` between projected iterates.
    pub zeta: f64,
    pub max_iterations: usize,
    /// `λ = (1 + lambda_margin)·λ_max(Ψ)`.
    pub lambda_margin: f64,
    pub power_iter_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            zeta: 1e-6,
            max_iterations: 5000,
            lambda_margin: 1e-6,
            power_iter_tol: 1e-9,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.zeta > 0.0 && self.zeta.is_finite()) {
            return Err(Error::InvalidConfig(format!("zeta must be positive, got {}", self.zeta)));
        }
        if self.max_iterations < 2 {
            return Err(Error::InvalidConfig(format!(
                "maxIterations must be at least 2, got {}",
                self.max_iterations
            )));
        }
        if !(self.lambda_margin >= 0.0 && self.lambda_margin.is_finite()) {
            return Err(Error::InvalidConfig("lambdaMargin must be nonnegative".into()));
        }
        if !(self.power_iter_tol > 0.0) {
            return Err(Error::InvalidConfig("powerIterTol must be positive".into()));
        }
        Ok(())
    }
}

/// `Ψ`, the shift `λ`, `P = Ψ − λI` and the stepsize `τ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubproblemMatrices {
    pub psi: DMatrix<Complex64>,
    pub lambda: f64,
    pub p: DMatrix<Complex64>,
    pub tau: f64,
}

impl SubproblemMatrices {
    /// Relaxed objective `t^H P t`.
    pub fn objective(&self, t: &DVector<Complex64>) -> f64 {
        t.dotc(&(&self.p * t)).re
    }
}

/// Shifts `Ψ` by its (margined) dominant eigenvalue.
///
/// `τ = 1/(2λ)`: the gradient `2Pt` is Lipschitz with constant
/// `2·max|eig(P)| ≤ 2λ`, so this step never overshoots.
pub fn build_subproblem(psi: &DMatrix<Complex64>, config: &SolverConfig) -> Result<SubproblemMatrices> {
    config.validate()?;
    if !psi.is_square() {
        return Err(Error::Dimension {
            expected: psi.nrows(),
            got: psi.ncols(),
        });
    }
    let lambda_max = max_eigenvalue(psi, config.power_iter_tol)?;
    let lambda = (1.0 + config.lambda_margin) * lambda_max;
    if !(lambda > 0.0) {
        return Err(Error::Numerical("objective matrix has no positive eigenvalue".into()));
    }
    let mut p = psi.clone();
    for k in 0..p.nrows() {
        p[(k, k)] -= lambda;
    }
    Ok(SubproblemMatrices {
        psi: psi.clone(),
        lambda,
        p,
        tau: 1.0 / (2.0 * lambda),
    })
}

/// Interpolation factor `(n−1)/(n+2)` for iteration `n ≥ 1`.
pub fn interpolation_factor(iter_index: usize) -> f64 {
    (iter_index as f64 - 1.0) / (iter_index as f64 + 2.0)
}

/// One unprojected FISTA step: extrapolate, then step along the gradient `2Pv`.
///
/// The step ascends `t^H P t`. `P` is negative semidefinite, so
/// subtracting the gradient would move toward the minimizer.
pub fn fista_step(
    t_current: &DVector<Complex64>,
    t_previous: &DVector<Complex64>,
    iter_index: usize,
    sub: &SubproblemMatrices,
) -> Result<DVector<Complex64>> {
    let n = sub.p.nrows();
    for len in [t_current.len(), t_previous.len()] {
        if len != n {
            return Err(Error::Dimension { expected: n, got: len });
        }
    }
    if iter_index == 0 {
        return Err(Error::InvalidConfig("FISTA iteration index starts at 1".into()));
    }
    let c = interpolation_factor(iter_index);
    let v = t_current + (t_current - t_previous) * Complex64::new(c, 0.0);
    let grad = &sub.p * &v * Complex64::new(2.0, 0.0);
    Ok(&v + grad * Complex64::new(sub.tau, 0.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubproblemResult {
    /// Constant-modulus output.
    pub waveform: Waveform,
    /// Relaxed iterate the output was normalized from.
    pub relaxed: DVector<Complex64>,
    pub relaxed_objective: f64,
    pub iterations: usize,
    /// `t^H P t` of each projected iterate, starting with the projected start.
    pub objective_trace: Vec<f64>,
    pub converged: bool,
    pub lambda: f64,
}

impl SubproblemResult {
    /// Running maximum of the relaxed objective.
    pub fn best_so_far(&self) -> Vec<f64> {
        self.objective_trace
            .iter()
            .scan(f64::NEG_INFINITY, |best, &x| {
                *best = best.max(x);
                Some(*best)
            })
            .collect()
    }
}

/// Keeps only the phase of each entry, clamped into its arc.
///
/// Hull points of arcs wider than π can have phases outside the arc (or be
/// zero); those are moved to the nearest arc point.
pub fn normalize_to_arc(t: &DVector<Complex64>, region: &ArcRegion) -> Waveform {
    let rho = Waveform::unit_modulus(t.len());
    Waveform::new(DVector::from_iterator(
        t.len(),
        t.iter().enumerate().map(|(k, z)| {
            let phase = if z.norm() > 0.0 {
                region.clamp_phase(k, z.arg())
            } else {
                region.omega()[k] + region.delta() / 2.0
            };
            Complex64::from_polar(rho, phase)
        }),
    ))
}

/// Solves a prepared subproblem.
pub fn agp_solve_prepared(
    sub: &SubproblemMatrices,
    region: &ArcRegion,
    start: &Waveform,
    config: &SolverConfig,
) -> Result<SubproblemResult> {
    config.validate()?;
    let n = sub.p.nrows();
    if start.len() != n || region.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: if start.len() != n { start.len() } else { region.len() },
        });
    }

    let mut current = project_waveform(start.as_vector(), region)?;
    let mut trace = vec![sub.objective(&current)];

    if region.delta() == 0.0 {
        return Ok(SubproblemResult {
            waveform: normalize_to_arc(&current, region),
            relaxed_objective: trace[0],
            relaxed: current,
            iterations: 0,
            objective_trace: trace,
            converged: true,
            lambda: sub.lambda,
        });
    }

    let mut previous = current.clone();
    let mut best = (trace[0], current.clone());
    let mut converged = false;
    let mut iterations = 0;
    while iterations < config.max_iterations {
        iterations += 1;
        let step = fista_step(&current, &previous, iterations, sub)?;
        let next = project_waveform(&step, region)?;
        if cfg!(debug_assertions) {
            for (k, z) in next.iter().enumerate() {
                let u = z / Waveform::unit_modulus(n);
                assert!(region.hull_contains_unit(k, u, 1e-9), "entry {k} at {u} left its hull ({:?})", region.geometry(k));
            }
        }
        let change = (&next - &current).norm();
        previous = std::mem::replace(&mut current, next);
        let objective = sub.objective(&current);
        trace.push(objective);
        if objective > best.0 {
            best = (objective, current.clone());
        }
        if change <= config.zeta {
            converged = true;
            break;
        }
    }

    let relaxed = if converged { current } else { best.1 };
    Ok(SubproblemResult {
        waveform: normalize_to_arc(&relaxed, region),
        relaxed_objective: sub.objective(&relaxed),
        relaxed,
        iterations,
        objective_trace: trace,
        converged,
        lambda: sub.lambda,
    })
}

/// Accelerated gradient projection on `max t^H(Ψ − λI)t` over the arc hulls.
pub fn agp_solve(
    psi: &DMatrix<Complex64>,
    region: &ArcRegion,
    start: &Waveform,
    config: &SolverConfig,
) -> Result<SubproblemResult> {
    let sub = build_subproblem(psi, config)?;
    agp_solve_prepared(&sub, region, start, config)
}
