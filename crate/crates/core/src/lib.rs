//! Constant-modulus MIMO radar waveform design.
//!
//! The transmit waveform of a colocated MIMO radar is chosen to maximize the
//! receive SINR against signal-dependent clutter, subject to a constant-modulus
//! constraint and an infinity-norm similarity constraint to a reference
//! waveform. The non-convex problem is attacked by a sequence of convex QCQP
//! relaxations, each solved by accelerated gradient projection (FISTA steps
//! followed by a closed-form projection onto per-entry arc hulls).
//!
//! Module map:
//! - [`scene`]: signal model, clutter covariance, optimal filter, SINR, `Ψ`.
//! - [`echo`]: Monte Carlo echo simulator used to validate the analytic SINR.
//! - [`reference`]: orthogonal chirp reference waveforms.
//! - [`projection`]: arc regions and their closed-form projector.
//! - [`linalg`]: power iteration and Hermitian helpers.
//! - [`solver`]: one relaxed subproblem via accelerated gradient projection.
//! - [`pipeline`]: outer refinement loop with phase-interval halving.
//! - [`metrics`]: transmit beampattern and dB conversion.

pub mod echo;
pub mod error;
pub mod linalg;
pub mod metrics;
pub mod pipeline;
pub mod projection;
pub mod reference;
pub mod scene;
pub mod solver;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use pipeline::{optimize_waveform, PipelineConfig, RunRecord};
pub use projection::ArcRegion;
pub use reference::{chirp_reference, ReferenceWaveform};
pub use scene::{Clutter, ReceiveFilter, Scene, SteeringMatrix, Waveform};
pub use solver::{agp_solve, SolverConfig, SubproblemMatrices, SubproblemResult};
