//! Monte Carlo echo simulator.
//!
//! Draws target and clutter amplitudes as circular complex Gaussians with
//! variances `σ` and `I_m` and white noise with unit variance, forms the
//! received vector `r = α_0 M(φ_0) t + Σ_m α_m M(φ_m) t + n`, and measures the
//! power ratio of the target and disturbance components at the filter output.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scene::{ReceiveFilter, Scene, SteeringMatrix, Waveform};

pub const MIN_DRAWS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EchoEstimate {
    pub empirical_sinr: f64,
    /// Delta-method standard error of `empirical_sinr`.
    pub std_error: f64,
    pub draws: usize,
}

fn complex_normal<R: Rng>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

/// Empirical output SINR of filter `f` over `draws` independent echoes.
///
/// Bit-reproducible for a given `seed`.
pub fn simulate_receive(
    t: &Waveform,
    f: &ReceiveFilter,
    scene: &Scene,
    seed: u64,
    draws: usize,
) -> Result<EchoEstimate> {
    if draws < MIN_DRAWS {
        return Err(Error::InsufficientDraws(draws));
    }
    if t.len() != scene.waveform_len() {
        return Err(Error::Dimension {
            expected: scene.waveform_len(),
            got: t.len(),
        });
    }
    if f.len() != scene.echo_len() {
        return Err(Error::Dimension {
            expected: scene.echo_len(),
            got: f.len(),
        });
    }
    let f = f.as_vector();
    let target_echo = SteeringMatrix::new(scene.target_angle(), scene).apply(t.as_vector());
    let clutter_echoes: Vec<(f64, DVector<Complex64>)> = scene
        .clutters()
        .iter()
        .map(|c| (c.power_ratio, SteeringMatrix::new(c.angle, scene).apply(t.as_vector())))
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = scene.echo_len();
    let mut received = DVector::<Complex64>::zeros(len);
    let (mut sum_s, mut sum_i, mut sum_ss, mut sum_ii, mut sum_si) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for _ in 0..draws {
        // Disturbance: clutter plus noise, built as a full received vector.
        for z in received.iter_mut() {
            *z = complex_normal(&mut rng, 1.0);
        }
        for (power, echo) in &clutter_echoes {
            let alpha = complex_normal(&mut rng, *power);
            received.axpy(alpha, echo, Complex64::new(1.0, 0.0));
        }
        let alpha0 = complex_normal(&mut rng, scene.target_power_ratio());
        let signal = (alpha0 * f.dotc(&target_echo)).norm_sqr();
        let disturbance = f.dotc(&received).norm_sqr();
        sum_s += signal;
        sum_i += disturbance;
        sum_ss += signal * signal;
        sum_ii += disturbance * disturbance;
        sum_si += signal * disturbance;
    }

    let n = draws as f64;
    let (mean_s, mean_i) = (sum_s / n, sum_i / n);
    if mean_i <= 0.0 {
        return Err(Error::DegenerateFilter);
    }
    let var_s = (sum_ss / n - mean_s * mean_s) * n / (n - 1.0);
    let var_i = (sum_ii / n - mean_i * mean_i) * n / (n - 1.0);
    let cov = (sum_si / n - mean_s * mean_i) * n / (n - 1.0);
    let ratio = mean_s / mean_i;
    let var_ratio = (var_s - 2.0 * ratio * cov + ratio * ratio * var_i) / (mean_i * mean_i * n);
    Ok(EchoEstimate {
        empirical_sinr: ratio,
        std_error: var_ratio.max(0.0).sqrt(),
        draws,
    })
}
