//! Transmit beampattern and dB conversion.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scene::{transmit_steering, Waveform};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeampatternSample {
    pub angle_deg: f64,
    /// Power relative to the grid maximum.
    pub power_db: f64,
}

/// `10·log10(linear)`.
pub fn to_db(linear: f64) -> Result<f64> {
    if !(linear > 0.0) {
        return Err(Error::NonpositivePower(linear));
    }
    Ok(10.0 * linear.log10())
}

pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// 361 points from −90° to 90° in 0.5° steps.
pub fn default_grid() -> Vec<f64> {
    (0..=360).map(|i| -90.0 + 0.5 * i as f64).collect()
}

/// Spatial covariance `R = Σ_n conj(t_n)·t_n^T` of the per-sample antenna
/// vectors.
///
/// The conjugate matches the signal model, where the field radiated toward
/// `φ` at sample `n` is `a_t(φ)^T t_n`. With it, `a_t^H R a_t` equals
/// `Σ_n |a_t(φ)^T t_n|²`.
pub fn transmit_covariance(t: &Waveform, num_tx: usize, num_samples: usize) -> Result<DMatrix<Complex64>> {
    if t.len() != num_tx * num_samples {
        return Err(Error::Dimension {
            expected: num_tx * num_samples,
            got: t.len(),
        });
    }
    let mut r = DMatrix::zeros(num_tx, num_tx);
    for n in 0..num_samples {
        let s = t.sample(n, num_tx);
        for i in 0..num_tx {
            for j in 0..num_tx {
                r[(i, j)] += s[i].conj() * s[j];
            }
        }
    }
    Ok(r)
}

/// Raw transmit power `a_t^H(φ) R a_t(φ)` at each grid angle (degrees),
/// together with the largest imaginary residue seen before the real cast.
pub fn beampattern_linear(
    t: &Waveform,
    num_tx: usize,
    num_samples: usize,
    grid_deg: &[f64],
) -> Result<(Vec<f64>, f64)> {
    let r = transmit_covariance(t, num_tx, num_samples)?;
    let mut residue: f64 = 0.0;
    let values = grid_deg
        .iter()
        .map(|&deg| {
            let a = transmit_steering(deg.to_radians(), num_tx);
            let p = a.dotc(&(&r * &a));
            residue = residue.max(p.im.abs());
            p.re.max(0.0)
        })
        .collect();
    Ok((values, residue))
}

/// Transmit beampattern over `grid_deg`, normalized so the peak is 0 dB.
pub fn beampattern(
    t: &Waveform,
    num_tx: usize,
    num_samples: usize,
    grid_deg: &[f64],
) -> Result<Vec<BeampatternSample>> {
    if grid_deg.is_empty() {
        return Err(Error::InvalidConfig("beampattern grid is empty".into()));
    }
    let (values, _) = beampattern_linear(t, num_tx, num_samples, grid_deg)?;
    let peak = values.iter().cloned().fold(0.0, f64::max);
    grid_deg
        .iter()
        .zip(values)
        .map(|(&angle_deg, p)| {
            Ok(BeampatternSample {
                angle_deg,
                power_db: to_db(p / peak)?,
            })
        })
        .collect()
}
