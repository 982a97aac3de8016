//! Orthogonal chirp reference waveforms.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::scene::Waveform;

/// Chirp reference as an `N_T × N` matrix and its column-stacked vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceWaveform {
    pub matrix: DMatrix<Complex64>,
    pub vector: Waveform,
}

/// `T_0(k, n) = exp(i2πk(n−1)/N)·exp(iπ(n−1)²/N) / √(N_T·N)` for 1-based
/// `k ≤ N_T`, `n ≤ N`. Rows are mutually orthogonal when `N_T ≤ N`.
pub fn chirp_reference(num_tx: usize, num_samples: usize) -> Result<ReferenceWaveform> {
    if num_tx == 0 || num_samples == 0 {
        return Err(Error::InvalidConfig("chirp dimensions must be positive".into()));
    }
    if num_tx > num_samples {
        return Err(Error::OrthogonalityUnavailable { num_tx, num_samples });
    }
    let n_f = num_samples as f64;
    let amplitude = 1.0 / ((num_tx * num_samples) as f64).sqrt();
    let matrix = DMatrix::from_fn(num_tx, num_samples, |row, col| {
        let k = (row + 1) as f64;
        let m = col as f64;
        // Reduce the quadratic phase index mod 2N before scaling to keep the
        // argument small for long chirps.
        let quad = ((col * col) % (2 * num_samples)) as f64;
        let phase = 2.0 * PI * k * m / n_f + PI * quad / n_f;
        Complex64::from_polar(amplitude, phase)
    });
    // Column-major storage of an N_T × N matrix is exactly column stacking.
    let vector = Waveform::from_vec(matrix.as_slice().to_vec());
    Ok(ReferenceWaveform { matrix, vector })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_entry_is_one_eighth() {
        let r = chirp_reference(4, 16).unwrap();
        let first = r.vector.as_slice()[0];
        assert!((first - Complex64::new(0.125, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn single_entry_reference() {
        let r = chirp_reference(1, 1).unwrap();
        assert_eq!(r.vector.len(), 1);
        assert!((r.vector.as_slice()[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn constant_modulus_and_unit_energy() {
        for (nt, n) in [(1, 1), (2, 5), (4, 16), (8, 16), (3, 7)] {
            let r = chirp_reference(nt, n).unwrap();
            assert!(r.vector.is_constant_modulus(1e-14));
            assert!((r.vector.as_vector().norm_squared() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn stacking_is_sample_major() {
        let r = chirp_reference(4, 16).unwrap();
        for n in 0..16 {
            for k in 0..4 {
                assert_eq!(r.vector.sample(n, 4)[k], r.matrix[(k, n)]);
            }
        }
    }

    #[test]
    fn rows_are_orthogonal() {
        let r = chirp_reference(4, 16).unwrap();
        let gram = &r.matrix * r.matrix.adjoint();
        let expected = DMatrix::<Complex64>::identity(4, 4).scale(0.25);
        for (g, e) in gram.iter().zip(expected.iter()) {
            assert!((g - e).norm() < 1e-12);
        }
    }

    #[test]
    fn too_many_antennas() {
        assert_eq!(
            chirp_reference(5, 4).unwrap_err(),
            Error::OrthogonalityUnavailable { num_tx: 5, num_samples: 4 }
        );
    }
}
