//! Small dense Hermitian helpers.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Iteration cap for [`max_eigenvalue`].
pub const POWER_ITERATION_CAP: usize = 10_000;

/// `(A + A^H) / 2`.
pub fn hermitian_part(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (a + a.adjoint()).scale(0.5)
}

/// `max_ij |A_ij − conj(A_ji)|`.
pub fn max_asymmetry(a: &DMatrix<Complex64>) -> f64 {
    let n = a.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Plain power steps tried before the iteration operator is squared.
const STEPS_PER_SQUARING: usize = 64;
const MAX_SQUARINGS: usize = 12;

/// Dominant eigenvalue of a Hermitian positive-semidefinite matrix by power
/// iteration.
///
/// Starts from the normalized all-ones vector and stops once the relative
/// eigen-residual `‖Av − λ̂v‖ / λ̂` drops to `tol`. When the top of the
/// spectrum is crowded, the iteration operator is replaced by its square
/// (normalized) every [`STEPS_PER_SQUARING`] steps, so the convergence ratio
/// `λ_2/λ_1` is raised to successive powers of two. The residual is always
/// measured against `A` itself. The zero matrix returns 0.
pub fn max_eigenvalue(a: &DMatrix<Complex64>, tol: f64) -> Result<f64> {
    let n = a.nrows();
    if n == 0 || a.norm() == 0.0 {
        return Ok(0.0);
    }
    let mut v = DVector::from_element(n, Complex64::new(1.0 / (n as f64).sqrt(), 0.0));
    if (a * &v).norm() == 0.0 {
        // All-ones may sit in the null space; restart from a generic vector.
        v = DVector::from_fn(n, |k, _| Complex64::from_polar(1.0, 0.7 * (k * k) as f64 + 0.3 * k as f64));
        v.normalize_mut();
    }
    let mut op = a.clone();
    let mut squarings = 0;
    for step in 1..=POWER_ITERATION_CAP {
        let av = a * &v;
        let lambda = v.dotc(&av).re;
        if lambda > 0.0 {
            let residual = (&av - &v * Complex64::new(lambda, 0.0)).norm();
            if residual <= tol * lambda {
                return Ok(lambda);
            }
        }
        if step % STEPS_PER_SQUARING == 0 && squarings < MAX_SQUARINGS {
            let sq = &op * &op;
            let scale = sq.norm();
            if scale > 0.0 && scale.is_finite() {
                op = hermitian_part(&sq.unscale(scale));
                squarings += 1;
            }
        }
        let w = &op * &v;
        let norm = w.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Numerical("power iteration collapsed".into()));
        }
        v = w.unscale(norm);
    }
    Err(Error::EigenvalueStalled(POWER_ITERATION_CAP))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(values: &[f64]) -> DMatrix<Complex64> {
        DMatrix::from_diagonal(&DVector::from_iterator(
            values.len(),
            values.iter().map(|&x| Complex64::new(x, 0.0)),
        ))
    }

    #[test]
    fn identity_has_unit_eigenvalue() {
        let eye = DMatrix::<Complex64>::identity(5, 5);
        assert!((max_eigenvalue(&eye, 1e-12).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_dominant_entry() {
        let l = max_eigenvalue(&diag(&[1.0, 2.0, 5.0]), 1e-10).unwrap();
        assert!((l - 5.0).abs() < 1e-9);
    }

    #[test]
    fn zero_matrix() {
        assert_eq!(max_eigenvalue(&DMatrix::zeros(3, 3), 1e-9).unwrap(), 0.0);
    }

    #[test]
    fn null_space_start_vector() {
        // All-ones lies in the kernel of this rank-1 matrix.
        let u = DVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]);
        let a = &u * u.adjoint();
        assert!((max_eigenvalue(&a, 1e-12).unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn crowded_spectrum_converges() {
        // λ_2/λ_1 = 0.9999: plain power iteration would need ~2e5 steps.
        let mut values = vec![0.3; 10];
        values[2] = 1.0;
        values[7] = 0.9999;
        // Generic unitary: a Householder reflector, so all-ones is not an eigenvector.
        let w = DVector::from_fn(10, |k, _| Complex64::from_polar(1.0, 0.9 * (k * k) as f64 + 0.2));
        let w = w.normalize();
        let u = DMatrix::<Complex64>::identity(10, 10) - &w * w.adjoint() * Complex64::new(2.0, 0.0);
        let a = hermitian_part(&(&u * diag(&values) * u.adjoint()));
        let l = max_eigenvalue(&a, 1e-9).unwrap();
        assert!((l - 1.0).abs() < 1e-9, "{l}");
    }

    #[test]
    fn hermitian_helpers() {
        let mut a = diag(&[1.0, 2.0]);
        a[(0, 1)] = Complex64::new(0.0, 1.0);
        assert!((max_asymmetry(&a) - 1.0).abs() < 1e-15);
        let h = hermitian_part(&a);
        assert!(max_asymmetry(&h) == 0.0);
    }
}
