//! Colocated narrowband MIMO signal model.
//!
//! A waveform `t` of length `N_T·N` is stored sample-major: entries
//! `n·N_T .. (n+1)·N_T` hold the antenna vector transmitted at sample `n`.
//! The echo from direction `φ` is `M(φ)·t` with
//! `M(φ) = I_N ⊗ a_r(φ)·a_t(φ)^T`, so every sample block of the echo is
//! `a_r(φ)·(a_t(φ)^T t_n)`.
//!
//! All powers are linear ratios to the noise variance, which is fixed to one.
//! Angles are radians.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use num_complex::Complex64;

use crate::error::{Error, Result};

const HALF_PI: f64 = std::f64::consts::FRAC_PI_2;

/// A signal-dependent clutter source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Clutter {
    /// Direction of arrival, radians.
    pub angle: f64,
    /// `E[|α_m|²] / σ_n²`, linear.
    pub power_ratio: f64,
}

/// Array geometry plus target and clutter parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    num_tx: usize,
    num_rx: usize,
    num_samples: usize,
    target_angle: f64,
    target_power_ratio: f64,
    clutters: Vec<Clutter>,
}

fn check_angle(what: &str, angle: f64) -> Result<()> {
    if !(angle.is_finite() && angle > -HALF_PI && angle < HALF_PI) {
        return Err(Error::InvalidScene(format!(
            "{what} {angle} rad outside (-pi/2, pi/2)"
        )));
    }
    Ok(())
}

fn check_power(what: &str, power: f64) -> Result<()> {
    if !(power.is_finite() && power > 0.0) {
        return Err(Error::InvalidScene(format!("{what} {power} must be positive")));
    }
    Ok(())
}

impl Scene {
    pub fn new(
        num_tx: usize,
        num_rx: usize,
        num_samples: usize,
        target_angle: f64,
        target_power_ratio: f64,
        clutters: Vec<Clutter>,
    ) -> Result<Self> {
        for (name, v) in [("numTx", num_tx), ("numRx", num_rx), ("numSamples", num_samples)] {
            if v == 0 {
                return Err(Error::InvalidScene(format!("{name} must be positive")));
            }
        }
        check_angle("target angle", target_angle)?;
        check_power("target power ratio", target_power_ratio)?;
        for (m, c) in clutters.iter().enumerate() {
            check_angle(&format!("clutter {m} angle"), c.angle)?;
            check_power(&format!("clutter {m} power ratio"), c.power_ratio)?;
        }
        Ok(Self {
            num_tx,
            num_rx,
            num_samples,
            target_angle,
            target_power_ratio,
            clutters,
        })
    }

    pub fn num_tx(&self) -> usize {
        self.num_tx
    }

    pub fn num_rx(&self) -> usize {
        self.num_rx
    }

    pub fn num_samples(&self) -> usize {
        self.num_samples
    }

    pub fn target_angle(&self) -> f64 {
        self.target_angle
    }

    pub fn target_power_ratio(&self) -> f64 {
        self.target_power_ratio
    }

    pub fn clutters(&self) -> &[Clutter] {
        &self.clutters
    }

    /// Length of a transmit waveform, `N_T·N`.
    pub fn waveform_len(&self) -> usize {
        self.num_tx * self.num_samples
    }

    /// Length of a received echo / receive filter, `N_R·N`.
    pub fn echo_len(&self) -> usize {
        self.num_rx * self.num_samples
    }

    fn check_waveform(&self, t: &Waveform) -> Result<()> {
        if t.len() != self.waveform_len() {
            return Err(Error::Dimension {
                expected: self.waveform_len(),
                got: t.len(),
            });
        }
        Ok(())
    }

    fn check_filter(&self, f: &ReceiveFilter) -> Result<()> {
        if f.len() != self.echo_len() {
            return Err(Error::Dimension {
                expected: self.echo_len(),
                got: f.len(),
            });
        }
        Ok(())
    }
}

/// Transmit waveform, sample-major stacking of per-sample antenna vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform(DVector<Complex64>);

impl Waveform {
    pub fn new(entries: DVector<Complex64>) -> Self {
        Self(entries)
    }

    pub fn from_vec(entries: Vec<Complex64>) -> Self {
        Self(DVector::from_vec(entries))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_vector(&self) -> &DVector<Complex64> {
        &self.0
    }

    pub fn into_vector(self) -> DVector<Complex64> {
        self.0
    }

    pub fn as_slice(&self) -> &[Complex64] {
        self.0.as_slice()
    }

    /// Antenna vector of sample `n` (0-based).
    pub fn sample(&self, n: usize, num_tx: usize) -> &[Complex64] {
        &self.0.as_slice()[n * num_tx..(n + 1) * num_tx]
    }

    /// The modulus every entry of a constant-modulus waveform must have.
    pub fn unit_modulus(len: usize) -> f64 {
        1.0 / (len as f64).sqrt()
    }

    pub fn is_constant_modulus(&self, tol: f64) -> bool {
        let rho = Self::unit_modulus(self.len());
        self.0.iter().all(|z| (z.norm() - rho).abs() <= tol)
    }

    /// `max_k |t(k) − other(k)|`.
    pub fn max_abs_diff(&self, other: &Waveform) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `t^H A t`, real part.
    pub fn quadratic_form(&self, a: &DMatrix<Complex64>) -> f64 {
        self.0.dotc(&(a * &self.0)).re
    }
}

/// Linear FIR receive filter of length `N_R·N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceiveFilter(DVector<Complex64>);

impl ReceiveFilter {
    pub fn new(entries: DVector<Complex64>) -> Self {
        Self(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_vector(&self) -> &DVector<Complex64> {
        &self.0
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self(&self.0 * c)
    }
}

/// Half-wavelength ULA steering vector, `a(φ)[k] = exp(iπ·k·sin φ)`.
pub fn steering_vector(angle: f64, len: usize) -> DVector<Complex64> {
    let phase = std::f64::consts::PI * angle.sin();
    DVector::from_fn(len, |k, _| Complex64::from_polar(1.0, phase * k as f64))
}

/// Transmit steering vector `a_t(φ)` of an `num_tx`-element array.
pub fn transmit_steering(angle: f64, num_tx: usize) -> DVector<Complex64> {
    steering_vector(angle, num_tx)
}

/// `M(φ) = I_N ⊗ a_r(φ)·a_t(φ)^T`, kept in factored form.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeringMatrix {
    rx: DVector<Complex64>,
    tx: DVector<Complex64>,
    num_samples: usize,
}

impl SteeringMatrix {
    pub fn new(angle: f64, scene: &Scene) -> Self {
        Self {
            rx: steering_vector(angle, scene.num_rx),
            tx: steering_vector(angle, scene.num_tx),
            num_samples: scene.num_samples,
        }
    }

    pub fn rows(&self) -> usize {
        self.rx.len() * self.num_samples
    }

    pub fn cols(&self) -> usize {
        self.tx.len() * self.num_samples
    }

    /// The repeated diagonal block `a_r·a_t^T`.
    pub fn block(&self) -> DMatrix<Complex64> {
        &self.rx * self.tx.transpose()
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let block = self.block();
        let (br, bc) = block.shape();
        let mut m = DMatrix::zeros(self.rows(), self.cols());
        for n in 0..self.num_samples {
            m.view_mut((n * br, n * bc), (br, bc)).copy_from(&block);
        }
        m
    }

    /// `M·t` without forming `M`.
    pub fn apply(&self, t: &DVector<Complex64>) -> DVector<Complex64> {
        let (nr, nt) = (self.rx.len(), self.tx.len());
        let mut out = DVector::zeros(self.rows());
        for n in 0..self.num_samples {
            let beam: Complex64 = t.rows(n * nt, nt).dot(&self.tx);
            out.rows_mut(n * nr, nr).axpy(beam, &self.rx, Complex64::new(0.0, 0.0));
        }
        out
    }

    /// `M^H·y` without forming `M`.
    pub fn apply_adjoint(&self, y: &DVector<Complex64>) -> DVector<Complex64> {
        let (nr, nt) = (self.rx.len(), self.tx.len());
        let tx_conj = self.tx.map(|z| z.conj());
        let mut out = DVector::zeros(self.cols());
        for n in 0..self.num_samples {
            let gain: Complex64 = self.rx.dotc(&y.rows(n * nr, nr));
            out.rows_mut(n * nt, nt).axpy(gain, &tx_conj, Complex64::new(0.0, 0.0));
        }
        out
    }
}

/// `S̃(t) = Σ_m I_m·M(φ_m) t t^H M(φ_m)^H`; zero when the scene has no clutter.
pub fn clutter_covariance(t: &Waveform, scene: &Scene) -> Result<DMatrix<Complex64>> {
    scene.check_waveform(t)?;
    let len = scene.echo_len();
    let mut cov = DMatrix::zeros(len, len);
    for c in &scene.clutters {
        let echo = SteeringMatrix::new(c.angle, scene).apply(t.as_vector());
        cov.ger(
            Complex64::new(c.power_ratio, 0.0),
            &echo,
            &echo.map(|z| z.conj()),
            Complex64::new(1.0, 0.0),
        );
    }
    Ok(cov)
}

fn interference_factor(t: &Waveform, scene: &Scene) -> Result<Cholesky<Complex64, Dyn>> {
    let mut cov = clutter_covariance(t, scene)?;
    for k in 0..cov.nrows() {
        cov[(k, k)] += 1.0;
    }
    Cholesky::new(cov)
        .ok_or_else(|| Error::Numerical("interference-plus-noise covariance not positive definite".into()))
}

/// The SINR-maximizing filter `f = [S̃(t) + I]^{-1} M(φ_0) t`.
pub fn optimal_filter(t: &Waveform, scene: &Scene) -> Result<ReceiveFilter> {
    let chol = interference_factor(t, scene)?;
    let target = SteeringMatrix::new(scene.target_angle, scene).apply(t.as_vector());
    let f = chol.solve(&target);

    // Residual against the unfactored system.
    let mut residual = &f - &target;
    for c in &scene.clutters {
        let echo = SteeringMatrix::new(c.angle, scene).apply(t.as_vector());
        let proj = echo.dotc(&f) * c.power_ratio;
        residual.axpy(proj, &echo, Complex64::new(1.0, 0.0));
    }
    let scale = target.norm().max(f64::MIN_POSITIVE);
    let rel = residual.norm() / scale;
    if !(rel <= 1e-8) {
        return Err(Error::Numerical(format!(
            "receive filter solve residual {rel:e} exceeds tolerance"
        )));
    }
    Ok(ReceiveFilter(f))
}

/// Output SINR `σ|f^H M(φ_0) t|² / (f^H S̃(t) f + f^H f)`, linear.
pub fn sinr(t: &Waveform, f: &ReceiveFilter, scene: &Scene) -> Result<f64> {
    scene.check_waveform(t)?;
    scene.check_filter(f)?;
    let noise = f.0.norm_squared();
    if noise == 0.0 {
        return Err(Error::DegenerateFilter);
    }
    let target = SteeringMatrix::new(scene.target_angle, scene).apply(t.as_vector());
    let signal = scene.target_power_ratio * f.0.dotc(&target).norm_sqr();
    let clutter: f64 = scene
        .clutters
        .iter()
        .map(|c| {
            let echo = SteeringMatrix::new(c.angle, scene).apply(t.as_vector());
            c.power_ratio * f.0.dotc(&echo).norm_sqr()
        })
        .sum();
    Ok(signal / (clutter + noise))
}

/// SINR achieved by `t` with its optimal receive filter.
pub fn optimal_sinr(t: &Waveform, scene: &Scene) -> Result<f64> {
    let f = optimal_filter(t, scene)?;
    sinr(t, &f, scene)
}

/// `Ψ(t) = M^H(φ_0)[S̃(t) + I]^{-1} M(φ_0)`.
///
/// Formed as `W^H W` with `W = L^{-1} M(φ_0)` from the Cholesky factor `L`,
/// then symmetrized, so the result is Hermitian PSD to rounding.
pub fn psi(t: &Waveform, scene: &Scene) -> Result<DMatrix<Complex64>> {
    let chol = interference_factor(t, scene)?;
    let m0 = SteeringMatrix::new(scene.target_angle, scene).to_dense();
    let w = chol
        .l_dirty()
        .solve_lower_triangular(&m0)
        .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))?;
    let g = w.adjoint() * w;
    Ok(crate::linalg::hermitian_part(&g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn small_scene(clutters: Vec<Clutter>) -> Scene {
        Scene::new(2, 3, 3, 0.2, 2.0, clutters).unwrap()
    }

    fn random_cm(len: usize, seed: u64) -> Waveform {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let rho = Waveform::unit_modulus(len);
        Waveform::from_vec(
            (0..len)
                .map(|_| Complex64::from_polar(rho, rng.gen_range(-PI..PI)))
                .collect(),
        )
    }

    #[test]
    fn broadside_steering_is_all_ones() {
        let a = transmit_steering(0.0, 4);
        for z in a.iter() {
            assert!((z - c(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn endfire_steering_alternates() {
        let a = transmit_steering(PI / 2.0, 2);
        assert!((a[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((a[1] - c(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn steering_at_fifteen_degrees() {
        let a = transmit_steering(15f64.to_radians(), 4);
        let phase = PI * 15f64.to_radians().sin();
        assert!((a[1] - c(phase.cos(), phase.sin())).norm() < 1e-15);
        assert!(a.iter().all(|z| (z.norm() - 1.0).abs() < 1e-15));
    }

    #[test]
    fn steering_matrix_broadside_single_sample() {
        let scene = Scene::new(2, 2, 1, 0.0, 1.0, vec![]).unwrap();
        let m = SteeringMatrix::new(0.0, &scene).to_dense();
        assert_eq!(m.shape(), (2, 2));
        assert!(m.iter().all(|z| (z - c(1.0, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn steering_matrix_is_block_diagonal() {
        let scene = Scene::new(2, 2, 3, 0.0, 1.0, vec![]).unwrap();
        let sm = SteeringMatrix::new(0.4, &scene);
        let m = sm.to_dense();
        let block = sm.block();
        for i in 0..3 {
            for j in 0..3 {
                let view = m.view((2 * i, 2 * j), (2, 2));
                if i == j {
                    assert!((view - &block).norm() < 1e-15);
                } else {
                    assert!(view.norm() == 0.0);
                }
            }
        }
    }

    #[test]
    fn factored_products_match_dense() {
        let scene = small_scene(vec![]);
        let sm = SteeringMatrix::new(-0.7, &scene);
        let m = sm.to_dense();
        let t = random_cm(scene.waveform_len(), 3);
        assert!((sm.apply(t.as_vector()) - &m * t.as_vector()).norm() < 1e-13);
        let y = DVector::from_fn(scene.echo_len(), |k, _| c(k as f64 * 0.3, 1.0 - k as f64));
        assert!((sm.apply_adjoint(&y) - m.adjoint() * &y).norm() < 1e-12);
    }

    #[test]
    fn no_clutter_gives_zero_covariance() {
        let scene = small_scene(vec![]);
        let t = random_cm(scene.waveform_len(), 1);
        let cov = clutter_covariance(&t, &scene).unwrap();
        assert_eq!(cov.norm(), 0.0);
    }

    #[test]
    fn single_clutter_covariance_trace() {
        let scene = small_scene(vec![Clutter { angle: -0.5, power_ratio: 1.0 }]);
        let t = random_cm(scene.waveform_len(), 2);
        let cov = clutter_covariance(&t, &scene).unwrap();
        let echo = SteeringMatrix::new(-0.5, &scene).to_dense() * t.as_vector();
        assert!((cov.trace().re - echo.norm_squared()).abs() < 1e-12);
        let eig = cov.clone().symmetric_eigen();
        let significant = eig.eigenvalues.iter().filter(|l| l.abs() > 1e-10).count();
        assert_eq!(significant, 1);
    }

    #[test]
    fn no_clutter_filter_is_matched() {
        let scene = small_scene(vec![]);
        let t = random_cm(scene.waveform_len(), 4);
        let f = optimal_filter(&t, &scene).unwrap();
        let target = SteeringMatrix::new(scene.target_angle(), &scene).apply(t.as_vector());
        assert!((f.as_vector() - &target).norm() < 1e-13);
        let s = sinr(&t, &f, &scene).unwrap();
        let expected = scene.target_power_ratio() * target.norm_squared();
        assert!((s - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn sinr_is_scale_invariant() {
        let scene = small_scene(vec![
            Clutter { angle: -0.5, power_ratio: 30.0 },
            Clutter { angle: 0.9, power_ratio: 5.0 },
        ]);
        let t = random_cm(scene.waveform_len(), 5);
        let f = optimal_filter(&t, &scene).unwrap();
        let base = sinr(&t, &f, &scene).unwrap();
        for scale in [c(2.5, 0.0), c(0.0, -1e-3), c(-7.0, 3.0)] {
            let s = sinr(&t, &f.scaled(scale), &scene).unwrap();
            assert!((s - base).abs() <= 1e-10 * base);
        }
    }

    #[test]
    fn orthogonal_filter_gives_zero_sinr() {
        let scene = small_scene(vec![]);
        let t = random_cm(scene.waveform_len(), 6);
        let target = SteeringMatrix::new(scene.target_angle(), &scene).apply(t.as_vector());
        // Gram-Schmidt a basis vector against the target echo.
        let mut g = DVector::from_element(scene.echo_len(), c(0.0, 0.0));
        g[0] = c(1.0, 0.0);
        let coeff = target.dotc(&g) / target.norm_squared();
        let g = &g - &target * coeff;
        let s = sinr(&t, &ReceiveFilter::new(g), &scene).unwrap();
        assert!(s.abs() < 1e-25);
    }

    #[test]
    fn zero_filter_is_degenerate() {
        let scene = small_scene(vec![]);
        let t = random_cm(scene.waveform_len(), 7);
        let zero = ReceiveFilter::new(DVector::zeros(scene.echo_len()));
        assert_eq!(sinr(&t, &zero, &scene), Err(Error::DegenerateFilter));
    }

    #[test]
    fn psi_without_clutter_is_gram_of_steering() {
        let scene = small_scene(vec![]);
        let t = random_cm(scene.waveform_len(), 8);
        let m0 = SteeringMatrix::new(scene.target_angle(), &scene).to_dense();
        let p = psi(&t, &scene).unwrap();
        assert!((p - m0.adjoint() * m0).norm() < 1e-12);
    }

    #[test]
    fn psi_is_hermitian_psd_and_matches_sinr() {
        let scene = small_scene(vec![
            Clutter { angle: -0.9, power_ratio: 1000.0 },
            Clutter { angle: 0.6, power_ratio: 100.0 },
        ]);
        for seed in 0..10 {
            let t = random_cm(scene.waveform_len(), 100 + seed);
            let p = psi(&t, &scene).unwrap();
            assert!(crate::linalg::max_asymmetry(&p) < 1e-12);
            let min_eig = p.clone().symmetric_eigen().eigenvalues.min();
            assert!(min_eig > -1e-10);
            let via_psi = scene.target_power_ratio() * t.quadratic_form(&p);
            let via_filter = optimal_sinr(&t, &scene).unwrap();
            assert!((via_psi - via_filter).abs() <= 1e-8 * via_filter);
        }
    }

    #[test]
    fn rejects_bad_scenes_and_lengths() {
        assert!(Scene::new(0, 1, 1, 0.0, 1.0, vec![]).is_err());
        assert!(Scene::new(1, 1, 1, PI / 2.0, 1.0, vec![]).is_err());
        assert!(Scene::new(1, 1, 1, 0.0, 0.0, vec![]).is_err());
        assert!(Scene::new(1, 1, 1, 0.0, 1.0, vec![Clutter { angle: 0.1, power_ratio: -1.0 }]).is_err());
        let scene = small_scene(vec![]);
        let short = Waveform::from_vec(vec![c(1.0, 0.0); 3]);
        assert_eq!(
            clutter_covariance(&short, &scene).unwrap_err(),
            Error::Dimension { expected: 6, got: 3 }
        );
    }
}
