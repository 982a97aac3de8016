//! Shared fixtures and independent oracles for the integration suites.
#![allow(dead_code)]

use mimo_agp::projection::ArcRegion;
use mimo_agp::scene::{Clutter, Scene, Waveform};
use mimo_agp::Complex64;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// N = 16, N_T = 4, N_R = 8, target 10 dB at 15°, three 30 dB clutters at
/// −50°, −10° and 40°, unit noise.
pub fn standard_scene_with_tx(num_tx: usize) -> Scene {
    let db = |x: f64| 10f64.powf(x / 10.0);
    Scene::new(
        num_tx,
        8,
        16,
        15f64.to_radians(),
        db(10.0),
        [-50.0f64, -10.0, 40.0]
            .iter()
            .map(|a| Clutter { angle: a.to_radians(), power_ratio: db(30.0) })
            .collect(),
    )
    .unwrap()
}

pub fn standard_scene() -> Scene {
    standard_scene_with_tx(4)
}

pub fn random_psd(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample::<f64, _>(rand_distr::StandardNormal), rng.sample::<f64, _>(rand_distr::StandardNormal))
    });
    let w = &g * g.adjoint() / Complex64::new(n as f64, 0.0);
    (&w + w.adjoint()) * Complex64::new(0.5, 0.0)
}

pub fn random_cm(n: usize, rng: &mut ChaCha8Rng) -> Waveform {
    let rho = Waveform::unit_modulus(n);
    Waveform::from_vec((0..n).map(|_| Complex64::from_polar(rho, rng.gen_range(-PI..PI))).collect())
}

/// Largest eigenvalue from a full Hermitian eigendecomposition.
pub fn dense_max_eigenvalue(a: &DMatrix<Complex64>) -> f64 {
    a.clone().symmetric_eigen().eigenvalues.max()
}

pub fn dense_min_eigenvalue(a: &DMatrix<Complex64>) -> f64 {
    a.clone().symmetric_eigen().eigenvalues.min()
}

/// Hull sample for the projector oracle: arc points, chord points, and
/// random chords between arc points.
pub fn hull_sample(omega: f64, delta: f64, count: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let arc_n = count / 2;
    let arc: Vec<Complex64> = (0..arc_n)
        .map(|i| Complex64::from_polar(1.0, omega + delta * i as f64 / (arc_n - 1) as f64))
        .collect();
    let mut pts = arc.clone();
    let (a, b) = (arc[arc_n - 1], arc[0]);
    let chord_n = count / 10;
    pts.extend((0..chord_n).map(|i| {
        let s = i as f64 / (chord_n - 1) as f64;
        a * s + b * (1.0 - s)
    }));
    while pts.len() < count {
        let i = rng.gen_range(0..arc_n);
        let j = rng.gen_range(0..arc_n);
        let s: f64 = rng.gen();
        pts.push(arc[i] * s + arc[j] * (1.0 - s));
    }
    pts
}

/// Exhaustive search of `max t^H Ψ t` over a phase grid: `levels` phases per
/// entry around the full circle, each clamped into its arc.
pub fn grid_search_optimum(psi: &DMatrix<Complex64>, region: &ArcRegion, levels: usize) -> f64 {
    let n = region.len();
    let rho = Waveform::unit_modulus(n);
    let choices: Vec<Vec<Complex64>> = (0..n)
        .map(|k| {
            (0..levels)
                .map(|l| {
                    let phase = 2.0 * PI * l as f64 / levels as f64;
                    Complex64::from_polar(rho, region.clamp_phase(k, phase))
                })
                .collect()
        })
        .collect();
    let mut idx = vec![0usize; n];
    let mut best = f64::NEG_INFINITY;
    let mut t = DVector::<Complex64>::zeros(n);
    loop {
        for k in 0..n {
            t[k] = choices[k][idx[k]];
        }
        best = best.max(t.dotc(&(psi * &t)).re);
        let mut k = 0;
        loop {
            if k == n {
                return best;
            }
            idx[k] += 1;
            if idx[k] < levels {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Plain (unaccelerated) projected gradient ascent on `t^H P t` with the same
/// step and projector, written out independently of the solver's loop.
/// Returns the objective of each projected iterate, starting at the start.
pub fn plain_projected_gradient(
    p: &DMatrix<Complex64>,
    tau: f64,
    region: &ArcRegion,
    start: &Waveform,
    iterations: usize,
) -> Vec<f64> {
    let n = start.len();
    let rho = Waveform::unit_modulus(n);
    let project = |v: &DVector<Complex64>| {
        DVector::from_iterator(n, v.iter().enumerate().map(|(k, z)| region.project_unit(k, z / rho) * rho))
    };
    let mut t = project(start.as_vector());
    let mut trace = Vec::with_capacity(iterations + 1);
    trace.push(t.dotc(&(p * &t)).re);
    for _ in 0..iterations {
        let grad = p * &t * Complex64::new(2.0, 0.0);
        t = project(&(&t + grad * Complex64::new(tau, 0.0)));
        trace.push(t.dotc(&(p * &t)).re);
    }
    trace
}
