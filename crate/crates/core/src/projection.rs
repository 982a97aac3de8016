//! Per-entry feasible regions and their closed-form Euclidean projector.
//!
//! Under the constant-modulus constraint the similarity bound
//! `|t(k) − t_0(k)| ≤ ε` becomes a phase interval `[ω_k, ω_k + δ]` with
//! `δ = 2·arccos(1 − ε²/2)`. Its convex relaxation, "zone I", is the convex
//! hull of that arc: the unit disk cut by the chord `AB`.
//!
//! Geometry is done on the unit circle. `B = e^{iω}` is the arc start and
//! `A = e^{i(ω+δ)}` the arc end. `C` is the midpoint of the chord. The lines
//! `l_A`, `l_B` pass through `A`, `B` perpendicular to the chord. Together
//! with the rays `OA`, `OB` they split the plane into five zones, each with
//! its own nearest point:
//!
//! | zone       | condition                                   | nearest point |
//! |------------|---------------------------------------------|---------------|
//! | I          | chord side satisfied, `|q| ≤ 1`             | `q`           |
//! | II         | chord side violated, between `l_B` and `l_A`| foot `F`      |
//! | III(A)     | past `OA`, beyond `l_A`                     | `A`           |
//! | III(B)     | before `OB`, beyond `l_B`                   | `B`           |
//! | IV         | otherwise                                   | `q / |q|`     |
//!
//! For `δ ≤ π` the chord side is `c·q ≥ |c|²`; for `δ ≥ π` it flips to
//! `c·q ≤ |c|²`. Both are evaluated as `m·q ≥ cos(δ/2)` with `m` the unit
//! arc-midpoint direction, which is the same half-plane divided through by
//! `|C|` and stays well defined at `δ = π` where `C = 0`. The `l_A`/`l_B`
//! tests are measured along the chord direction from `B` to `A`, so they hold
//! for every arc orientation, including the vertical `l_A`, `l_B` case.

use nalgebra::DVector;
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::scene::Waveform;

/// `δ` at or above this is treated as the whole circle.
pub const FULL_CIRCLE_THRESHOLD: f64 = TAU - 1e-9;

const SLOPE_EPS: f64 = 1e-12;

/// Maps `phase − omega` into `[0, 2π)`.
pub fn phase_offset(phase: f64, omega: f64) -> f64 {
    let d = (phase - omega).rem_euclid(TAU);
    if d >= TAU {
        0.0
    } else {
        d
    }
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_angle(angle: f64) -> f64 {
    let w = angle.rem_euclid(TAU);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

/// Half-width `arccos(1 − ε²/2)` of the phase interval for similarity `ε`.
pub fn similarity_half_width(epsilon: f64) -> Result<f64> {
    if !(0.0..=2.0).contains(&epsilon) {
        return Err(Error::SimilarityOutOfRange(epsilon));
    }
    Ok((1.0 - epsilon * epsilon / 2.0).clamp(-1.0, 1.0).acos())
}

/// Zone of the plane a point falls in, in the order the projector tests them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Zone {
    Inside,
    Chord,
    EndpointA,
    EndpointB,
    Radial,
}

/// Points and lines describing one arc hull.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcGeometry {
    pub omega: f64,
    pub delta: f64,
    /// Arc end `e^{i(ω+δ)}`.
    pub a: (f64, f64),
    /// Arc start `e^{iω}`.
    pub b: (f64, f64),
    /// Chord midpoint.
    pub c: (f64, f64),
    /// Slope of `l_A` and `l_B`; `None` when they are vertical.
    pub slope: Option<f64>,
    /// Intercept of `l_A` (`NaN` when vertical).
    pub intercept_a: f64,
    /// Intercept of `l_B` (`NaN` when vertical).
    pub intercept_b: f64,
    /// Unit vector towards the arc midpoint.
    mid: (f64, f64),
    /// `cos(δ/2)`: signed distance of the chord from the origin along `mid`.
    chord_offset: f64,
    /// `sin(δ/2)`: half chord length.
    half_chord: f64,
}

impl ArcGeometry {
    /// Builds the geometry for `0 < δ < 2π`.
    pub fn new(omega: f64, delta: f64) -> Self {
        let (sa, ca) = (omega + delta).sin_cos();
        let (sb, cb) = omega.sin_cos();
        let (sm, cm) = (omega + delta / 2.0).sin_cos();
        let (half_chord, chord_offset) = (delta / 2.0).sin_cos();
        // (A + B)/2 written as cos(δ/2)·e^{i(ω+δ/2)}: same point, no cancellation.
        let c = (chord_offset * cm, chord_offset * sm);
        // k_l = (a_y + b_y)/(a_x + b_x) = m_y/m_x, evaluated from m to avoid
        // the cancellation in the sums near δ = π.
        let slope = if cm.abs() > SLOPE_EPS { Some(sm / cm) } else { None };
        let (intercept_a, intercept_b) = match slope {
            Some(k) => (sa - ca * k, sb - cb * k),
            None => (f64::NAN, f64::NAN),
        };
        Self {
            omega,
            delta,
            a: (ca, sa),
            b: (cb, sb),
            c,
            slope,
            intercept_a,
            intercept_b,
            mid: (cm, sm),
            chord_offset,
            half_chord,
        }
    }

    /// `m·q`, the coordinate across the chord.
    fn across(&self, q: Complex64) -> f64 {
        self.mid.0 * q.re + self.mid.1 * q.im
    }

    /// Coordinate along the chord, increasing from `B` to `A`.
    fn along(&self, q: Complex64) -> f64 {
        -self.mid.1 * q.re + self.mid.0 * q.im
    }

    /// Whether `q` satisfies the chord half-plane of the relaxed constraint.
    pub fn on_hull_side(&self, q: Complex64, tol: f64) -> bool {
        self.across(q) >= self.chord_offset - tol
    }

    pub fn classify(&self, q: Complex64) -> Zone {
        let across = self.across(q);
        let along = self.along(q);
        if across >= self.chord_offset && q.norm() <= 1.0 {
            return Zone::Inside;
        }
        if across <= self.chord_offset && along.abs() <= self.half_chord {
            return Zone::Chord;
        }
        let (ax, ay) = self.a;
        if ay * q.re - ax * q.im <= 0.0 && along >= self.half_chord {
            return Zone::EndpointA;
        }
        let (bx, by) = self.b;
        if by * q.re - bx * q.im >= 0.0 && along <= -self.half_chord {
            return Zone::EndpointB;
        }
        Zone::Radial
    }

    /// Foot of the perpendicular from `q` onto the chord line.
    ///
    /// Solves the chord equation `c_x x + c_y y = |c|²` together with the
    /// line of slope `k_l` through `q`. The coordinate with the larger `|c|`
    /// component is solved first so neither division is by a vanishing
    /// component.
    pub fn foot(&self, q: Complex64) -> Complex64 {
        let (cx, cy) = self.c;
        let c2 = cx * cx + cy * cy;
        if cx == 0.0 && c2 > 0.0 {
            return Complex64::new(q.re, cy);
        }
        if cy == 0.0 && c2 > 0.0 {
            return Complex64::new(cx, q.im);
        }
        if c2 > 0.0 {
            if cy.abs() <= cx.abs() {
                let k = cy / cx;
                let xf = (c2 - cy * (q.im - k * q.re)) / (cx + k * cy);
                let yf = q.im + k * (xf - q.re);
                if xf.is_finite() && yf.is_finite() {
                    return Complex64::new(xf, yf);
                }
            } else {
                let k = cx / cy;
                let yf = (c2 - cx * (q.re - k * q.im)) / (cy + k * cx);
                let xf = q.re + k * (yf - q.im);
                if xf.is_finite() && yf.is_finite() {
                    return Complex64::new(xf, yf);
                }
            }
        }
        // Chord through the origin: drop the perpendicular in the rotated frame.
        let shift = self.across(q) - self.chord_offset;
        Complex64::new(q.re - shift * self.mid.0, q.im - shift * self.mid.1)
    }

    /// Nearest point of zone I to `q`.
    pub fn project(&self, q: Complex64) -> Complex64 {
        match self.classify(q) {
            Zone::Inside => q,
            Zone::Chord => self.foot(q),
            Zone::EndpointA => Complex64::new(self.a.0, self.a.1),
            Zone::EndpointB => Complex64::new(self.b.0, self.b.1),
            Zone::Radial => {
                let r = q.norm();
                if r == 0.0 {
                    Complex64::new(self.c.0, self.c.1)
                } else {
                    q / r
                }
            }
        }
    }
}

/// Projection onto zone I for one entry, in unit-radius coordinates.
///
/// `δ = 0` collapses the region to `e^{iω}`; `δ` at or above
/// [`FULL_CIRCLE_THRESHOLD`] makes it the closed unit disk.
pub fn project_entry(q: Complex64, omega: f64, delta: f64) -> Complex64 {
    if delta <= 0.0 {
        return Complex64::from_polar(1.0, omega);
    }
    if delta >= FULL_CIRCLE_THRESHOLD {
        return clamp_to_disk(q);
    }
    ArcGeometry::new(omega, delta).project(q)
}

fn clamp_to_disk(q: Complex64) -> Complex64 {
    let r = q.norm();
    if r <= 1.0 {
        q
    } else {
        q / r
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    Point,
    Arc,
    Disk,
}

/// Per-entry phase intervals `[ω_k, ω_k + δ]` sharing a common width.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcRegion {
    omega: Vec<f64>,
    delta: f64,
    geometry: Vec<ArcGeometry>,
    shape: Shape,
}

impl ArcRegion {
    pub fn new(omega: Vec<f64>, delta: f64) -> Result<Self> {
        if !(0.0..=TAU).contains(&delta) {
            return Err(Error::InvalidConfig(format!("arc width {delta} outside [0, 2pi]")));
        }
        if omega.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidConfig("non-finite arc start".into()));
        }
        let shape = if delta == 0.0 {
            Shape::Point
        } else if delta >= FULL_CIRCLE_THRESHOLD {
            Shape::Disk
        } else {
            Shape::Arc
        };
        let geometry = match shape {
            Shape::Arc => omega.iter().map(|&w| ArcGeometry::new(w, delta)).collect(),
            _ => Vec::new(),
        };
        Ok(Self {
            omega,
            delta,
            geometry,
            shape,
        })
    }

    /// Region centred on the phases of `t0` with `δ = 2·arccos(1 − ε²/2)`.
    pub fn from_similarity(t0: &Waveform, epsilon: f64) -> Result<Self> {
        let half = similarity_half_width(epsilon)?;
        let omega = t0.as_slice().iter().map(|z| z.arg() - half).collect();
        Self::new(omega, 2.0 * half)
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    /// Geometry of entry `k`; `None` for the point and full-disk cases.
    pub fn geometry(&self, k: usize) -> Option<&ArcGeometry> {
        self.geometry.get(k)
    }

    /// Unit-radius projection of `q` onto the hull of entry `k`.
    pub fn project_unit(&self, k: usize, q: Complex64) -> Complex64 {
        match self.shape {
            Shape::Point => Complex64::from_polar(1.0, self.omega[k]),
            Shape::Disk => clamp_to_disk(q),
            Shape::Arc => self.geometry[k].project(q),
        }
    }

    /// Whether `phase` lies in `[ω_k − tol, ω_k + δ + tol]` modulo `2π`.
    pub fn contains_phase(&self, k: usize, phase: f64, tol: f64) -> bool {
        if self.delta >= FULL_CIRCLE_THRESHOLD {
            return true;
        }
        let off = phase_offset(phase, self.omega[k]);
        off <= self.delta + tol || off >= TAU - tol
    }

    /// Offset of `phase` from `ω_k`, in `[0, δ]` when feasible. Offsets just
    /// below `ω_k` (within `tol`) come back as small negatives.
    pub fn offset_of(&self, k: usize, phase: f64, tol: f64) -> f64 {
        let off = phase_offset(phase, self.omega[k]);
        if off >= TAU - tol {
            off - TAU
        } else {
            off
        }
    }

    /// Moves `phase` to the nearest point of `[ω_k, ω_k + δ]` on the circle.
    pub fn clamp_phase(&self, k: usize, phase: f64) -> f64 {
        if self.delta >= FULL_CIRCLE_THRESHOLD {
            return phase;
        }
        let off = phase_offset(phase, self.omega[k]);
        if off <= self.delta {
            return self.omega[k] + off;
        }
        let past_end = off - self.delta;
        let before_start = TAU - off;
        if past_end <= before_start {
            self.omega[k] + self.delta
        } else {
            self.omega[k]
        }
    }

    /// Whether the unit-radius point `z` satisfies the relaxed constraints
    /// of entry `k` within `tol`.
    pub fn hull_contains_unit(&self, k: usize, z: Complex64, tol: f64) -> bool {
        match self.shape {
            Shape::Point => (z - Complex64::from_polar(1.0, self.omega[k])).norm() <= tol,
            Shape::Disk => z.norm() <= 1.0 + tol,
            Shape::Arc => z.norm() <= 1.0 + tol && self.geometry[k].on_hull_side(z, tol),
        }
    }
}

/// Entrywise projection of a waveform onto the scaled arc hulls.
///
/// Entries are rescaled by `√(len)` into unit-radius coordinates, projected,
/// and scaled back, so the hull radius is the constant-modulus level.
pub fn project_waveform(t: &DVector<Complex64>, region: &ArcRegion) -> Result<DVector<Complex64>> {
    if t.len() != region.len() {
        return Err(Error::Dimension {
            expected: region.len(),
            got: t.len(),
        });
    }
    let rho = Waveform::unit_modulus(t.len());
    Ok(DVector::from_iterator(
        t.len(),
        t.iter()
            .enumerate()
            .map(|(k, &z)| region.project_unit(k, z / rho) * rho),
    ))
}
