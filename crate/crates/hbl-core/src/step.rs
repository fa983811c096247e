//! Piecewise-constant boundary data on the unit circle and the closed-form
//! analytic completions of arc harmonic measures.
//!
//! A step boundary function takes the constant value `w_k` on the open arc
//! `(t_k, t_{k+1})`. Its Poisson extension into the disk is
//! `f(z) = Σ_k w_k ω_k(z)` where `ω_k` is the harmonic measure of the k-th
//! arc. Writing `ω_k = Re A_k` with `A_k` analytic gives the analytic and
//! co-analytic parts of `f` in closed form; `A_k` and its derivative are
//! computed here.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{is_finite, unit};

/// Jump points `t_0 < … < t_{n-1}` in `[0, 2π)` together with the value taken
/// on each arc `(t_k, t_{k+1})` (indices cyclic).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepBoundaryFunction {
    jump_points: Vec<f64>,
    values: Vec<Complex64>,
}

impl StepBoundaryFunction {
    pub fn new(jump_points: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if jump_points.len() < 2 {
            return Err(Error::InvalidInput(
                "a step boundary function needs at least two arcs".into(),
            ));
        }
        if jump_points.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "{} jump points but {} values",
                jump_points.len(),
                values.len()
            )));
        }
        for &t in &jump_points {
            if !t.is_finite() || !(0.0..TAU).contains(&t) {
                return Err(Error::InvalidInput(format!(
                    "jump point {t} outside [0, 2π)"
                )));
            }
        }
        if !jump_points.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(
                "jump points must be strictly increasing".into(),
            ));
        }
        for &w in &values {
            if !is_finite(w) {
                return Err(Error::InvalidInput("non-finite arc value".into()));
            }
        }
        let n = values.len();
        for k in 0..n {
            if values[k] == values[(k + 1) % n] {
                return Err(Error::InvalidInput(format!(
                    "adjacent arcs {k} and {} carry the same value; the jump point is not a genuine jump",
                    (k + 1) % n
                )));
            }
        }
        Ok(Self {
            jump_points,
            values,
        })
    }

    pub fn n_arcs(&self) -> usize {
        self.values.len()
    }

    pub fn jump_points(&self) -> &[f64] {
        &self.jump_points
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Endpoints `(t_k, t_{k+1})` of the k-th arc, with the last arc wrapping
    /// to `t_0 + 2π`.
    pub fn arc(&self, k: usize) -> (f64, f64) {
        let n = self.n_arcs();
        let t0 = self.jump_points[k];
        let t1 = if k + 1 < n {
            self.jump_points[k + 1]
        } else {
            self.jump_points[0] + TAU
        };
        (t0, t1)
    }

    pub fn arc_length(&self, k: usize) -> f64 {
        let (t0, t1) = self.arc(k);
        t1 - t0
    }

    /// Average of the boundary values weighted by arc length; this is the
    /// value of the Poisson extension at the origin.
    pub fn mean_value(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..self.n_arcs() {
            acc += self.values[k] * (self.arc_length(k) / TAU);
        }
        acc
    }

    /// Index of the jump point within `tol` of the angle `t`, if any.
    pub fn jump_index_near(&self, t: f64, tol: f64) -> Option<usize> {
        let t = t.rem_euclid(TAU);
        self.jump_points.iter().position(|&tk| {
            let d = (t - tk).abs();
            d < tol || (TAU - d) < tol
        })
    }

    /// Index of the arc whose open interval contains the angle `t`.
    pub fn arc_containing(&self, t: f64) -> usize {
        let t = t.rem_euclid(TAU);
        let n = self.n_arcs();
        for k in 0..n {
            let (t0, t1) = self.arc(k);
            if (t0..t1).contains(&t) || (t0..t1).contains(&(t + TAU)) {
                return k;
            }
        }
        // t below t_0 belongs to the wrapping arc
        n - 1
    }

    /// One-sided boundary limits `(f*(t-), f*(t+))` of the step data at angle
    /// `t`. At a jump point these are the two adjacent arc values; inside an
    /// arc both coincide.
    pub fn one_sided_limits(&self, t: f64) -> (Complex64, Complex64) {
        if let Some(k) = self.jump_index_near(t, 1e-12) {
            let n = self.n_arcs();
            let before = self.values[(k + n - 1) % n];
            let after = self.values[k];
            (before, after)
        } else {
            let v = self.values[self.arc_containing(t)];
            (v, v)
        }
    }
}

/// Which part of the harmonic decomposition a step-map component represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepMapRole {
    /// The analytic part `h`.
    Analytic,
    /// The co-analytic part `g` (the map is `h + conj(g)`).
    CoAnalytic,
}

/// `A_k(z)`: analytic completion of the harmonic measure of the arc
/// `(t0, t1)`, normalized so that `A_k(0) = (t1 - t0)/(2π)` (real).
///
/// `A_k(z) = (t1-t0)/(2π) + (1/(πi)) [log(1 - z e^{-i t1}) - log(1 - z e^{-i t0})]`.
/// For `|z| < 1` both arguments `1 - z e^{-it}` have positive real part, so
/// the principal branch is single-valued on the whole disk and the expression
/// equals the path integral of `A_k'` from 0.
pub(crate) fn arc_completion(t0: f64, t1: f64, z: Complex64) -> Complex64 {
    let inv_pi_i = Complex64::new(0.0, -std::f64::consts::FRAC_1_PI);
    let l1 = (Complex64::new(1.0, 0.0) - z * unit(-t1)).ln();
    let l0 = (Complex64::new(1.0, 0.0) - z * unit(-t0)).ln();
    Complex64::new((t1 - t0) / TAU, 0.0) + inv_pi_i * (l1 - l0)
}

/// `A_k'(z) = (1/(πi)) [1/(e^{i t0} - z) - 1/(e^{i t1} - z)]`.
pub(crate) fn arc_completion_deriv(t0: f64, t1: f64, z: Complex64) -> Complex64 {
    let inv_pi_i = Complex64::new(0.0, -std::f64::consts::FRAC_1_PI);
    let one = Complex64::new(1.0, 0.0);
    inv_pi_i * (one / (unit(t0) - z) - one / (unit(t1) - z))
}

fn check_in_disk(z: Complex64) -> Result<()> {
    if z.norm() >= 1.0 {
        return Err(Error::DomainViolation {
            point: z,
            reason: format!(
                "step maps are defined on the open unit disk; |z| = {:.6} is at or beyond the boundary",
                z.norm()
            ),
        });
    }
    Ok(())
}

/// Value of the analytic (`h`) or co-analytic (`g`) part of the Poisson
/// extension of `arcs` at `z`. Constants are fixed by `g(0) = 0`, so
/// `h(0)` equals the mean boundary value.
pub(crate) fn step_part_eval(
    arcs: &StepBoundaryFunction,
    role: StepMapRole,
    z: Complex64,
) -> Result<Complex64> {
    check_in_disk(z)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..arcs.n_arcs() {
        let (t0, t1) = arcs.arc(k);
        let a = arc_completion(t0, t1, z);
        let half_len = Complex64::new(arcs.arc_length(k) / TAU, 0.0);
        match role {
            // h = Σ (w_k/2) A_k + C with C = Σ (w_k/2) · arc_k/(2π)
            StepMapRole::Analytic => acc += arcs.values()[k] * 0.5 * (a + half_len),
            // g = Σ (conj w_k/2) A_k − Σ (conj w_k/2) · arc_k/(2π)
            StepMapRole::CoAnalytic => acc += arcs.values()[k].conj() * 0.5 * (a - half_len),
        }
    }
    Ok(acc)
}

/// Derivative of the part selected by `role` at `z`.
pub(crate) fn step_part_deriv(
    arcs: &StepBoundaryFunction,
    role: StepMapRole,
    z: Complex64,
) -> Result<Complex64> {
    check_in_disk(z)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..arcs.n_arcs() {
        let (t0, t1) = arcs.arc(k);
        let d = arc_completion_deriv(t0, t1, z);
        match role {
            StepMapRole::Analytic => acc += arcs.values()[k] * 0.5 * d,
            StepMapRole::CoAnalytic => acc += arcs.values()[k].conj() * 0.5 * d,
        }
    }
    Ok(acc)
}
