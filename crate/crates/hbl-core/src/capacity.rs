//! Conformal moduli of canonical ring domains and the associated capacity
//! functions.
//!
//! The capacity functions are realized through the ring modulus function
//! `mu(r)` evaluated by the arithmetic-geometric mean, which keeps them
//! accurate even at extreme arguments where grid oracles fail. The
//! independent grid oracle lives in [`crate::capacity::grid`].

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{point_polyline_distance, polyline_diameter};

pub mod grid;

pub use grid::{ring_capacity_numeric, RingBoundary, RingDomainSpec};

/// How a capacity value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CapacityMethod {
    ClosedForm,
    Elliptic,
    GridOracle,
}

/// A conformal modulus / capacity value with provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CapacityResult {
    pub value: f64,
    pub method: CapacityMethod,
    /// Zero for closed forms; a grid-refinement estimate for the oracle.
    pub error_estimate: f64,
    /// Radius at which an unbounded component was truncated, when the grid
    /// oracle had to do so.
    pub truncation_radius: Option<f64>,
}

impl CapacityResult {
    fn exact(value: f64, method: CapacityMethod) -> Self {
        Self {
            value,
            method,
            error_estimate: 0.0,
            truncation_radius: None,
        }
    }
}

/// Modulus of the family of curves connecting the two boundary circles of
/// the annulus `r < |z| < r_prime`: `2π / log(r_prime/r)`.
pub fn annulus_modulus(r: f64, r_prime: f64) -> Result<CapacityResult> {
    if !(r > 0.0 && r_prime.is_finite() && r < r_prime) {
        return Err(Error::InvalidInput(format!(
            "annulus radii must satisfy 0 < r < r', got ({r}, {r_prime})"
        )));
    }
    Ok(CapacityResult::exact(
        TAU / (r_prime / r).ln(),
        CapacityMethod::ClosedForm,
    ))
}

fn agm(a0: f64, b0: f64) -> f64 {
    let mut a = a0;
    let mut b = b0;
    for _ in 0..64 {
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        if (an - bn).abs() <= 4.0 * f64::EPSILON * an {
            return an;
        }
        a = an;
        b = bn;
    }
    0.5 * (a + b)
}

/// Modulus `mu(r)` of the ring between the unit circle and the radial slit
/// `[0, r]`, `0 < r < 1`, via the AGM:
/// `mu(r) = (π/2) · agm(1, r') / agm(1, r)` with `r' = sqrt(1 - r²)`.
pub fn grotzsch_mu(r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidInput(format!(
            "mu is defined on (0, 1), got {r}"
        )));
    }
    let r_comp = ((1.0 - r) * (1.0 + r)).sqrt();
    Ok(FRAC_PI_2 * agm(1.0, r_comp) / agm(1.0, r))
}

/// Capacity of the ring with complementary components the closed unit disk
/// and `[s, ∞]`, `s > 1`: `2π / mu(1/s)`, strictly decreasing in `s`.
pub fn gamma2(s: f64) -> Result<CapacityResult> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::InvalidInput(format!(
            "gamma2 is defined for s > 1, got {s}"
        )));
    }
    Ok(CapacityResult::exact(
        TAU / grotzsch_mu(1.0 / s)?,
        CapacityMethod::Elliptic,
    ))
}

/// Capacity of the ring with complementary components `[-1, 0]` and
/// `[s, ∞]`, `s > 0`; a decreasing homeomorphism of `(0, ∞)` onto itself.
/// Computed as `2 · gamma2(sqrt(s + 1))`, which makes the relation
/// `gamma2(s) = τ(s² - 1)/2` hold by construction.
pub fn tau2(s: f64) -> Result<CapacityResult> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::InvalidInput(format!(
            "tau2 is defined for s > 0, got {s}"
        )));
    }
    let g = gamma2((s + 1.0).sqrt())?;
    Ok(CapacityResult::exact(2.0 * g.value, CapacityMethod::Elliptic))
}

/// Diameter and distance-to-origin of a continuum encoded as a polyline:
/// the diameter over vertices, the distance over segments.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ContinuumMetrics {
    pub diameter: f64,
    pub distance_to_origin: f64,
}

impl ContinuumMetrics {
    pub fn new(diameter: f64, distance_to_origin: f64) -> Result<Self> {
        if !(diameter > 0.0) || !(distance_to_origin >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "degenerate continuum metrics (diameter {diameter}, distance {distance_to_origin})"
            )));
        }
        Ok(Self {
            diameter,
            distance_to_origin,
        })
    }

    pub fn from_polyline(vertices: &[Complex64]) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidInput(
                "a continuum polyline needs at least two vertices".into(),
            ));
        }
        Self::new(
            polyline_diameter(vertices),
            point_polyline_distance(Complex64::new(0.0, 0.0), vertices),
        )
    }
}

/// Lower bound `τ(d(0,C)/d(C))/4` for the modulus of the family of curves
/// joining the closed disk of radius 1/2 to a continuum `C ⊂ 𝔻` with
/// `0 < d(C) ≤ 1` and `d(0, C) > 0`.
///
/// The bound is formula-level: it reproduces the capacity expression, the
/// grid oracle does not model the disk-relative curve family itself.
pub fn continuum_modulus_lower_bound(metrics: &ContinuumMetrics) -> Result<f64> {
    if !(metrics.diameter > 0.0 && metrics.diameter <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "continuum diameter must lie in (0, 1], got {}",
            metrics.diameter
        )));
    }
    if !(metrics.distance_to_origin > 0.0) {
        return Err(Error::InvalidInput(
            "continuum must be separated from the origin".into(),
        ));
    }
    Ok(0.25 * tau2(metrics.distance_to_origin / metrics.diameter)?.value)
}

/// The two-sided modulus distortion bounds of a K-quasiconformal map:
/// a path family of modulus `M` maps to modulus within `[M/K, K·M]`.
pub fn qc_modulus_bounds(k: f64, modulus: f64) -> Result<(f64, f64)> {
    if !(k >= 1.0) || !(modulus >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "need K ≥ 1 and M ≥ 0, got ({k}, {modulus})"
        )));
    }
    Ok((modulus / k, k * modulus))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn annulus_closed_form() {
        let m = annulus_modulus(1.0, std::f64::consts::E).unwrap();
        assert_eq!(m.value, TAU);
        assert_eq!(m.method, CapacityMethod::ClosedForm);
        let m = annulus_modulus(1.0, std::f64::consts::E.powi(2)).unwrap();
        assert!((m.value - PI).abs() < 1e-14);
        let m = annulus_modulus(2.0, 20.0).unwrap();
        assert!((m.value - TAU / 10.0f64.ln()).abs() < 1e-14);
        assert!(annulus_modulus(2.0, 2.0).is_err());
        assert!(annulus_modulus(3.0, 2.0).is_err());
    }

    #[test]
    fn mu_symmetric_point() {
        // mu(1/√2) = π/2, forced by mu(r)·mu(r') = π²/4
        let v = grotzsch_mu(std::f64::consts::FRAC_1_SQRT_2).unwrap();
        assert!((v - FRAC_PI_2).abs() < 1e-14);
    }

    #[test]
    fn mu_small_argument_asymptotics() {
        // mu(r) → log(4/r) as r → 0
        let r = 1e-6;
        let v = grotzsch_mu(r).unwrap();
        assert!((v - (4.0 / r).ln()).abs() < 1e-6);
    }

    #[test]
    fn mu_functional_identity() {
        for &r in &[0.1f64, 0.3, 0.5, 0.7, 0.9] {
            let rp = ((1.0 - r) * (1.0 + r)).sqrt();
            let prod = grotzsch_mu(r).unwrap() * grotzsch_mu(rp).unwrap();
            assert!(
                (prod - PI * PI / 4.0).abs() < 1e-10,
                "identity fails at r = {r}: {prod}"
            );
        }
    }

    #[test]
    fn tau2_and_gamma2_special_values() {
        assert!((tau2(1.0).unwrap().value - 8.0).abs() < 1e-12);
        assert!((gamma2(2.0f64.sqrt()).unwrap().value - 4.0).abs() < 1e-12);
    }

    #[test]
    fn tau2_is_decreasing() {
        let a = tau2(0.5).unwrap().value;
        let b = tau2(1.0).unwrap().value;
        let c = tau2(2.0).unwrap().value;
        assert!(a > b && b > c);
        // gamma2 inherits the monotonicity through the relation
        assert!(gamma2(1.5).unwrap().value > gamma2(3.0).unwrap().value);
    }

    #[test]
    fn tau2_decreasing_and_continuous_on_log_grid() {
        let n = 120;
        let mut prev = f64::INFINITY;
        let mut prev_s: Option<f64> = None;
        for i in 0..=n {
            let s = 10f64.powf(-3.0 + 6.0 * i as f64 / n as f64);
            let v = tau2(s).unwrap().value;
            assert!(v < prev, "tau2 not strictly decreasing at s = {s}");
            if let Some(ps) = prev_s {
                // crude continuity check: nearby arguments give nearby values
                let ratio = prev / v;
                assert!(ratio < 1.6, "jump between s = {ps} and {s}");
            }
            prev = v;
            prev_s = Some(s);
        }
    }

    #[test]
    fn gamma2_tau2_relation() {
        for &s in &[1.1, 2.0, 5.0, 20.0] {
            let lhs = gamma2(s).unwrap().value;
            let rhs = 0.5 * tau2(s * s - 1.0).unwrap().value;
            assert!((lhs - rhs).abs() < 1e-12, "relation fails at s = {s}");
        }
    }

    #[test]
    fn capacity_chain_inequality() {
        // τ(1/d) ≥ (π/2)/log(1/d) — the capacity-vs-logarithm comparison used
        // by the unbounded-growth certificate.
        for &d in &[1e-1, 1e-2, 1e-3] {
            let lhs = tau2(1.0 / d).unwrap().value;
            let rhs = FRAC_PI_2 / (1.0 / d).ln();
            assert!(lhs >= rhs, "chain inequality fails at d = {d}");
        }
    }

    #[test]
    fn continuum_bound_cases() {
        // segment [0.5, 0.75] on the real axis
        let m = ContinuumMetrics::from_polyline(&[
            Complex64::new(0.5, 0.0),
            Complex64::new(0.75, 0.0),
        ])
        .unwrap();
        assert!((m.diameter - 0.25).abs() < 1e-15);
        assert!((m.distance_to_origin - 0.5).abs() < 1e-15);
        let b = continuum_modulus_lower_bound(&m).unwrap();
        assert!((b - 0.25 * tau2(2.0).unwrap().value).abs() < 1e-12);

        // ratio 1 gives τ(1)/4 = 2
        let m = ContinuumMetrics::new(0.25, 0.25).unwrap();
        assert!((continuum_modulus_lower_bound(&m).unwrap() - 2.0).abs() < 1e-12);

        // pushing the continuum outward (same diameter) decreases the bound
        let near = ContinuumMetrics::new(0.25, 0.3).unwrap();
        let far = ContinuumMetrics::new(0.25, 0.6).unwrap();
        assert!(
            continuum_modulus_lower_bound(&near).unwrap()
                > continuum_modulus_lower_bound(&far).unwrap()
        );
    }

    #[test]
    fn qc_bounds() {
        let (lo, hi) = qc_modulus_bounds(1.0, 5.0).unwrap();
        assert_eq!((lo, hi), (5.0, 5.0));
        let (lo, hi) = qc_modulus_bounds(3.0, TAU).unwrap();
        assert!((lo - TAU / 3.0).abs() < 1e-15 && (hi - 3.0 * TAU).abs() < 1e-15);
        let (lo2, hi2) = qc_modulus_bounds(2.0, 1.0).unwrap();
        let (lo4, hi4) = qc_modulus_bounds(4.0, 1.0).unwrap();
        assert!(lo4 < lo2 && hi2 < hi4);
        assert!(qc_modulus_bounds(0.5, 1.0).is_err());
    }
}
