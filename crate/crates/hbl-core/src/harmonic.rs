//! Harmonic mappings `f = h + conj(g)` with evaluable analytic parts.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::AnalyticFunction;
use crate::error::{Error, Result};
use crate::geom::{is_finite, unit};
use crate::step::{StepBoundaryFunction, StepMapRole};

/// Domain of definition of a harmonic map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domain {
    Disk,
    HalfPlane,
}

impl Domain {
    /// Base point used for the normalization `g(origin) = 0`.
    pub fn origin(self) -> Complex64 {
        match self {
            Domain::Disk => Complex64::new(0.0, 0.0),
            Domain::HalfPlane => Complex64::new(0.0, 1.0),
        }
    }

    pub fn contains(self, z: Complex64) -> bool {
        match self {
            Domain::Disk => z.norm() < 1.0,
            Domain::HalfPlane => z.im > 0.0,
        }
    }
}

/// A planar harmonic mapping `f = h + conj(g)`, normalized so that `g`
/// vanishes at the domain's base point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HarmonicMap {
    h: AnalyticFunction,
    g: AnalyticFunction,
    domain: Domain,
    image_polygon: Option<Vec<Complex64>>,
}

/// Pointwise dilatation data of a harmonic map.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DilatationReport {
    /// Second complex dilatation `a = g'/h'` (analytic where `h' ≠ 0`).
    pub a_f: Complex64,
    /// Complex dilatation `ν = conj(g')/h'`.
    pub nu_f: Complex64,
    /// `(1 + |a|)/(1 - |a|)`; infinite when `|a| ≥ 1`.
    pub d_f: f64,
    /// `|h'|² - |g'|²`.
    pub jacobian: f64,
}

impl HarmonicMap {
    /// Build a map from its analytic parts, checking the normalization
    /// `g(origin) = 0`.
    pub fn new(h: AnalyticFunction, g: AnalyticFunction, domain: Domain) -> Result<Self> {
        let g0 = g.eval(domain.origin())?;
        if g0.norm() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "co-analytic part must vanish at the base point; g({}) = {}",
                domain.origin(),
                g0
            )));
        }
        Ok(Self {
            h,
            g,
            domain,
            image_polygon: None,
        })
    }

    /// Attach the known image polygon (vertices in boundary order).
    pub fn with_image_polygon(mut self, vertices: Vec<Complex64>) -> Self {
        self.image_polygon = Some(vertices);
        self
    }

    pub fn h(&self) -> &AnalyticFunction {
        &self.h
    }

    pub fn g(&self) -> &AnalyticFunction {
        &self.g
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn image_polygon(&self) -> Option<&[Complex64]> {
        self.image_polygon.as_deref()
    }

    /// The step boundary data if this map was built by `poisson_step_map`.
    pub fn step_data(&self) -> Option<&StepBoundaryFunction> {
        match &self.h {
            AnalyticFunction::StepMapPart { arcs, .. } => Some(arcs),
            _ => None,
        }
    }

    fn check_interior(&self, z: Complex64) -> Result<()> {
        if !is_finite(z) || !self.domain.contains(z) {
            let reason = match self.domain {
                Domain::Disk => format!(
                    "|z| = {:.9}; the map is defined on the open unit disk (boundary distance {:.3e})",
                    z.norm(),
                    1.0 - z.norm()
                ),
                Domain::HalfPlane => format!(
                    "Im z = {:.9}; the map is defined on the open upper half-plane",
                    z.im
                ),
            };
            return Err(Error::DomainViolation { point: z, reason });
        }
        Ok(())
    }

    /// `f(z) = h(z) + conj(g(z))`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.check_interior(z)?;
        Ok(self.h.eval(z)? + self.g.eval(z)?.conj())
    }

    /// `(h'(z), g'(z))`; these are `f_z` and `conj(f_z̄)` respectively.
    pub fn partials(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        self.check_interior(z)?;
        Ok((self.h.derivative(z)?, self.g.derivative(z)?))
    }

    /// Dilatation data at `z`; fails at points where `h'` (numerically)
    /// vanishes.
    pub fn dilatation(&self, z: Complex64) -> Result<DilatationReport> {
        let (hp, gp) = self.partials(z)?;
        let threshold = f64::EPSILON * 128.0 * gp.norm().max(1.0);
        if hp.norm() < threshold {
            return Err(Error::Degenerate {
                point: z,
                reason: format!(
                    "|h'(z)| = {:.3e} is below the machine-scaled threshold {:.3e}",
                    hp.norm(),
                    threshold
                ),
            });
        }
        let a_f = gp / hp;
        let nu_f = gp.conj() / hp;
        let am = a_f.norm();
        let d_f = if am < 1.0 {
            (1.0 + am) / (1.0 - am)
        } else {
            f64::INFINITY
        };
        Ok(DilatationReport {
            a_f,
            nu_f,
            d_f,
            jacobian: hp.norm_sqr() - gp.norm_sqr(),
        })
    }
}

/// Harmonic extension of piecewise-constant boundary data, with analytic and
/// co-analytic parts in closed form.
///
/// `f(z) = Σ_k w_k ω_k(z)` where `ω_k` is the harmonic measure of the k-th
/// arc; constants are fixed so that `g(0) = 0`, which puts
/// `f(0) = Σ_k w_k · (arc length)/(2π)`.
pub fn poisson_step_map(boundary: StepBoundaryFunction) -> HarmonicMap {
    let image: Vec<Complex64> = boundary.values().to_vec();
    let h = AnalyticFunction::step_map_part(boundary.clone(), StepMapRole::Analytic);
    let g = AnalyticFunction::step_map_part(boundary, StepMapRole::CoAnalytic);
    HarmonicMap {
        h,
        g,
        domain: Domain::Disk,
        image_polygon: Some(image),
    }
}

/// Local Fourier data of a harmonic map on a small circle: coefficients of
/// the expansion `f(center + w) = Σ a_k w^k + conj(Σ b_k w^k)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LocalExpansion {
    /// `a_0 … a_n` (the mode-0 coefficient is assigned entirely to the
    /// analytic part, consistent with the `g(0) = 0` normalization).
    pub analytic: Vec<Complex64>,
    /// `b_1 … b_n` (index 0 of this vector is `b_1`).
    pub coanalytic: Vec<Complex64>,
    /// Radius actually used for the sampling circle.
    pub radius: f64,
    /// Largest |f| seen on the circle, for normalizing tolerances.
    pub max_sample: f64,
}

impl LocalExpansion {
    /// `b_k` with the 1-based indexing of the expansion.
    pub fn coanalytic_coeff(&self, k: usize) -> Complex64 {
        self.coanalytic[k - 1]
    }
}

/// Default number of modes extracted by `local_fourier`.
pub const DEFAULT_FOURIER_MODES: usize = 32;

/// Default sampling radius: `min(0.1, half distance to the domain boundary)`.
pub fn default_fourier_radius(domain: Domain, center: Complex64) -> f64 {
    let boundary_distance = match domain {
        Domain::Disk => 1.0 - center.norm(),
        Domain::HalfPlane => center.im,
    };
    (0.5 * boundary_distance).min(0.1)
}

/// Sample `f` on the circle `|z - center| = radius` and split the discrete
/// Fourier modes into analytic (`k ≥ 0`) and co-analytic (`k < 0`) parts.
pub fn local_fourier(
    f: &HarmonicMap,
    center: Complex64,
    radius: f64,
    n_modes: usize,
) -> Result<LocalExpansion> {
    local_fourier_of(|z| f.eval(z), f.domain(), center, radius, n_modes)
}

/// Same as `local_fourier` for an arbitrary evaluator (used for recentered
/// differences in `multiplicity`).
fn local_fourier_of<E>(
    eval: E,
    domain: Domain,
    center: Complex64,
    radius: f64,
    n_modes: usize,
) -> Result<LocalExpansion>
where
    E: Fn(Complex64) -> Result<Complex64>,
{
    if !(radius > 0.0) || n_modes == 0 {
        return Err(Error::InvalidInput(format!(
            "need positive radius and at least one mode (radius {radius}, modes {n_modes})"
        )));
    }
    let fits = match domain {
        Domain::Disk => center.norm() + radius < 1.0,
        Domain::HalfPlane => radius < center.im,
    };
    if !fits {
        return Err(Error::DomainViolation {
            point: center,
            reason: format!("circle of radius {radius} exits the domain"),
        });
    }
    let n_samples = (8 * n_modes).max(256);
    let mut samples = Vec::with_capacity(n_samples);
    let mut max_sample = 0.0f64;
    for j in 0..n_samples {
        let theta = TAU * j as f64 / n_samples as f64;
        let v = eval(center + radius * unit(theta))?;
        max_sample = max_sample.max(v.norm());
        samples.push(v);
    }
    // c_k = (1/N) Σ_j f_j e^{-ikθ_j}; mode +k is a_k ρ^k, mode -k is conj(b_k) ρ^k
    let dft = |k: i64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &v) in samples.iter().enumerate() {
            let theta = TAU * j as f64 / n_samples as f64;
            acc += v * unit(-(k as f64) * theta);
        }
        acc / n_samples as f64
    };
    let mut analytic = Vec::with_capacity(n_modes + 1);
    for k in 0..=n_modes {
        analytic.push(dft(k as i64) / radius.powi(k as i32));
    }
    let mut coanalytic = Vec::with_capacity(n_modes);
    for k in 1..=n_modes {
        coanalytic.push(dft(-(k as i64)).conj() / radius.powi(k as i32));
    }
    Ok(LocalExpansion {
        analytic,
        coanalytic,
        radius,
        max_sample,
    })
}

/// Default relative tolerance for deciding that a local coefficient is zero.
pub const DEFAULT_MULTIPLICITY_TOLERANCE: f64 = 1e-7;

/// Order of the zero of `f - f(zero_point)` at `zero_point`, together with
/// the local coefficients that witnessed it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MultiplicityResult {
    /// Order of the analytic part (the reported multiplicity).
    pub order: usize,
    /// Index of the first non-negligible co-analytic coefficient, if any.
    pub coanalytic_order: Option<usize>,
    pub analytic_coefficients: Vec<Complex64>,
    pub coanalytic_coefficients: Vec<Complex64>,
    /// Absolute coefficient threshold that was applied
    /// (`tolerance × max sampled |f - f(zero_point)|`).
    pub tolerance_used: f64,
}

impl MultiplicityResult {
    /// True when the co-analytic part vanishes to *lower* order than the
    /// analytic part. The usual convention (analytic order ≤ co-analytic
    /// order at a sense-preserving zero) does not cover this case, so it is
    /// flagged instead of folded into `order`.
    pub fn sense_reversing_order(&self) -> bool {
        matches!(self.coanalytic_order, Some(m) if m < self.order)
    }
}

/// Multiplicity of the zero of `f - f(zero_point)` at `zero_point`.
///
/// The coefficients are extracted by `local_fourier` on a circle of radius
/// `min(0.1, half distance to the boundary)`; a coefficient counts as nonzero
/// when it exceeds `tolerance × max sampled |f - f(zero_point)|`.
pub fn multiplicity(
    f: &HarmonicMap,
    zero_point: Complex64,
    tolerance: f64,
) -> Result<MultiplicityResult> {
    if !(tolerance > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    let base = f.eval(zero_point)?;
    let radius = default_fourier_radius(f.domain(), zero_point);
    if !(radius > 0.0) {
        return Err(Error::DomainViolation {
            point: zero_point,
            reason: "no room for a sampling circle at this point".into(),
        });
    }
    let expansion = local_fourier_of(
        |z| Ok(f.eval(z)? - base),
        f.domain(),
        zero_point,
        radius,
        DEFAULT_FOURIER_MODES,
    )?;
    let threshold = tolerance * expansion.max_sample;
    let order = (1..expansion.analytic.len())
        .find(|&k| expansion.analytic[k].norm() > threshold);
    let coanalytic_order =
        (1..=expansion.coanalytic.len()).find(|&k| expansion.coanalytic_coeff(k).norm() > threshold);
    let Some(order) = order else {
        return Err(Error::Degenerate {
            point: zero_point,
            reason: format!(
                "all analytic coefficients fall below {threshold:.3e}: the map is locally constant or the sampling radius {radius:.3e} is too small"
            ),
        });
    };
    Ok(MultiplicityResult {
        order,
        coanalytic_order,
        analytic_coefficients: expansion.analytic,
        coanalytic_coefficients: expansion.coanalytic,
        tolerance_used: threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_3;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// The three-arc boundary data with arcs at 0, 2π/3, 4π/3 and the cube
    /// roots of unity as values; its Poisson extension maps the disk onto the
    /// inscribed equilateral triangle.
    pub(crate) fn triangle_map() -> HarmonicMap {
        let b = StepBoundaryFunction::new(
            vec![0.0, 2.0 * FRAC_PI_3, 4.0 * FRAC_PI_3],
            vec![
                c(1.0, 0.0),
                Complex64::from_polar(1.0, 2.0 * FRAC_PI_3),
                Complex64::from_polar(1.0, 4.0 * FRAC_PI_3),
            ],
        )
        .unwrap();
        poisson_step_map(b)
    }

    #[test]
    fn identity_map_evaluates_to_itself() {
        let f = HarmonicMap::new(
            AnalyticFunction::identity(),
            AnalyticFunction::zero(),
            Domain::Disk,
        )
        .unwrap();
        let z = c(0.3, 0.4);
        assert!((f.eval(z).unwrap() - z).norm() < 1e-15);
    }

    #[test]
    fn conjugate_part_enters_conjugated() {
        // h(z) = z, g(z) = 0.5 z: f(i) = i + conj(0.5 i) = 0.5 i
        let f = HarmonicMap::new(
            AnalyticFunction::identity(),
            AnalyticFunction::scaled_identity(c(0.5, 0.0)).unwrap(),
            Domain::Disk,
        )
        .unwrap();
        assert!((f.eval(c(0.0, 1.0).scale(1.0 - 1e-12)).unwrap() - c(0.0, 0.5)).norm() < 1e-9);
    }

    #[test]
    fn partials_of_polynomial_pair() {
        // h(z) = z², g = 0 at z = 1/2 → (1, 0)
        let f = HarmonicMap::new(
            AnalyticFunction::polynomial(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap(),
            AnalyticFunction::zero(),
            Domain::Disk,
        )
        .unwrap();
        let (hp, gp) = f.partials(c(0.5, 0.0)).unwrap();
        assert!((hp - c(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(gp, c(0.0, 0.0));

        // h(z) = z, g(z) = 0.5 z² at z = i → (1, i)
        let f = HarmonicMap::new(
            AnalyticFunction::identity(),
            AnalyticFunction::polynomial(vec![c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)]).unwrap(),
            Domain::Disk,
        )
        .unwrap();
        let z = c(0.0, 1.0 - 1e-12);
        let (hp, gp) = f.partials(z).unwrap();
        assert!((hp - c(1.0, 0.0)).norm() < 1e-12);
        assert!((gp - c(0.0, 1.0)).norm() < 1e-9);
    }

    #[test]
    fn dilatation_algebra() {
        // h(z) = z, g(z) = α z²/2 with α = 0.8 at z = 0.5 → a = 0.4, D = 7/3
        let f = HarmonicMap::new(
            AnalyticFunction::identity(),
            AnalyticFunction::polynomial(vec![c(0.0, 0.0), c(0.0, 0.0), c(0.4, 0.0)]).unwrap(),
            Domain::Disk,
        )
        .unwrap();
        let rep = f.dilatation(c(0.5, 0.0)).unwrap();
        assert!((rep.a_f - c(0.4, 0.0)).norm() < 1e-15);
        assert!((rep.d_f - 7.0 / 3.0).abs() < 1e-15);
        assert!((rep.a_f.norm() - rep.nu_f.norm()).abs() < 1e-15);
        assert!(rep.jacobian > 0.0);
    }

    #[test]
    fn conformal_case_has_unit_dilatation() {
        let f = HarmonicMap::new(
            AnalyticFunction::polynomial(vec![c(0.0, 0.0), c(2.0, 1.0), c(0.3, 0.0)]).unwrap(),
            AnalyticFunction::zero(),
            Domain::Disk,
        )
        .unwrap();
        let rep = f.dilatation(c(-0.2, 0.5)).unwrap();
        assert_eq!(rep.a_f, c(0.0, 0.0));
        assert_eq!(rep.d_f, 1.0);
    }

    #[test]
    fn degenerate_point_is_reported() {
        // h(z) = z², h'(0) = 0
        let f = HarmonicMap::new(
            AnalyticFunction::polynomial(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap(),
            AnalyticFunction::zero(),
            Domain::Disk,
        )
        .unwrap();
        assert!(matches!(
            f.dilatation(c(0.0, 0.0)),
            Err(Error::Degenerate { .. })
        ));
    }

    #[test]
    fn triangle_map_centroid_and_first_moment() {
        let f = triangle_map();
        // equal arcs with centroid-zero vertices put f(0) at the origin
        assert!(f.eval(c(0.0, 0.0)).unwrap().norm() < 1e-14);
        // |h'(0)| = 3√3/(2π)
        let (hp, _) = f.partials(c(0.0, 0.0)).unwrap();
        let expected = 3.0 * 3.0f64.sqrt() / TAU;
        assert!((hp.norm() - expected).abs() < 1e-12);
    }

    #[test]
    fn eval_rejects_exterior_points() {
        let f = triangle_map();
        assert!(matches!(
            f.eval(c(1.2, 0.0)),
            Err(Error::DomainViolation { .. })
        ));
    }

    #[test]
    fn local_fourier_reads_off_monomials() {
        // f(z) = z³
        let f = HarmonicMap::new(
            AnalyticFunction::polynomial(vec![
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(1.0, 0.0),
            ])
            .unwrap(),
            AnalyticFunction::zero(),
            Domain::Disk,
        )
        .unwrap();
        let e = local_fourier(&f, c(0.0, 0.0), 0.1, 8).unwrap();
        assert!((e.analytic[3] - c(1.0, 0.0)).norm() < 1e-10);
        for (k, a) in e.analytic.iter().enumerate() {
            if k != 3 {
                assert!(a.norm() < 1e-10, "spurious analytic mode {k}");
            }
        }
        for b in &e.coanalytic {
            assert!(b.norm() < 1e-10);
        }
    }

    #[test]
    fn local_fourier_splits_mixed_map() {
        // f(z) = z³ + 0.5 conj(z)⁴
        let f = HarmonicMap::new(
            AnalyticFunction::polynomial(vec![
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(1.0, 0.0),
            ])
            .unwrap(),
            AnalyticFunction::polynomial(vec![
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.5, 0.0),
            ])
            .unwrap(),
            Domain::Disk,
        )
        .unwrap();
        let e = local_fourier(&f, c(0.0, 0.0), 0.1, 8).unwrap();
        assert!((e.analytic[3] - c(1.0, 0.0)).norm() < 1e-10);
        assert!((e.coanalytic_coeff(4) - c(0.5, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn local_fourier_rejects_oversized_circle() {
        let f = triangle_map();
        assert!(local_fourier(&f, c(0.95, 0.0), 0.2, 8).is_err());
    }

    #[test]
    fn multiplicity_of_test_maps() {
        // f(z) = z³ + 0.5 conj(z)⁴ at 0 → order 3, co-analytic order 4
        let f = HarmonicMap::new(
            AnalyticFunction::polynomial(vec![
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(1.0, 0.0),
            ])
            .unwrap(),
            AnalyticFunction::polynomial(vec![
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.5, 0.0),
            ])
            .unwrap(),
            Domain::Disk,
        )
        .unwrap();
        let m = multiplicity(&f, c(0.0, 0.0), DEFAULT_MULTIPLICITY_TOLERANCE).unwrap();
        assert_eq!(m.order, 3);
        assert_eq!(m.coanalytic_order, Some(4));
        assert!(!m.sense_reversing_order());

        let id = HarmonicMap::new(
            AnalyticFunction::identity(),
            AnalyticFunction::zero(),
            Domain::Disk,
        )
        .unwrap();
        assert_eq!(
            multiplicity(&id, c(0.0, 0.0), DEFAULT_MULTIPLICITY_TOLERANCE)
                .unwrap()
                .order,
            1
        );
    }

    #[test]
    fn multiplicity_recentred_double_zero() {
        // h(z) = (z - 0.2)², g(z) = 0.1 (z - 0.2)³ with its constant dropped
        // so that g(0) = 0; the recentered expansion has a_2 = 1, b_3 = 0.1.
        // (z-0.2)² = 0.04 - 0.4 z + z²
        let h = AnalyticFunction::polynomial(vec![c(0.04, 0.0), c(-0.4, 0.0), c(1.0, 0.0)]).unwrap();
        // 0.1 (z-0.2)³ = 0.1(z³ - 0.6 z² + 0.12 z - 0.008); drop the constant so g(0)=0
        let g = AnalyticFunction::polynomial(vec![
            c(0.0, 0.0),
            c(0.012, 0.0),
            c(-0.06, 0.0),
            c(0.1, 0.0),
        ])
        .unwrap();
        let f = HarmonicMap::new(h, g, Domain::Disk).unwrap();
        let m = multiplicity(&f, c(0.2, 0.0), DEFAULT_MULTIPLICITY_TOLERANCE).unwrap();
        assert_eq!(m.order, 2);
        assert_eq!(m.coanalytic_order, Some(3));
        assert!((m.analytic_coefficients[2] - c(1.0, 0.0)).norm() < 1e-8);
        assert!((m.coanalytic_coefficients[2] - c(0.1, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn multiplicity_of_constant_map_fails() {
        let f = HarmonicMap::new(
            AnalyticFunction::constant(c(0.7, 0.0)),
            AnalyticFunction::zero(),
            Domain::Disk,
        )
        .unwrap();
        assert!(multiplicity(&f, c(0.0, 0.0), DEFAULT_MULTIPLICITY_TOLERANCE).is_err());
    }

    #[test]
    fn normalization_is_enforced() {
        // g(0) ≠ 0 must be rejected
        let r = HarmonicMap::new(
            AnalyticFunction::identity(),
            AnalyticFunction::constant(c(0.3, 0.0)),
            Domain::Disk,
        );
        assert!(r.is_err());
    }
}
