//! Boundary-behavior diagnostics: spiral approach curves, the singular curve
//! integral with divergence classification, radial derivative trends, area
//! integrals, the area/dilatation consistency bound, majorization checks and
//! cluster-set sampling.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::AnalyticFunction;
use crate::error::{Error, Result};
use crate::geom::{point_segment_distance, unit};
use crate::harmonic::{Domain, HarmonicMap};
use crate::quad::adaptive_simpson;

/// The inward curve `θ ↦ (1 - m|θ - θ0|) e^{iθ}` approaching `e^{iθ0}`,
/// defined for `0 < |θ - θ0| ≤ min(π, 1/m)`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GammaCurve {
    pub zeta_angle: f64,
    pub m: f64,
}

impl GammaCurve {
    pub fn new(zeta_angle: f64, m: f64) -> Result<Self> {
        if !zeta_angle.is_finite() || !(m > 0.0) || !m.is_finite() {
            return Err(Error::InvalidInput(format!(
                "curve needs a finite angle and m > 0, got ({zeta_angle}, {m})"
            )));
        }
        Ok(Self { zeta_angle, m })
    }

    /// Upper end of the parameter range `|θ - θ0|`.
    pub fn theta_max(&self) -> f64 {
        PI.min(1.0 / self.m)
    }

    /// The boundary point the curve tends to.
    pub fn zeta(&self) -> Complex64 {
        unit(self.zeta_angle)
    }

    /// Curve point and parameter speed `|dz/dθ| = sqrt(m² + (1 - m|θ-θ0|)²)`
    /// at the angle `theta`.
    pub fn point(&self, theta: f64) -> Result<(Complex64, f64)> {
        let s = (theta - self.zeta_angle).abs();
        if !(s > 0.0 && s <= self.theta_max()) {
            return Err(Error::InvalidInput(format!(
                "theta offset {s} outside the parameter range (0, {}]",
                self.theta_max()
            )));
        }
        Ok(self.point_at_offset(s, theta >= self.zeta_angle))
    }

    /// Point and speed at offset `s = |θ - θ0|` on the branch selected by
    /// `forward`.
    fn point_at_offset(&self, s: f64, forward: bool) -> (Complex64, f64) {
        let theta = if forward {
            self.zeta_angle + s
        } else {
            self.zeta_angle - s
        };
        let radius = 1.0 - self.m * s;
        let speed = (self.m * self.m + radius * radius).sqrt();
        (radius * unit(theta), speed)
    }
}

/// Quadrature tolerance of the partial curve integrals.
const LM_QUAD_TOL: f64 = 1e-9;

/// Partial curve integral of `(1 - |a(z)|²)/(1 - |z|²)` over the curve,
/// truncated at parameter offset `delta` and symmetrized over the two
/// branches (the arithmetic mean of the branch integrals; the full two-branch
/// integral is twice the returned value).
///
/// The substitution `u = log s` flattens the `1/s` blow-up near the tip, so
/// one adaptive pass reaches uniform accuracy across the whole cutoff
/// schedule.
pub fn lm_integral(a: &AnalyticFunction, curve: &GammaCurve, delta: f64) -> Result<f64> {
    lm_integral_of(&|z| a.eval(z), curve, delta)
}

/// `lm_integral` for an arbitrary dilatation evaluator.
pub(crate) fn lm_integral_of<F>(a: &F, curve: &GammaCurve, delta: f64) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let theta_max = curve.theta_max();
    if !(delta > 0.0 && delta < theta_max) {
        return Err(Error::InvalidInput(format!(
            "cutoff delta must lie in (0, {theta_max}), got {delta}"
        )));
    }
    let integrand = |u: f64| -> Result<f64> {
        let s = u.exp();
        let mut acc = 0.0;
        for forward in [true, false] {
            let (z, speed) = curve.point_at_offset(s, forward);
            let av = a(z)?;
            let am2 = av.norm_sqr();
            if am2 >= 1.0 {
                return Err(Error::NotSensePreserving {
                    point: z,
                    modulus: am2.sqrt(),
                });
            }
            let denom = 1.0 - z.norm_sqr();
            acc += (1.0 - am2) / denom * speed;
        }
        // mean of the branches, times the Jacobian ds = e^u du
        Ok(0.5 * acc * s)
    };
    adaptive_simpson(&integrand, delta.ln(), theta_max.ln(), LM_QUAD_TOL)
}

/// Classification of a truncated singular integral from its cutoff trend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DivergenceClass {
    Convergent,
    Divergent,
    Inconclusive,
}

/// Verdict with the diagnostics that produced it.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DivergenceVerdict {
    pub class: DivergenceClass,
    /// Converged value for a convergent verdict, growth rate (slope in
    /// `log(1/δ)`) for a divergent one, last partial value otherwise.
    pub limit_or_rate: f64,
    /// Fitted slope of partial value against `log(1/δ)` over the tail of the
    /// schedule.
    pub slope: f64,
    /// Root-mean-square fit residual, relative to the last partial value.
    pub fit_residual: f64,
}

/// Decision thresholds for [`lm_classify`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LmThresholds {
    /// Slope above which the trend counts as logarithmic growth.
    pub slope: f64,
    /// Cauchy tolerance on the differences of the last three partial values.
    pub cauchy: f64,
    /// Maximum relative fit residual for a trustworthy slope.
    pub fit_residual: f64,
}

impl Default for LmThresholds {
    fn default() -> Self {
        Self {
            slope: 1e-3,
            cauchy: 1e-6,
            fit_residual: 0.05,
        }
    }
}

/// A cutoff schedule with the partial integrals and the verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LmEstimate {
    pub m: f64,
    /// `(δ, partial value)` pairs in schedule order.
    pub partial_values: Vec<(f64, f64)>,
    pub verdict: DivergenceVerdict,
}

/// Default cutoff schedule `1e-1, 1e-2, …, 1e-9`.
///
/// The schedule reaches `1e-9` so that the Cauchy differences of a finite
/// integral fall below the default tolerance.
pub fn default_delta_schedule() -> Vec<f64> {
    (1..=9).map(|k| 10f64.powi(-k)).collect()
}

/// Run the cutoff schedule for one curve and classify the trend.
pub fn lm_classify(
    a: &AnalyticFunction,
    zeta_angle: f64,
    m: f64,
    schedule: &[f64],
    thresholds: &LmThresholds,
) -> Result<LmEstimate> {
    lm_classify_of(&|z| a.eval(z), zeta_angle, m, schedule, thresholds)
}

pub(crate) fn lm_classify_of<F>(
    a: &F,
    zeta_angle: f64,
    m: f64,
    schedule: &[f64],
    thresholds: &LmThresholds,
) -> Result<LmEstimate>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if schedule.len() < 3 {
        return Err(Error::InvalidInput(
            "cutoff schedule needs at least three values".into(),
        ));
    }
    if !schedule.windows(2).all(|w| w[1] < w[0]) {
        return Err(Error::InvalidInput(
            "cutoff schedule must be strictly decreasing".into(),
        ));
    }
    let curve = GammaCurve::new(zeta_angle, m)?;
    let mut partial_values = Vec::with_capacity(schedule.len());
    for &delta in schedule {
        let v = lm_integral_of(a, &curve, delta)?;
        partial_values.push((delta, v));
    }
    let verdict = classify_partials(&partial_values, thresholds);
    Ok(LmEstimate {
        m,
        partial_values,
        verdict,
    })
}

fn classify_partials(partials: &[(f64, f64)], thresholds: &LmThresholds) -> DivergenceVerdict {
    let n = partials.len();
    let last = partials[n - 1].1;
    // convergent: the last three partial values are Cauchy
    let d1 = (partials[n - 1].1 - partials[n - 2].1).abs();
    let d2 = (partials[n - 2].1 - partials[n - 3].1).abs();
    // slope fit over the tail half of the schedule
    let fit_from = (n / 2).min(n - 3);
    let xs: Vec<f64> = partials[fit_from..]
        .iter()
        .map(|(d, _)| (1.0 / d).ln())
        .collect();
    let ys: Vec<f64> = partials[fit_from..].iter().map(|&(_, v)| v).collect();
    let (slope, rms) = linear_fit(&xs, &ys);
    let fit_residual = rms / last.abs().max(1.0);
    if d1 < thresholds.cauchy && d2 < thresholds.cauchy {
        DivergenceVerdict {
            class: DivergenceClass::Convergent,
            limit_or_rate: last,
            slope,
            fit_residual,
        }
    } else if slope > thresholds.slope && fit_residual < thresholds.fit_residual {
        DivergenceVerdict {
            class: DivergenceClass::Divergent,
            limit_or_rate: slope,
            slope,
            fit_residual,
        }
    } else {
        DivergenceVerdict {
            class: DivergenceClass::Inconclusive,
            limit_or_rate: last,
            slope,
            fit_residual,
        }
    }
}

/// Least-squares line through `(xs, ys)`: returns (slope, rms residual).
fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let mut ss = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let e = y - (slope * x + intercept);
        ss += e * e;
    }
    (slope, (ss / n).sqrt())
}

/// Scan-level conclusion: if every tested `m < 1/π` produced a divergent
/// integral, the criterion forces continuity of the boundary function at ζ.
pub fn scan_conclusion(estimates: &[LmEstimate]) -> &'static str {
    let relevant: Vec<_> = estimates.iter().filter(|e| e.m < 1.0 / PI).collect();
    if !relevant.is_empty()
        && relevant
            .iter()
            .all(|e| e.verdict.class == DivergenceClass::Divergent)
    {
        "divergent for all tested m < 1/π: continuity of the boundary function at ζ is forced"
    } else if relevant
        .iter()
        .any(|e| e.verdict.class == DivergenceClass::Inconclusive)
    {
        "no verdict: some cutoff trends were inconclusive"
    } else {
        "no continuity conclusion: some tested m < 1/π gave a finite integral"
    }
}

/// Trend of `(1 - r)|h'(r e^{iθ0})|` along the radius toward `e^{iθ0}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadialVerdict {
    TendsToZero,
    TendsToPositive,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadialTrend {
    pub radii: Vec<f64>,
    /// `(1 - r)|h'(r ζ)|` per radius.
    pub values: Vec<f64>,
    pub verdict: RadialVerdict,
    /// Stabilized positive limit estimate, when one exists.
    pub c_estimate: f64,
}

/// Default radii: `1 - 10^{-k/3}` for k = 3..15 (last step 1e-5 from the
/// boundary).
pub fn default_radii() -> Vec<f64> {
    (3..=15).map(|k| 1.0 - 10f64.powf(-(k as f64) / 3.0)).collect()
}

/// Default threshold under which the final value counts as vanishing.
pub const DEFAULT_RADIAL_THRESHOLD: f64 = 1e-3;

/// Radial limit diagnostic: a vanishing trend is the numerical signature of
/// continuity of the boundary function at ζ (for maps of bounded variation
/// on the circle), a positive stabilized limit the signature of a jump.
pub fn radial_derivative_trend(
    f: &HarmonicMap,
    zeta_angle: f64,
    radii: &[f64],
    threshold: f64,
) -> Result<RadialTrend> {
    if radii.len() < 5 {
        return Err(Error::InvalidInput(
            "need at least five radii for a trend".into(),
        ));
    }
    if !radii.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidInput("radii must be increasing".into()));
    }
    let last = *radii.last().unwrap();
    if !(last >= 0.999 && last < 1.0) || radii[0] <= 0.0 {
        return Err(Error::InvalidInput(
            "radii must lie in (0, 1) and reach at least 0.999".into(),
        ));
    }
    let zeta = unit(zeta_angle);
    let mut values = Vec::with_capacity(radii.len());
    for &r in radii {
        let z = zeta * r;
        let (hp, _) = f.partials(z).map_err(|e| Error::BoundaryEvaluation {
            radius: r,
            source: Box::new(e),
        })?;
        values.push((1.0 - r) * hp.norm());
    }
    let tail = &values[values.len() - 5..];
    let c_estimate = tail.iter().sum::<f64>() / tail.len() as f64;
    let stabilized = c_estimate > threshold
        && tail
            .iter()
            .all(|&v| (v - c_estimate).abs() <= 0.05 * c_estimate);
    let decreasing = tail.windows(2).all(|w| w[1] <= w[0] + 1e-15);
    let final_value = *values.last().unwrap();
    let verdict = if stabilized {
        RadialVerdict::TendsToPositive
    } else if final_value < threshold && decreasing {
        RadialVerdict::TendsToZero
    } else {
        RadialVerdict::Inconclusive
    };
    Ok(RadialTrend {
        radii: radii.to_vec(),
        values,
        verdict,
        c_estimate,
    })
}

/// Area estimate of the image of the disk.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AreaEstimate {
    /// Richardson-combined value from the two finest grids.
    pub value: f64,
    /// Difference between the two grid levels.
    pub error_estimate: f64,
    /// Number of sample cells with negative Jacobian (sense-reversal
    /// warning; the integral is still reported).
    pub negative_cells: usize,
}

/// Area of `f(𝔻)` as `∬ (|h'|² - |g'|²) dxdy` over the unit disk by midpoint
/// polar quadrature at `resolution` radial cells, refined once.
pub fn area_integral(f: &HarmonicMap, resolution: usize) -> Result<AreaEstimate> {
    if f.domain() != Domain::Disk {
        return Err(Error::InvalidInput(
            "area integral is defined for disk-domain maps".into(),
        ));
    }
    if resolution < 16 {
        return Err(Error::InvalidInput(format!(
            "resolution must be at least 16, got {resolution}"
        )));
    }
    let (coarse, _) = polar_jacobian_sum(f, resolution / 2)?;
    let (fine, negative_cells) = polar_jacobian_sum(f, resolution)?;
    // midpoint quadrature is O(h²) on the smooth part
    let value = fine + (fine - coarse) / 3.0;
    Ok(AreaEstimate {
        value,
        error_estimate: (fine - coarse).abs(),
        negative_cells,
    })
}

fn polar_jacobian_sum(f: &HarmonicMap, n_r: usize) -> Result<(f64, usize)> {
    let n_theta = (2 * n_r).max(64);
    let dr = 1.0 / n_r as f64;
    let dt = TAU / n_theta as f64;
    let mut acc = 0.0;
    let mut negative = 0usize;
    for i in 0..n_r {
        let r = (i as f64 + 0.5) * dr;
        let mut ring = 0.0;
        for j in 0..n_theta {
            let theta = (j as f64 + 0.5) * dt;
            let (hp, gp) = f.partials(r * unit(theta))?;
            let jac = hp.norm_sqr() - gp.norm_sqr();
            if jac < 0.0 {
                negative += 1;
            }
            ring += jac;
        }
        acc += ring * r * dr * dt;
    }
    Ok((acc, negative))
}

/// Report of the area/dilatation consistency bound
/// `Area < (π H²/0.15) ∫ L(m) dm` for a bounded map with a finite boundary
/// value at ζ.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AreaBoundReport {
    pub area: f64,
    /// Sampled maximum of `(1 - |z|)|h'(z)|` over the compact probe set.
    pub h_sup: f64,
    /// `∫ L(m) dm` over the m-grid (trapezoid), with the full two-branch
    /// normalization of L; infinite when some L(m) diverges.
    pub integral_l: f64,
    /// `π H²/0.15 · integral_l`.
    pub rhs: f64,
    pub inequality_holds: bool,
}

/// Constant in the right-hand side of the area bound.
pub const AREA_BOUND_CONSTANT: f64 = 0.15;

/// Evaluate both sides of the area/dilatation bound at ζ.
///
/// `H` is a sampled maximum over a compact probe set (an interior disk of
/// radius `1 - compact_margin` plus a radial approach sector at ζ), not a
/// proven supremum. Divergent `L(m)` on any grid point short-circuits the
/// right-hand side to infinity, which reports the inequality as trivially
/// satisfied.
pub fn area_bound_check(
    f: &HarmonicMap,
    zeta_angle: f64,
    m_grid: &[f64],
    compact_margin: f64,
    resolution: usize,
    thresholds: &LmThresholds,
) -> Result<AreaBoundReport> {
    if m_grid.len() < 2 {
        return Err(Error::InvalidInput(
            "need at least two m values for the integral".into(),
        ));
    }
    if !m_grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidInput("m grid must be increasing".into()));
    }
    if *m_grid.last().unwrap() >= 1.0 / PI || m_grid[0] <= 0.0 {
        return Err(Error::InvalidInput(
            "m grid must lie inside (0, 1/π)".into(),
        ));
    }
    if !(compact_margin > 0.0 && compact_margin < 1.0) {
        return Err(Error::InvalidInput(format!(
            "compact margin must lie in (0, 1), got {compact_margin}"
        )));
    }
    let area = area_integral(f, resolution)?.value;
    let h_sup = sampled_h_sup(f, zeta_angle, compact_margin)?;

    let dilatation = |z: Complex64| -> Result<Complex64> { Ok(f.dilatation(z)?.a_f) };
    let schedule = default_delta_schedule();
    let mut l_values = Vec::with_capacity(m_grid.len());
    let mut divergent = false;
    for &m in m_grid {
        let est = lm_classify_of(&dilatation, zeta_angle, m, &schedule, thresholds)?;
        match est.verdict.class {
            DivergenceClass::Divergent => {
                divergent = true;
                break;
            }
            // full two-branch value: twice the symmetrized partial integral
            _ => l_values.push(2.0 * est.partial_values.last().unwrap().1),
        }
    }
    let (integral_l, rhs) = if divergent {
        (f64::INFINITY, f64::INFINITY)
    } else {
        let mut acc = 0.0;
        for (w, vals) in m_grid.windows(2).zip(l_values.windows(2)) {
            acc += 0.5 * (vals[0] + vals[1]) * (w[1] - w[0]);
        }
        (acc, PI * h_sup * h_sup / AREA_BOUND_CONSTANT * acc)
    };
    Ok(AreaBoundReport {
        area,
        h_sup,
        integral_l,
        rhs,
        inequality_holds: area < rhs,
    })
}

/// Sampled maximum of `(1-|z|)|h'|` over an interior disk plus an approach
/// sector at ζ.
fn sampled_h_sup(f: &HarmonicMap, zeta_angle: f64, compact_margin: f64) -> Result<f64> {
    let mut h_sup = 0.0f64;
    let r_max = 1.0 - compact_margin;
    let (n_r, n_t) = (48, 192);
    for i in 0..=n_r {
        let r = r_max * i as f64 / n_r as f64;
        for j in 0..n_t {
            let theta = TAU * j as f64 / n_t as f64;
            let (hp, _) = f.partials(r * unit(theta))?;
            h_sup = h_sup.max((1.0 - r) * hp.norm());
        }
    }
    // radial approach sector at ζ
    for k in 0..=24 {
        let one_minus_r = compact_margin * (1e-4f64 / compact_margin).powf(k as f64 / 24.0);
        let r = 1.0 - one_minus_r;
        for offset in [-0.1, -0.05, 0.0, 0.05, 0.1] {
            let z = r * unit(zeta_angle + offset);
            let (hp, _) = f.partials(z).map_err(|e| Error::BoundaryEvaluation {
                radius: r,
                source: Box::new(e),
            })?;
            h_sup = h_sup.max((1.0 - r) * hp.norm());
        }
    }
    Ok(h_sup)
}

/// Necessary-condition check for majorization `a ≪ F`: `|a| ≤ |F|` on the
/// samples. The full factorization through a disk-to-disk analytic factor
/// is not decided, only this necessary condition.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MajorizationReport {
    pub necessary_ok: bool,
    pub worst_ratio: f64,
}

pub fn majorization_check(
    a: &AnalyticFunction,
    majorant: &AnalyticFunction,
    samples: &[Complex64],
) -> Result<MajorizationReport> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("no sample points".into()));
    }
    let mut worst: f64 = 0.0;
    for &z in samples {
        let fv = majorant.eval(z)?;
        if fv.norm() >= 1.0 {
            return Err(Error::InvalidInput(format!(
                "majorant leaves the unit disk at z = {z}"
            )));
        }
        if fv.norm() <= 1e-12 {
            continue;
        }
        let av = a.eval(z)?;
        worst = worst.max(av.norm() / fv.norm());
    }
    Ok(MajorizationReport {
        necessary_ok: worst <= 1.0 + 1e-9,
        worst_ratio: worst,
    })
}

/// How approach paths toward the boundary point are laid out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Approach {
    /// Points along the single radius toward ζ.
    Radial,
    /// A fan of straight approach directions spread between the two
    /// near-tangential extremes.
    TangentialFan,
}

/// Sampled image points near a boundary point, with the distance statistic
/// against the expected cluster segment when step data is available.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClusterSample {
    pub points: Vec<Complex64>,
    /// Segment joining the one-sided boundary limits (step maps only);
    /// degenerate (both ends equal) inside an arc.
    pub reference_segment: Option<(Complex64, Complex64)>,
    /// Max distance of the sampled points from the reference segment.
    pub max_distance: Option<f64>,
}

/// Truncation distance from the boundary for approach paths.
const CLUSTER_TRUNCATION: f64 = 1e-4;

/// Sample the map along `n` approach paths to `e^{iθ0}`, truncated at
/// `|z| = 1 - 1e-4`.
pub fn cluster_sample(
    f: &HarmonicMap,
    zeta_angle: f64,
    approach: Approach,
    n: usize,
) -> Result<ClusterSample> {
    if n < 10 {
        return Err(Error::InvalidInput(format!(
            "need at least 10 approach paths, got {n}"
        )));
    }
    if f.domain() != Domain::Disk {
        return Err(Error::InvalidInput(
            "cluster sampling is defined for disk-domain maps".into(),
        ));
    }
    let zeta = unit(zeta_angle);
    let mut points = Vec::new();
    let depths = [1e-3, 3e-4, CLUSTER_TRUNCATION];
    match approach {
        Approach::Radial => {
            // n sample radii on the radial path, log-spaced down to the
            // truncation depth
            for k in 0..n {
                let t = k as f64 / (n - 1) as f64;
                let one_minus_r = 1e-2 * (CLUSTER_TRUNCATION / 1e-2).powf(t);
                let z = zeta * (1.0 - one_minus_r);
                points.push(eval_near_boundary(f, z)?);
            }
        }
        Approach::TangentialFan => {
            // approach along z = ζ(1 - s e^{iφ}); φ sweeps the inward fan
            for k in 0..n {
                let phi = -1.25 + 2.5 * k as f64 / (n - 1) as f64;
                for &depth in &depths {
                    // choose s so that 1 - |z| ≈ depth
                    let s = depth / phi.cos();
                    let z = zeta * (Complex64::new(1.0, 0.0) - s * unit(phi));
                    let z = if z.norm() >= 1.0 - 0.5 * CLUSTER_TRUNCATION {
                        z * ((1.0 - depth) / z.norm())
                    } else {
                        z
                    };
                    points.push(eval_near_boundary(f, z)?);
                }
            }
        }
    }
    let reference_segment = f.step_data().map(|b| b.one_sided_limits(zeta_angle));
    let max_distance = reference_segment.map(|(w_minus, w_plus)| {
        points
            .iter()
            .map(|&p| point_segment_distance(p, w_minus, w_plus))
            .fold(0.0f64, f64::max)
    });
    Ok(ClusterSample {
        points,
        reference_segment,
        max_distance,
    })
}

fn eval_near_boundary(f: &HarmonicMap, z: Complex64) -> Result<Complex64> {
    f.eval(z).map_err(|e| Error::BoundaryEvaluation {
        radius: z.norm(),
        source: Box::new(e),
    })
}
