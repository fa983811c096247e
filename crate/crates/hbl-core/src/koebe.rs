//! Quantitative hypothesis checks for the Koebe-type vanishing criteria:
//! capacity-weighted smallness quantities over continuum sequences, the
//! multiplicity-based term test for zero sequences, and the harmonic
//! Schwarz bound.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::capacity::tau2;
use crate::error::{Error, Result};
use crate::geom::{is_finite, polyline_diameter};
use crate::harmonic::HarmonicMap;

/// One term of a shrinking-continuum sequence: a continuum inside the disk
/// of radius `containment_radius`, on which the map stays within
/// `closeness_bound` of the target value.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KoebeSequenceItem {
    pub continuum: Vec<Complex64>,
    pub containment_radius: f64,
    pub closeness_bound: f64,
}

impl KoebeSequenceItem {
    pub fn new(
        continuum: Vec<Complex64>,
        containment_radius: f64,
        closeness_bound: f64,
    ) -> Result<Self> {
        if continuum.len() < 2 {
            return Err(Error::InvalidInput(
                "continuum polyline needs at least two vertices".into(),
            ));
        }
        if !(containment_radius > 0.0 && containment_radius < 1.0) {
            return Err(Error::InvalidInput(format!(
                "containment radius must lie in (0, 1), got {containment_radius}"
            )));
        }
        if !(closeness_bound > 0.0) || !closeness_bound.is_finite() {
            return Err(Error::InvalidInput(format!(
                "closeness bound must be positive, got {closeness_bound}"
            )));
        }
        for &v in &continuum {
            if !is_finite(v) || v.norm() >= containment_radius {
                return Err(Error::InvalidInput(format!(
                    "continuum vertex {v} is not inside the disk of radius {containment_radius}"
                )));
            }
        }
        if polyline_diameter(&continuum) == 0.0 {
            return Err(Error::InvalidInput("degenerate continuum".into()));
        }
        Ok(Self {
            continuum,
            containment_radius,
            closeness_bound,
        })
    }

    pub fn diameter(&self) -> f64 {
        polyline_diameter(&self.continuum)
    }
}

/// Per-item derived quantities of the capacity chain.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct KoebeItemReport {
    /// `τ(1/d) · log(1/M) · (1-r)/(1+r)`.
    pub quantity: f64,
    /// Capacity lower bound `τ(1/d)/4` for the connecting family.
    pub modulus_lower: f64,
    /// Modulus upper bound `2π / (½ log(1/M))` for the image family.
    pub modulus_upper: f64,
    /// Distortion constant `(1+r)/(1-r)`.
    pub k_qc: f64,
}

/// Growth classification of the quantity sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    Unbounded,
    Bounded,
    Undetermined,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KoebeReport {
    pub items: Vec<KoebeItemReport>,
    pub trend: Trend,
    /// The certificate threshold the trend was judged against.
    pub certificate: f64,
}

/// Certificate threshold `16π`: a quantity staying below it is consistent
/// with a nonconstant map, exceeding it on a growing tail forces constancy.
pub fn default_certificate() -> f64 {
    16.0 * PI
}

/// Largest continuum diameter the chain argument tolerates.
pub const MAX_CONTINUUM_DIAMETER: f64 = 0.25;

/// Evaluate the capacity-chain quantity for each item and classify the
/// growth trend against `certificate`.
///
/// Trend rules (deterministic stand-ins for an asymptotic statement):
/// `Bounded` when no quantity exceeds the certificate; `Unbounded` when the
/// running maximum exceeds it *and* the maximum over the last third of the
/// sequence strictly exceeds the maximum over the earlier part; otherwise
/// `Undetermined`.
pub fn koebe_quantity_with(
    items: &[KoebeSequenceItem],
    certificate: f64,
) -> Result<KoebeReport> {
    if items.is_empty() {
        return Err(Error::InvalidInput("empty sequence".into()));
    }
    if !(certificate > 0.0) {
        return Err(Error::InvalidInput(format!(
            "certificate threshold must be positive, got {certificate}"
        )));
    }
    let mut reports = Vec::with_capacity(items.len());
    for (j, item) in items.iter().enumerate() {
        let d = item.diameter();
        if d > MAX_CONTINUUM_DIAMETER {
            return Err(Error::InvalidInput(format!(
                "item {j}: continuum diameter {d:.4} exceeds {MAX_CONTINUUM_DIAMETER}; subdivide the continuum into smaller pieces"
            )));
        }
        let r = item.containment_radius;
        let m = item.closeness_bound;
        let tau = tau2(1.0 / d)?.value;
        let log_inv_m = (1.0 / m).ln();
        reports.push(KoebeItemReport {
            quantity: tau * log_inv_m * (1.0 - r) / (1.0 + r),
            modulus_lower: 0.25 * tau,
            modulus_upper: 2.0 * PI / (0.5 * log_inv_m),
            k_qc: (1.0 + r) / (1.0 - r),
        });
    }
    let n = reports.len();
    let sup = reports.iter().map(|r| r.quantity).fold(0.0f64, f64::max);
    let trend = if sup <= certificate {
        Trend::Bounded
    } else if n >= 4 {
        let split = 2 * n / 3;
        let head = reports[..split]
            .iter()
            .map(|r| r.quantity)
            .fold(0.0f64, f64::max);
        let tail = reports[split..]
            .iter()
            .map(|r| r.quantity)
            .fold(0.0f64, f64::max);
        if tail > head {
            Trend::Unbounded
        } else {
            Trend::Undetermined
        }
    } else {
        Trend::Undetermined
    };
    Ok(KoebeReport {
        items: reports,
        trend,
        certificate,
    })
}

/// [`koebe_quantity_with`] at the default `16π` certificate.
pub fn koebe_quantity(items: &[KoebeSequenceItem]) -> Result<KoebeReport> {
    koebe_quantity_with(items, default_certificate())
}

/// Per-item value of the logarithmic variant of the quantity, plus the
/// capacity-vs-logarithm comparison that links the two forms.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SecondFormItem {
    /// `(log(1/d))⁻¹ · log(1/M) · (1-r)/(1+r)`; infinite when `d → 1`.
    pub value: f64,
    /// `τ(1/d) ≥ (π/2)/log(1/d)` verified for this item.
    pub inequality_ok: bool,
    /// Set when `log(1/d)` is too close to 0 for the value to mean anything.
    pub degenerate: bool,
}

/// The logarithmic form of the quantity. Diameters may exceed 1/4 here but
/// must stay below 1.
pub fn koebe_quantity_second_form(items: &[KoebeSequenceItem]) -> Result<Vec<SecondFormItem>> {
    if items.is_empty() {
        return Err(Error::InvalidInput("empty sequence".into()));
    }
    let mut out = Vec::with_capacity(items.len());
    for (j, item) in items.iter().enumerate() {
        let d = item.diameter();
        if d >= 1.0 {
            return Err(Error::InvalidInput(format!(
                "item {j}: continuum diameter {d:.4} must be below 1"
            )));
        }
        let log_inv_d = (1.0 / d).ln();
        let degenerate = log_inv_d < 1e-12;
        let factor = (1.0 / item.closeness_bound).ln() * (1.0 - item.containment_radius)
            / (1.0 + item.containment_radius);
        let value = if degenerate {
            f64::INFINITY
        } else {
            factor / log_inv_d
        };
        let inequality_ok = tau2(1.0 / d)?.value >= FRAC_PI_2 / log_inv_d;
        out.push(SecondFormItem {
            value,
            inequality_ok,
            degenerate,
        });
    }
    Ok(out)
}

/// A sequence of zeros in the upper half-plane with multiplicities, plus the
/// height constant of the term test (default 10, sharpenable to `4 + ε`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZeroSequence {
    pub points: Vec<Complex64>,
    pub multiplicities: Vec<u32>,
    pub constant: f64,
}

impl ZeroSequence {
    pub fn new(points: Vec<Complex64>, multiplicities: Vec<u32>, constant: f64) -> Result<Self> {
        if points.is_empty() || points.len() != multiplicities.len() {
            return Err(Error::InvalidInput(format!(
                "{} zeros with {} multiplicities",
                points.len(),
                multiplicities.len()
            )));
        }
        for &b in &points {
            if !is_finite(b) || b.im <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "zero {b} is not in the upper half-plane"
                )));
            }
        }
        if multiplicities.iter().any(|&m| m == 0) {
            return Err(Error::InvalidInput("multiplicities must be ≥ 1".into()));
        }
        if !(constant > 0.0) || !constant.is_finite() {
            return Err(Error::InvalidInput(format!(
                "constant must be positive, got {constant}"
            )));
        }
        Ok(Self {
            points,
            multiplicities,
            constant,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VanishingReport {
    /// `((c - Im b_k)/(c + Im b_k))^{μ_k}` per zero.
    pub terms: Vec<f64>,
    /// Whether the term sequence is judged to tend to zero; a true verdict
    /// means the vanishing hypothesis is satisfied, which forces the map to
    /// vanish identically.
    pub tends_to_zero: bool,
}

/// Threshold on the last-quartile maximum of the term sequence.
const VANISHING_TAIL_THRESHOLD: f64 = 1e-3;

/// The multiplicity term test: terms tend to zero when the last quartile
/// stays below `1e-3` and the 3-point moving median is nonincreasing over
/// the last half of the sequence.
pub fn vanishing_criterion(seq: &ZeroSequence) -> Result<VanishingReport> {
    let c = seq.constant;
    let terms: Vec<f64> = seq
        .points
        .iter()
        .zip(&seq.multiplicities)
        .map(|(b, &mu)| ((c - b.im) / (c + b.im)).powi(mu as i32))
        .collect();
    let n = terms.len();
    let tail_start = 3 * n / 4;
    let tail_ok = terms[tail_start..]
        .iter()
        .all(|t| t.abs() < VANISHING_TAIL_THRESHOLD);
    let decreasing = if n < 3 {
        terms.windows(2).all(|w| w[1] <= w[0] + 1e-15)
    } else {
        let medians: Vec<f64> = (1..n - 1)
            .map(|i| {
                let mut w = [terms[i - 1], terms[i], terms[i + 1]];
                w.sort_by(|a, b| a.partial_cmp(b).unwrap());
                w[1]
            })
            .collect();
        let half = medians.len() / 2;
        medians[half..].windows(2).all(|w| w[1] <= w[0] + 1e-15)
    };
    Ok(VanishingReport {
        terms,
        tends_to_zero: tail_ok && decreasing,
    })
}

/// Worst ratio of `|f(z)|` against the harmonic Schwarz majorant
/// `(4/π) arctan |z|^μ` over the sample points. The bound certifies when the
/// ratio stays `≤ 1 + 1e-9`.
pub fn schwarz_bound_check(
    f: &HarmonicMap,
    mu: usize,
    samples: &[Complex64],
) -> Result<f64> {
    if mu == 0 {
        return Err(Error::InvalidInput("multiplicity must be ≥ 1".into()));
    }
    if samples.is_empty() {
        return Err(Error::InvalidInput("no sample points".into()));
    }
    let at_origin = f.eval(Complex64::new(0.0, 0.0))?;
    if at_origin.norm() > 1e-8 {
        return Err(Error::InvalidInput(format!(
            "map must vanish at the origin; |f(0)| = {:.3e}",
            at_origin.norm()
        )));
    }
    let mut worst = 0.0f64;
    for &z in samples {
        let v = f.eval(z)?;
        if v.norm() >= 1.0 {
            return Err(Error::InvalidInput(format!(
                "map leaves the unit disk at z = {z}: |f(z)| = {:.6}",
                v.norm()
            )));
        }
        if z.norm() == 0.0 {
            continue;
        }
        let majorant = 4.0 / PI * z.norm().powi(mu as i32).atan();
        worst = worst.max(v.norm() / majorant);
    }
    Ok(worst)
}

/// Tolerance slack in the Schwarz certificate `worst_ratio ≤ 1 + 1e-9`.
pub const SCHWARZ_SLACK: f64 = 1e-9;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::AnalyticFunction;
    use crate::harmonic::Domain;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Continuum of diameter exactly 1/4 fitting inside radius `r`.
    fn quarter_segment(r: f64) -> Vec<Complex64> {
        let hi = 0.98 * r;
        vec![c(hi - 0.25, 0.0), c(hi, 0.0)]
    }

    #[test]
    fn item_validation() {
        assert!(KoebeSequenceItem::new(vec![c(0.0, 0.0)], 0.5, 0.1).is_err());
        assert!(KoebeSequenceItem::new(vec![c(0.6, 0.0), c(0.7, 0.0)], 0.5, 0.1).is_err());
        assert!(KoebeSequenceItem::new(vec![c(0.1, 0.0), c(0.2, 0.0)], 0.5, -1.0).is_err());
        assert!(KoebeSequenceItem::new(vec![c(0.1, 0.0), c(0.1, 0.0)], 0.5, 0.1).is_err());
    }

    #[test]
    fn oversized_continuum_rejected_with_guidance() {
        let item =
            KoebeSequenceItem::new(vec![c(0.0, 0.0), c(0.4, 0.0)], 0.6, 1e-3).unwrap();
        let err = koebe_quantity(&[item]).unwrap_err().to_string();
        assert!(err.contains("subdivide"), "unexpected message: {err}");
    }

    #[test]
    fn quantity_formula_at_a_known_point() {
        // d = 1/4, M = e^{-100}, r = 1/2: q = τ(4)·100/3
        let item = KoebeSequenceItem::new(quarter_segment(0.5), 0.5, (-100.0f64).exp()).unwrap();
        let rep = koebe_quantity(&[item]).unwrap();
        let expected = tau2(4.0).unwrap().value * 100.0 / 3.0;
        assert!((rep.items[0].quantity - expected).abs() < 1e-9 * expected);
    }

    #[test]
    fn report_identity_links_bounds_and_quantity() {
        // modulus_lower ≤ K · modulus_upper exactly when q ≤ 16π
        for (r, m) in [(0.3f64, 1e-4f64), (0.9, 1e-40), (0.99, 1e-2), (0.5, 1e-300)] {
            let item = KoebeSequenceItem::new(quarter_segment(r.max(0.3)), r, m).unwrap();
            let rep = koebe_quantity(&[item]).unwrap();
            let it = &rep.items[0];
            let lhs_holds = it.modulus_lower <= it.k_qc * it.modulus_upper;
            let q_small = it.quantity <= 16.0 * PI;
            assert_eq!(lhs_holds, q_small, "identity fails at r={r}, m={m:e}");
        }
    }

    #[test]
    fn geometric_fixture_is_unbounded() {
        // r_j = 1 - 2^{-j}, M_j = exp(-8^j), diameter 1/4
        let items: Vec<_> = (1..=8)
            .map(|j| {
                let r = 1.0 - 0.5f64.powi(j);
                let m = (-(8.0f64.powi(j))).exp();
                KoebeSequenceItem::new(quarter_segment(r), r, m).unwrap()
            })
            .collect();
        let rep = koebe_quantity(&items).unwrap();
        assert_eq!(rep.trend, Trend::Unbounded);
        // quantities grow like 4^j
        assert!(rep.items[7].quantity > rep.items[6].quantity);
    }

    #[test]
    fn constant_closeness_fixture_is_bounded() {
        let items: Vec<_> = (1..=8)
            .map(|j| {
                let r = 1.0 - 0.5f64.powi(j);
                KoebeSequenceItem::new(quarter_segment(r), r, 0.5).unwrap()
            })
            .collect();
        let rep = koebe_quantity(&items).unwrap();
        assert_eq!(rep.trend, Trend::Bounded);
        // the factor (1-r)/(1+r) drives the quantity to zero
        assert!(rep.items[7].quantity < rep.items[0].quantity);
    }

    #[test]
    fn rotation_leaves_quantities_unchanged() {
        let rot = Complex64::from_polar(1.0, 1.234);
        let items: Vec<_> = (1..=4)
            .map(|j| {
                let r = 1.0 - 0.5f64.powi(j);
                KoebeSequenceItem::new(quarter_segment(r), r, 1e-3).unwrap()
            })
            .collect();
        let rotated: Vec<_> = items
            .iter()
            .map(|it| {
                KoebeSequenceItem::new(
                    it.continuum.iter().map(|&v| v * rot).collect(),
                    it.containment_radius,
                    it.closeness_bound,
                )
                .unwrap()
            })
            .collect();
        let a = koebe_quantity(&items).unwrap();
        let b = koebe_quantity(&rotated).unwrap();
        for (x, y) in a.items.iter().zip(&b.items) {
            assert!((x.quantity - y.quantity).abs() < 1e-10);
        }
        assert_eq!(a.trend, b.trend);
    }

    #[test]
    fn second_form_values_and_inequality() {
        // d = 0.1, M = e^{-10}, r = 0.9 → 10/log(10) · (0.1/1.9)
        let item = KoebeSequenceItem::new(
            vec![c(0.5, 0.0), c(0.6, 0.0)],
            0.9,
            (-10.0f64).exp(),
        )
        .unwrap();
        let out = koebe_quantity_second_form(&[item]).unwrap();
        let expected = 10.0 / 10.0f64.ln() * (0.1 / 1.9);
        assert!((out[0].value - expected).abs() < 1e-12);
        assert!(out[0].inequality_ok);
        assert!(!out[0].degenerate);
    }

    #[test]
    fn second_form_blows_up_for_diameters_near_one() {
        // diameter close to 1 is allowed here (rejected by the main form) but
        // the value diverges as log(1/d) → 0
        let item = KoebeSequenceItem::new(
            vec![c(-0.4999999999, 0.0), c(0.4999999999, 0.0)],
            0.9999999999,
            0.5,
        )
        .unwrap();
        let out = koebe_quantity_second_form(&[item]).unwrap();
        assert!(out[0].value > 1e8);
    }

    #[test]
    fn vanishing_terms_and_verdicts() {
        // Im b = c: the term vanishes identically
        let seq = ZeroSequence::new(vec![c(0.0, 10.0)], vec![7], 10.0).unwrap();
        let rep = vanishing_criterion(&seq).unwrap();
        assert_eq!(rep.terms[0], 0.0);

        // Im b_k = 1/k, μ_k = k² → terms ≈ exp(-k/5) → 0
        let n = 60;
        let seq = ZeroSequence::new(
            (1..=n).map(|k| c(0.0, 1.0 / k as f64)).collect(),
            (1..=n).map(|k| (k * k) as u32).collect(),
            10.0,
        )
        .unwrap();
        let rep = vanishing_criterion(&seq).unwrap();
        assert!(rep.tends_to_zero);
        let k = 40usize;
        let expected = ((10.0 - 1.0 / k as f64) / (10.0 + 1.0 / k as f64)).powi((k * k) as i32);
        assert!((rep.terms[k - 1] - expected).abs() < 1e-12);

        // μ_k = 1 → terms → 1
        let seq = ZeroSequence::new(
            (1..=n).map(|k| c(0.0, 1.0 / k as f64)).collect(),
            vec![1; n],
            10.0,
        )
        .unwrap();
        assert!(!vanishing_criterion(&seq).unwrap().tends_to_zero);
    }

    #[test]
    fn vanishing_is_monotone_in_multiplicities() {
        let n = 60;
        let points: Vec<_> = (1..=n).map(|k| c(0.0, 1.0 / k as f64)).collect();
        let mults: Vec<u32> = (1..=n).map(|k| (k * k) as u32).collect();
        let seq = ZeroSequence::new(points.clone(), mults.clone(), 10.0).unwrap();
        assert!(vanishing_criterion(&seq).unwrap().tends_to_zero);
        let bumped: Vec<u32> = mults.iter().map(|&m| m + 1).collect();
        let seq = ZeroSequence::new(points, bumped, 10.0).unwrap();
        assert!(vanishing_criterion(&seq).unwrap().tends_to_zero);
    }

    #[test]
    fn schwarz_bound_on_model_maps() {
        let id = HarmonicMap::new(
            AnalyticFunction::identity(),
            AnalyticFunction::zero(),
            Domain::Disk,
        )
        .unwrap();
        let samples = vec![c(0.5, 0.0), c(0.0, 0.9), c(-0.3, 0.3)];
        let worst = schwarz_bound_check(&id, 1, &samples).unwrap();
        assert!(worst <= 1.0 + SCHWARZ_SLACK);
        // the ratio at 0.5 is ≈ 0.847
        let r = 0.5f64 / (4.0 / PI * 0.5f64.atan());
        assert!((r - 0.847).abs() < 1e-3);

        // negative control: claiming μ = 2 for the identity breaks the bound
        let worst = schwarz_bound_check(&id, 2, &samples).unwrap();
        assert!(worst > 1.0);
    }

    #[test]
    fn schwarz_rejects_maps_leaving_the_disk() {
        let f = HarmonicMap::new(
            AnalyticFunction::scaled_identity(c(3.0, 0.0)).unwrap(),
            AnalyticFunction::zero(),
            Domain::Disk,
        )
        .unwrap();
        assert!(schwarz_bound_check(&f, 1, &[c(0.5, 0.0)]).is_err());
    }
}
