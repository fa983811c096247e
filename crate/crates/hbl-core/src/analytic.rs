//! Evaluable analytic functions closed under arithmetic.
//!
//! Everything the toolkit needs from an analytic function is its value and
//! first derivative at interior points, so the representation is a small
//! expression tree over a few concrete families.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::is_finite;
use crate::step::{step_part_deriv, step_part_eval, StepBoundaryFunction, StepMapRole};

/// Fraction of the declared convergence radius beyond which power-series
/// evaluation is refused (truncation-error guard).
pub const SERIES_RADIUS_GUARD: f64 = 0.99;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum AnalyticFunction {
    /// `Σ c_k z^k`, entire.
    Polynomial { coefficients: Vec<Complex64> },
    /// `Σ c_k (z - center)^k`, valid on `|z - center| < radius`; evaluation is
    /// refused outside `SERIES_RADIUS_GUARD × radius`.
    PowerSeries {
        center: Complex64,
        coefficients: Vec<Complex64>,
        radius: f64,
    },
    /// `z ↦ alpha · z`.
    ScaledIdentity { alpha: Complex64 },
    /// `rotation · Π (z - z_k)/(1 - conj(z_k) z)` with all `|z_k| < 1`.
    FiniteBlaschke {
        zeros: Vec<Complex64>,
        rotation: Complex64,
    },
    /// Analytic or co-analytic part of the Poisson extension of step
    /// boundary data (closed form, see the `step` module).
    StepMapPart {
        arcs: StepBoundaryFunction,
        role: StepMapRole,
    },
    Sum(Box<AnalyticFunction>, Box<AnalyticFunction>),
    Product(Box<AnalyticFunction>, Box<AnalyticFunction>),
    Quotient(Box<AnalyticFunction>, Box<AnalyticFunction>),
}

impl AnalyticFunction {
    /// The zero function.
    pub fn zero() -> Self {
        Self::Polynomial {
            coefficients: Vec::new(),
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::Polynomial {
            coefficients: vec![c],
        }
    }

    /// `z ↦ z`.
    pub fn identity() -> Self {
        Self::ScaledIdentity {
            alpha: Complex64::new(1.0, 0.0),
        }
    }

    /// `z ↦ alpha z`.
    pub fn scaled_identity(alpha: Complex64) -> Result<Self> {
        if !is_finite(alpha) {
            return Err(Error::InvalidInput("non-finite scale".into()));
        }
        Ok(Self::ScaledIdentity { alpha })
    }

    pub fn polynomial(coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.iter().any(|&c| !is_finite(c)) {
            return Err(Error::InvalidInput(
                "non-finite polynomial coefficient".into(),
            ));
        }
        Ok(Self::Polynomial { coefficients })
    }

    pub fn power_series(
        center: Complex64,
        coefficients: Vec<Complex64>,
        radius: f64,
    ) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidInput(format!(
                "power series radius must be positive and finite, got {radius}"
            )));
        }
        if !is_finite(center) || coefficients.iter().any(|&c| !is_finite(c)) {
            return Err(Error::InvalidInput("non-finite series data".into()));
        }
        Ok(Self::PowerSeries {
            center,
            coefficients,
            radius,
        })
    }

    pub fn finite_blaschke(zeros: Vec<Complex64>, rotation: Complex64) -> Result<Self> {
        for &z in &zeros {
            if !is_finite(z) || z.norm() >= 1.0 {
                return Err(Error::InvalidInput(format!(
                    "Blaschke zero {z} is not inside the unit disk"
                )));
            }
        }
        if !is_finite(rotation) || (rotation.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "Blaschke rotation {rotation} is not unimodular"
            )));
        }
        // renormalize to kill round-off in the caller's e^{iφ}
        let rotation = rotation / rotation.norm();
        Ok(Self::FiniteBlaschke { zeros, rotation })
    }

    pub fn step_map_part(arcs: StepBoundaryFunction, role: StepMapRole) -> Self {
        Self::StepMapPart { arcs, role }
    }

    pub fn sum(a: Self, b: Self) -> Self {
        Self::Sum(Box::new(a), Box::new(b))
    }

    pub fn product(a: Self, b: Self) -> Self {
        Self::Product(Box::new(a), Box::new(b))
    }

    pub fn quotient(num: Self, den: Self) -> Self {
        Self::Quotient(Box::new(num), Box::new(den))
    }

    /// Value at `z`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.eval_with_derivative(z)?.0)
    }

    /// Derivative at `z`.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.eval_with_derivative(z)?.1)
    }

    /// `(f(z), f'(z))` in one traversal.
    pub fn eval_with_derivative(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        if !is_finite(z) {
            return Err(Error::DomainViolation {
                point: z,
                reason: "non-finite evaluation point".into(),
            });
        }
        match self {
            Self::Polynomial { coefficients } => Ok(horner(coefficients, z)),
            Self::PowerSeries {
                center,
                coefficients,
                radius,
            } => {
                let w = z - center;
                let guard = SERIES_RADIUS_GUARD * radius;
                if w.norm() > guard {
                    return Err(Error::DomainViolation {
                        point: z,
                        reason: format!(
                            "|z - center| = {:.6} exceeds the truncation guard {:.6} (= {} × radius)",
                            w.norm(),
                            guard,
                            SERIES_RADIUS_GUARD
                        ),
                    });
                }
                Ok(horner(coefficients, w))
            }
            Self::ScaledIdentity { alpha } => Ok((alpha * z, *alpha)),
            Self::FiniteBlaschke { zeros, rotation } => {
                let mut v = *rotation;
                let mut d = Complex64::new(0.0, 0.0);
                for &zk in zeros {
                    let den = Complex64::new(1.0, 0.0) - zk.conj() * z;
                    if den.norm() == 0.0 {
                        return Err(Error::Degenerate {
                            point: z,
                            reason: "Blaschke factor pole".into(),
                        });
                    }
                    let fv = (z - zk) / den;
                    let fd = (Complex64::new(1.0, 0.0) - zk.norm_sqr()) / (den * den);
                    d = d * fv + v * fd;
                    v *= fv;
                }
                Ok((v, d))
            }
            Self::StepMapPart { arcs, role } => Ok((
                step_part_eval(arcs, *role, z)?,
                step_part_deriv(arcs, *role, z)?,
            )),
            Self::Sum(a, b) => {
                let (va, da) = a.eval_with_derivative(z)?;
                let (vb, db) = b.eval_with_derivative(z)?;
                Ok((va + vb, da + db))
            }
            Self::Product(a, b) => {
                let (va, da) = a.eval_with_derivative(z)?;
                let (vb, db) = b.eval_with_derivative(z)?;
                Ok((va * vb, da * vb + va * db))
            }
            Self::Quotient(a, b) => {
                let (va, da) = a.eval_with_derivative(z)?;
                let (vb, db) = b.eval_with_derivative(z)?;
                if vb.norm() == 0.0 {
                    return Err(Error::Degenerate {
                        point: z,
                        reason: "quotient denominator vanishes".into(),
                    });
                }
                Ok((va / vb, (da * vb - va * db) / (vb * vb)))
            }
        }
    }
}

/// Horner evaluation of `Σ c_k w^k` returning value and derivative.
fn horner(coefficients: &[Complex64], w: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    for &c in coefficients.iter().rev() {
        d = d * w + v;
        v = v * w + c;
    }
    (v, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn polynomial_value_and_derivative() {
        // 1 + 2z + 3z²
        let p = AnalyticFunction::polynomial(vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]).unwrap();
        let (v, d) = p.eval_with_derivative(c(0.5, -1.0)).unwrap();
        // value: 1 + 2(0.5-i) + 3(0.5-i)^2 = 1 + 1 - 2i + 3(-0.75 - i) = -0.25 - 5i
        assert!((v - c(-0.25, -5.0)).norm() < 1e-14);
        // derivative: 2 + 6z = 5 - 6i
        assert!((d - c(5.0, -6.0)).norm() < 1e-14);
    }

    #[test]
    fn series_guard_rejects_outer_points() {
        let s = AnalyticFunction::power_series(c(0.0, 0.0), vec![c(1.0, 0.0)], 0.5).unwrap();
        assert!(s.eval(c(0.4, 0.0)).is_ok());
        assert!(s.eval(c(0.496, 0.0)).is_err());
    }

    #[test]
    fn blaschke_is_unimodular_on_circle_and_contractive_inside() {
        let b = AnalyticFunction::finite_blaschke(
            vec![c(0.3, 0.2), c(-0.5, 0.1)],
            c(0.0, 1.0),
        )
        .unwrap();
        let on_circle = b.eval(c(0.6, 0.8)).unwrap();
        assert!((on_circle.norm() - 1.0).abs() < 1e-12);
        let inside = b.eval(c(0.2, -0.3)).unwrap();
        assert!(inside.norm() < 1.0);
    }

    #[test]
    fn blaschke_derivative_matches_finite_differences() {
        let b = AnalyticFunction::finite_blaschke(vec![c(0.4, -0.1)], c(1.0, 0.0)).unwrap();
        let z = c(0.25, 0.35);
        let h = 1e-6;
        let num =
            (b.eval(z + c(h, 0.0)).unwrap() - b.eval(z - c(h, 0.0)).unwrap()) / c(2.0 * h, 0.0);
        let exact = b.derivative(z).unwrap();
        assert!((num - exact).norm() < 1e-8);
    }

    #[test]
    fn arithmetic_closure() {
        let f = AnalyticFunction::quotient(
            AnalyticFunction::product(
                AnalyticFunction::identity(),
                AnalyticFunction::polynomial(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap(),
            ),
            AnalyticFunction::constant(c(2.0, 0.0)),
        );
        // f(z) = z(1+z)/2, f'(z) = (1+2z)/2
        let (v, d) = f.eval_with_derivative(c(1.0, 1.0)).unwrap();
        assert!((v - c(0.5, 1.5)).norm() < 1e-14);
        assert!((d - c(1.5, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn invalid_constructions_rejected() {
        assert!(AnalyticFunction::finite_blaschke(vec![c(1.0, 0.0)], c(1.0, 0.0)).is_err());
        assert!(AnalyticFunction::finite_blaschke(vec![c(0.1, 0.0)], c(0.9, 0.0)).is_err());
        assert!(AnalyticFunction::power_series(c(0.0, 0.0), vec![], -1.0).is_err());
    }
}
