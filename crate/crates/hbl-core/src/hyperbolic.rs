//! Hyperbolic distance in the unit disk and the upper half-plane, transport
//! between the two models, and hyperbolic-ball utilities.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::is_finite;
use crate::harmonic::Domain;

fn check_halfplane(z: Complex64) -> Result<()> {
    if !is_finite(z) || z.im <= 0.0 {
        return Err(Error::DomainViolation {
            point: z,
            reason: "point must lie in the open upper half-plane".into(),
        });
    }
    Ok(())
}

fn check_disk(w: Complex64) -> Result<()> {
    if !is_finite(w) || w.norm() >= 1.0 {
        return Err(Error::DomainViolation {
            point: w,
            reason: "point must lie in the open unit disk".into(),
        });
    }
    Ok(())
}

/// `arccosh` with a series fallback near 1, where `log(x + sqrt(x²-1))`
/// loses half the significant digits.
fn acosh_stable(x: f64) -> f64 {
    debug_assert!(x >= 1.0);
    let t = x - 1.0;
    if t < 1e-4 {
        // arccosh(1+t) = sqrt(2t)(1 - t/12 + 3t²/160 - 5t³/896 + …)
        let s = (2.0 * t).sqrt();
        s * (1.0 - t / 12.0 + 3.0 * t * t / 160.0 - 5.0 * t * t * t / 896.0)
    } else {
        (x + (x * x - 1.0).sqrt()).ln()
    }
}

/// Hyperbolic distance in the upper half-plane:
/// `cosh ρ(z1, z2) = 1 + |z1 - z2|² / (2 Im z1 Im z2)`.
pub fn dist_halfplane(z1: Complex64, z2: Complex64) -> Result<f64> {
    check_halfplane(z1)?;
    check_halfplane(z2)?;
    let q = 1.0 + (z1 - z2).norm_sqr() / (2.0 * z1.im * z2.im);
    Ok(acosh_stable(q))
}

/// Hyperbolic distance in the unit disk:
/// `ρ(w1, w2) = 2 artanh |w1 - w2| / |1 - conj(w1) w2|`.
pub fn dist_disk(w1: Complex64, w2: Complex64) -> Result<f64> {
    check_disk(w1)?;
    check_disk(w2)?;
    let num = (w1 - w2).norm();
    let den = (Complex64::new(1.0, 0.0) - w1.conj() * w2).norm();
    Ok(2.0 * (num / den).atanh())
}

/// A Möbius transformation `z ↦ (az + b)/(cz + d)`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MobiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MobiusMap {
    pub fn apply(&self, z: Complex64) -> Result<Complex64> {
        let den = self.c * z + self.d;
        if den.norm() == 0.0 {
            return Err(Error::Degenerate {
                point: z,
                reason: "Möbius map pole".into(),
            });
        }
        Ok((self.a * z + self.b) / den)
    }

    pub fn inverse(&self) -> MobiusMap {
        MobiusMap {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }
}

/// The Möbius transformation mapping the unit disk onto the upper half-plane
/// with `φ(0) = b` (post-composing the Cayley map with `z ↦ Re b + Im b · z`).
pub fn mobius_disk_to_halfplane(b: Complex64) -> Result<MobiusMap> {
    check_halfplane(b)?;
    // φ(w) = Re b + Im b · i (1 + w)/(1 - w) = ((i·Im b - Re b) w + b) / (1 - w)
    Ok(MobiusMap {
        a: Complex64::new(-b.re, b.im),
        b,
        c: Complex64::new(-1.0, 0.0),
        d: Complex64::new(1.0, 0.0),
    })
}

/// A hyperbolic disk, described by its center and hyperbolic radius.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct HyperbolicDisk {
    pub center: Complex64,
    pub radius: f64,
    pub domain: Domain,
}

impl HyperbolicDisk {
    pub fn new(center: Complex64, radius: f64, domain: Domain) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidInput(format!(
                "hyperbolic radius must be positive, got {radius}"
            )));
        }
        match domain {
            Domain::Disk => check_disk(center)?,
            Domain::HalfPlane => check_halfplane(center)?,
        }
        Ok(Self {
            center,
            radius,
            domain,
        })
    }
}

/// Euclidean center and radius of a hyperbolic disk.
///
/// Disk model about 0: radius `tanh(R/2)`; general centers by automorphism
/// transport; half-plane: center `Re b + i·Im b·cosh R`, radius `Im b·sinh R`.
pub fn hyperbolic_disk_euclidean(d: &HyperbolicDisk) -> (Complex64, f64) {
    match d.domain {
        Domain::Disk => {
            let rho = (0.5 * d.radius).tanh();
            let a = d.center;
            let a2 = a.norm_sqr();
            let den = 1.0 - a2 * rho * rho;
            let center = a * ((1.0 - rho * rho) / den);
            let radius = rho * (1.0 - a2) / den;
            (center, radius)
        }
        Domain::HalfPlane => {
            let center = Complex64::new(d.center.re, d.center.im * d.radius.cosh());
            let radius = d.center.im * d.radius.sinh();
            (center, radius)
        }
    }
}

/// Default height constant of [`covering_ball_check`].
pub const DEFAULT_COVERING_CONSTANT: f64 = 10.0;

/// Result of the covering-ball test at a half-plane point.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CoveringBallCheck {
    /// `log(constant / Im b)`.
    pub radius_bound: f64,
    /// Whether `i` lies in the hyperbolic ball of that radius about `b`.
    pub contains_i: bool,
}

/// Checks whether the hyperbolic ball about `b` with radius
/// `log(constant / Im b)` contains the reference point `i`. For points
/// near the real axis the ball always does for the default constant 10;
/// the sharper constants `4 + ε` need `Im b < ε/2`.
pub fn covering_ball_check_with(b: Complex64, constant: f64) -> Result<CoveringBallCheck> {
    check_halfplane(b)?;
    if !(constant > 0.0) {
        return Err(Error::InvalidInput(format!(
            "covering constant must be positive, got {constant}"
        )));
    }
    let radius_bound = (constant / b.im).ln();
    let dist = dist_halfplane(Complex64::new(0.0, 1.0), b)?;
    Ok(CoveringBallCheck {
        radius_bound,
        contains_i: dist < radius_bound,
    })
}

/// [`covering_ball_check_with`] at the default constant 10.
pub fn covering_ball_check(b: Complex64) -> Result<CoveringBallCheck> {
    covering_ball_check_with(b, DEFAULT_COVERING_CONSTANT)
}
