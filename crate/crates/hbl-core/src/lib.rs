//! Numerical toolkit for planar harmonic mappings and their boundary
//! behavior.
//!
//! The crate builds harmonic maps `f = h + conj(g)` with evaluable analytic
//! parts (including closed-form Poisson extensions of step boundary data),
//! computes dilatations, local expansions and multiplicities, and provides
//! the surrounding machinery used by boundary-behavior diagnostics:
//!
//! - conformal moduli of canonical ring domains, the AGM-based capacity
//!   functions, and an independent finite-difference grid oracle
//!   ([`capacity`]);
//! - hyperbolic distance in the disk and half-plane models with Möbius
//!   transport between them ([`hyperbolic`]);
//! - capacity-chain and multiplicity-based vanishing analyzers ([`koebe`]);
//! - approach curves, singular curve integrals with divergence
//!   classification, radial derivative trends, area integrals and
//!   cluster-set sampling ([`boundary`]).
//!
//! All values are immutable after construction and every operation is a pure
//! function of its inputs, so concurrent evaluation is safe.

pub mod analytic;
pub mod boundary;
pub mod capacity;
pub mod error;
pub mod geom;
pub mod harmonic;
pub mod hyperbolic;
pub mod koebe;
pub mod quad;
pub mod step;

pub use analytic::AnalyticFunction;
pub use error::{Error, Result};
pub use harmonic::{
    local_fourier, multiplicity, poisson_step_map, DilatationReport, Domain, HarmonicMap,
    LocalExpansion, MultiplicityResult,
};
pub use num_complex::Complex64;
pub use step::{StepBoundaryFunction, StepMapRole};
