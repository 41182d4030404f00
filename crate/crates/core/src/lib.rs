//! Calibrated geometry on the unit tangent bundle of oriented Riemannian 3-manifolds.
//!
//! The crate is organised bottom-up:
//!
//! - [`exterior`]: exact constant-coefficient forms over the adapted coframe
//!   `e⁰ … e⁴` of `T¹M`, Hodge star, and a comass optimiser.
//! - [`spaceform`]: embedded space forms `Sᵐ(r)`, `Hᵐ(r)` and chart metrics
//!   (flat, hyperbolic half-space, a conformal test metric) with connection,
//!   curvature and Ricci.
//! - [`unit_tangent`]: points and double-tangent vectors of `T¹M`, the Sasaki
//!   metric, adapted frames, geodesic spray and geodesic flows.
//! - [`diffsys`]: the invariant forms `θ, dθ, α₀, α₁, α₂` evaluated on frames,
//!   finite-difference checks of their structure equations, and the algebra of
//!   invariant calibrations.
//! - [`fields`]: unit vector fields, their shape matrices, volume, calibration
//!   tests and defect functionals.
//!
//! Parsers for untrusted text input live in [`expr`] and [`parse`].

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod diffsys;
pub mod error;
pub mod expr;
pub mod exterior;
pub mod fields;
pub mod parse;
pub mod quadrature;
pub mod rng;
pub mod scalar;
pub mod spaceform;
pub mod unit_tangent;

pub use error::{Error, Result};
pub use scalar::{Coefficient, Rational};
