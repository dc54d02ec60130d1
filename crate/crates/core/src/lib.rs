//! Realizations of the generalized κ-Poincaré and κ-Weyl algebras on momentum
//! space, the nonlinear map that carries the classical action into the
//! deformed one, and numerical checks of the identities that tie them
//! together.
//!
//! - [`jet`] and [`metric`]: truncated-jet differentiation and metric algebra.
//! - [`realization`]: generators as vector fields, brackets, closure.
//! - [`deformation`]: the deformation map, its inverse and the ODE system.
//! - [`casimir`]: the deformed mass-squared Casimir.
//! - [`coproduct`]: the deformed momentum composition law.
//! - [`harness`]: sampling, suites and reports.

pub mod casimir;
pub mod coproduct;
pub mod deformation;
pub mod error;
pub mod harness;
pub mod jet;
pub mod metric;
pub mod realization;
pub mod rng;

pub use error::{DomainCondition, Error, Result};
pub use jet::{jacobian, jet_eval, Jet, Scalar};
pub use metric::{mass_squared, Metric};
