//! Numerical bridge between the probability continuity equation
//! `df/dt + div(f v) = 0` and a Schrodinger-form parabolic equation for
//! `Psi = sqrt(f) e^{i phi}`.
//!
//! The crate is organised bottom-up:
//!
//! * [`fields`] – grids, field containers, second-order stencils, quadrature.
//! * [`helmholtz`] – split a velocity field into `-alpha grad Phi + gamma A`.
//! * [`bridge`] – forward map `(f, v) -> (Psi, U)`, inverse map and residuals.
//! * [`em`] – electromagnetic-analogue fields and the agreement classifier.
//! * [`kinematics`] – material derivative, force law and center-of-mass checks.
//! * [`scenarios`] – closed-form test cases, the charged-sphere ODE and
//!   sampled/synthetic inputs.
//! * [`cli`] – the `vlasov-bridge` command-line front end.

// `!(x > 0.0)` deliberately rejects NaN too; axis loops index several arrays.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bridge;
pub mod cli;
pub mod em;
pub mod error;
pub mod fields;
pub mod helmholtz;
pub mod kinematics;
pub mod scenarios;

pub use error::{Error, Result};
pub use fields::{Boundary, ComplexField, Constants, Grid, ScalarField, VectorField};
