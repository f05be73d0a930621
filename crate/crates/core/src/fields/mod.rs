//! Uniform-grid field containers, discrete vector calculus and constants.

mod constants;
mod field;
mod grid;
pub mod io;
pub mod ops;
pub mod spectral;

pub use constants::Constants;
pub use field::{ComplexField, ScalarField, VectorField};
pub use grid::{Axis, Boundary, Grid, GridSpec};
pub use ops::{
    curl, divergence, gradient, gradient_adjoint, inner_product, integrate, laplacian,
    truncation_scale,
};
