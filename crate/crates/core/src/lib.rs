//! Incompressible planar deformations that open circular cavities in a disk.
//!
//! The pipeline has five stages, one module each:
//!
//! - [`geometry`]: cavitation configurations, circular-cavity evolutions,
//!   attainability and the moving multiply-connected domains `E(t)`.
//! - [`harmonic`]: Laplace–Neumann solver on disks with circular holes, the
//!   disk Neumann Green's function and the Poisson-kernel operators.
//! - [`fields`]: divergence-free velocity fields that grow and translate the
//!   excised holes.
//! - [`flow`]: Runge–Kutta integration of the flow map with deformation
//!   gradients, radial cavity maps and the assembled deformation.
//! - [`analysis`]: energies, cavity images, injectivity, Poincaré constants
//!   and the regularity-estimate suite.
//!
//! [`pipeline`] chains the stages for a [`config`] file; [`report`] writes
//! the CSV artifacts.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod config;
mod error;
pub mod fields;
pub mod flow;
pub mod geometry;
pub mod harmonic;
pub mod pipeline;
pub mod quadrature;
pub mod report;

pub use error::{Error, Result};

/// Points and vectors in the plane.
pub type Vec2 = nalgebra::Vector2<f64>;
/// 2×2 matrices (gradients, Hessians, Jacobians).
pub type Mat2 = nalgebra::Matrix2<f64>;

#[cfg(test)]
pub(crate) fn vec2(x: f64, y: f64) -> Vec2 {
    Vec2::new(x, y)
}

/// Unit radial vector `e^{iθ}`.
pub fn unit(theta: f64) -> Vec2 {
    Vec2::new(theta.cos(), theta.sin())
}
