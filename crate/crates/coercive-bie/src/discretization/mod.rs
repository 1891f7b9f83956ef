//! Boundary element spaces, quadrature and diagonal scalings.

pub mod quadrature;
pub mod space;

pub use space::{DiagonalScaling, ScalingMode, Space};
