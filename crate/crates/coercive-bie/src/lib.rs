//! Galerkin boundary element methods for coercive second-kind integral
//! equations of the Laplace and Helmholtz Dirichlet problems.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: polygonal and triangulated boundary meshes;
//! - [`vector_field`]: the multiplier fields `Z` and their constants;
//! - [`kernels`]: fundamental solutions and Bessel functions;
//! - [`discretization`]: piecewise-polynomial spaces and quadrature;
//! - [`operators`]: Galerkin matrices of the layer operators and potentials;
//! - [`formulations`]: composite operators, right-hand sides, certificates;
//! - [`solver`]: GMRES and field-of-values diagnostics;
//! - [`problems`]: manufactured solutions and convergence studies;
//! - [`config`], [`run`] and [`report`]: run configuration, execution and
//!   output files.

pub mod config;
pub mod discretization;
pub mod error;
pub mod formulations;
pub mod geometry;
pub mod kernels;
pub mod operators;
pub mod problems;
pub mod report;
pub mod run;
pub mod solver;
pub mod vector_field;

use num_complex::Complex64;

pub use error::{Error, Result};

/// Field of matrix entries: `f64` for Laplace, `Complex64` for Helmholtz.
pub trait Scalar: nalgebra::ComplexField<RealField = f64> + Copy + Send + Sync + 'static {
    const IS_COMPLEX: bool;
    const ZERO: Self;
    const ONE: Self;

    fn from_parts(re: f64, im: f64) -> Self;

    fn parts(self) -> (f64, f64);

    /// Real part.
    fn re(self) -> f64 {
        self.parts().0
    }
}

impl Scalar for f64 {
    const IS_COMPLEX: bool = false;
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;

    fn from_parts(re: f64, _im: f64) -> Self {
        re
    }

    fn parts(self) -> (f64, f64) {
        (self, 0.0)
    }
}

impl Scalar for Complex64 {
    const IS_COMPLEX: bool = true;
    const ZERO: Self = Complex64::new(0.0, 0.0);
    const ONE: Self = Complex64::new(1.0, 0.0);

    fn from_parts(re: f64, im: f64) -> Self {
        Complex64::new(re, im)
    }

    fn parts(self) -> (f64, f64) {
        (self.re, self.im)
    }
}
