//! Fundamental solutions of the Laplace and Helmholtz equations.
//!
//! Every kernel is radial, so it is described by two functions of `r = |x - y|`:
//! the value `Φ(r)` and a factor `g(r)` with `∇_y Φ(x, y) = g(r) (x - y)`.
//! Consequently `∇_x Φ = -∇_y Φ`.

pub mod bessel;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::Scalar;
use nalgebra::ComplexField as _;

/// A radial fundamental solution in two or three dimensions.
pub trait Kernel: Send + Sync {
    type Value: Scalar;

    fn dim(&self) -> usize;

    /// `(Φ(r), g(r))` for `r > 0`.
    fn radial(&self, r: f64) -> (Self::Value, Self::Value);

    /// Short name used in reports.
    fn name(&self) -> &'static str;

    /// Wavenumber; zero for Laplace.
    fn wavenumber(&self) -> f64 {
        0.0
    }

    fn phi(&self, x: &Point, y: &Point) -> Result<Self::Value> {
        let r = (x - y).norm();
        if r == 0.0 {
            return Err(Error::Singular);
        }
        Ok(self.radial(r).0)
    }

    /// Gradient of `Φ(x, ·)` at `y`.
    fn grad_y_phi(&self, x: &Point, y: &Point) -> Result<[Self::Value; 3]> {
        let d = x - y;
        let r = d.norm();
        if r == 0.0 {
            return Err(Error::Singular);
        }
        let g = self.radial(r).1;
        Ok([g.scale(d.x), g.scale(d.y), g.scale(d.z)])
    }
}

/// Laplace fundamental solution: `(1/2π) log(a/r)` for d=2, `1/(4πr)` for d=3.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Laplace {
    dim: usize,
    a: f64,
}

impl Laplace {
    pub fn new(dim: usize) -> Result<Self> {
        Self::with_scale(dim, 1.0)
    }

    /// Planar kernel with logarithmic scale `a`; ignored for d=3.
    pub fn with_scale(dim: usize, a: f64) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::Dimension(format!("kernel dimension {dim}")));
        }
        if !(a > 0.0) {
            return Err(Error::Config(format!("log scale a must be positive, got {a}")));
        }
        Ok(Laplace { dim, a })
    }

    pub fn scale(&self) -> f64 {
        self.a
    }
}

impl Kernel for Laplace {
    type Value = f64;

    fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn radial(&self, r: f64) -> (f64, f64) {
        if self.dim == 2 {
            ((self.a / r).ln() / (2.0 * PI), 1.0 / (2.0 * PI * r * r))
        } else {
            let phi = 1.0 / (4.0 * PI * r);
            (phi, phi / (r * r))
        }
    }

    fn name(&self) -> &'static str {
        "laplace"
    }
}

/// Helmholtz fundamental solution: `(i/4) H_0^(1)(kr)` for d=2, `e^{ikr}/(4πr)` for d=3.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Helmholtz {
    dim: usize,
    k: f64,
}

impl Helmholtz {
    pub fn new(dim: usize, k: f64) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::Dimension(format!("kernel dimension {dim}")));
        }
        if !(k > 0.0) {
            return Err(Error::Config(format!("wavenumber must be positive, got {k}")));
        }
        Ok(Helmholtz { dim, k })
    }
}

impl Kernel for Helmholtz {
    type Value = Complex64;

    fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn radial(&self, r: f64) -> (Complex64, Complex64) {
        let k = self.k;
        if self.dim == 2 {
            let (h0, h1) = bessel::hankel1_01(k * r);
            let i4 = Complex64::new(0.0, 0.25);
            (i4 * h0, i4 * h1 * (k / r))
        } else {
            let e = Complex64::from_polar(1.0, k * r);
            let phi = e / (4.0 * PI * r);
            (phi, phi * Complex64::new(1.0, -k * r) / (r * r))
        }
    }

    fn name(&self) -> &'static str {
        "helmholtz"
    }

    fn wavenumber(&self) -> f64 {
        self.k
    }
}
