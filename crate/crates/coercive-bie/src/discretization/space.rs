//! Discontinuous piecewise-polynomial spaces, mass matrices, projections and
//! diagonal scalings.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::quadrature::{panel_rule, Rule};
use crate::error::{Error, Result};
use crate::geometry::{Mesh, Panel, Point};
use crate::Scalar;

/// `S^p` on a mesh with `p ∈ {0, 1}`; every basis function lives on one element.
/// Degree 1 uses the nodal (barycentric) basis of each element.
#[derive(Clone, Copy, Debug)]
pub struct Space<'m> {
    mesh: &'m Mesh,
    degree: usize,
}

impl<'m> Space<'m> {
    pub fn new(mesh: &'m Mesh, degree: usize) -> Result<Self> {
        if degree > 1 {
            return Err(Error::UnsupportedDegree(degree));
        }
        Ok(Space { mesh, degree })
    }

    pub fn mesh(&self) -> &'m Mesh {
        self.mesh
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Local basis functions per element.
    pub fn n_local(&self) -> usize {
        if self.degree == 0 {
            1
        } else {
            self.mesh.dim()
        }
    }

    /// Dimension `M_N`.
    pub fn dim(&self) -> usize {
        self.mesh.n_elements() * self.n_local()
    }

    pub fn dof(&self, element: usize, local: usize) -> usize {
        element * self.n_local() + local
    }

    /// Element owning a global basis function.
    pub fn element_of(&self, dof: usize) -> usize {
        dof / self.n_local()
    }

    /// Local basis values from barycentric coordinates.
    #[inline]
    pub fn local_values(&self, bary: &[f64; 3]) -> [f64; 3] {
        if self.degree == 0 {
            [1.0, 0.0, 0.0]
        } else {
            *bary
        }
    }

    /// Rule used for element integrals of products of basis functions with
    /// smooth data.
    pub fn element_rule(&self) -> Rule {
        panel_rule(self.mesh.dim(), if self.mesh.dim() == 2 { 8 } else { 36 })
    }

    /// Mass matrix `(ψ_j, ψ_i)`.
    pub fn mass_matrix(&self) -> DMatrix<f64> {
        self.weighted_mass(|_, _| 1.0)
    }

    /// `∫ w ψ_j ψ_i`, block diagonal.
    pub fn weighted_mass<T: Scalar>(&self, weight: impl Fn(&Point, &Panel) -> T) -> DMatrix<T> {
        self.mixed_mass(self, weight)
    }

    /// `∫ w ψ_j ψ_i` with `ψ_i` from `self` and `ψ_j` from `trial`, which must
    /// live on the same mesh.
    pub fn mixed_mass<T: Scalar>(&self, trial: &Space, weight: impl Fn(&Point, &Panel) -> T) -> DMatrix<T> {
        let (nt, ns) = (self.n_local(), trial.n_local());
        let mut m = DMatrix::<T>::zeros(self.dim(), trial.dim());
        let rule = self.element_rule();
        for (e, p) in self.mesh.panels().iter().enumerate() {
            let jac = p.jacobian();
            for q in &rule.points {
                let x = p.map(q.xi);
                let bary = p.shape(q.xi);
                let (v, u) = (self.local_values(&bary), trial.local_values(&bary));
                let w = weight(&x, p).scale(q.w * jac);
                for a in 0..nt {
                    for b in 0..ns {
                        m[(self.dof(e, a), trial.dof(e, b))] += w.scale(v[a] * u[b]);
                    }
                }
            }
        }
        m
    }

    /// Moments `(ψ_i, 1)`.
    pub fn moments(&self) -> DVector<f64> {
        self.load(|_, _| 1.0)
    }

    /// Nodal interpolant: vertex values for p=1, centroid values for p=0.
    pub fn interpolate<T: Scalar>(&self, f: impl Fn(&Point, &Panel) -> T) -> DVector<T> {
        let mut c = DVector::<T>::zeros(self.dim());
        for (e, p) in self.mesh.panels().iter().enumerate() {
            if self.degree == 0 {
                c[self.dof(e, 0)] = f(&p.centroid, p);
            } else {
                for a in 0..self.n_local() {
                    c[self.dof(e, a)] = f(&p.corners[a], p);
                }
            }
        }
        c
    }

    /// Element block of the mass matrix.
    pub fn element_mass(&self, element: usize) -> DMatrix<f64> {
        self.local_mass(self.mesh.panel(element), &self.element_rule())
    }

    /// Load vector `(f, ψ_i)`.
    pub fn load<T: Scalar>(&self, f: impl Fn(&Point, &Panel) -> T) -> DVector<T> {
        let nl = self.n_local();
        let mut b = DVector::<T>::zeros(self.dim());
        let rule = self.element_rule();
        for (e, p) in self.mesh.panels().iter().enumerate() {
            let jac = p.jacobian();
            for q in &rule.points {
                let x = p.map(q.xi);
                let v = self.local_values(&p.shape(q.xi));
                let fx = f(&x, p).scale(q.w * jac);
                for a in 0..nl {
                    b[self.dof(e, a)] += fx.scale(v[a]);
                }
            }
        }
        b
    }

    /// L² projection: solves `M c = (f, ψ_i)` element by element.
    pub fn l2_project<T: Scalar>(&self, f: impl Fn(&Point, &Panel) -> T) -> DVector<T> {
        let b = self.load(f);
        let nl = self.n_local();
        let mut c = DVector::<T>::zeros(self.dim());
        let rule = self.element_rule();
        for (e, p) in self.mesh.panels().iter().enumerate() {
            let block = self.local_mass(p, &rule);
            let inv = block.try_inverse().expect("element mass block is SPD");
            for a in 0..nl {
                let mut s = T::ZERO;
                for b_ in 0..nl {
                    s += b[self.dof(e, b_)].scale(inv[(a, b_)]);
                }
                c[self.dof(e, a)] = s;
            }
        }
        c
    }

    fn local_mass(&self, p: &Panel, rule: &Rule) -> DMatrix<f64> {
        let nl = self.n_local();
        let mut m = DMatrix::zeros(nl, nl);
        for q in &rule.points {
            let v = self.local_values(&p.shape(q.xi));
            for a in 0..nl {
                for b in 0..nl {
                    m[(a, b)] += q.w * p.jacobian() * v[a] * v[b];
                }
            }
        }
        m
    }

    /// Value of `Σ c_j ψ_j` at reference point `xi` of `element`.
    pub fn eval<T: Scalar>(&self, coeffs: &DVector<T>, element: usize, xi: [f64; 2]) -> T {
        let v = self.local_values(&self.mesh.panel(element).shape(xi));
        let mut s = T::ZERO;
        for a in 0..self.n_local() {
            s += coeffs[self.dof(element, a)].scale(v[a]);
        }
        s
    }

    /// `‖Σ c_j ψ_j - f‖_{L²(Γ)}` by element quadrature.
    pub fn l2_error<T: Scalar>(&self, coeffs: &DVector<T>, f: impl Fn(&Point, &Panel) -> T) -> f64 {
        let rule = self.element_rule();
        let mut s = 0.0;
        for (e, p) in self.mesh.panels().iter().enumerate() {
            for q in &rule.points {
                let x = p.map(q.xi);
                let d = self.eval(coeffs, e, q.xi) - f(&x, p);
                s += q.w * p.jacobian() * d.modulus_squared();
            }
        }
        s.sqrt()
    }

    /// `‖f‖_{L²(Γ)}` by element quadrature.
    pub fn l2_norm<T: Scalar>(&self, f: impl Fn(&Point, &Panel) -> T) -> f64 {
        let zero = DVector::<T>::zeros(self.dim());
        self.l2_error(&zero, f)
    }

    /// Coefficients of the constant function 1.
    pub fn ones(&self) -> DVector<f64> {
        DVector::from_element(self.dim(), 1.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingMode {
    /// `D_ii = s_τ(i)`.
    Area,
    /// `D_ii = |A_ii|` of the assembled composite matrix.
    OperatorDiagonal,
    Identity,
}

impl std::str::FromStr for ScalingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "area" => Ok(ScalingMode::Area),
            "operator_diagonal" => Ok(ScalingMode::OperatorDiagonal),
            "identity" => Ok(ScalingMode::Identity),
            _ => Err(Error::Config(format!("unknown scaling mode {s:?}"))),
        }
    }
}

/// Positive diagonal `D_N` used to precondition the Galerkin matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalScaling {
    pub mode: ScalingMode,
    pub diag: Vec<f64>,
}

impl DiagonalScaling {
    /// Builds the scaling; `operator_diagonal` needs the assembled matrix.
    pub fn new<T: Scalar>(space: &Space, mode: ScalingMode, matrix: Option<&DMatrix<T>>) -> Result<Self> {
        let diag: Vec<f64> = match mode {
            ScalingMode::Identity => vec![1.0; space.dim()],
            ScalingMode::Area => {
                (0..space.dim()).map(|i| space.mesh().panel(space.element_of(i)).area).collect()
            }
            ScalingMode::OperatorDiagonal => {
                let a = matrix.ok_or_else(|| {
                    Error::Config("operator_diagonal scaling needs the assembled matrix".into())
                })?;
                if a.nrows() != space.dim() || a.ncols() != space.dim() {
                    return Err(Error::Dimension("matrix does not match the space".into()));
                }
                (0..space.dim()).map(|i| a[(i, i)].modulus()).collect()
            }
        };
        for (index, &value) in diag.iter().enumerate() {
            if !(value > 0.0) {
                return Err(Error::NonPositiveScaling { index, value });
            }
        }
        Ok(DiagonalScaling { mode, diag })
    }

    pub fn inv_sqrt(&self) -> Vec<f64> {
        self.diag.iter().map(|d| 1.0 / d.sqrt()).collect()
    }

    /// `D^{-1/2} A D^{-1/2}`.
    pub fn scale_matrix<T: Scalar>(&self, a: &DMatrix<T>) -> DMatrix<T> {
        let s = self.inv_sqrt();
        DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)].scale(s[i] * s[j]))
    }

    /// Norm-equivalence constants `(C₁, C₂)`: square roots of the extreme
    /// generalised eigenvalues of `(M, D)`, computed element block by block.
    pub fn norm_equivalence(&self, space: &Space) -> (f64, f64) {
        let nl = space.n_local();
        let rule = space.element_rule();
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for (e, p) in space.mesh().panels().iter().enumerate() {
            let m = space.local_mass(p, &rule);
            let s: Vec<f64> = (0..nl).map(|a| 1.0 / self.diag[space.dof(e, a)].sqrt()).collect();
            let scaled = DMatrix::from_fn(nl, nl, |a, b| m[(a, b)] * s[a] * s[b]);
            let eig = SymmetricEigen::new(scaled).eigenvalues;
            lo = lo.min(eig.min());
            hi = hi.max(eig.max());
        }
        (lo.sqrt(), hi.sqrt())
    }
}
