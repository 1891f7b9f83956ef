//! Full GMRES with zero initial guess, the diagonally scaled solve, and
//! field-of-values diagnostics.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::formulations::{Certificate, GalerkinSystem};
use crate::Scalar;

/// Outcome of a GMRES run.
#[derive(Clone, Debug, PartialEq)]
pub struct GmresReport<T: Scalar> {
    /// Number of iterations performed.
    pub iterations: usize,
    /// `‖r_m‖₂ / ‖r₀‖₂` for `m = 0, …, iterations`.
    pub residuals: Vec<f64>,
    /// Coefficients of the solution (unscaled for [`precondition_solve`]).
    pub solution: DVector<T>,
    pub converged: bool,
    pub tol: f64,
}

impl<T: Scalar> GmresReport<T> {
    /// Final relative residual.
    pub fn achieved(&self) -> f64 {
        *self.residuals.last().expect("history starts with r₀")
    }

    /// Whether `‖r_m‖/‖r₀‖ ≤ 12 γ_β^m` for every recorded `m`.
    pub fn satisfies_elman_bound(&self, cert: &Certificate) -> bool {
        self.residuals.iter().enumerate().all(|(m, &r)| r <= cert.residual_bound(m) * (1.0 + 1e-10) + 1e-14)
    }
}

/// Givens rotation `[c s; -s̄ c]` annihilating `b` in `(a, b)`.
fn givens<T: Scalar>(a: T, b: T) -> (f64, T) {
    let (ma, mb) = (a.modulus(), b.modulus());
    if mb == 0.0 {
        return (1.0, T::ZERO);
    }
    if ma == 0.0 {
        return (0.0, T::ONE);
    }
    let r = ma.hypot(mb);
    let phase = a.unscale(ma);
    (ma / r, phase * b.conjugate().unscale(r))
}

fn rotate<T: Scalar>(c: f64, s: T, x: T, y: T) -> (T, T) {
    (x.scale(c) + s * y, -(s.conjugate() * x) + y.scale(c))
}

/// GMRES with zero initial guess; stops at the first `m` with
/// `‖r_m‖/‖r₀‖ ≤ tol` or after `max_iter` iterations. Arnoldi uses modified
/// Gram–Schmidt with one reorthogonalisation pass.
pub fn gmres<T: Scalar>(a: &DMatrix<T>, b: &DVector<T>, tol: f64, max_iter: usize) -> Result<GmresReport<T>> {
    let n = a.nrows();
    if a.ncols() != n || b.len() != n {
        return Err(Error::Dimension(format!("GMRES needs a square system, got {}x{} and {}", n, a.ncols(), b.len())));
    }
    if !(tol > 0.0) {
        return Err(Error::Config(format!("GMRES tolerance must be positive, got {tol}")));
    }
    let beta = b.norm();
    let mut report = GmresReport { iterations: 0, residuals: vec![1.0], solution: DVector::zeros(n), converged: true, tol };
    if beta == 0.0 {
        return Ok(report);
    }
    let max_iter = max_iter.min(n);
    let mut basis: Vec<DVector<T>> = vec![b.unscale(beta)];
    // Columns of the rotated Hessenberg matrix.
    let mut r_cols: Vec<Vec<T>> = Vec::new();
    let mut rotations: Vec<(f64, T)> = Vec::new();
    let mut g = vec![T::from_parts(beta, 0.0)];
    let mut m = 0;
    let mut converged = false;
    while m < max_iter {
        let mut w = a * &basis[m];
        let mut h = vec![T::ZERO; m + 2];
        for _pass in 0..2 {
            for (i, v) in basis.iter().enumerate() {
                let c = v.dotc(&w);
                w.axpy(-c, v, T::ONE);
                h[i] += c;
            }
        }
        let hnext = w.norm();
        h[m + 1] = T::from_parts(hnext, 0.0);
        for (i, &(c, s)) in rotations.iter().enumerate() {
            let (x, y) = rotate(c, s, h[i], h[i + 1]);
            h[i] = x;
            h[i + 1] = y;
        }
        let (c, s) = givens(h[m], h[m + 1]);
        let (x, _) = rotate(c, s, h[m], h[m + 1]);
        let scale = r_cols.iter().flatten().chain(&h[..m]).map(|v| v.modulus()).fold(x.modulus(), f64::max);
        if x.modulus() <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
            // an A-invariant Krylov space without the solution: the residual
            // cannot decrease further.
            let residual = *report.residuals.last().expect("history starts with r₀");
            return Err(Error::Stagnation { iterations: m, residual });
        }
        h[m] = x;
        h[m + 1] = T::ZERO;
        let (gm, gnext) = rotate(c, s, g[m], T::ZERO);
        g[m] = gm;
        g.push(gnext);
        rotations.push((c, s));
        h.truncate(m + 1);
        r_cols.push(h);
        m += 1;
        let rel = gnext.modulus() / beta;
        report.residuals.push(rel);
        if rel <= tol {
            converged = true;
            break;
        }
        let scale = r_cols.iter().flatten().map(|v| v.modulus()).fold(0.0, f64::max);
        if hnext <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
            // Breakdown: the Krylov space is invariant, so the least-squares
            // residual is final.
            return Err(Error::Stagnation { iterations: m, residual: rel });
        }
        basis.push(w.unscale(hnext));
    }
    // Back substitution R y = g.
    let mut y = vec![T::ZERO; m];
    for i in (0..m).rev() {
        let mut s = g[i];
        for j in i + 1..m {
            s -= r_cols[j][i] * y[j];
        }
        y[i] = s / r_cols[i][i];
    }
    let mut x = DVector::zeros(n);
    for (v, yi) in basis.iter().zip(&y) {
        x.axpy(*yi, v, T::ONE);
    }
    report.iterations = m;
    report.solution = x;
    report.converged = converged;
    Ok(report)
}

/// Solves `D^{-1/2} A D^{-1/2} y = D^{-1/2} b` and returns `x = D^{-1/2} y`.
pub fn precondition_solve<T: Scalar>(system: &GalerkinSystem<T>, tol: f64, max_iter: usize) -> Result<GmresReport<T>> {
    let (a, b) = system.scaled();
    let mut report = gmres(&a, &b, tol, max_iter)?;
    let s = system.scaling.inv_sqrt();
    report.solution = DVector::from_fn(report.solution.len(), |i, _| report.solution[i].scale(s[i]));
    Ok(report)
}

/// Dense LU solve, used to cross-check GMRES.
pub fn lu_solve<T: Scalar>(a: &DMatrix<T>, b: &DVector<T>) -> Result<DVector<T>> {
    a.clone().lu().solve(b).ok_or(Error::SingularSystem)
}

/// Norm and numerical-range quantities of a matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FovDiagnostics {
    pub norm2: f64,
    /// Smallest singular value.
    pub sigma_min: f64,
    /// Lower bound on `dist(0, W(A))` (exact for real matrices with positive
    /// definite symmetric part).
    pub dist0_w: f64,
    /// Smallest eigenvalue of `(A + Aᴴ)/2`.
    pub lambda_min_sym: f64,
}

impl FovDiagnostics {
    pub fn cond2(&self) -> f64 {
        self.norm2 / self.sigma_min
    }

    /// Whether the numerical range is bounded away from zero.
    pub fn coercive(&self) -> bool {
        self.dist0_w > 0.0
    }

    /// `dist(0, W)/‖A‖`, the measured counterpart of `cos β`.
    pub fn cos_beta(&self) -> f64 {
        self.dist0_w / self.norm2
    }
}

/// Number of rotation angles sampled for complex matrices.
const FOV_ANGLES: usize = 16;

fn hermitian_min<T: Scalar>(a: &DMatrix<T>, rotation: T) -> f64 {
    let r = a * rotation;
    let h = (&r + r.adjoint()).unscale(2.0);
    SymmetricEigen::new(h).eigenvalues.min()
}

/// Norm, conditioning and field-of-values diagnostics by dense
/// factorisations. For complex matrices `dist(0, W)` is bounded below by
/// `max_θ λ_min(Re(e^{-iθ}A))` over equally spaced angles.
pub fn fov_diagnostics<T: Scalar>(a: &DMatrix<T>) -> FovDiagnostics {
    let sv = a.singular_values();
    let lambda_min_sym = hermitian_min(a, T::ONE);
    let mut dist = lambda_min_sym;
    if T::IS_COMPLEX {
        for k in 1..FOV_ANGLES {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / FOV_ANGLES as f64;
            dist = dist.max(hermitian_min(a, T::from_parts(theta.cos(), -theta.sin())));
        }
    }
    FovDiagnostics { norm2: sv.max(), sigma_min: sv.min(), dist0_w: dist.max(0.0), lambda_min_sym }
}
