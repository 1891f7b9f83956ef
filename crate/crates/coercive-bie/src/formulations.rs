//! Composite operators, right-hand sides, coercivity certificates and field
//! representations for the Laplace and Helmholtz Dirichlet problems.
//!
//! With `σ = -1` in the interior and `σ = +1` in the exterior, the Laplace
//! operators are
//!
//! - direct: `A' = ½(Z·n)I + σK_Z' + αS`, right-hand side
//!   `Bg = σ[(Z·n)Hg + Z·∇_Γ w] + αw` with `w = -σ½g + Dg`;
//! - indirect: `A = ½(Z·n)I + σK_Z + αS` with `Aφ = σg` and field
//!   `u = (𝒦_Z + σα𝒮)φ`.
//!
//! The 2-d projected variant uses `QAQ + βP` (`P` the mean value,
//! `Q = I - P`), the 2-d star variant uses `Z = x - x₀`, `α = 0` and adds
//! `σ(|Γ|/4π)P`. The Helmholtz operators replace `αS` by `-iηS_k`
//! (exterior only). The baseline variant is the classical pair `½I ± D'`,
//! `½I ± D`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discretization::{DiagonalScaling, ScalingMode, Space};
use crate::error::{Error, Result};
use crate::geometry::{star_radius, Mesh, Panel, Point};
use crate::kernels::Kernel;
use crate::operators::{
    hypersingular_weak_weighted, layer_at, Assembler, LayerKind, Op, PotentialField, PotentialKind,
};
use crate::vector_field::{FieldKind, Regime, VectorField};
use crate::Scalar;
use nalgebra::ComplexField as _;

/// Ratio between the coercivity constant of the Helmholtz star-combined
/// operator and the star radius `κ`.
pub const STAR_COMBINED_FACTOR: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Equation {
    Laplace,
    Helmholtz,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Style {
    /// Unknown is the Neumann trace.
    Direct,
    /// Unknown is a layer density.
    Indirect,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    General,
    TwodProjected,
    TwodStar,
    /// Classical second-kind equations, kept for comparisons.
    Baseline,
}

/// Helmholtz coupling `η`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Eta {
    Constant(Complex64),
    /// `η(x) = k|x - x₀| + iα` with `x₀` the centre of the star field.
    StarCombined { alpha: f64 },
}

macro_rules! string_enum {
    ($ty:ident, $what:literal, $($variant:ident => $name:literal),+) => {
        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok($ty::$variant),)+
                    _ => Err(Error::Config(format!(
                        concat!("unknown ", $what, " {:?} (expected one of: {})"),
                        s,
                        [$($name),+].join(", ")
                    ))),
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self {
                    $($ty::$variant => $name,)+
                })
            }
        }
    };
}

string_enum!(Equation, "equation", Laplace => "laplace", Helmholtz => "helmholtz");
string_enum!(Style, "style", Direct => "direct", Indirect => "indirect");
string_enum!(
    Variant,
    "variant",
    General => "general",
    TwodProjected => "twod_projected",
    TwodStar => "twod_star",
    Baseline => "baseline"
);

impl fmt::Display for Eta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eta::Constant(z) if z.im == 0.0 => write!(f, "{}", z.re),
            Eta::Constant(z) => write!(f, "{}{:+}i", z.re, z.im),
            Eta::StarCombined { alpha } => write!(f, "star_combined({alpha})"),
        }
    }
}

/// A boundary integral equation for the Dirichlet problem.
#[derive(Clone, Debug, PartialEq)]
pub struct Formulation {
    pub equation: Equation,
    pub regime: Regime,
    pub style: Style,
    pub variant: Variant,
    pub field: VectorField,
    /// Laplace coupling; `None` picks the smallest certified value.
    pub alpha: Option<f64>,
    /// Projection constant of the 2-d projected variant; `None` means `c/2`.
    pub beta: Option<f64>,
    pub eta: Eta,
    pub k: f64,
}

/// Coupling constants after defaults are applied.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Couplings {
    pub alpha: f64,
    pub beta: f64,
}

impl Formulation {
    /// A Laplace formulation with default couplings.
    pub fn laplace(regime: Regime, style: Style, variant: Variant, field: VectorField) -> Self {
        Formulation {
            equation: Equation::Laplace,
            regime,
            style,
            variant,
            field,
            alpha: None,
            beta: None,
            eta: Eta::Constant(Complex64::new(0.0, 0.0)),
            k: 0.0,
        }
    }

    /// An exterior Helmholtz formulation.
    pub fn helmholtz(style: Style, field: VectorField, k: f64, eta: Eta) -> Self {
        Formulation {
            equation: Equation::Helmholtz,
            regime: Regime::Exterior,
            style,
            variant: Variant::General,
            field,
            alpha: None,
            beta: None,
            eta,
            k,
        }
    }

    /// `σ`: -1 in the interior, +1 in the exterior.
    pub fn sign(&self) -> f64 {
        match self.regime {
            Regime::Interior => -1.0,
            Regime::Exterior => 1.0,
        }
    }

    /// Checks that the formulation makes sense on `mesh`.
    pub fn validate(&self, mesh: &Mesh) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        let d = mesh.dim();
        if matches!(self.variant, Variant::TwodProjected | Variant::TwodStar) && d != 2 {
            return bad(format!("variant {} requires a 2-d mesh", self.variant));
        }
        if self.variant == Variant::TwodStar && !matches!(self.field.kind(), FieldKind::Star { .. }) {
            return bad("variant twod_star requires a star field".into());
        }
        match self.equation {
            Equation::Laplace => {}
            Equation::Helmholtz => {
                if self.variant != Variant::General {
                    return bad(format!("variant {} is only defined for Laplace", self.variant));
                }
                if self.regime != Regime::Exterior {
                    return bad("Helmholtz formulations are posed in the exterior".into());
                }
                if !(self.k > 0.0) {
                    return bad(format!("wavenumber must be positive, got {}", self.k));
                }
                if let Eta::StarCombined { .. } = self.eta {
                    if !matches!(self.field.kind(), FieldKind::Star { .. }) {
                        return bad("the star-combined coupling requires a star field".into());
                    }
                    if self.style == Style::Indirect {
                        return bad("the indirect Helmholtz formulation needs a constant coupling eta".into());
                    }
                }
            }
        }
        Ok(())
    }

    /// `α` and `β` with defaults applied.
    pub fn couplings(&self, mesh: &Mesh) -> Couplings {
        let alpha = match self.variant {
            Variant::TwodStar | Variant::Baseline => 0.0,
            _ => self.alpha.unwrap_or_else(|| self.default_alpha(mesh.dim())),
        };
        let beta = self.beta.unwrap_or_else(|| 0.5 * self.field.min_normal_component(mesh));
        Couplings { alpha, beta }
    }

    fn default_alpha(&self, d: usize) -> f64 {
        match (self.variant, self.field.kind()) {
            (_, FieldKind::Normal) => 0.0,
            (Variant::General, FieldKind::Star { .. }) => self.sign() * (d as f64 - 2.0) / 2.0,
            _ => lipschitz_alpha(&self.field, d).unwrap_or(0.0),
        }
    }

    /// `η(x)`.
    pub fn eta_at(&self, x: &Point) -> Complex64 {
        match self.eta {
            Eta::Constant(z) => z,
            Eta::StarCombined { alpha } => Complex64::new(self.k * (x - self.star_center()).norm(), alpha),
        }
    }

    fn star_center(&self) -> Point {
        match self.field.kind() {
            FieldKind::Star { center } => *center,
            _ => Point::zeros(),
        }
    }

    /// Multiplier field actually used by the operator.
    fn multiplier(&self) -> VectorField {
        match self.variant {
            Variant::Baseline => VectorField::normal(),
            _ => self.field.clone(),
        }
    }
}

/// Smallest `α` for which a Lipschitz field is certified: the
/// cutoff-based constant of a partition field, or `3dL/2` otherwise.
fn lipschitz_alpha(field: &VectorField, d: usize) -> Option<f64> {
    let general = 1.5 * d as f64 * field.lipschitz()?;
    Some(field.partition_alpha().map_or(general, |a| a.min(general)))
}

fn lift<T: Scalar>(m: &DMatrix<f64>) -> DMatrix<T> {
    m.map(|v| T::from_parts(v, 0.0))
}

fn check_kernel<K: Kernel>(form: &Formulation, kernel: &K, mesh: &Mesh) -> Result<()> {
    form.validate(mesh)?;
    let helmholtz = form.equation == Equation::Helmholtz;
    if helmholtz != K::Value::IS_COMPLEX {
        return Err(Error::Config(format!("kernel {} does not match equation {}", kernel.name(), form.equation)));
    }
    if helmholtz && (kernel.wavenumber() - form.k).abs() > 1e-14 * form.k {
        return Err(Error::Config(format!(
            "kernel wavenumber {} differs from formulation wavenumber {}",
            kernel.wavenumber(),
            form.k
        )));
    }
    Ok(())
}

/// Galerkin matrix of the operator before any mean-value correction:
/// `A'` (direct) or `A` (indirect) on the given test and trial spaces.
pub fn core_operator<K: Kernel>(
    form: &Formulation,
    asm: &Assembler<K>,
    test: &Space,
    trial: &Space,
) -> Result<DMatrix<K::Value>> {
    let mesh = asm.mesh();
    check_kernel(form, asm.kernel(), mesh)?;
    let s = form.sign();
    let direct = form.style == Style::Direct;
    let z = form.multiplier();
    let zn: DMatrix<K::Value> = lift(&test.mixed_mass(trial, |x, p| 0.5 * z.eval(x, &p.normal).dot(&p.normal)));
    let sc = |v: f64| K::Value::from_parts(v, 0.0);
    match form.equation {
        Equation::Laplace => {
            if form.variant == Variant::Baseline {
                let op = if direct { Op::Dprime } else { Op::D };
                let d = asm.assemble(op, test, trial)?;
                return Ok(zn + d * sc(s));
            }
            let alpha = form.couplings(mesh).alpha;
            let kz = if direct { Op::KZprime(&z) } else { Op::KZ(&z) };
            if alpha == 0.0 {
                let k = asm.assemble(kz, test, trial)?;
                return Ok(zn + k * sc(s));
            }
            let mut m = asm.assemble_many(&[kz, Op::S], test, trial)?.into_iter();
            let (k, single) = (m.next().expect("K_Z"), m.next().expect("S"));
            Ok(zn + k * sc(s) + single * sc(alpha))
        }
        Equation::Helmholtz => {
            let kz = if direct { Op::KZprime(&z) } else { Op::KZ(&z) };
            match form.eta {
                Eta::Constant(eta) => {
                    let mut m = asm.assemble_many(&[kz, Op::S], test, trial)?.into_iter();
                    let (k, single) = (m.next().expect("K_Z"), m.next().expect("S"));
                    let minus_i_eta = K::Value::from_parts(eta.im, -eta.re);
                    Ok(zn + k + single * minus_i_eta)
                }
                Eta::StarCombined { alpha } => {
                    // -iη S = α S - i k |x - x₀| S with η at the outer variable.
                    let x0 = form.star_center();
                    let dist = move |x: &Point| (x - x0).norm();
                    let ops = [kz, Op::S, Op::WeightedS(&dist)];
                    let mut m = asm.assemble_many(&ops, test, trial)?.into_iter();
                    let (k, single, weighted) = (m.next().expect("K_Z"), m.next().expect("S"), m.next().expect("S_w"));
                    Ok(zn + k + single * sc(alpha) + weighted * K::Value::from_parts(0.0, -form.k))
                }
            }
        }
    }
}

/// `Πᵀ A Π'` with `Π = I - 1 mᵀ/|Γ|`: the Galerkin matrix of `Q A Q` given
/// that of `A`, for test moments `mt` and trial moments `ms`.
fn project<T: Scalar>(a: &DMatrix<T>, mt: &DVector<f64>, ms: &DVector<f64>, measure: f64) -> DMatrix<T> {
    let colsum: Vec<T> = (0..a.ncols()).map(|j| a.column(j).sum()).collect();
    let b = DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] - colsum[j].scale(mt[i] / measure));
    let rowsum: Vec<T> = (0..b.nrows()).map(|i| b.row(i).sum()).collect();
    DMatrix::from_fn(b.nrows(), b.ncols(), |i, j| b[(i, j)] - rowsum[i].scale(ms[j] / measure))
}

/// `Πᵀ b`: the load vector of `Q f` given that of `f`.
fn project_rhs<T: Scalar>(b: &DVector<T>, m: &DVector<f64>, measure: f64) -> DVector<T> {
    let total: T = b.sum();
    DVector::from_fn(b.len(), |i, _| b[i] - total.scale(m[i] / measure))
}

/// Galerkin matrix of the full left-hand side operator.
pub fn build_operator<K: Kernel>(
    form: &Formulation,
    asm: &Assembler<K>,
    test: &Space,
    trial: &Space,
) -> Result<DMatrix<K::Value>> {
    let core = core_operator(form, asm, test, trial)?;
    Ok(complete_operator(form, asm.mesh(), &core, test, trial))
}

fn complete_operator<T: Scalar>(form: &Formulation, mesh: &Mesh, core: &DMatrix<T>, test: &Space, trial: &Space) -> DMatrix<T> {
    let measure = mesh.measure();
    let (mt, ms) = (test.moments(), trial.moments());
    let mean = |factor: f64| DMatrix::from_fn(mt.len(), ms.len(), |i, j| T::from_parts(factor * mt[i] * ms[j] / measure, 0.0));
    match form.variant {
        Variant::TwodProjected => project(core, &mt, &ms, measure) + mean(form.couplings(mesh).beta),
        Variant::TwodStar => core + mean(form.sign() * measure / (4.0 * PI)),
        _ => core.clone(),
    }
}

/// Dirichlet data `g`, optionally with the gradient of a smooth extension
/// (needed by direct formulations).
pub struct DirichletData<'a, T> {
    pub value: Box<dyn Fn(&Point) -> T + Sync + 'a>,
    pub gradient: Option<Box<dyn Fn(&Point) -> [T; 3] + Sync + 'a>>,
}

impl<'a, T: Scalar> DirichletData<'a, T> {
    pub fn new(value: impl Fn(&Point) -> T + Sync + 'a) -> Self {
        DirichletData { value: Box::new(value), gradient: None }
    }

    pub fn with_gradient(mut self, gradient: impl Fn(&Point) -> [T; 3] + Sync + 'a) -> Self {
        self.gradient = Some(Box::new(gradient));
        self
    }

    /// `∇g·n` on a panel.
    pub fn normal_derivative(&self, x: &Point, p: &Panel) -> Option<T> {
        self.gradient.as_ref().map(|g| dot(&g(x), &p.normal))
    }
}

fn dot<T: Scalar>(v: &[T; 3], a: &Point) -> T {
    v[0].scale(a.x) + v[1].scale(a.y) + v[2].scale(a.z)
}

fn panel_tangent(p: &Panel) -> Point {
    (p.corners[1] - p.corners[0]).normalize()
}

/// Right-hand side of the Galerkin system.
///
/// Direct formulations need the gradient of the data. In 2-d the Laplace
/// right-hand side `Bg` is evaluated from its definition (hypersingular
/// term in weak form); otherwise it is computed as `A'ψ` with `ψ` the
/// piecewise-linear interpolant of the Neumann trace `∇g·n`, which is exact
/// whenever `g` is the trace of a solution of the problem.
pub fn build_rhs<K: Kernel>(
    form: &Formulation,
    asm: &Assembler<K>,
    space: &Space,
    data: &DirichletData<K::Value>,
) -> Result<DVector<K::Value>> {
    let mesh = asm.mesh();
    check_kernel(form, asm.kernel(), mesh)?;
    let g = &data.value;
    if form.style == Style::Indirect {
        let sign = if form.equation == Equation::Laplace { form.sign() } else { 1.0 };
        return Ok(space.load(|x, _| g(x).scale(sign)));
    }
    let Some(grad) = data.gradient.as_ref() else {
        return Err(Error::Config("direct formulations need the gradient of the Dirichlet data".into()));
    };
    let b = if form.equation == Equation::Laplace && mesh.dim() == 2 {
        laplace_rhs_2d(form, asm, space, g, grad)?
    } else {
        let p1 = Space::new(mesh, 1)?;
        let psi = p1.interpolate(|x, p| dot(&grad(x), &p.normal));
        core_operator(form, asm, space, &p1)? * psi
    };
    Ok(match form.variant {
        Variant::TwodProjected => project_rhs(&b, &space.moments(), mesh.measure()),
        _ => b,
    })
}

fn laplace_rhs_2d<K: Kernel>(
    form: &Formulation,
    asm: &Assembler<K>,
    space: &Space,
    g: &(dyn Fn(&Point) -> K::Value + Sync),
    grad: &(dyn Fn(&Point) -> [K::Value; 3] + Sync),
) -> Result<DVector<K::Value>> {
    let mesh = asm.mesh();
    let kernel = asm.kernel();
    let z = form.multiplier();
    let s = form.sign();
    let tau = -0.5 * s;
    let alpha = form.couplings(mesh).alpha;
    let zn = |x: &Point, p: &Panel| z.eval(x, &p.normal).dot(&p.normal);
    let weight = |x: &Point, p: &Panel| {
        let t = panel_tangent(p);
        let h = 1e-6 * p.diameter;
        (zn(x, p), (zn(&(x + h * t), p) - zn(&(x - h * t), p)) / (2.0 * h))
    };
    let hyper = hypersingular_weak_weighted(kernel, space, asm.quadrature().settings(), Some(&weight), grad, g)?;
    // Z·∇_Γ w = (Z·t) w' with w' = τ g' + (Dg)' and (Dg)' = -D'(g').
    let quad = asm.quadrature();
    let rule = space.element_rule();
    let nl = space.n_local();
    let blocks: Vec<[K::Value; 3]> = (0..mesh.n_elements())
        .into_par_iter()
        .map(|e| {
            let p = mesh.panel(e);
            let t = panel_tangent(p);
            let mut out = [K::Value::ZERO; 3];
            for q in &rule.points {
                let x = p.map(q.xi);
                let [dg] = layer_at(kernel, quad, &x, LayerKind::Double, |y, _| [g(y)]);
                let [dprime] =
                    layer_at(kernel, quad, &x, LayerKind::AdjointDouble(p.normal), |y, py| [dot(&grad(y), &panel_tangent(py))]);
                let gx = g(&x);
                let dgt = dot(&grad(&x), &t);
                let w = gx.scale(tau) + dg;
                let wt = dgt.scale(tau) - dprime;
                let zt = z.eval(&x, &p.normal).dot(&t);
                let val = wt.scale(s * zt) + w.scale(alpha);
                let vals = space.local_values(&p.shape(q.xi));
                for a in 0..nl {
                    out[a] += val.scale(q.w * p.jacobian() * vals[a]);
                }
            }
            out
        })
        .collect();
    let mut b = hyper.map(|v| v.scale(s));
    for (e, blk) in blocks.iter().enumerate() {
        for a in 0..nl {
            b[space.dof(e, a)] += blk[a];
        }
    }
    Ok(b)
}

/// Right-hand side for the total-field Neumann trace of sound-soft
/// scattering of an incident wave `u^I`: `(Z·∇u^I - iηu^I, ψ_i)`.
pub fn sound_soft_rhs(form: &Formulation, space: &Space, incident: &DirichletData<Complex64>) -> Result<DVector<Complex64>> {
    form.validate(space.mesh())?;
    if form.equation != Equation::Helmholtz || form.style != Style::Direct {
        return Err(Error::Config("sound-soft scattering uses the direct Helmholtz formulation".into()));
    }
    let grad = incident
        .gradient
        .as_ref()
        .ok_or_else(|| Error::Config("the incident field needs a gradient".into()))?;
    let z = &form.field;
    Ok(space.load(|x, p| {
        let zx = z.eval(x, &p.normal);
        dot(&grad(x), &zx) - Complex64::i() * form.eta_at(x) * (incident.value)(x)
    }))
}

/// Assembled Galerkin system `A x = b` with its scaling.
#[derive(Clone, Debug)]
pub struct GalerkinSystem<T: Scalar> {
    pub matrix: DMatrix<T>,
    pub rhs: DVector<T>,
    pub scaling: DiagonalScaling,
    pub mass: DMatrix<f64>,
    pub formulation: Formulation,
    pub couplings: Couplings,
    /// Matrix of the operator before mean-value corrections.
    pub core: DMatrix<T>,
}

impl<T: Scalar> GalerkinSystem<T> {
    /// `D^{-1/2} A D^{-1/2}` and `D^{-1/2} b`.
    pub fn scaled(&self) -> (DMatrix<T>, DVector<T>) {
        let s = self.scaling.inv_sqrt();
        let b = DVector::from_fn(self.rhs.len(), |i, _| self.rhs[i].scale(s[i]));
        (self.scaling.scale_matrix(&self.matrix), b)
    }
}

/// Assembles matrix, right-hand side and scaling on one space.
pub fn build_system<K: Kernel>(
    form: &Formulation,
    asm: &Assembler<K>,
    space: &Space,
    data: &DirichletData<K::Value>,
    scaling: ScalingMode,
) -> Result<GalerkinSystem<K::Value>> {
    let rhs = build_rhs(form, asm, space, data)?;
    build_system_with_rhs(form, asm, space, rhs, scaling)
}

/// Assembles matrix and scaling for a given right-hand side vector.
pub fn build_system_with_rhs<K: Kernel>(
    form: &Formulation,
    asm: &Assembler<K>,
    space: &Space,
    rhs: DVector<K::Value>,
    scaling: ScalingMode,
) -> Result<GalerkinSystem<K::Value>> {
    if rhs.len() != space.dim() {
        return Err(Error::Dimension(format!("right-hand side of length {} for {} unknowns", rhs.len(), space.dim())));
    }
    let core = core_operator(form, asm, space, space)?;
    let matrix = complete_operator(form, asm.mesh(), &core, space, space);
    let scaling = DiagonalScaling::new(space, scaling, Some(&matrix))?;
    Ok(GalerkinSystem {
        matrix,
        rhs,
        scaling,
        mass: space.mass_matrix(),
        formulation: form.clone(),
        couplings: form.couplings(asm.mesh()),
        core,
    })
}

/// Quantities entering the GMRES convergence bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Certificate {
    pub c_coer: f64,
    /// `‖A‖` estimated by the discrete `L²` operator norm of the matrix.
    pub norm_estimate: f64,
    pub c1: f64,
    pub c2: f64,
    pub cos_beta: f64,
    pub gamma_beta: f64,
    pub cond_bound: f64,
}

impl Certificate {
    pub fn new(c_coer: f64, norm_estimate: f64, c1: f64, c2: f64) -> Self {
        let cos_beta = (c_coer / norm_estimate * (c1 / c2)).min(1.0);
        let beta = cos_beta.acos();
        let gamma_beta = 2.0 * (beta / (4.0 - 2.0 * beta / PI)).sin();
        let cond_bound = norm_estimate / c_coer * (c2 / c1).powi(2);
        Certificate { c_coer, norm_estimate, c1, c2, cos_beta, gamma_beta, cond_bound }
    }

    /// Iterations after which the relative GMRES residual is below `eps`.
    pub fn iteration_bound(&self, eps: f64) -> f64 {
        if self.gamma_beta <= 0.0 {
            return 1.0;
        }
        let lead = (12.0 * self.norm_estimate / self.c_coer * (self.c2 / self.c1).powi(3)).ln();
        ((lead + (1.0 / eps).ln()) / (1.0 / self.gamma_beta).ln()).max(1.0)
    }

    /// Bound `12 γ_β^m` on the relative residual after `m` iterations.
    pub fn residual_bound(&self, m: usize) -> f64 {
        12.0 * self.gamma_beta.powi(m as i32)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certification {
    Certified(Certificate),
    Uncertified { reason: String },
}

impl Certification {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Certification::Certified(c) => Some(c),
            Certification::Uncertified { .. } => None,
        }
    }
}

/// Coercivity constant guaranteed for `form` on `mesh`, or the reason why
/// none is available.
pub fn coercivity_constant(form: &Formulation, mesh: &Mesh) -> std::result::Result<f64, String> {
    let d = mesh.dim();
    let star_kappa = || match form.field.kind() {
        FieldKind::Star { center } => {
            let kappa = star_radius(mesh, center);
            if kappa > 0.0 {
                Ok(kappa)
            } else {
                Err(format!("mesh is not star-shaped with respect to the field centre (κ = {kappa:.3e})"))
            }
        }
        _ => Err("a star field is required".into()),
    };
    if matches!(form.field.kind(), FieldKind::Normal) || form.variant == Variant::Baseline {
        return Err("no coercivity guarantee for the normal field or the classical operators".into());
    }
    let couplings = form.couplings(mesh);
    let alpha = couplings.alpha;
    let need_alpha = |min: f64| {
        if alpha >= min - 1e-12 * min.abs().max(1.0) {
            Ok(())
        } else {
            Err(format!("alpha = {alpha} is below the certified threshold {min}"))
        }
    };
    let positive_c = || {
        let c = form.field.min_normal_component(mesh);
        if c > 0.0 {
            Ok(c)
        } else {
            Err(format!("Z·n is not bounded below by a positive constant (min {c:.3e})"))
        }
    };
    match form.equation {
        Equation::Helmholtz => {
            let Eta::StarCombined { alpha } = form.eta else {
                return Err("only the star-combined coupling is known to be coercive".into());
            };
            let min = (d as f64 - 1.0) / 2.0;
            if alpha < min {
                return Err(format!("star-combined alpha = {alpha} is below {min}"));
            }
            Ok(STAR_COMBINED_FACTOR * star_kappa()?)
        }
        Equation::Laplace => match form.variant {
            Variant::TwodStar => Ok(0.5 * star_kappa()?),
            Variant::TwodProjected => {
                let c = positive_c()?;
                need_alpha(lipschitz_alpha(&form.field, d).expect("Lipschitz field"))?;
                if (couplings.beta - 0.5 * c).abs() > 1e-12 * c {
                    return Err(format!("beta = {} differs from c/2 = {}", couplings.beta, 0.5 * c));
                }
                Ok(0.5 * c)
            }
            Variant::General if d == 2 => Err("in 2-d only the projected and star variants are coercive".into()),
            Variant::General => match form.field.kind() {
                FieldKind::Star { .. } => {
                    need_alpha(form.sign() * (d as f64 - 2.0) / 2.0)?;
                    Ok(0.5 * star_kappa()?)
                }
                _ => {
                    let c = positive_c()?;
                    need_alpha(lipschitz_alpha(&form.field, d).expect("Lipschitz field"))?;
                    Ok(0.5 * c)
                }
            },
            Variant::Baseline => unreachable!("handled above"),
        },
    }
}

/// Certificate for an assembled system.
pub fn certify<T: Scalar>(system: &GalerkinSystem<T>, space: &Space) -> Certification {
    match coercivity_constant(&system.formulation, space.mesh()) {
        Err(reason) => Certification::Uncertified { reason },
        Ok(c_coer) => {
            let norm = l2_operator_norm(&system.matrix, space);
            let (c1, c2) = system.scaling.norm_equivalence(space);
            Certification::Certified(Certificate::new(c_coer, norm, c1, c2))
        }
    }
}

fn element_inv_sqrt(space: &Space) -> Vec<DMatrix<f64>> {
    (0..space.mesh().n_elements())
        .map(|e| {
            let eig = SymmetricEigen::new(space.element_mass(e));
            let d = eig.eigenvalues.map(|l| 1.0 / l.sqrt());
            &eig.eigenvectors * DMatrix::from_diagonal(&d) * eig.eigenvectors.transpose()
        })
        .collect()
}

/// Blockwise `M^{-1/2}` of the element mass matrices (the basis functions
/// are element-local, so `M` is block diagonal).
pub fn mass_inv_sqrt(space: &Space) -> DMatrix<f64> {
    let n = space.dim();
    let nl = space.n_local();
    let mut out = DMatrix::zeros(n, n);
    for (e, block) in element_inv_sqrt(space).iter().enumerate() {
        for a in 0..nl {
            for b in 0..nl {
                out[(space.dof(e, a), space.dof(e, b))] = block[(a, b)];
            }
        }
    }
    out
}

fn apply_blocks<T: Scalar>(blocks: &[DMatrix<f64>], nl: usize, v: &DVector<T>) -> DVector<T> {
    let mut out = DVector::zeros(v.len());
    for (e, block) in blocks.iter().enumerate() {
        for a in 0..nl {
            let mut acc = T::ZERO;
            for b in 0..nl {
                acc += v[e * nl + b].scale(block[(a, b)]);
            }
            out[e * nl + a] = acc;
        }
    }
    out
}

/// Largest system for which operator norms are computed from a dense SVD;
/// larger ones use power iteration, which may fall short on clustered
/// spectra.
pub const EXACT_NORM_MAX_DIM: usize = 2048;

/// `‖M^{-1/2} A M^{-1/2}‖₂`: the norm of the discrete operator on `L²(Γ)`.
pub fn l2_operator_norm<T: Scalar>(a: &DMatrix<T>, space: &Space) -> f64 {
    let blocks = element_inv_sqrt(space);
    let nl = space.n_local();
    if a.ncols() <= EXACT_NORM_MAX_DIM {
        let s = mass_inv_sqrt(space).map(|v| T::from_parts(v, 0.0));
        return (&s * a * &s).singular_values().max();
    }
    let s = |v: &DVector<T>| apply_blocks(&blocks, nl, v);
    power_norm(a.ncols(), |v| s(&(a * s(v))), |v| s(&a.ad_mul(&s(v))))
}

/// Largest singular value: dense SVD up to [`EXACT_NORM_MAX_DIM`], power
/// iteration on `AᴴA` beyond.
pub fn spectral_norm<T: Scalar>(a: &DMatrix<T>) -> f64 {
    if a.ncols() <= EXACT_NORM_MAX_DIM {
        return a.singular_values().max();
    }
    power_norm(a.ncols(), |v| a * v, |v| a.ad_mul(v))
}

/// Power iteration for `‖B‖₂` given products with `B` and `Bᴴ`. The
/// estimate converges from below; when it stalls the top singular values
/// are clustered and the shortfall is at most the cluster width.
fn power_norm<T: Scalar>(n: usize, apply: impl Fn(&DVector<T>) -> DVector<T>, apply_adj: impl Fn(&DVector<T>) -> DVector<T>) -> f64 {
    if n == 0 {
        return 0.0;
    }
    // Deterministic start with components in every direction.
    let mut v = DVector::from_fn(n, |i, _| T::from_parts(1.0 + (i as f64 * 0.618_033_988_75).fract(), 0.0));
    v /= T::from_parts(v.norm(), 0.0);
    let mut sigma = 0.0;
    for _ in 0..500 {
        let w = apply_adj(&apply(&v));
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let next = norm.sqrt();
        v = w / T::from_parts(norm, 0.0);
        if (next - sigma).abs() <= 1e-11 * next {
            return next;
        }
        sigma = next;
    }
    sigma
}

/// A solution field built from layer potentials plus a constant.
pub struct Representation<'a, 'm, K: Kernel> {
    terms: Vec<(PotentialField<'a, 'm, K>, K::Value)>,
    constant: K::Value,
}

impl<'a, 'm, K: Kernel> Representation<'a, 'm, K> {
    pub fn new(terms: Vec<(PotentialField<'a, 'm, K>, K::Value)>, constant: K::Value) -> Self {
        Representation { terms, constant }
    }

    pub fn eval_point(&self, x: &Point) -> Result<K::Value> {
        let mut u = self.constant;
        for (pot, factor) in &self.terms {
            u += pot.eval_point(x)? * *factor;
        }
        Ok(u)
    }

    pub fn eval(&self, points: &[Point]) -> Result<Vec<K::Value>> {
        points.par_iter().map(|x| self.eval_point(x)).collect()
    }
}

/// Field in the domain generated by a solution of `system`.
///
/// Indirect formulations use their ansatz. Direct formulations use Green's
/// representation with the piecewise-linear interpolant of `g`; in the 2-d
/// exterior the field is assumed to vanish at infinity.
pub fn representation<'a, 'm, K: Kernel + Clone>(
    system: &'a GalerkinSystem<K::Value>,
    kernel: K,
    space: Space<'m>,
    solution: &DVector<K::Value>,
    data: Option<&DirichletData<K::Value>>,
) -> Result<Representation<'a, 'm, K>> {
    let form = &system.formulation;
    let mesh = space.mesh();
    let measure = mesh.measure();
    let m = space.moments();
    let sc = |v: f64| K::Value::from_parts(v, 0.0);
    let pot = |coeffs: DVector<K::Value>, kind| PotentialField::new(kernel.clone(), space, coeffs, kind);
    let s = form.sign();
    if form.style == Style::Direct {
        let data = data.ok_or_else(|| Error::Config("the direct field representation needs the Dirichlet data".into()))?;
        let p1 = Space::new(mesh, 1)?;
        let g = p1.interpolate(|x, _| (data.value)(x));
        let double = PotentialField::new(kernel.clone(), p1, g, PotentialKind::Double)?;
        return Ok(Representation::new(vec![(pot(solution.clone(), PotentialKind::Single)?, sc(-s)), (double, sc(s))], K::Value::ZERO));
    }
    let kz = PotentialKind::KZ(&form.field);
    let alpha = system.couplings.alpha;
    match (form.equation, form.variant) {
        (Equation::Helmholtz, _) => {
            let Eta::Constant(eta) = form.eta else {
                return Err(Error::Config("the indirect Helmholtz formulation needs a constant coupling eta".into()));
            };
            let minus_i_eta = K::Value::from_parts(eta.im, -eta.re);
            Ok(Representation::new(
                vec![(pot(solution.clone(), kz)?, K::Value::ONE), (pot(solution.clone(), PotentialKind::Single)?, minus_i_eta)],
                K::Value::ZERO,
            ))
        }
        (_, Variant::Baseline) => Ok(Representation::new(vec![(pot(solution.clone(), PotentialKind::Double)?, K::Value::ONE)], K::Value::ZERO)),
        (_, Variant::TwodStar) => {
            let mean = dot_real(&m, solution);
            Ok(Representation::new(vec![(pot(solution.clone(), kz)?, K::Value::ONE)], mean.scale(1.0 / (4.0 * PI))))
        }
        (_, Variant::TwodProjected) => {
            // Coefficients of Qφ, and the constants P A Q φ and P φ.
            let mean = dot_real(&m, solution).scale(1.0 / measure);
            let q = solution.map(|c| c - mean);
            let aq = &system.core * &q;
            let paq = aq.sum().scale(1.0 / measure);
            let constant = paq.scale(-s) + mean.scale(s * system.couplings.beta);
            Ok(Representation::new(
                vec![(pot(q.clone(), kz)?, K::Value::ONE), (pot(q, PotentialKind::Single)?, sc(s * alpha))],
                constant,
            ))
        }
        _ => Ok(Representation::new(
            vec![(pot(solution.clone(), kz)?, K::Value::ONE), (pot(solution.clone(), PotentialKind::Single)?, sc(s * alpha))],
            K::Value::ZERO,
        )),
    }
}

fn dot_real<T: Scalar>(m: &DVector<f64>, v: &DVector<T>) -> T {
    m.iter().zip(v.iter()).fold(T::ZERO, |acc, (a, b)| acc + b.scale(*a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_iteration_matches_svd_on_separated_spectra() {
        let a = DMatrix::from_fn(40, 40, |i, j| if i == j { 1.0 + i as f64 / 10.0 } else { 0.01 * ((i * 7 + j * 3) % 5) as f64 });
        let exact = a.singular_values().max();
        let power = power_norm(40, |v| &a * v, |v| a.ad_mul(v));
        assert!((power - exact).abs() < 1e-8 * exact, "{power} vs {exact}");
    }
}
