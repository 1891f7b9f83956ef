//! End-to-end drivers: manufactured solutions, Dirichlet solves, the
//! sound-soft scattering benchmark, convergence studies and the star
//! identity check.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::discretization::{ScalingMode, Space};
use crate::error::{Error, Result};
use crate::formulations::{
    build_system, build_system_with_rhs, certify, representation, sound_soft_rhs, Certificate, Certification,
    DirichletData, Equation, Formulation, GalerkinSystem, Representation, Style, Variant,
};
use crate::geometry::{Mesh, Panel, Point};
use crate::kernels::bessel::{bessel_j_seq, bessel_y_seq};
use crate::kernels::{Helmholtz, Kernel, Laplace};
use crate::operators::{Assembler, Op, QuadratureSettings};
use crate::solver::{fov_diagnostics, precondition_solve, GmresReport};
use crate::vector_field::{FieldKind, Regime, VectorField};
use crate::Scalar;
use nalgebra::ComplexField as _;

/// Smallest admissible source-to-boundary distance relative to `diam(Γ)`.
pub const MIN_SOURCE_SEPARATION: f64 = 0.1;

/// Planar Laplace kernel with log scale `a` (default `2·diam(Γ)`); exterior
/// problems need `a > diam(Γ)`. In 3-d the scale is ignored.
pub fn laplace_kernel(mesh: &Mesh, regime: Regime, a: Option<f64>) -> Result<Laplace> {
    let diam = mesh.diameter();
    let a = a.unwrap_or(2.0 * diam);
    if mesh.dim() == 2 && regime == Regime::Exterior && a <= diam {
        return Err(Error::Config(format!("exterior planar problems need a > diam(Γ) = {diam}, got a = {a}")));
    }
    Laplace::with_scale(mesh.dim(), a)
}

/// A sum of point sources `u(x) = Σ w_j Φ(x, y_j)`, an exact solution of
/// the homogeneous equation away from the sources.
#[derive(Clone, Debug)]
pub struct ManufacturedSolution<K: Kernel> {
    pub kernel: K,
    pub sources: Vec<(Point, f64)>,
}

impl<K: Kernel> ManufacturedSolution<K> {
    pub fn new(kernel: K, sources: Vec<(Point, f64)>) -> Self {
        ManufacturedSolution { kernel, sources }
    }

    pub fn point_source(kernel: K, y0: Point) -> Self {
        Self::new(kernel, vec![(y0, 1.0)])
    }

    /// Sources placed for the Dirichlet problem in `regime`: outside the
    /// domain for the interior problem, inside for the exterior one. The
    /// planar Laplace exterior problem gets a source pair of opposite
    /// strengths so that `u` vanishes at infinity.
    pub fn for_problem(kernel: K, mesh: &Mesh, regime: Regime) -> Self {
        let ex = Point::x();
        match regime {
            Regime::Interior => {
                let (lo, hi) = mesh.bounding_box();
                let c = 0.5 * (lo + hi);
                let r = mesh.vertices().iter().map(|v| (v - c).norm()).fold(0.0, f64::max);
                Self::point_source(kernel, c + 2.0 * r * ex)
            }
            Regime::Exterior => {
                let p = mesh.interior_point();
                let rho = mesh.distance_to(&p);
                if mesh.dim() == 2 && kernel.wavenumber() == 0.0 {
                    Self::new(kernel, vec![(p + 0.5 * rho * ex, 1.0), (p - 0.5 * rho * ex, -1.0)])
                } else {
                    Self::point_source(kernel, p)
                }
            }
        }
    }

    /// Checks that every source lies in the complement of the solution
    /// domain, at least `MIN_SOURCE_SEPARATION·diam(Γ)` away from `Γ`.
    pub fn validate(&self, mesh: &Mesh, regime: Regime) -> Result<()> {
        let min = MIN_SOURCE_SEPARATION * mesh.diameter();
        for (y, _) in &self.sources {
            let inside = mesh.contains(y);
            if inside != (regime == Regime::Exterior) {
                let side = if inside { "inside" } else { "outside" };
                return Err(Error::Config(format!("source {y:?} lies {side} the boundary, which is wrong for the {regime} problem")));
            }
            let dist = mesh.distance_to(y);
            if dist < min {
                return Err(Error::Config(format!("source {y:?} is {dist:.3e} from the boundary (minimum {min:.3e})")));
            }
        }
        Ok(())
    }

    pub fn value(&self, x: &Point) -> K::Value {
        self.sources
            .iter()
            .fold(K::Value::ZERO, |acc, (y, w)| acc + self.kernel.radial((x - y).norm()).0.scale(*w))
    }

    /// `∇u(x)`.
    pub fn gradient(&self, x: &Point) -> [K::Value; 3] {
        let mut g = [K::Value::ZERO; 3];
        for (y, w) in &self.sources {
            let d = x - y;
            let f = self.kernel.radial(d.norm()).1.scale(-w);
            for c in 0..3 {
                g[c] += f.scale(d[c]);
            }
        }
        g
    }

    /// `∂_n u = ∇u·n`.
    pub fn normal_derivative(&self, x: &Point, normal: &Point) -> K::Value {
        let g = self.gradient(x);
        g[0].scale(normal.x) + g[1].scale(normal.y) + g[2].scale(normal.z)
    }

    /// Dirichlet data with gradient, as needed by every formulation.
    pub fn data(&self) -> DirichletData<'_, K::Value> {
        DirichletData::new(move |x| self.value(x)).with_gradient(move |x| self.gradient(x))
    }
}

/// `count` deterministic probe points in the solution domain. Exterior
/// probes lie on the sphere of radius `max(1.5·diam, R + diam/2)` about the
/// bounding-box centre (`R` the vertex radius); interior probes lie at half
/// the inradius around the deepest interior point.
pub fn probe_points(mesh: &Mesh, regime: Regime, count: usize) -> Vec<Point> {
    let d = mesh.dim();
    let dirs: Vec<Point> = (0..count)
        .map(|k| {
            if d == 2 {
                let t = 2.0 * PI * k as f64 / count as f64 + 0.1;
                Point::new(t.cos(), t.sin(), 0.0)
            } else {
                let z = 1.0 - (2 * k + 1) as f64 / count as f64;
                let r = (1.0 - z * z).sqrt();
                let t = k as f64 * PI * (3.0 - 5f64.sqrt());
                Point::new(r * t.cos(), r * t.sin(), z)
            }
        })
        .collect();
    match regime {
        Regime::Interior => {
            let p = mesh.interior_point();
            let rho = mesh.distance_to(&p);
            dirs.iter().map(|v| p + 0.5 * rho * v).collect()
        }
        Regime::Exterior => {
            let (lo, hi) = mesh.bounding_box();
            let c = 0.5 * (lo + hi);
            let r = mesh.vertices().iter().map(|v| (v - c).norm()).fold(0.0, f64::max);
            let diam = mesh.diameter();
            let radius = (1.5 * diam).max(r + 0.5 * diam);
            dirs.iter().map(|v| c + radius * v).collect()
        }
    }
}

/// Incident plane wave `u^I(x) = exp(ik d·x)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneWave {
    pub k: f64,
    pub direction: Point,
}

impl PlaneWave {
    pub fn new(k: f64, direction: Point) -> Result<Self> {
        let norm = direction.norm();
        if !(k > 0.0) || !(norm > 0.0) {
            return Err(Error::Config(format!("plane wave needs k > 0 and a nonzero direction, got k = {k}")));
        }
        Ok(PlaneWave { k, direction: direction / norm })
    }

    pub fn value(&self, x: &Point) -> Complex64 {
        Complex64::from_polar(1.0, self.k * self.direction.dot(x))
    }

    pub fn gradient(&self, x: &Point) -> [Complex64; 3] {
        let f = Complex64::new(0.0, self.k) * self.value(x);
        [f * self.direction.x, f * self.direction.y, f * self.direction.z]
    }

    pub fn data(&self) -> DirichletData<'_, Complex64> {
        DirichletData::new(move |x| self.value(x)).with_gradient(move |x| self.gradient(x))
    }
}

/// Normal derivative of the total field of a plane wave scattered by a
/// sound-soft disc of radius `radius`, at polar angle `theta` measured from
/// the incidence direction:
/// `∂_r u = -(2i/πR) Σ_n ε_n iⁿ cos(nθ) / H_n(kR)`.
pub fn disc_scattering_neumann(k: f64, radius: f64, theta: f64) -> Complex64 {
    let x = k * radius;
    let nmax = x.ceil() as usize + 40;
    let j = bessel_j_seq(nmax, x);
    let y = bessel_y_seq(nmax, x);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut i_n = Complex64::new(1.0, 0.0);
    for n in 0..=nmax {
        let h = Complex64::new(j[n], y[n]);
        let eps = if n == 0 { 1.0 } else { 2.0 };
        let term = i_n * (eps * (n as f64 * theta).cos()) / h;
        sum += term;
        if n > x as usize + 5 && term.norm() < 1e-17 * sum.norm() {
            break;
        }
        i_n *= Complex64::i();
    }
    Complex64::new(0.0, -2.0 / (PI * radius)) * sum
}

/// Solver settings shared by all drivers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub scaling: ScalingMode,
    /// Fail when a certified run violates `‖r_m‖/‖r₀‖ ≤ 12 γ_β^m`.
    pub check_elman_bound: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { tol: 1e-8, max_iter: 1000, scaling: ScalingMode::Area, check_elman_bound: false }
    }
}

/// A solved Galerkin system with its certificate.
#[derive(Clone, Debug)]
pub struct DirichletSolution<T: Scalar> {
    pub system: GalerkinSystem<T>,
    pub report: GmresReport<T>,
    pub certification: Certification,
    pub warnings: Vec<String>,
}

impl<T: Scalar> DirichletSolution<T> {
    /// Coefficients of the boundary unknown.
    pub fn coefficients(&self) -> &DVector<T> {
        &self.report.solution
    }

    /// Field evaluator in the solution domain; direct formulations need the
    /// Dirichlet data for Green's representation.
    pub fn field<'a, 'm, K: Kernel<Value = T> + Clone>(
        &'a self,
        kernel: K,
        space: Space<'m>,
        data: Option<&DirichletData<T>>,
    ) -> Result<Representation<'a, 'm, K>> {
        representation(&self.system, kernel, space, &self.report.solution, data)
    }
}

/// Certifies and solves an assembled system with scaled GMRES.
pub fn solve_system<T: Scalar>(system: GalerkinSystem<T>, space: &Space, options: &SolveOptions) -> Result<DirichletSolution<T>> {
    let certification = certify(&system, space);
    let mut warnings = Vec::new();
    if let Certification::Uncertified { reason } = &certification {
        warnings.push(format!("formulation is not certified coercive: {reason}"));
    }
    let report = precondition_solve(&system, options.tol, options.max_iter)?;
    if !report.converged {
        return Err(Error::NotConverged { iterations: report.iterations, residual: report.achieved(), tol: options.tol });
    }
    if options.check_elman_bound {
        if let Some(cert) = certification.certificate() {
            for (iteration, &residual) in report.residuals.iter().enumerate() {
                let bound = cert.residual_bound(iteration);
                if residual > bound * (1.0 + 1e-10) + 1e-14 {
                    return Err(Error::ElmanBoundViolated { iteration, residual, bound });
                }
            }
        }
    }
    Ok(DirichletSolution { system, report, certification, warnings })
}

/// Assembles and solves the Dirichlet problem with data `data`.
pub fn solve_dirichlet<K: Kernel>(
    form: &Formulation,
    asm: &Assembler<K>,
    space: &Space,
    data: &DirichletData<K::Value>,
    options: &SolveOptions,
) -> Result<DirichletSolution<K::Value>> {
    let system = build_system(form, asm, space, data, options.scaling)?;
    solve_system(system, space, options)
}

/// Solves for the Neumann trace of the total field of sound-soft scattering.
pub fn solve_sound_soft(
    form: &Formulation,
    asm: &Assembler<Helmholtz>,
    space: &Space,
    wave: &PlaneWave,
    options: &SolveOptions,
) -> Result<DirichletSolution<Complex64>> {
    if (wave.k - form.k).abs() > 1e-14 * form.k {
        return Err(Error::Config(format!("plane wave wavenumber {} differs from formulation wavenumber {}", wave.k, form.k)));
    }
    let rhs = sound_soft_rhs(form, space, &wave.data())?;
    let system = build_system_with_rhs(form, asm, space, rhs, options.scaling)?;
    solve_system(system, space, options)
}

/// `‖u_h - f‖_{L²(Γ)}` by element quadrature.
pub fn boundary_error<T: Scalar>(space: &Space, coeffs: &DVector<T>, exact: impl Fn(&Point, &Panel) -> T) -> f64 {
    space.l2_error(coeffs, exact)
}

/// Radius of `mesh` about `center` if all vertices are equidistant from it.
fn sphere_radius(mesh: &Mesh, center: &Point) -> Option<f64> {
    let r: Vec<f64> = mesh.vertices().iter().map(|v| (v - center).norm()).collect();
    let max = r.iter().copied().fold(0.0, f64::max);
    let min = r.iter().copied().fold(f64::INFINITY, f64::min);
    (max - min <= 1e-9 * max).then_some(max)
}

/// Factor `f` with exact indirect density `φ = f·g`, available when the
/// operator reduces to `(R/2)I` (then `f = 2σ/R`): the 2-d star variant and
/// the 3-d general variant with `α = σ/2`, for `Z = x - x₀` on a circle or
/// sphere of radius `R` centred at `x₀`.
pub fn exact_density_factor(form: &Formulation, mesh: &Mesh) -> Option<f64> {
    if form.equation != Equation::Laplace || form.style != Style::Indirect {
        return None;
    }
    let FieldKind::Star { center } = form.field.kind() else {
        return None;
    };
    let s = form.sign();
    let reduces = match (mesh.dim(), form.variant) {
        (2, Variant::TwodStar) => true,
        (3, Variant::General) => (form.couplings(mesh).alpha - 0.5 * s).abs() < 1e-14,
        _ => false,
    };
    if !reduces {
        return None;
    }
    sphere_radius(mesh, center).map(|r| 2.0 * s / r)
}

/// What the error column of a study measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorMeasure {
    /// `L²(Γ)` error of the direct unknown against the exact Neumann trace.
    NeumannTrace,
    /// `L²(Γ)` error of the indirect density against its exact value.
    Density,
    /// Largest field error at the probe points (indirect formulations
    /// without a known density).
    Field,
    /// `L²(Γ)` error of the scattering Neumann trace against the series.
    ScatteringSeries,
}

impl fmt::Display for ErrorMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorMeasure::NeumannTrace => "neumann_trace_l2",
            ErrorMeasure::Density => "density_l2",
            ErrorMeasure::Field => "probe_field_max",
            ErrorMeasure::ScatteringSeries => "scattering_series_l2",
        })
    }
}

/// One refinement level of an experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct StudyRow {
    pub level: usize,
    /// Number of unknowns `M_N`.
    pub dofs: usize,
    pub h: f64,
    pub err_l2: f64,
    /// `err_l2` divided by the norm of the exact quantity.
    pub err_rel: f64,
    /// `log₂(e_{l-1}/e_l)`; absent on the first level.
    pub order: Option<f64>,
    pub gmres_iters: usize,
    pub residuals: Vec<f64>,
    pub cond2: Option<f64>,
    pub lmin_sym: Option<f64>,
    pub certificate: Option<Certificate>,
    pub elman_ok: Option<bool>,
}

/// Rows of a refinement experiment, ordered by level.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub measure: ErrorMeasure,
    pub rows: Vec<StudyRow>,
    /// Reason for the missing certificate, if any.
    pub uncertified: Option<String>,
    pub warnings: Vec<String>,
}

impl ExperimentReport {
    pub fn errors(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.err_l2).collect()
    }

    pub fn iterations(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.gmres_iters).collect()
    }
}

/// Settings of a refinement experiment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StudySettings {
    /// Number of meshes: the initial one and `levels - 1` refinements.
    pub levels: usize,
    pub degree: usize,
    pub quadrature: Option<QuadratureSettings>,
    pub solve: SolveOptions,
    /// Compute `cond₂` and `λ_min` of the scaled matrix (dense SVD).
    pub diagnostics: bool,
    pub probes: usize,
}

impl Default for StudySettings {
    fn default() -> Self {
        StudySettings { levels: 3, degree: 0, quadrature: None, solve: SolveOptions::default(), diagnostics: true, probes: 16 }
    }
}

/// Smallest number of levels of a refinement study.
pub const MIN_STUDY_LEVELS: usize = 3;

fn require_levels(settings: &StudySettings, min: usize) -> Result<()> {
    if settings.levels < min {
        return Err(Error::Config(format!("a refinement study needs at least {min} levels, got {}", settings.levels)));
    }
    Ok(())
}

/// Drives `levels` refinements; `solve` returns the solution and the
/// absolute and relative errors on one mesh.
fn run_levels<T: Scalar>(
    mesh0: &Mesh,
    settings: &StudySettings,
    measure: ErrorMeasure,
    mut solve: impl FnMut(&Mesh, &Space) -> Result<(DirichletSolution<T>, f64, f64)>,
) -> Result<ExperimentReport> {
    let mut report = ExperimentReport { measure, rows: Vec::new(), uncertified: None, warnings: Vec::new() };
    let mut mesh = mesh0.clone();
    for level in 0..settings.levels {
        if level > 0 {
            mesh = mesh.refine();
        }
        let space = Space::new(&mesh, settings.degree)?;
        let (sol, err_l2, err_rel) = solve(&mesh, &space)?;
        let (cond2, lmin_sym) = if settings.diagnostics {
            let fov = fov_diagnostics(&sol.system.scaled().0);
            (Some(fov.cond2()), Some(fov.lambda_min_sym))
        } else {
            (None, None)
        };
        let certificate = sol.certification.certificate().copied();
        if let Certification::Uncertified { reason } = &sol.certification {
            report.uncertified.get_or_insert_with(|| reason.clone());
        }
        for w in &sol.warnings {
            if !report.warnings.contains(w) {
                report.warnings.push(w.clone());
            }
        }
        let order = report.rows.last().map(|prev: &StudyRow| (prev.err_l2 / err_l2).log2());
        report.rows.push(StudyRow {
            level,
            dofs: space.dim(),
            h: mesh.h_max(),
            err_l2,
            err_rel,
            order,
            gmres_iters: sol.report.iterations,
            elman_ok: certificate.as_ref().map(|c| sol.report.satisfies_elman_bound(c)),
            residuals: sol.report.residuals,
            cond2,
            lmin_sym,
            certificate,
        });
    }
    Ok(report)
}

/// Refinement study for a manufactured Dirichlet problem.
///
/// The error column is the `L²(Γ)` error of the unknown: the Neumann trace
/// for direct formulations, the density for indirect formulations where it
/// is known in closed form (see [`exact_density_factor`]), and otherwise the
/// largest relative field error at [`probe_points`].
pub fn convergence_study<K: Kernel + Clone>(
    form: &Formulation,
    mesh0: &Mesh,
    kernel: K,
    manufactured: &ManufacturedSolution<K>,
    settings: &StudySettings,
) -> Result<ExperimentReport> {
    require_levels(settings, MIN_STUDY_LEVELS)?;
    manufactured_levels(form, mesh0, kernel, manufactured, settings)
}

/// A single solve of a manufactured problem on `mesh`, reported as a
/// one-row experiment with the same error measure as [`convergence_study`].
pub fn manufactured_solve<K: Kernel + Clone>(
    form: &Formulation,
    mesh: &Mesh,
    kernel: K,
    manufactured: &ManufacturedSolution<K>,
    settings: &StudySettings,
) -> Result<ExperimentReport> {
    manufactured_levels(form, mesh, kernel, manufactured, &StudySettings { levels: 1, ..*settings })
}

fn manufactured_levels<K: Kernel + Clone>(
    form: &Formulation,
    mesh0: &Mesh,
    kernel: K,
    manufactured: &ManufacturedSolution<K>,
    settings: &StudySettings,
) -> Result<ExperimentReport> {
    form.validate(mesh0)?;
    manufactured.validate(mesh0, form.regime)?;
    let density = exact_density_factor(form, mesh0);
    let measure = match (form.style, density) {
        (Style::Direct, _) => ErrorMeasure::NeumannTrace,
        (Style::Indirect, Some(_)) => ErrorMeasure::Density,
        (Style::Indirect, None) => ErrorMeasure::Field,
    };
    let probes = probe_points(mesh0, form.regime, settings.probes);
    let exact_field: Vec<K::Value> = probes.iter().map(|x| manufactured.value(x)).collect();
    let quad = settings.quadrature.unwrap_or_else(|| QuadratureSettings::default_for(mesh0.dim()));
    let data = manufactured.data();
    run_levels(mesh0, settings, measure, |mesh, space| {
        let asm = Assembler::new(kernel.clone(), mesh, quad)?;
        let sol = solve_dirichlet(form, &asm, space, &data, &settings.solve)?;
        let (err, norm) = match measure {
            ErrorMeasure::NeumannTrace => {
                let exact = |x: &Point, p: &Panel| manufactured.normal_derivative(x, &p.normal);
                (boundary_error(space, sol.coefficients(), exact), space.l2_norm(exact))
            }
            ErrorMeasure::Density => {
                let f = density.expect("density measure");
                let exact = |x: &Point, _: &Panel| manufactured.value(x).scale(f);
                (boundary_error(space, sol.coefficients(), exact), space.l2_norm(exact))
            }
            _ => {
                let field = sol.field(kernel.clone(), *space, Some(&data))?;
                let values = field.eval(&probes)?;
                let err = values.iter().zip(&exact_field).map(|(a, b)| (*a - *b).modulus()).fold(0.0, f64::max);
                let norm = exact_field.iter().map(|v| v.modulus()).fold(0.0, f64::max);
                (err / norm, 1.0)
            }
        };
        Ok((sol, err, err / norm))
    })
}

/// Refinement study of plane-wave scattering by a sound-soft disc, with the
/// error of the total-field Neumann trace measured against the series
/// solution. `mesh0` must be a polygon inscribed in a circle centred at the
/// origin.
pub fn scattering_study(form: &Formulation, mesh0: &Mesh, wave: &PlaneWave, settings: &StudySettings) -> Result<ExperimentReport> {
    require_levels(settings, 1)?;
    form.validate(mesh0)?;
    if mesh0.dim() != 2 {
        return Err(Error::Config("the scattering benchmark is planar".into()));
    }
    let radius = sphere_radius(mesh0, &Point::zeros())
        .ok_or_else(|| Error::Config("the scattering benchmark needs a polygon inscribed in a circle about the origin".into()))?;
    let kernel = Helmholtz::new(2, form.k)?;
    let quad = settings.quadrature.unwrap_or_else(|| QuadratureSettings::default_for(2));
    let d = wave.direction;
    let exact = move |x: &Point, _: &Panel| {
        let theta = (d.x * x.y - d.y * x.x).atan2(d.dot(x));
        disc_scattering_neumann(wave.k, radius, theta)
    };
    run_levels(mesh0, settings, ErrorMeasure::ScatteringSeries, |mesh, space| {
        let asm = Assembler::new(kernel, mesh, quad)?;
        let sol = solve_sound_soft(form, &asm, space, wave, &settings.solve)?;
        let err = boundary_error(space, sol.coefficients(), exact);
        Ok((sol, err, err / space.l2_norm(exact)))
    })
}

/// Relative residual of the Galerkin star identity for `Z = x - x₀`:
/// `‖G(K_Z) + G(K_Z)ᵀ + G(S)‖_F / ‖G(S)‖_F` in 3-d and
/// `‖G(K_Z) + G(K_Z)ᵀ + (|Γ|/2π)G(P)‖_F / ‖(|Γ|/2π)G(P)‖_F` in 2-d, on p0.
pub fn star_identity_residual(mesh: &Mesh, center: Point, quad: Option<QuadratureSettings>) -> Result<f64> {
    let space = Space::new(mesh, 0)?;
    let quad = quad.unwrap_or_else(|| QuadratureSettings::default_for(mesh.dim()));
    let asm = Assembler::new(Laplace::new(mesh.dim())?, mesh, quad)?;
    let z = VectorField::star(center);
    let kz = asm.assemble(Op::KZ(&z), &space, &space)?;
    let third = if mesh.dim() == 3 {
        asm.assemble(Op::S, &space, &space)?
    } else {
        let m = space.moments();
        &m * m.transpose() / (2.0 * PI)
    };
    Ok((&kz + kz.transpose() + &third).norm() / third.norm())
}
