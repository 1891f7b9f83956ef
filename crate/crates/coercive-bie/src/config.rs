//! Run configuration: a TOML document with one table per concern
//! (`geometry`, `field`, `formulation`, `space`, `quad`, `scaling`, `solver`,
//! `experiment`), usually written with dotted keys such as
//! `formulation.regime = "exterior"`.
//!
//! Parsing only checks syntax, key names and types. [`RunConfig::validate`]
//! checks parameter ranges and builds the mesh, field and formulation.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::discretization::ScalingMode;
use crate::error::{Error, Result};
use crate::formulations::{Equation, Eta, Formulation, Style, Variant};
use crate::geometry::{build_circle_polygon, build_icosphere, build_lshape, build_polygon, build_square, Mesh, Point};
use crate::operators::QuadratureSettings;
use crate::problems::{SolveOptions, StudySettings, MIN_STUDY_LEVELS};
use crate::vector_field::{Chart, Regime, VectorField};

/// Built-in geometries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Builtin {
    Polygon,
    Square,
    Lshape,
    CirclePolygon,
    Icosphere,
}

impl Builtin {
    pub const ALL: [Builtin; 5] = [Builtin::Polygon, Builtin::Square, Builtin::Lshape, Builtin::CirclePolygon, Builtin::Icosphere];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Polygon => "polygon",
            Builtin::Square => "square",
            Builtin::Lshape => "lshape",
            Builtin::CirclePolygon => "circle-polygon",
            Builtin::Icosphere => "icosphere",
        }
    }

    /// Accepted `geometry.*` parameters with their defaults.
    pub fn parameters(self) -> &'static [(&'static str, &'static str)] {
        match self {
            Builtin::Polygon => &[("vertices", "required, counterclockwise [[x, y], ...]"), ("n_per_edge", "4")],
            Builtin::Square => &[("center", "[0, 0]"), ("side", "1"), ("n_per_edge", "8")],
            Builtin::Lshape => &[("scale", "1"), ("n_per_edge", "4")],
            Builtin::CirclePolygon => &[("n", "32"), ("radius", "1")],
            Builtin::Icosphere => &[("level", "1"), ("center", "[0, 0, 0]")],
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub builtin: Option<Builtin>,
    /// Mesh file, relative to the configuration file.
    pub mesh: Option<PathBuf>,
    pub vertices: Option<Vec<[f64; 2]>>,
    pub n_per_edge: Option<usize>,
    pub center: Option<Vec<f64>>,
    pub side: Option<f64>,
    pub scale: Option<f64>,
    pub n: Option<usize>,
    pub radius: Option<f64>,
    pub level: Option<usize>,
}

/// Multiplier field kinds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldName {
    #[default]
    Star,
    Normal,
    Partition,
}

impl FieldName {
    pub const ALL: [FieldName; 3] = [FieldName::Star, FieldName::Normal, FieldName::Partition];

    pub fn name(self) -> &'static str {
        match self {
            FieldName::Star => "star",
            FieldName::Normal => "normal",
            FieldName::Partition => "partition",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            FieldName::Star => "Z(x) = x - center (field.center, default origin)",
            FieldName::Normal => "Z = n, the classical second-kind equations",
            FieldName::Partition => "partition of unity over field.charts with cutoff parameter field.mu",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartConfig {
    pub center: Vec<f64>,
    pub radius: f64,
    pub direction: Vec<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    #[serde(default)]
    pub kind: FieldName,
    pub center: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub charts: Vec<ChartConfig>,
    pub mu: Option<f64>,
    /// Replaces the field's coupling α; same as `formulation.alpha`.
    pub alpha_override: Option<f64>,
}

/// Helmholtz coupling: `"star_combined"`, a real number, or `[re, im]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EtaConfig {
    Named(String),
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormulationConfig {
    #[serde(default = "default_equation")]
    pub equation: Equation,
    #[serde(default = "default_regime")]
    pub regime: Regime,
    #[serde(default = "default_style")]
    pub style: Style,
    #[serde(default = "default_variant")]
    pub variant: Variant,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub eta: Option<EtaConfig>,
    /// Imaginary part `α` of the star-combined coupling; default `(d-1)/2`.
    pub eta_alpha: Option<f64>,
    pub k: Option<f64>,
    /// Scale `a` of the planar Laplace kernel `log(a/r)/2π`.
    pub log_scale: Option<f64>,
}

fn default_equation() -> Equation {
    Equation::Laplace
}

fn default_regime() -> Regime {
    Regime::Interior
}

fn default_style() -> Style {
    Style::Direct
}

fn default_variant() -> Variant {
    Variant::General
}

impl Default for FormulationConfig {
    fn default() -> Self {
        FormulationConfig {
            equation: default_equation(),
            regime: default_regime(),
            style: default_style(),
            variant: default_variant(),
            alpha: None,
            beta: None,
            eta: None,
            eta_alpha: None,
            k: None,
            log_scale: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceConfig {
    #[serde(default)]
    pub p: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadConfig {
    pub regular_order: Option<usize>,
    pub singular_order: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingConfig {
    #[serde(default = "default_scaling")]
    pub mode: ScalingMode,
}

fn default_scaling() -> ScalingMode {
    ScalingMode::Area
}

impl Default for ScalingConfig {
    fn default() -> Self {
        ScalingConfig { mode: default_scaling() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default)]
    pub check_elman_bound: bool,
}

fn default_tol() -> f64 {
    SolveOptions::default().tol
}

fn default_max_iter() -> usize {
    SolveOptions::default().max_iter
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { tol: default_tol(), max_iter: default_max_iter(), check_elman_bound: false }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// One solve on the configured mesh.
    Solve,
    /// Refinement study with errors and orders.
    #[default]
    Convergence,
    /// Refinement study with conditioning diagnostics.
    Conditioning,
    /// Residual of the star identity per refinement level.
    IdentityChecks,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Solve => "solve",
            ExperimentKind::Convergence => "convergence",
            ExperimentKind::Conditioning => "conditioning",
            ExperimentKind::IdentityChecks => "identity_checks",
        }
    }
}

/// Boundary data of the solved problem.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataKind {
    /// Manufactured point-source solution.
    #[default]
    PointSource,
    /// Sound-soft scattering of a plane wave by a disc (Helmholtz).
    PlaneWave,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub kind: ExperimentKind,
    #[serde(default = "default_levels")]
    pub levels: usize,
    /// CSV path, relative to the output directory.
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub data: DataKind,
    /// Propagation direction of the plane wave.
    pub direction: Option<Vec<f64>>,
    #[serde(default = "default_probes")]
    pub probes: usize,
    /// Compute `cond₂` and `λ_min` (dense factorisations) in convergence runs.
    #[serde(default = "default_true")]
    pub diagnostics: bool,
}

fn default_levels() -> usize {
    3
}

fn default_probes() -> usize {
    16
}

fn default_true() -> bool {
    true
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            kind: ExperimentKind::default(),
            levels: default_levels(),
            output: None,
            data: DataKind::default(),
            direction: None,
            probes: default_probes(),
            diagnostics: true,
        }
    }
}

/// A complete run description.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub geometry: GeometryConfig,
    #[serde(default)]
    pub field: FieldConfig,
    #[serde(default)]
    pub formulation: FormulationConfig,
    #[serde(default)]
    pub space: SpaceConfig,
    #[serde(default)]
    pub quad: QuadConfig,
    #[serde(default)]
    pub scaling: ScalingConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub experiment: ExperimentConfig,
}

/// Everything a run needs, built from a validated configuration.
#[derive(Clone, Debug)]
pub struct RunPlan {
    pub mesh: Mesh,
    pub formulation: Formulation,
    pub quadrature: QuadratureSettings,
    pub settings: StudySettings,
    pub kind: ExperimentKind,
    pub data: DataKind,
    pub direction: Point,
    pub log_scale: Option<f64>,
    /// Star centre (for identity checks).
    pub center: Point,
}

fn point(v: &[f64], what: &str) -> Result<Point> {
    match v {
        [x, y] => Ok(Point::new(*x, *y, 0.0)),
        [x, y, z] => Ok(Point::new(*x, *y, *z)),
        _ => Err(Error::Config(format!("{what} must have 2 or 3 components, got {}", v.len()))),
    }
}

fn positive(value: f64, what: &str) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Config(format!("{what} must be positive, got {value}")))
    }
}

impl RunConfig {
    /// Parses a TOML document. Errors are syntax, key or type errors.
    pub fn parse(text: &str) -> std::result::Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    /// The configuration as TOML.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serialises")
    }

    /// Fills in every default that does not depend on the mesh, so that the
    /// result describes the run completely.
    pub fn resolved(&self, dim: usize) -> RunConfig {
        let mut c = self.clone();
        let g = &mut c.geometry;
        match g.builtin {
            Some(Builtin::Polygon) => {
                g.n_per_edge.get_or_insert(4);
            }
            Some(Builtin::Square) => {
                g.center.get_or_insert(vec![0.0, 0.0]);
                g.side.get_or_insert(1.0);
                g.n_per_edge.get_or_insert(8);
            }
            Some(Builtin::Lshape) => {
                g.scale.get_or_insert(1.0);
                g.n_per_edge.get_or_insert(4);
            }
            Some(Builtin::CirclePolygon) => {
                g.n.get_or_insert(32);
                g.radius.get_or_insert(1.0);
            }
            Some(Builtin::Icosphere) => {
                g.level.get_or_insert(1);
                g.center.get_or_insert(vec![0.0, 0.0, 0.0]);
            }
            None => {}
        }
        if c.field.kind == FieldName::Star {
            c.field.center.get_or_insert(vec![0.0; dim]);
        }
        if c.field.kind == FieldName::Partition {
            c.field.mu.get_or_insert(0.5);
        }
        let q = QuadratureSettings::default_for(dim);
        c.quad.regular_order.get_or_insert(q.regular_order);
        c.quad.singular_order.get_or_insert(q.singular_order);
        if c.formulation.equation == Equation::Helmholtz {
            let eta = c.formulation.eta.get_or_insert(EtaConfig::Named("star_combined".into()));
            if matches!(eta, EtaConfig::Named(_)) {
                c.formulation.eta_alpha.get_or_insert((dim as f64 - 1.0) / 2.0);
            }
        }
        if c.experiment.data == DataKind::PlaneWave {
            c.experiment.direction.get_or_insert(vec![1.0, 0.0]);
        }
        c.experiment.output.get_or_insert_with(|| PathBuf::from(format!("{}.csv", c.experiment.kind.name())));
        c
    }

    /// Builds the mesh; relative mesh paths are taken relative to `base_dir`.
    pub fn build_mesh(&self, base_dir: &Path) -> Result<Mesh> {
        let g = &self.geometry;
        let (builtin, file) = match (g.builtin, &g.mesh) {
            (Some(b), None) => (b, None),
            (None, Some(path)) => (Builtin::Polygon, Some(path)),
            (Some(_), Some(_)) => return Err(Error::Config("set either geometry.builtin or geometry.mesh, not both".into())),
            (None, None) => return Err(Error::Config("geometry needs builtin or mesh".into())),
        };
        let given: Vec<&str> = [
            ("vertices", g.vertices.is_some()),
            ("n_per_edge", g.n_per_edge.is_some()),
            ("center", g.center.is_some()),
            ("side", g.side.is_some()),
            ("scale", g.scale.is_some()),
            ("n", g.n.is_some()),
            ("radius", g.radius.is_some()),
            ("level", g.level.is_some()),
        ]
        .into_iter()
        .filter_map(|(k, set)| set.then_some(k))
        .collect();
        let accepted: &[(&str, &str)] = if file.is_some() { &[] } else { builtin.parameters() };
        if let Some(extra) = given.iter().find(|k| !accepted.iter().any(|(a, _)| a == *k)) {
            let owner = if file.is_some() { "a mesh file".to_string() } else { builtin.name().to_string() };
            return Err(Error::Config(format!("geometry.{extra} is not a parameter of {owner}")));
        }
        if let Some(path) = file {
            return Mesh::load(&base_dir.join(path));
        }
        let r = self.resolved(2).geometry;
        let center2 = |c: &Option<Vec<f64>>| -> Result<[f64; 2]> {
            match c.as_deref() {
                Some([x, y]) => Ok([*x, *y]),
                Some(v) => Err(Error::Config(format!("geometry.center must have 2 components, got {}", v.len()))),
                None => Ok([0.0, 0.0]),
            }
        };
        match builtin {
            Builtin::Polygon => {
                let v = r.vertices.as_ref().ok_or_else(|| Error::Config("polygon needs geometry.vertices".into()))?;
                build_polygon(v, r.n_per_edge.unwrap_or(4))
            }
            Builtin::Square => build_square(center2(&r.center)?, positive(r.side.unwrap_or(1.0), "geometry.side")?, r.n_per_edge.unwrap_or(8)),
            Builtin::Lshape => build_lshape(positive(r.scale.unwrap_or(1.0), "geometry.scale")?, r.n_per_edge.unwrap_or(4)),
            Builtin::CirclePolygon => build_circle_polygon(r.n.unwrap_or(32), positive(r.radius.unwrap_or(1.0), "geometry.radius")?),
            Builtin::Icosphere => {
                let level = g.level.unwrap_or(1);
                if level > 5 {
                    return Err(Error::Config(format!("icosphere level {level} is too fine for dense assembly (at most 5)")));
                }
                let mesh = build_icosphere(level);
                match &g.center {
                    Some(c) => Ok(mesh.translated(point(c, "geometry.center")?)),
                    None => Ok(mesh),
                }
            }
        }
    }

    /// Builds the multiplier field on `mesh`.
    pub fn build_field(&self, mesh: &Mesh) -> Result<VectorField> {
        let f = &self.field;
        let unused = |what: &str| Err(Error::Config(format!("field.{what} is not used by the {} field", f.kind.name())));
        match f.kind {
            FieldName::Star => {
                if !f.charts.is_empty() {
                    return unused("charts");
                }
                if f.mu.is_some() {
                    return unused("mu");
                }
                let center = f.center.as_deref().map(|c| point(c, "field.center")).transpose()?.unwrap_or_else(Point::zeros);
                Ok(VectorField::star(center))
            }
            FieldName::Normal => {
                if f.center.is_some() {
                    return unused("center");
                }
                if !f.charts.is_empty() {
                    return unused("charts");
                }
                if f.mu.is_some() {
                    return unused("mu");
                }
                Ok(VectorField::normal())
            }
            FieldName::Partition => {
                if f.center.is_some() {
                    return unused("center");
                }
                let charts = f
                    .charts
                    .iter()
                    .map(|c| {
                        Ok(Chart {
                            center: point(&c.center, "chart center")?,
                            radius: c.radius,
                            direction: point(&c.direction, "chart direction")?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                VectorField::partition(charts, f.mu.unwrap_or(0.5), mesh)
            }
        }
    }

    /// Builds the formulation for `field` on a mesh of dimension `dim`.
    pub fn build_formulation(&self, field: VectorField, dim: usize) -> Result<Formulation> {
        let c = &self.formulation;
        let mut form = match c.equation {
            Equation::Laplace => {
                for (key, set) in [("eta", c.eta.is_some()), ("eta_alpha", c.eta_alpha.is_some()), ("k", c.k.is_some())] {
                    if set {
                        return Err(Error::Config(format!("formulation.{key} only applies to helmholtz")));
                    }
                }
                Formulation::laplace(c.regime, c.style, c.variant, field)
            }
            Equation::Helmholtz => {
                let k = positive(c.k.ok_or_else(|| Error::Config("helmholtz needs formulation.k".into()))?, "formulation.k")?;
                if c.regime != Regime::Exterior {
                    return Err(Error::Config("helmholtz problems are exterior: set formulation.regime = \"exterior\"".into()));
                }
                if c.log_scale.is_some() {
                    return Err(Error::Config("formulation.log_scale only applies to laplace".into()));
                }
                let eta = match self.resolved(dim).formulation.eta.expect("resolved") {
                    EtaConfig::Named(name) if name == "star_combined" => {
                        Eta::StarCombined { alpha: c.eta_alpha.unwrap_or((dim as f64 - 1.0) / 2.0) }
                    }
                    EtaConfig::Named(name) => {
                        return Err(Error::Config(format!("unknown eta {name:?} (expected star_combined, a number or [re, im])")))
                    }
                    EtaConfig::Real(re) => Eta::Constant(Complex64::new(re, 0.0)),
                    EtaConfig::Complex([re, im]) => Eta::Constant(Complex64::new(re, im)),
                };
                if c.eta_alpha.is_some() && !matches!(eta, Eta::StarCombined { .. }) {
                    return Err(Error::Config("formulation.eta_alpha only applies to eta = \"star_combined\"".into()));
                }
                let mut form = Formulation::helmholtz(c.style, field, k, eta);
                form.variant = c.variant;
                form
            }
        };
        if c.alpha.is_some() && self.field.alpha_override.is_some() {
            return Err(Error::Config("set either field.alpha_override or formulation.alpha, not both".into()));
        }
        form.alpha = c.alpha.or(self.field.alpha_override);
        form.beta = c.beta;
        Ok(form)
    }

    /// Checks parameter ranges and builds everything the run needs.
    pub fn validate(&self, base_dir: &Path) -> Result<RunPlan> {
        let mesh = self.build_mesh(base_dir)?;
        let dim = mesh.dim();
        let field = self.build_field(&mesh)?;
        let center = match field.kind() {
            crate::vector_field::FieldKind::Star { center } => *center,
            _ => Point::zeros(),
        };
        let formulation = self.build_formulation(field, dim)?;
        formulation.validate(&mesh)?;
        if self.space.p > 1 {
            return Err(Error::UnsupportedDegree(self.space.p));
        }
        let solver = &self.solver;
        positive(solver.tol, "solver.tol")?;
        if solver.max_iter == 0 {
            return Err(Error::Config("solver.max_iter must be at least 1".into()));
        }
        let r = self.resolved(dim);
        let quadrature = QuadratureSettings {
            regular_order: r.quad.regular_order.expect("resolved"),
            singular_order: r.quad.singular_order.expect("resolved"),
        };
        if quadrature.regular_order == 0 || quadrature.singular_order == 0 {
            return Err(Error::Config("quadrature orders must be at least 1".into()));
        }
        let exp = &self.experiment;
        let levels = match exp.kind {
            ExperimentKind::Solve => 1,
            _ => exp.levels,
        };
        if exp.kind != ExperimentKind::Solve && levels < MIN_STUDY_LEVELS {
            return Err(Error::Config(format!("experiment.levels must be at least {MIN_STUDY_LEVELS}, got {levels}")));
        }
        if exp.probes == 0 {
            return Err(Error::Config("experiment.probes must be at least 1".into()));
        }
        let direction = match &r.experiment.direction {
            Some(d) => point(d, "experiment.direction")?,
            None => Point::x(),
        };
        if exp.direction.is_some() && exp.data != DataKind::PlaneWave {
            return Err(Error::Config("experiment.direction only applies to data = \"plane_wave\"".into()));
        }
        if exp.data == DataKind::PlaneWave && formulation.equation != Equation::Helmholtz {
            return Err(Error::Config("plane-wave data needs equation = \"helmholtz\"".into()));
        }
        if exp.kind == ExperimentKind::IdentityChecks && !matches!(formulation.field.kind(), crate::vector_field::FieldKind::Star { .. }) {
            return Err(Error::Config("identity checks need a star field".into()));
        }
        let log_scale = self.formulation.log_scale;
        if let Some(a) = log_scale {
            if formulation.equation == Equation::Laplace {
                positive(a, "formulation.log_scale")?;
                crate::problems::laplace_kernel(&mesh, formulation.regime, Some(a))?;
            }
        }
        let settings = StudySettings {
            levels,
            degree: self.space.p,
            quadrature: Some(quadrature),
            solve: SolveOptions {
                tol: solver.tol,
                max_iter: solver.max_iter,
                scaling: self.scaling.mode,
                check_elman_bound: solver.check_elman_bound,
            },
            diagnostics: exp.diagnostics || exp.kind == ExperimentKind::Conditioning,
            probes: exp.probes,
        };
        Ok(RunPlan { mesh, formulation, quadrature, settings, kind: exp.kind, data: exp.data, direction, log_scale, center })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dotted_keys_and_defaults() {
        let c = RunConfig::parse(
            "geometry.builtin = \"circle-polygon\"\ngeometry.n = 16\nformulation.variant = \"twod_projected\"\nexperiment.levels = 4\n",
        )
        .unwrap();
        assert_eq!(c.geometry.builtin, Some(Builtin::CirclePolygon));
        assert_eq!(c.formulation.regime, Regime::Interior);
        assert_eq!(c.solver.tol, 1e-8);
        let plan = c.validate(Path::new(".")).unwrap();
        assert_eq!(plan.mesh.n_elements(), 16);
        assert_eq!(plan.settings.levels, 4);
        assert_eq!(plan.quadrature, QuadratureSettings::default_for(2));
    }

    #[test]
    fn unknown_keys_and_values_are_parse_errors() {
        assert!(RunConfig::parse("geometry.builtin = \"square\"\nsolver.tolerance = 1e-6\n").is_err());
        assert!(RunConfig::parse("geometry.builtin = \"torus\"\n").is_err());
        assert!(RunConfig::parse("geometry.builtin = \"square\"\nformulation.variant = \"fancy\"\n").is_err());
    }

    #[test]
    fn ranges_are_validated() {
        let check = |extra: &str| {
            let c = RunConfig::parse(&format!("geometry.builtin = \"circle-polygon\"\n{extra}\n")).unwrap();
            c.validate(Path::new(".")).unwrap_err().to_string()
        };
        assert!(check("space.p = 2").contains("degree 2"));
        assert!(check("solver.tol = 0.0").contains("solver.tol"));
        assert!(check("experiment.levels = 2").contains("at least 3"));
        assert!(check("geometry.level = 2").contains("geometry.level"));
        assert!(check("field.alpha_override = 1\nformulation.alpha = 2").contains("not both"));
        assert!(check("field.kind = \"partition\"\nfield.mu = 1.5\nfield.charts = [{center = [0, 0], radius = 3, direction = [1, 0]}]").contains("mu"));
        assert!(check("formulation.equation = \"helmholtz\"\nformulation.regime = \"exterior\"\nformulation.k = -1.0").contains("formulation.k"));
        assert!(check("formulation.regime = \"exterior\"\nformulation.log_scale = 1.5").contains("diam"));
    }

    #[test]
    fn resolved_config_round_trips() {
        let c = RunConfig::parse("geometry.builtin = \"icosphere\"\nformulation.regime = \"exterior\"\n").unwrap();
        let r = c.resolved(3);
        assert_eq!(r.geometry.level, Some(1));
        assert_eq!(r.quad.singular_order, Some(QuadratureSettings::default_for(3).singular_order));
        assert_eq!(RunConfig::parse(&r.to_toml()).unwrap(), r);
    }
}
