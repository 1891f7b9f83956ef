//! Multiplier fields `Z` on the boundary and their coercivity constants.
//!
//! Three kinds are supported: the star field `Z(x) = x - x₀`, the normal
//! field `Z = n`, and a partition-of-unity field `Z = Σ θ_m Z_m` built from a
//! user-supplied ball cover with the piecewise-linear cutoff
//! `χ(t) = 1` on `[0, μ]`, `(1 - t)/(1 - μ)` on `[μ, 1]`, `0` beyond.

use serde::{Deserialize, Serialize};

use crate::discretization::quadrature::panel_rule;
use crate::error::{Error, Result};
use crate::geometry::{star_radius, Mesh, Point};

/// One ball of the cover with its outward direction.
#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    pub center: Point,
    pub radius: f64,
    /// Unit vector pointing out of the domain on this chart.
    pub direction: Point,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FieldKind {
    Star { center: Point },
    Normal,
    Partition { charts: Vec<Chart>, mu: f64, max_overlap: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Interior,
    Exterior,
}

impl std::str::FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interior" => Ok(Regime::Interior),
            "exterior" => Ok(Regime::Exterior),
            _ => Err(Error::Config(format!("unknown regime {s:?} (expected interior or exterior)"))),
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Interior => "interior",
            Regime::Exterior => "exterior",
        })
    }
}

/// A multiplier field. Evaluation is pure; the normal field needs the panel
/// normal at the evaluation point.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    kind: FieldKind,
}

impl VectorField {
    pub fn star(center: Point) -> Self {
        VectorField { kind: FieldKind::Star { center } }
    }

    pub fn normal() -> Self {
        VectorField { kind: FieldKind::Normal }
    }

    /// Partition-of-unity field. Every quadrature point and vertex of `mesh`
    /// must lie in some shrunken ball `B_{μ a_m}(x_m)`, and `Z·n` must stay
    /// positive there.
    pub fn partition(charts: Vec<Chart>, mu: f64, mesh: &Mesh) -> Result<Self> {
        if !(mu > 0.0 && mu < 1.0) {
            return Err(Error::Field(format!("mu must lie in (0, 1), got {mu}")));
        }
        if charts.is_empty() {
            return Err(Error::Field("partition field needs at least one chart".into()));
        }
        let mut charts = charts;
        for (m, ch) in charts.iter_mut().enumerate() {
            if !(ch.radius > 0.0) {
                return Err(Error::Field(format!("chart {m}: radius must be positive")));
            }
            let len = ch.direction.norm();
            if len == 0.0 {
                return Err(Error::Field(format!("chart {m}: zero direction")));
            }
            ch.direction /= len;
        }
        let mut uncovered = Vec::new();
        let mut max_overlap = 0;
        for x in sample_points(mesh) {
            let covered = charts.iter().any(|c| (x - c.center).norm() <= mu * c.radius);
            if !covered {
                uncovered.push(x);
            }
            let count = charts.iter().filter(|c| (x - c.center).norm() < c.radius).count();
            max_overlap = max_overlap.max(count);
        }
        if !uncovered.is_empty() {
            let list: Vec<String> = uncovered
                .iter()
                .take(8)
                .map(|p| format!("({:.4}, {:.4}, {:.4})", p.x, p.y, p.z))
                .collect();
            return Err(Error::Field(format!(
                "{} boundary points lie outside every shrunken ball, e.g. {}",
                uncovered.len(),
                list.join(", ")
            )));
        }
        let field = VectorField { kind: FieldKind::Partition { charts, mu, max_overlap } };
        let c = field.min_normal_component(mesh);
        if !(c > 0.0) {
            return Err(Error::Field(format!(
                "Z·n is not positive on the boundary (min {c:.4}); check chart directions"
            )));
        }
        Ok(field)
    }

    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    /// `Z(x)`; `normal` is the unit normal of the panel containing `x`.
    #[inline]
    pub fn eval(&self, x: &Point, normal: &Point) -> Point {
        match &self.kind {
            FieldKind::Star { center } => x - center,
            FieldKind::Normal => *normal,
            FieldKind::Partition { charts, mu, .. } => {
                let mut z = Point::zeros();
                for c in charts {
                    let t = (x - c.center).norm() / c.radius;
                    z += cutoff(t, *mu) * c.direction;
                }
                z
            }
        }
    }

    /// Lipschitz constant of `Z` (bound for the partition field); `None` for
    /// the normal field, which is only piecewise constant.
    pub fn lipschitz(&self) -> Option<f64> {
        match &self.kind {
            FieldKind::Star { .. } => Some(1.0),
            FieldKind::Normal => None,
            FieldKind::Partition { charts, mu, max_overlap } => {
                let a = charts.iter().map(|c| c.radius).fold(f64::INFINITY, f64::min);
                Some(*max_overlap as f64 / ((1.0 - mu) * a))
            }
        }
    }

    /// The coupling constant `3 M* ‖χ'‖ / (2a)` attached to a partition field.
    pub fn partition_alpha(&self) -> Option<f64> {
        match &self.kind {
            FieldKind::Partition { charts, mu, max_overlap } => {
                let a = charts.iter().map(|c| c.radius).fold(f64::INFINITY, f64::min);
                Some(3.0 * *max_overlap as f64 / (2.0 * (1.0 - mu) * a))
            }
            _ => None,
        }
    }

    /// Largest number of chart balls containing a boundary point (`M*`).
    pub fn max_overlap(&self) -> Option<usize> {
        match &self.kind {
            FieldKind::Partition { max_overlap, .. } => Some(*max_overlap),
            _ => None,
        }
    }

    /// `min Z·n` over element vertices, centroids and quadrature points.
    pub fn min_normal_component(&self, mesh: &Mesh) -> f64 {
        match &self.kind {
            FieldKind::Star { center } => star_radius(mesh, center),
            FieldKind::Normal => 1.0,
            FieldKind::Partition { .. } => {
                let mut c = f64::INFINITY;
                for p in mesh.panels() {
                    for x in panel_samples(mesh, p) {
                        c = c.min(self.eval(&x, &p.normal).dot(&p.normal));
                    }
                }
                c
            }
        }
    }
}

/// Piecewise-linear cutoff `χ`.
#[inline]
pub fn cutoff(t: f64, mu: f64) -> f64 {
    if t <= mu {
        1.0
    } else if t >= 1.0 {
        0.0
    } else {
        (1.0 - t) / (1.0 - mu)
    }
}

fn panel_samples(mesh: &Mesh, p: &crate::geometry::Panel) -> Vec<Point> {
    let mut pts: Vec<Point> = p.corners[..p.n_corners()].to_vec();
    pts.push(p.centroid);
    for q in panel_rule(mesh.dim(), 16).points {
        pts.push(p.map(q.xi));
    }
    pts
}

fn sample_points(mesh: &Mesh) -> Vec<Point> {
    mesh.panels().iter().flat_map(|p| panel_samples(mesh, p)).collect()
}

/// Constants entering the coercivity theory for a field bound to a mesh.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldConstants {
    /// Lower bound of `Z·n` on the mesh.
    pub c: f64,
    /// Lipschitz constant (exact for the star field, a bound otherwise).
    pub lipschitz: f64,
    /// Smallest coupling constant for which coercivity is guaranteed.
    pub alpha: f64,
    /// Optional bound on the operator norm of the composite operator.
    pub norm_bound: Option<f64>,
}

/// Coercivity constants of `field` on `mesh` for the given regime.
///
/// Star fields use the thresholds `∓(d-2)/2`; other Lipschitz fields use
/// `α ≥ 3 d L_Z / 2`.
pub fn field_constants(field: &VectorField, mesh: &Mesh, regime: Regime) -> Result<FieldConstants> {
    let d = mesh.dim() as f64;
    match field.kind() {
        FieldKind::Normal => Err(Error::NoCoercivityGuarantee),
        FieldKind::Star { .. } => {
            let threshold = (d - 2.0) / 2.0;
            Ok(FieldConstants {
                c: field.min_normal_component(mesh),
                lipschitz: 1.0,
                alpha: match regime {
                    Regime::Interior => -threshold,
                    Regime::Exterior => threshold,
                },
                norm_bound: None,
            })
        }
        FieldKind::Partition { .. } => {
            let l = field.lipschitz().expect("partition fields are Lipschitz");
            Ok(FieldConstants {
                c: field.min_normal_component(mesh),
                lipschitz: l,
                alpha: 1.5 * d * l,
                norm_bound: None,
            })
        }
    }
}
