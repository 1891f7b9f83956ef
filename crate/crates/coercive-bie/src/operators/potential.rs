//! Layer potentials off the boundary and layer operators applied to functions
//! at single points of the boundary.

use nalgebra::DVector;

use super::pairs::{ElementPoint, PairQuadrature, QuadratureSettings};
use crate::discretization::quadrature::gauss_legendre;
use crate::discretization::Space;
use crate::error::{Error, Result};
use crate::geometry::{Panel, Point};
use crate::kernels::Kernel;
use crate::vector_field::VectorField;
use crate::Scalar;
use nalgebra::ComplexField as _;

#[derive(Clone, Copy, Debug)]
pub enum PotentialKind<'a> {
    /// `𝒮φ(x) = ∫ Φ(x, y) φ(y) ds_y`
    Single,
    /// `𝒦_Zφ(x) = ∫ Z(y)·∇_y Φ(x, y) φ(y) ds_y`
    KZ(&'a VectorField),
    /// `𝒟φ(x) = ∫ ∂_{n(y)} Φ(x, y) φ(y) ds_y`
    Double,
}

/// A discrete density together with the potential it generates.
pub struct PotentialField<'a, 'm, K: Kernel> {
    pub kernel: K,
    pub space: Space<'m>,
    pub coeffs: DVector<K::Value>,
    pub kind: PotentialKind<'a>,
    quad: PairQuadrature<'m>,
}

impl<'a, 'm, K: Kernel> PotentialField<'a, 'm, K> {
    pub fn new(kernel: K, space: Space<'m>, coeffs: DVector<K::Value>, kind: PotentialKind<'a>) -> Result<Self> {
        if coeffs.len() != space.dim() {
            return Err(Error::Dimension(format!(
                "{} coefficients for a space of dimension {}",
                coeffs.len(),
                space.dim()
            )));
        }
        if kernel.dim() != space.mesh().dim() {
            return Err(Error::Dimension("kernel and mesh dimensions differ".into()));
        }
        let settings = QuadratureSettings::default_for(space.mesh().dim());
        let quad = PairQuadrature::new(space.mesh(), settings);
        Ok(PotentialField { kernel, space, coeffs, kind, quad })
    }

    /// Potential at `x`. Points closer than `h_min/2` to the boundary are
    /// integrated with the finest regular rule but lose accuracy.
    pub fn eval_point(&self, x: &Point) -> Result<K::Value> {
        let mesh = self.space.mesh();
        let dist = mesh.distance_to(x);
        if dist <= 1e-12 * mesh.diameter() {
            return Err(Error::PointOnBoundary(dist));
        }
        let nl = self.space.n_local();
        let mut u = K::Value::ZERO;
        for (e, p) in mesh.panels().iter().enumerate() {
            let rho = p.distance_to(x) / p.diameter;
            let level = if rho >= 2.0 {
                0
            } else if rho >= 0.5 {
                1
            } else {
                2
            };
            for q in self.quad.element_points(e, level) {
                let k = self.kernel_value(x, q, p);
                let v = self.space.local_values(&q.b);
                let mut density = K::Value::ZERO;
                for a in 0..nl {
                    density += self.coeffs[self.space.dof(e, a)].scale(v[a]);
                }
                u += k * density.scale(q.w);
            }
        }
        Ok(u)
    }

    pub fn eval(&self, points: &[Point]) -> Result<Vec<K::Value>> {
        points.iter().map(|x| self.eval_point(x)).collect()
    }

    fn kernel_value(&self, x: &Point, q: &ElementPoint, p: &Panel) -> K::Value {
        let d = x - q.x;
        let r = d.norm();
        let (phi, g) = self.kernel.radial(r);
        match self.kind {
            PotentialKind::Single => phi,
            PotentialKind::Double => g.scale(d.dot(&p.normal)),
            PotentialKind::KZ(z) => g.scale(d.dot(&z.eval(&q.x, &p.normal))),
        }
    }
}

/// Layer kernel applied at a boundary point.
#[derive(Clone, Copy, Debug)]
pub enum LayerKind {
    Single,
    /// `∫ ∂_{n(y)} Φ(x, y) f(y) ds_y`
    Double,
    /// `∫ ∂_{n(x)} Φ(x, y) f(y) ds_y` with the given normal at `x`.
    AdjointDouble(Point),
}

/// Number of Gauss points per direction for elements near the target.
const NEAR_ORDER: usize = 12;

/// `∫_Γ k(x, y) f(y) ds_y` for a point `x` on (or near) the boundary and a
/// vector of `N` smooth integrands. Elements within two diameters of `x` are
/// split at the point closest to `x` and integrated with rules graded
/// towards it.
pub fn layer_at<K: Kernel, const N: usize>(
    kernel: &K,
    quad: &PairQuadrature,
    x: &Point,
    kind: LayerKind,
    f: impl Fn(&Point, &Panel) -> [K::Value; N],
) -> [K::Value; N] {
    let mesh = quad.mesh();
    let mut acc = [K::Value::ZERO; N];
    let (g, gw) = gauss_legendre(NEAR_ORDER);
    let mut add = |y: Point, w: f64, p: &Panel| {
        let d = x - y;
        let r = d.norm();
        if r <= 1e-14 * p.diameter {
            return;
        }
        let (phi, gr) = kernel.radial(r);
        let k = match kind {
            LayerKind::Single => phi,
            LayerKind::Double => gr.scale(d.dot(&p.normal)),
            LayerKind::AdjointDouble(n) => gr.scale(-d.dot(&n)),
        };
        let fy = f(&y, p);
        for c in 0..N {
            acc[c] += k * fy[c].scale(w);
        }
    };
    for (e, p) in mesh.panels().iter().enumerate() {
        let near = p.distance_to(x) < 2.0 * p.diameter;
        if !near {
            for q in quad.element_points(e, 0) {
                add(q.x, q.w, p);
            }
            continue;
        }
        let c = p.closest_point(x);
        if mesh.dim() == 2 {
            for end in [p.corners[0], p.corners[1]] {
                let len = (end - c).norm();
                if len <= 1e-14 * p.diameter {
                    continue;
                }
                for (&u, &wu) in g.iter().zip(&gw) {
                    let s = u * u;
                    add(c + s * (end - c), 2.0 * u * wu * len, p);
                }
            }
        } else {
            let [a, b, cc] = p.corners;
            for (v1, v2) in [(a, b), (b, cc), (cc, a)] {
                let twice = (v1 - c).cross(&(v2 - v1)).norm();
                if twice <= 1e-14 * p.area {
                    continue;
                }
                for (&u, &wu) in g.iter().zip(&gw) {
                    let s = u * u;
                    for (&t, &wt) in g.iter().zip(&gw) {
                        let y = c + s * ((v1 - c) + t * (v2 - v1));
                        add(y, 2.0 * u * wu * wt * s * twice, p);
                    }
                }
            }
        }
    }
    acc
}
