//! Quadrature for products of two elements.
//!
//! Separated pairs use tensor products of regular element rules, with more
//! points as the pair gets closer. Pairs that share an element, an edge or a
//! vertex use singularity-removing transformations:
//!
//! * segments: a distance/offset substitution graded towards the diagonal for
//!   the coincident case, and a graded Duffy split at the common vertex;
//! * triangles: the four-dimensional cube parametrisations of Sauter and
//!   Schwab for identical panels, a common edge and a common vertex.
//!
//! All returned weights include both element Jacobians.

use super::super::discretization::quadrature::{gauss_legendre, panel_rule};
use crate::geometry::{Mesh, Panel, Point};

/// Quadrature parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSettings {
    /// Points of the regular element rule (per segment, or per triangle).
    pub regular_order: usize,
    /// Gauss points per direction in the singular transformations.
    pub singular_order: usize,
}

impl QuadratureSettings {
    pub fn default_for(dim: usize) -> Self {
        if dim == 2 {
            QuadratureSettings { regular_order: 4, singular_order: 12 }
        } else {
            QuadratureSettings { regular_order: 6, singular_order: 5 }
        }
    }
}

/// Relation between two elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairClass {
    Coincident,
    /// Common edge (triangles only).
    Edge,
    /// Common vertex.
    Vertex,
    /// No common vertex; `level` selects the regular rule (0 = far).
    Separated { level: usize },
}

/// Quadrature point of a product rule, with barycentric coordinates of `x`
/// and `y` in the local vertex order of their elements.
#[derive(Clone, Copy, Debug)]
pub struct PairPoint {
    pub x: Point,
    pub y: Point,
    pub bx: [f64; 3],
    pub by: [f64; 3],
    pub w: f64,
}

/// Physical point of a regular element rule.
#[derive(Clone, Copy, Debug)]
pub struct ElementPoint {
    pub x: Point,
    pub b: [f64; 3],
    pub w: f64,
}

/// Precomputed rules for one mesh.
pub struct PairQuadrature<'m> {
    mesh: &'m Mesh,
    settings: QuadratureSettings,
    /// Regular points per element and level.
    regular: Vec<[Vec<ElementPoint>; 3]>,
    coincident: Vec<RefPoint>,
    edge: Vec<RefPoint>,
    vertex: Vec<RefPoint>,
}

/// Reference pair point: coordinates in the reference elements and weight.
#[derive(Clone, Copy, Debug)]
struct RefPoint {
    x: [f64; 2],
    y: [f64; 2],
    w: f64,
}

impl<'m> PairQuadrature<'m> {
    pub fn new(mesh: &'m Mesh, settings: QuadratureSettings) -> Self {
        let dim = mesh.dim();
        let orders = if dim == 2 {
            [settings.regular_order, 2 * settings.regular_order, 4 * settings.regular_order]
        } else {
            [settings.regular_order, 16.max(settings.regular_order), 49.max(settings.regular_order)]
        };
        let rules: Vec<_> = orders.iter().map(|&n| panel_rule(dim, n)).collect();
        let regular = mesh
            .panels()
            .iter()
            .map(|p| {
                let pts = |k: usize| {
                    rules[k]
                        .points
                        .iter()
                        .map(|q| ElementPoint { x: p.map(q.xi), b: p.shape(q.xi), w: q.w * p.jacobian() })
                        .collect::<Vec<_>>()
                };
                [pts(0), pts(1), pts(2)]
            })
            .collect();
        let n = settings.singular_order;
        let (coincident, edge, vertex) = if dim == 2 {
            (segment_coincident(n), Vec::new(), segment_vertex(n))
        } else {
            sauter_schwab(n)
        };
        PairQuadrature { mesh, settings, regular, coincident, edge, vertex }
    }

    pub fn mesh(&self) -> &'m Mesh {
        self.mesh
    }

    pub fn settings(&self) -> QuadratureSettings {
        self.settings
    }

    /// Regular points of element `e` at the given level.
    pub fn element_points(&self, e: usize, level: usize) -> &[ElementPoint] {
        &self.regular[e][level]
    }

    /// Classifies the pair `(i, j)` and, for touching pairs, returns the
    /// transformed rule through `out`.
    pub fn classify(&self, i: usize, j: usize, out: &mut Vec<PairPoint>) -> PairClass {
        out.clear();
        let mesh = self.mesh;
        let ei = mesh.element(i);
        let ej = mesh.element(j);
        let pi = mesh.panel(i);
        let pj = mesh.panel(j);
        if i == j {
            self.touching(pi, pj, &identity_perm(ei.len()), &identity_perm(ej.len()), &self.coincident, out);
            return PairClass::Coincident;
        }
        let mut shared = Vec::new();
        for (a, va) in ei.iter().enumerate() {
            if let Some(b) = ej.iter().position(|vb| vb == va) {
                shared.push((a, b));
            }
        }
        match shared.len() {
            0 => {
                let rho = (pi.centroid - pj.centroid).norm() / pi.diameter.max(pj.diameter);
                let level = if rho >= 3.0 {
                    0
                } else if rho >= 1.5 {
                    1
                } else {
                    2
                };
                PairClass::Separated { level }
            }
            1 => {
                let (a, b) = shared[0];
                let pa = rotate_first(ei.len(), a);
                let pb = rotate_first(ej.len(), b);
                self.touching(pi, pj, &pa, &pb, &self.vertex, out);
                PairClass::Vertex
            }
            2 if mesh.dim() == 3 => {
                let (a0, b0) = shared[0];
                let (a1, b1) = shared[1];
                let pa = [a0, a1, 3 - a0 - a1];
                let pb = [b0, b1, 3 - b0 - b1];
                self.touching(pi, pj, &pa, &pb, &self.edge, out);
                PairClass::Edge
            }
            _ => {
                // Two segments sharing both endpoints: treat as separated at the
                // finest level (only occurs on degenerate two-element chains).
                PairClass::Separated { level: 2 }
            }
        }
    }

    fn touching(
        &self,
        pi: &Panel,
        pj: &Panel,
        perm_i: &[usize; 3],
        perm_j: &[usize; 3],
        rule: &[RefPoint],
        out: &mut Vec<PairPoint>,
    ) {
        let jac = pi.jacobian() * pj.jacobian();
        let two_d = self.mesh.dim() == 2;
        for q in rule {
            let (x, bx) = if two_d { map_segment(pi, perm_i, q.x) } else { map_triangle(pi, perm_i, q.x) };
            let (y, by) = if two_d { map_segment(pj, perm_j, q.y) } else { map_triangle(pj, perm_j, q.y) };
            out.push(PairPoint { x, y, bx, by, w: q.w * jac });
        }
    }
}

fn identity_perm(_n: usize) -> [usize; 3] {
    [0, 1, 2]
}

/// Permutation putting local vertex `a` first, keeping cyclic order.
fn rotate_first(n: usize, a: usize) -> [usize; 3] {
    if n == 2 {
        [a, 1 - a, 2]
    } else {
        [a, (a + 1) % 3, (a + 2) % 3]
    }
}

/// Segment with vertices reordered by `perm`; `xi[0] = 0` is vertex `perm[0]`.
fn map_segment(p: &Panel, perm: &[usize; 3], xi: [f64; 2]) -> (Point, [f64; 3]) {
    let a = p.corners[perm[0]];
    let b = p.corners[perm[1]];
    let mut bary = [0.0; 3];
    bary[perm[0]] = 1.0 - xi[0];
    bary[perm[1]] = xi[0];
    (a + xi[0] * (b - a), bary)
}

/// Triangle on the reference element `{0 ≤ x₂ ≤ x₁ ≤ 1}` with vertices
/// `(0,0), (1,0), (1,1)` mapped to corners `perm[0], perm[1], perm[2]`.
fn map_triangle(p: &Panel, perm: &[usize; 3], xi: [f64; 2]) -> (Point, [f64; 3]) {
    let a = p.corners[perm[0]];
    let b = p.corners[perm[1]];
    let c = p.corners[perm[2]];
    let mut bary = [0.0; 3];
    bary[perm[0]] = 1.0 - xi[0];
    bary[perm[1]] = xi[0] - xi[1];
    bary[perm[2]] = xi[1];
    (a + xi[0] * (b - a) + xi[1] * (c - b), bary)
}

/// Coincident segments on `[0,1]²`: `d = |s - t|` graded as `w⁵`.
fn segment_coincident(n: usize) -> Vec<RefPoint> {
    let (g, gw) = gauss_legendre(n);
    let mut out = Vec::with_capacity(2 * n * n);
    for (&u, &wu) in g.iter().zip(&gw) {
        let d = u.powi(5);
        let jd = 5.0 * u.powi(4) * wu;
        for (&sig, &ws) in g.iter().zip(&gw) {
            let s = d + (1.0 - d) * sig;
            let t = s - d;
            let w = jd * ws * (1.0 - d);
            out.push(RefPoint { x: [s, 0.0], y: [t, 0.0], w });
            out.push(RefPoint { x: [t, 0.0], y: [s, 0.0], w });
        }
    }
    out
}

/// Segments sharing their first vertex: Duffy split of `[0,1]²` at the
/// origin, graded radially as `w²`.
fn segment_vertex(n: usize) -> Vec<RefPoint> {
    let (g, gw) = gauss_legendre(n);
    let mut out = Vec::with_capacity(2 * n * n);
    for (&r, &wr) in g.iter().zip(&gw) {
        let u = r * r;
        let ju = 2.0 * r * wr * u;
        for (&v, &wv) in g.iter().zip(&gw) {
            let w = ju * wv;
            out.push(RefPoint { x: [u, 0.0], y: [u * v, 0.0], w });
            out.push(RefPoint { x: [u * v, 0.0], y: [u, 0.0], w });
        }
    }
    out
}

/// Sauter-Schwab rules on `{0 ≤ x₂ ≤ x₁ ≤ 1}²`: (identical, common edge,
/// common vertex). The common edge runs from `(0,0)` to `(1,0)` in both
/// elements, the common vertex is `(0,0)`.
fn sauter_schwab(n: usize) -> (Vec<RefPoint>, Vec<RefPoint>, Vec<RefPoint>) {
    let (g, gw) = gauss_legendre(n);
    let mut coincident = Vec::new();
    let mut edge = Vec::new();
    let mut vertex = Vec::new();
    for (&xi, &w0) in g.iter().zip(&gw) {
        for (&e1, &w1) in g.iter().zip(&gw) {
            for (&e2, &w2) in g.iter().zip(&gw) {
                for (&e3, &w3) in g.iter().zip(&gw) {
                    let w = w0 * w1 * w2 * w3;
                    let j = xi * xi * xi * e1 * e1 * e2 * w;
                    let regions = [
                        ([xi, xi * (1.0 - e1 + e1 * e2)], [xi * (1.0 - e1 * e2 * e3), xi * (1.0 - e1)]),
                        ([xi * (1.0 - e1 * e2 * e3), xi * (1.0 - e1)], [xi, xi * (1.0 - e1 + e1 * e2)]),
                        ([xi, xi * e1 * (1.0 - e2 + e2 * e3)], [xi * (1.0 - e1 * e2), xi * e1 * (1.0 - e2)]),
                        ([xi * (1.0 - e1 * e2), xi * e1 * (1.0 - e2)], [xi, xi * e1 * (1.0 - e2 + e2 * e3)]),
                        ([xi * (1.0 - e1 * e2 * e3), xi * e1 * (1.0 - e2 * e3)], [xi, xi * e1 * (1.0 - e2)]),
                        ([xi, xi * e1 * (1.0 - e2)], [xi * (1.0 - e1 * e2 * e3), xi * e1 * (1.0 - e2 * e3)]),
                    ];
                    for (x, y) in regions {
                        coincident.push(RefPoint { x, y, w: j });
                    }

                    let j1 = xi * xi * xi * e1 * e1 * w;
                    let j2 = j1 * e2;
                    let regions = [
                        ([xi, xi * e1 * e3], [xi * (1.0 - e1 * e2), xi * e1 * (1.0 - e2)], j1),
                        ([xi, xi * e1], [xi * (1.0 - e1 * e2 * e3), xi * e1 * e2 * (1.0 - e3)], j2),
                        ([xi * (1.0 - e1 * e2), xi * e1 * (1.0 - e2)], [xi, xi * e1 * e2 * e3], j2),
                        ([xi * (1.0 - e1 * e2 * e3), xi * e1 * e2 * (1.0 - e3)], [xi, xi * e1], j2),
                        ([xi * (1.0 - e1 * e2 * e3), xi * e1 * (1.0 - e2 * e3)], [xi, xi * e1 * e2], j2),
                    ];
                    for (x, y, w) in regions {
                        edge.push(RefPoint { x, y, w });
                    }

                    let jv = xi * xi * xi * e2 * w;
                    vertex.push(RefPoint { x: [xi, xi * e1], y: [xi * e2, xi * e2 * e3], w: jv });
                    vertex.push(RefPoint { x: [xi * e2, xi * e2 * e3], y: [xi, xi * e1], w: jv });
                }
            }
        }
    }
    // The reference element {0 ≤ x₂ ≤ x₁ ≤ 1} has area 1/2, matching the
    // Jacobian convention `g_τ = 2 s_τ` of the standard simplex.
    (coincident, edge, vertex)
}
