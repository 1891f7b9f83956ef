//! Surface meshes of closed boundaries.
//!
//! A [`Mesh`] is either a closed polygonal chain in the plane (`d = 2`) or a
//! closed surface made of flat triangles (`d = 3`). Points are always stored as
//! 3-vectors; planar meshes keep `z = 0`. Every element is the image of the unit
//! interval or the unit simplex under an affine map, so the Jacobian factor is
//! constant on each element.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use nalgebra::Vector3;

use crate::error::{Error, Result};

pub type Point = Vector3<f64>;

/// Geometry of one flat element.
#[derive(Clone, Debug)]
pub struct Panel {
    /// Corner coordinates; for segments only the first two are meaningful.
    pub corners: [Point; 3],
    pub normal: Point,
    /// Surface measure `s_τ` (length or area).
    pub area: f64,
    /// Diameter `h_τ`.
    pub diameter: f64,
    pub centroid: Point,
    /// Unit tangent (segments only; zero for triangles).
    pub tangent: Point,
    is_segment: bool,
}

impl Panel {
    fn segment(a: Point, b: Point) -> Result<Self> {
        let e = b - a;
        let h = e.norm();
        if h <= 0.0 {
            return Err(Error::InvalidMesh("degenerate segment".into()));
        }
        let t = e / h;
        Ok(Panel {
            corners: [a, b, b],
            normal: Point::new(t.y, -t.x, 0.0),
            area: h,
            diameter: h,
            centroid: 0.5 * (a + b),
            tangent: t,
            is_segment: true,
        })
    }

    fn triangle(a: Point, b: Point, c: Point) -> Result<Self> {
        let cr = (b - a).cross(&(c - a));
        let twice = cr.norm();
        if twice <= 0.0 {
            return Err(Error::InvalidMesh("degenerate triangle".into()));
        }
        let diameter = (b - a).norm().max((c - b).norm()).max((a - c).norm());
        Ok(Panel {
            corners: [a, b, c],
            normal: cr / twice,
            area: 0.5 * twice,
            diameter,
            centroid: (a + b + c) / 3.0,
            tangent: Point::zeros(),
            is_segment: false,
        })
    }

    /// Number of corners (2 or 3).
    pub fn n_corners(&self) -> usize {
        if self.is_segment {
            2
        } else {
            3
        }
    }

    /// Affine reference map. For segments only `xi[0]` is used.
    pub fn map(&self, xi: [f64; 2]) -> Point {
        let [a, b, c] = &self.corners;
        if self.n_corners() == 2 {
            a + xi[0] * (b - a)
        } else {
            a + xi[0] * (b - a) + xi[1] * (c - a)
        }
    }

    /// Jacobian factor `g_τ = s_τ / |τ̂|`.
    pub fn jacobian(&self) -> f64 {
        if self.n_corners() == 2 {
            self.area
        } else {
            2.0 * self.area
        }
    }

    /// Barycentric (nodal p=1) shape function values at reference point `xi`.
    pub fn shape(&self, xi: [f64; 2]) -> [f64; 3] {
        if self.n_corners() == 2 {
            [1.0 - xi[0], xi[0], 0.0]
        } else {
            [1.0 - xi[0] - xi[1], xi[0], xi[1]]
        }
    }

    /// Distance from `x` to the closest point of the panel.
    pub fn distance_to(&self, x: &Point) -> f64 {
        (x - self.closest_point(x)).norm()
    }

    pub fn closest_point(&self, x: &Point) -> Point {
        let [a, b, c] = &self.corners;
        if self.n_corners() == 2 {
            return closest_on_segment(x, a, b);
        }
        closest_on_triangle(x, a, b, c)
    }
}

fn closest_on_segment(x: &Point, a: &Point, b: &Point) -> Point {
    let e = b - a;
    let t = ((x - a).dot(&e) / e.norm_squared()).clamp(0.0, 1.0);
    a + t * e
}

fn closest_on_triangle(p: &Point, a: &Point, b: &Point, c: &Point) -> Point {
    // Region tests on the barycentric coordinates of the projection.
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(&ap);
    let d2 = ac.dot(&ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return *a;
    }
    let bp = p - b;
    let d3 = ab.dot(&bp);
    let d4 = ac.dot(&bp);
    if d3 >= 0.0 && d4 <= d3 {
        return *b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        return a + ab * (d1 / (d1 - d3));
    }
    let cp = p - c;
    let d5 = ab.dot(&cp);
    let d6 = ac.dot(&cp);
    if d6 >= 0.0 && d5 <= d6 {
        return *c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        return a + ac * (d2 / (d2 - d6));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
    }
    let denom = 1.0 / (va + vb + vc);
    a + ab * (vb * denom) + ac * (vc * denom)
}

fn vertex_diameter(vertices: &[Point]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, a) in vertices.iter().enumerate() {
        for b in &vertices[i + 1..] {
            d = d.max((a - b).norm());
        }
    }
    d
}

/// How refinement places new vertices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Projection {
    /// Midpoints stay on the flat element.
    Flat,
    /// Midpoints are pushed radially onto the sphere/circle `|x - center| = radius`.
    Sphere { center: Point, radius: f64 },
}

/// A closed boundary mesh.
#[derive(Clone, Debug)]
pub struct Mesh {
    dim: usize,
    vertices: Vec<Point>,
    /// Flat connectivity with stride `dim`.
    connectivity: Vec<usize>,
    panels: Vec<Panel>,
    projection: Projection,
    diameter: f64,
}

impl Mesh {
    /// Builds a mesh from raw vertices and connectivity. Orientation is kept as
    /// given except that a globally inward-oriented closed mesh is flipped.
    pub fn new(dim: usize, vertices: Vec<Point>, elements: Vec<Vec<usize>>) -> Result<Self> {
        Self::with_projection(dim, vertices, elements, Projection::Flat)
    }

    pub fn with_projection(
        dim: usize,
        vertices: Vec<Point>,
        elements: Vec<Vec<usize>>,
        projection: Projection,
    ) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidMesh(format!("dimension {dim} not supported")));
        }
        if elements.is_empty() {
            return Err(Error::InvalidMesh("no elements".into()));
        }
        let mut connectivity = Vec::with_capacity(elements.len() * dim);
        for (k, e) in elements.iter().enumerate() {
            if e.len() != dim {
                return Err(Error::InvalidMesh(format!(
                    "element {k} has {} nodes, expected {dim}",
                    e.len()
                )));
            }
            for &v in e {
                if v >= vertices.len() {
                    return Err(Error::InvalidMesh(format!("element {k} references vertex {v}")));
                }
            }
            connectivity.extend_from_slice(e);
        }
        if dim == 2 && vertices.iter().any(|v| v.z != 0.0) {
            return Err(Error::InvalidMesh("planar mesh with nonzero z".into()));
        }
        let diameter = vertex_diameter(&vertices);
        let mut mesh = Mesh { dim, vertices, connectivity, panels: Vec::new(), projection, diameter };
        mesh.rebuild_panels()?;
        if mesh.signed_volume() < 0.0 {
            mesh.flip();
        }
        Ok(mesh)
    }

    fn rebuild_panels(&mut self) -> Result<()> {
        let mut panels = Vec::with_capacity(self.n_elements());
        for k in 0..self.n_elements() {
            let e = self.element(k);
            let p = if self.dim == 2 {
                Panel::segment(self.vertices[e[0]], self.vertices[e[1]])
            } else {
                Panel::triangle(self.vertices[e[0]], self.vertices[e[1]], self.vertices[e[2]])
            };
            panels.push(p.map_err(|err| Error::InvalidMesh(format!("element {k}: {err}")))?);
        }
        self.panels = panels;
        Ok(())
    }

    fn flip(&mut self) {
        for e in self.connectivity.chunks_mut(self.dim) {
            e.swap(0, 1);
        }
        self.rebuild_panels().expect("flipping keeps panels valid");
    }

    /// Area enclosed (d=2) or volume enclosed (d=3) with the current orientation.
    pub fn signed_volume(&self) -> f64 {
        let d = self.dim as f64;
        self.panels.iter().map(|p| p.area * p.centroid.dot(&p.normal)).sum::<f64>() / d
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn n_elements(&self) -> usize {
        self.connectivity.len() / self.dim
    }

    pub fn element(&self, k: usize) -> &[usize] {
        &self.connectivity[k * self.dim..(k + 1) * self.dim]
    }

    pub fn panels(&self) -> &[Panel] {
        &self.panels
    }

    pub fn panel(&self, k: usize) -> &Panel {
        &self.panels[k]
    }

    pub fn projection(&self) -> Projection {
        self.projection
    }

    /// Total surface measure |Γ|.
    pub fn measure(&self) -> f64 {
        self.panels.iter().map(|p| p.area).sum()
    }

    pub fn h_max(&self) -> f64 {
        self.panels.iter().map(|p| p.diameter).fold(0.0, f64::max)
    }

    pub fn h_min(&self) -> f64 {
        self.panels.iter().map(|p| p.diameter).fold(f64::INFINITY, f64::min)
    }

    /// Diameter of the vertex set.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// `∑ s_τ n_τ`, which vanishes for a closed, consistently oriented mesh.
    pub fn normal_sum(&self) -> Point {
        self.panels.iter().map(|p| p.area * p.normal).sum()
    }

    /// Distance from `x` to the mesh.
    pub fn distance_to(&self, x: &Point) -> f64 {
        self.panels.iter().map(|p| p.distance_to(x)).fold(f64::INFINITY, f64::min)
    }

    /// Winding number of the boundary around `x`: 1 inside, 0 outside.
    pub fn winding_number(&self, x: &Point) -> f64 {
        let mut total = 0.0;
        for p in &self.panels {
            if self.dim == 2 {
                let (a, b) = (p.corners[0] - x, p.corners[1] - x);
                total += (a.x * b.y - a.y * b.x).atan2(a.dot(&b));
            } else {
                let [a, b, c] = p.corners.map(|v| v - x);
                let (la, lb, lc) = (a.norm(), b.norm(), c.norm());
                let den = la * lb * lc + a.dot(&b) * lc + a.dot(&c) * lb + b.dot(&c) * la;
                total += 2.0 * a.dot(&b.cross(&c)).atan2(den);
            }
        }
        let full = if self.dim == 2 { 2.0 * std::f64::consts::PI } else { 4.0 * std::f64::consts::PI };
        total / full
    }

    /// Whether `x` lies in the bounded domain enclosed by the mesh.
    pub fn contains(&self, x: &Point) -> bool {
        self.winding_number(x) > 0.5
    }

    /// Point of the enclosed domain farthest from the boundary among a
    /// regular grid of candidates.
    pub fn interior_point(&self) -> Point {
        let (lo, hi) = self.bounding_box();
        let n = if self.dim == 2 { 24 } else { 10 };
        let t = |lo: f64, hi: f64, m: usize| lo + (hi - lo) * m as f64 / n as f64;
        let heights: Vec<f64> = if self.dim == 2 { vec![0.0] } else { (1..n).map(|k| t(lo.z, hi.z, k)).collect() };
        let mut best = (0.0, self.centroid_of_vertices());
        for i in 1..n {
            for j in 1..n {
                for &z in &heights {
                    let x = Point::new(t(lo.x, hi.x, i), t(lo.y, hi.y, j), z);
                    if self.contains(&x) {
                        let d = self.distance_to(&x);
                        if d > best.0 {
                            best = (d, x);
                        }
                    }
                }
            }
        }
        best.1
    }

    /// Componentwise extremes of the vertices.
    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = Point::repeat(f64::INFINITY);
        let mut hi = Point::repeat(f64::NEG_INFINITY);
        for v in &self.vertices {
            lo = lo.inf(v);
            hi = hi.sup(v);
        }
        (lo, hi)
    }

    pub fn centroid_of_vertices(&self) -> Point {
        self.vertices.iter().sum::<Point>() / self.vertices.len() as f64
    }

    /// Uniform refinement: segment bisection or triangle quadrisection.
    pub fn refine(&self) -> Mesh {
        let mut vertices = self.vertices.clone();
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut mid = |a: usize, b: usize, vertices: &mut Vec<Point>| -> usize {
            let key = (a.min(b), a.max(b));
            *midpoint.entry(key).or_insert_with(|| {
                let mut m = 0.5 * (vertices[a] + vertices[b]);
                if let Projection::Sphere { center, radius } = self.projection {
                    let r = m - center;
                    m = center + r * (radius / r.norm());
                }
                vertices.push(m);
                vertices.len() - 1
            })
        };
        let mut elements = Vec::new();
        for k in 0..self.n_elements() {
            let e = self.element(k);
            if self.dim == 2 {
                let m = mid(e[0], e[1], &mut vertices);
                elements.push(vec![e[0], m]);
                elements.push(vec![m, e[1]]);
            } else {
                let (a, b, c) = (e[0], e[1], e[2]);
                let ab = mid(a, b, &mut vertices);
                let bc = mid(b, c, &mut vertices);
                let ca = mid(c, a, &mut vertices);
                elements.push(vec![a, ab, ca]);
                elements.push(vec![ab, b, bc]);
                elements.push(vec![ca, bc, c]);
                elements.push(vec![ab, bc, ca]);
            }
        }
        Mesh::with_projection(self.dim, vertices, elements, self.projection)
            .expect("refinement of a valid mesh is valid")
    }

    /// Returns the mesh translated by `t`.
    pub fn translated(&self, t: Point) -> Mesh {
        let mut m = self.clone();
        for v in &mut m.vertices {
            *v += t;
        }
        if let Projection::Sphere { center, radius } = m.projection {
            m.projection = Projection::Sphere { center: center + t, radius };
        }
        m.rebuild_panels().expect("translation keeps panels valid");
        m
    }

    /// Parses the `BIE-MESH` text format.
    pub fn parse(text: &str, origin: &Path) -> Result<Mesh> {
        let err = |line: usize, msg: String| Error::MeshFormat {
            path: origin.to_path_buf(),
            line,
            msg,
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (ln, header) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 4 || h[0] != "BIE-MESH" {
            return Err(err(ln, "expected `BIE-MESH <d> <n_vertices> <n_elements>`".into()));
        }
        let parse_usize =
            |s: &str, ln: usize| s.parse::<usize>().map_err(|e| err(ln, format!("{s:?}: {e}")));
        let dim = parse_usize(h[1], ln)?;
        let nv = parse_usize(h[2], ln)?;
        let ne = parse_usize(h[3], ln)?;
        if dim != 2 && dim != 3 {
            return Err(err(ln, format!("dimension {dim} not supported")));
        }
        let mut vertices = Vec::with_capacity(nv);
        for _ in 0..nv {
            let (ln, l) = lines.next().ok_or_else(|| err(0, "missing vertex lines".into()))?;
            let c: Vec<f64> = l
                .split_whitespace()
                .map(|s| s.parse::<f64>().map_err(|e| err(ln, format!("{s:?}: {e}"))))
                .collect::<Result<_>>()?;
            if c.len() != dim {
                return Err(err(ln, format!("expected {dim} coordinates")));
            }
            vertices.push(Point::new(c[0], c[1], if dim == 3 { c[2] } else { 0.0 }));
        }
        let mut elements = Vec::with_capacity(ne);
        for _ in 0..ne {
            let (ln, l) = lines.next().ok_or_else(|| err(0, "missing element lines".into()))?;
            let e: Vec<usize> =
                l.split_whitespace().map(|s| parse_usize(s, ln)).collect::<Result<_>>()?;
            if e.len() != dim {
                return Err(err(ln, format!("expected {dim} vertex indices")));
            }
            elements.push(e);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(err(ln, "trailing data".into()));
        }
        let mesh = Mesh::new(dim, vertices, elements).map_err(|e| err(0, e.to_string()))?;
        if dim == 2 {
            check_simple_chain(&mesh)?;
        }
        Ok(mesh)
    }

    pub fn load(path: &Path) -> Result<Mesh> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Mesh::parse(&text, path)
    }

    /// Serialises to the `BIE-MESH` text format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "BIE-MESH {} {} {}", self.dim, self.vertices.len(), self.n_elements());
        for v in &self.vertices {
            if self.dim == 2 {
                let _ = writeln!(s, "{:e} {:e}", v.x, v.y);
            } else {
                let _ = writeln!(s, "{:e} {:e} {:e}", v.x, v.y, v.z);
            }
        }
        for k in 0..self.n_elements() {
            let e: Vec<String> = self.element(k).iter().map(|i| i.to_string()).collect();
            let _ = writeln!(s, "{}", e.join(" "));
        }
        s
    }
}

fn segments_cross(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let orient = |p: &Point, q: &Point, r: &Point| (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        return true;
    }
    let on = |p: &Point, q: &Point, r: &Point, o: f64| {
        o == 0.0
            && r.x >= p.x.min(q.x)
            && r.x <= p.x.max(q.x)
            && r.y >= p.y.min(q.y)
            && r.y <= p.y.max(q.y)
    };
    on(a, b, c, o1) || on(a, b, d, o2) || on(c, d, a, o3) || on(c, d, b, o4)
}

fn check_simple_chain(mesh: &Mesh) -> Result<()> {
    let n = mesh.n_elements();
    for i in 0..n {
        let ei = mesh.element(i);
        for j in i + 1..n {
            let ej = mesh.element(j);
            if ei.iter().any(|v| ej.contains(v)) {
                continue;
            }
            let p = mesh.panel(i);
            let q = mesh.panel(j);
            if segments_cross(&p.corners[0], &p.corners[1], &q.corners[0], &q.corners[1]) {
                return Err(Error::SelfIntersecting(i, j));
            }
        }
    }
    Ok(())
}

/// Closed polygon through `vertices` (counterclockwise; clockwise input is
/// reoriented), each edge split into `n_per_edge` equal segments.
pub fn build_polygon(vertices: &[[f64; 2]], n_per_edge: usize) -> Result<Mesh> {
    if vertices.len() < 3 {
        return Err(Error::InvalidMesh("a polygon needs at least 3 vertices".into()));
    }
    if n_per_edge == 0 {
        return Err(Error::InvalidMesh("n_per_edge must be at least 1".into()));
    }
    let corners: Vec<Point> = vertices.iter().map(|v| Point::new(v[0], v[1], 0.0)).collect();
    let m = corners.len();
    for i in 0..m {
        for j in i + 1..m {
            let adjacent = j == i + 1 || (i == 0 && j == m - 1);
            let (a, b) = (&corners[i], &corners[(i + 1) % m]);
            let (c, d) = (&corners[j], &corners[(j + 1) % m]);
            if adjacent {
                // Adjacent edges may only share their common corner.
                let (shared, other_a, other_b) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                let e1 = other_a - shared;
                let e2 = other_b - shared;
                let cross = e1.x * e2.y - e1.y * e2.x;
                if cross == 0.0 && e1.dot(&e2) > 0.0 {
                    return Err(Error::SelfIntersecting(i, j));
                }
            } else if segments_cross(a, b, c, d) {
                return Err(Error::SelfIntersecting(i, j));
            }
        }
    }
    let mut pts = Vec::with_capacity(m * n_per_edge);
    for i in 0..m {
        let (a, b) = (corners[i], corners[(i + 1) % m]);
        for k in 0..n_per_edge {
            pts.push(a + (b - a) * (k as f64 / n_per_edge as f64));
        }
    }
    let n = pts.len();
    let elements = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    Mesh::new(2, pts, elements)
}

/// Axis-aligned square with the given side length, centred at `center`.
pub fn build_square(center: [f64; 2], side: f64, n_per_edge: usize) -> Result<Mesh> {
    let h = 0.5 * side;
    let [cx, cy] = center;
    build_polygon(&[[cx - h, cy - h], [cx + h, cy - h], [cx + h, cy + h], [cx - h, cy + h]], n_per_edge)
}

/// L-shaped domain `[0,2]² \ (1,2]²` scaled by `scale`.
pub fn build_lshape(scale: f64, n_per_edge: usize) -> Result<Mesh> {
    let s = scale;
    build_polygon(
        &[[0.0, 0.0], [2.0 * s, 0.0], [2.0 * s, s], [s, s], [s, 2.0 * s], [0.0, 2.0 * s]],
        n_per_edge,
    )
}

/// Regular `n`-gon inscribed in the circle of the given radius; refinement
/// keeps new vertices on the circle.
pub fn build_circle_polygon(n: usize, radius: f64) -> Result<Mesh> {
    if n < 3 {
        return Err(Error::InvalidMesh("a polygon needs at least 3 vertices".into()));
    }
    let pts: Vec<Point> = (0..n)
        .map(|i| {
            let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            Point::new(radius * t.cos(), radius * t.sin(), 0.0)
        })
        .collect();
    let elements = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    Mesh::with_projection(
        2,
        pts,
        elements,
        Projection::Sphere { center: Point::zeros(), radius },
    )
}

/// Unit icosphere: the icosahedron refined `level` times with vertices
/// projected to the unit sphere.
pub fn build_icosphere(level: usize) -> Mesh {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let raw = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ];
    let vertices: Vec<Point> = raw.iter().map(|v| Point::new(v[0], v[1], v[2]).normalize()).collect();
    let faces: [[usize; 3]; 20] = [
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    // Orient every face away from the origin.
    let elements = faces
        .iter()
        .map(|f| {
            let (a, b, c) = (vertices[f[0]], vertices[f[1]], vertices[f[2]]);
            if (b - a).cross(&(c - a)).dot(&(a + b + c)) < 0.0 {
                vec![f[0], f[2], f[1]]
            } else {
                f.to_vec()
            }
        })
        .collect();
    let mut mesh = Mesh::with_projection(
        3,
        vertices,
        elements,
        Projection::Sphere { center: Point::zeros(), radius: 1.0 },
    )
    .expect("icosahedron is valid");
    for _ in 0..level {
        mesh = mesh.refine();
    }
    mesh
}

/// Star radius `κ = min (x - x₀)·n` over element vertices and centroids.
/// Positive iff the mesh is star-shaped with respect to a ball around `x0`.
pub fn star_radius(mesh: &Mesh, x0: &Point) -> f64 {
    let mut kappa = f64::INFINITY;
    for p in mesh.panels() {
        for c in p.corners.iter().take(p.n_corners()).chain(std::iter::once(&p.centroid)) {
            kappa = kappa.min((c - x0).dot(&p.normal));
        }
    }
    kappa
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closest_point_inside_triangle_is_projection() {
        let p = Panel::triangle(Point::zeros(), Point::x(), Point::y()).unwrap();
        let x = Point::new(0.2, 0.3, 1.5);
        assert!((p.closest_point(&x) - Point::new(0.2, 0.3, 0.0)).norm() < 1e-15);
        assert!((p.distance_to(&Point::new(2.0, 0.0, 0.0)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn clockwise_polygon_is_reoriented() {
        let m = build_polygon(&[[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]], 1).unwrap();
        assert!(m.signed_volume() > 0.0);
    }

    #[test]
    fn winding_number_separates_inside_from_outside() {
        let l = build_lshape(1.0, 2).unwrap();
        assert!((l.winding_number(&Point::new(0.5, 1.5, 0.0)) - 1.0).abs() < 1e-12);
        assert!(l.winding_number(&Point::new(1.5, 1.5, 0.0)).abs() < 1e-12);
        let s = build_icosphere(1);
        assert!((s.winding_number(&Point::new(0.1, 0.2, -0.3)) - 1.0).abs() < 1e-12);
        assert!(s.winding_number(&Point::new(1.5, 0.0, 0.0)).abs() < 1e-12);
        let x = l.interior_point();
        assert!(l.contains(&x) && l.distance_to(&x) > 0.4);
    }
}
