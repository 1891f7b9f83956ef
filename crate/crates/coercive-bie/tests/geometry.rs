use std::f64::consts::PI;
use std::path::Path;

use coercive_bie::error::Error;
use coercive_bie::geometry::{build_circle_polygon, build_icosphere, build_lshape, build_polygon, build_square, star_radius, Mesh, Point};

fn closure_defect(mesh: &Mesh) -> f64 {
    let sum: Point = mesh.panels().iter().map(|p| p.area * p.normal).sum();
    sum.norm() / mesh.measure()
}

fn sorted_vertices(mesh: &Mesh) -> Vec<[i64; 3]> {
    let mut v: Vec<[i64; 3]> = mesh.vertices().iter().map(|p| [0, 1, 2].map(|i| (p[i] * 1e9).round() as i64)).collect();
    v.sort();
    v
}

#[test]
fn unit_square_panels() {
    let corners = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
    let m = build_polygon(&corners, 1).unwrap();
    assert_eq!(m.n_elements(), 4);
    assert!(m.panels().iter().all(|p| (p.area - 1.0).abs() < 1e-15));
    assert!((m.measure() - 4.0).abs() < 1e-14);
    let m2 = build_polygon(&corners, 2).unwrap();
    assert_eq!(m2.n_elements(), 8);
    assert!(m2.panels().iter().all(|p| (p.area - 0.5).abs() < 1e-15));
    // Outward normals on a counterclockwise square.
    assert!((m.panel(0).normal - Point::new(0.0, -1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn regular_polygon_perimeter() {
    let m = build_circle_polygon(64, 1.0).unwrap();
    let exact = 64.0 * 2.0 * (PI / 64.0).sin();
    assert!((m.measure() - exact).abs() < 1e-13);
    assert!((m.measure() - 6.2806).abs() < 1e-4);
    assert!(m.measure() < 2.0 * PI);
}

#[test]
fn self_intersecting_polygon_is_rejected() {
    let bowtie = [[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]];
    assert!(matches!(build_polygon(&bowtie, 1), Err(Error::SelfIntersecting(..))));
}

#[test]
fn icosphere_counts_and_area() {
    let mut prev = 0.0;
    for level in 0..4 {
        let m = build_icosphere(level);
        assert_eq!(m.n_elements(), 20 * 4usize.pow(level as u32));
        let area = m.measure();
        assert!(area > prev && area < 4.0 * PI, "{area}");
        prev = area;
        for p in m.panels() {
            assert!(p.normal.dot(&p.centroid) > 0.0);
        }
    }
    assert!((4.0 * PI - prev) / (4.0 * PI) < 0.01);
}

#[test]
fn refinement_rules() {
    let sq = build_square([0.0, 0.0], 1.0, 1).unwrap();
    let r = sq.refine();
    assert_eq!(r.n_elements(), 8);
    assert_eq!(r.h_max(), sq.h_max() / 2.0);
    let coarse = sorted_vertices(&sq);
    let fine = sorted_vertices(&r);
    assert!(coarse.iter().all(|v| fine.binary_search(v).is_ok()));
    // Refining the icosahedron twice reproduces level 2.
    assert_eq!(sorted_vertices(&build_icosphere(0).refine().refine()), sorted_vertices(&build_icosphere(2)));
}

#[test]
fn closed_meshes_have_vanishing_normal_integral() {
    let meshes = [
        build_square([0.3, -0.2], 2.0, 5).unwrap(),
        build_lshape(1.0, 3).unwrap(),
        build_circle_polygon(37, 2.0).unwrap(),
        build_icosphere(2),
        build_icosphere(3).translated(Point::new(1.0, 2.0, 3.0)),
    ];
    for m in &meshes {
        assert!(closure_defect(m) <= 1e-12, "{}", closure_defect(m));
        assert!(m.panels().iter().all(|p| p.area > 0.0 && p.diameter > 0.0));
    }
}

#[test]
fn star_radius_examples() {
    let sphere = build_icosphere(2);
    let kappa = star_radius(&sphere, &Point::zeros());
    let plane_distance = sphere.panels().iter().map(|p| p.centroid.dot(&p.normal)).fold(f64::INFINITY, f64::min);
    assert!((kappa - plane_distance).abs() < 1e-14);
    assert!(kappa > 0.9 && kappa < 1.0);
    let sq = build_square([0.0, 0.0], 1.0, 3).unwrap();
    assert!((star_radius(&sq, &Point::zeros()) - 0.5).abs() < 1e-15);
    let l = build_lshape(1.0, 2).unwrap();
    assert!(star_radius(&l, &Point::new(1.8, 1.8, 0.0)) < 0.0);
    assert!(star_radius(&l, &Point::new(0.5, 0.5, 0.0)) > 0.0);
}

#[test]
fn star_radius_is_translation_consistent() {
    let l = build_lshape(1.0, 3).unwrap();
    let x0 = Point::new(0.25, 0.5, 0.0);
    let t = Point::new(3.0, -1.0, 0.0);
    let shifted = l.translated(t);
    assert!((star_radius(&shifted, &(x0 + t)) - star_radius(&l, &x0)).abs() < 1e-14);
}

#[test]
fn mesh_file_round_trip_and_errors() {
    let m = build_icosphere(1);
    let back = Mesh::parse(&m.to_text(), Path::new("sphere.mesh")).unwrap();
    assert_eq!(back.n_elements(), m.n_elements());
    assert!((back.measure() - m.measure()).abs() < 1e-12);

    let text = "# a triangle of segments\nBIE-MESH 2 3 3\n0 0\n1 0\n0 1\n0 1\n1 2\n2 0\n";
    let tri = Mesh::parse(text, Path::new("t.mesh")).unwrap();
    assert!((tri.measure() - (2.0 + 2f64.sqrt())).abs() < 1e-14);
    let bad = Mesh::parse("BIE-MESH 2 3 3\n0 0\n1 0\n0 x\n0 1\n1 2\n2 0\n", Path::new("bad.mesh")).unwrap_err();
    let msg = bad.to_string();
    assert!(msg.contains("bad.mesh") && msg.contains("line 4"), "{msg}");
    let missing = Mesh::load(Path::new("/nonexistent/dir/m.mesh")).unwrap_err();
    assert!(missing.to_string().contains("/nonexistent/dir/m.mesh"));
}
