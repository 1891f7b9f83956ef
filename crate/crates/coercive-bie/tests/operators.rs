use std::f64::consts::PI;

use coercive_bie::discretization::Space;
use coercive_bie::geometry::{build_circle_polygon, build_icosphere, build_square, Point};
use coercive_bie::kernels::{Helmholtz, Laplace};
use coercive_bie::operators::{
    dump_matrix, hypersingular_weak, parse_matrix, projection_matrices, Assembler, Op, PotentialField,
    PotentialKind, QuadratureSettings,
};
use coercive_bie::vector_field::VectorField;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

fn rel(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn planar_self_term_matches_closed_form() {
    // Square of side 2 with 4 segments per side: h = 0.5.
    let mesh = build_square([0.0, 0.0], 2.0, 4).unwrap();
    let space = Space::new(&mesh, 0).unwrap();
    let asm = Assembler::new(Laplace::with_scale(2, 1.0).unwrap(), &mesh, QuadratureSettings::default_for(2)).unwrap();
    let s = asm.assemble(Op::S, &space, &space).unwrap();
    let h: f64 = 0.5;
    let exact = h * h / (2.0 * PI) * ((1.0 / h).ln() + 1.5);
    assert!((s[(0, 0)] - exact).abs() < 1e-8 * exact.abs(), "{} vs {}", s[(0, 0)], exact);
    assert!(rel(&s, &s.transpose()) < 1e-13);
}

#[test]
fn circle_double_layer_tends_to_constant_kernel() {
    let mut errs = Vec::new();
    for n in [16, 32, 64] {
        let mesh = build_circle_polygon(n, 1.0).unwrap();
        let space = Space::new(&mesh, 0).unwrap();
        let asm = Assembler::new(Laplace::new(2).unwrap(), &mesh, QuadratureSettings::default_for(2)).unwrap();
        let d = asm.assemble(Op::D, &space, &space).unwrap();
        let s: Vec<f64> = mesh.panels().iter().map(|p| p.area).collect();
        let oracle = DMatrix::from_fn(n, n, |i, j| -s[i] * s[j] / (4.0 * PI));
        errs.push(rel(&d, &oracle));
    }
    // Adjacent polygon entries differ from the circle kernel by O(1), so the
    // deviation decays like h^{1/2} in the Frobenius norm.
    assert!(errs[0] / errs[1] > 1.3 && errs[1] / errs[2] > 1.3, "{errs:?}");
}

#[test]
fn polygon_double_layer_entries() {
    let mesh = build_circle_polygon(16, 1.0).unwrap();
    let space = Space::new(&mesh, 0).unwrap();
    let asm = Assembler::new(Laplace::new(2).unwrap(), &mesh, QuadratureSettings::default_for(2)).unwrap();
    let d = asm.assemble(Op::D, &space, &space).unwrap();
    // Reference for the pair of neighbouring segments from adaptive quadrature.
    let (i, j) = (0, 1);
    let (pi, pj) = (mesh.panel(i), mesh.panel(j));
    assert!((pi.corners[1] - pj.corners[0]).norm() < 1e-12);
    assert!((d[(i, j)] - -0.016939255077703535).abs() < 1e-9, "{}", d[(i, j)]);
    // D1 = -1/2 on the flat parts of a closed polygon.
    for (k, p) in mesh.panels().iter().enumerate() {
        let row: f64 = d.row(k).sum();
        assert!((row + 0.5 * p.area).abs() < 1e-9 * p.area, "row {k}: {}", row / p.area);
    }
}

#[test]
fn normal_multiplier_reproduces_double_layer_and_transpose() {
    let mesh = build_icosphere(1);
    for p in [0, 1] {
        let space = Space::new(&mesh, p).unwrap();
        let asm = Assembler::new(Laplace::new(3).unwrap(), &mesh, QuadratureSettings::default_for(3)).unwrap();
        let n = VectorField::normal();
        let z = VectorField::star(Point::new(0.1, -0.05, 0.02));
        let m = asm
            .assemble_many(&[Op::D, Op::KZ(&n), Op::KZ(&z), Op::KZprime(&z)], &space, &space)
            .unwrap();
        assert!((&m[0] - &m[1]).norm() <= 1e-12 * m[0].norm());
        assert!((&m[2].transpose() - &m[3]).norm() <= 1e-12 * m[2].norm());
    }
}

#[test]
fn star_identity_on_icosphere() {
    let mut res = Vec::new();
    for level in 1..=2 {
        let mesh = build_icosphere(level);
        let space = Space::new(&mesh, 0).unwrap();
        let asm = Assembler::new(Laplace::new(3).unwrap(), &mesh, QuadratureSettings::default_for(3)).unwrap();
        let z = VectorField::star(Point::zeros());
        let m = asm.assemble_many(&[Op::S, Op::KZ(&z)], &space, &space).unwrap();
        let r = (&m[1] + m[1].transpose() + &m[0]).norm() / m[0].norm();
        res.push(r);
    }
    println!("star identity residuals {res:?}");
    assert!(res[1] < 0.05);
}

#[test]
fn sphere_single_layer_of_constant() {
    // S1 = 1 on the unit sphere, so (S1, 1) = 4π.
    let mesh = build_icosphere(2);
    let space = Space::new(&mesh, 0).unwrap();
    let asm = Assembler::new(Laplace::new(3).unwrap(), &mesh, QuadratureSettings::default_for(3)).unwrap();
    let s = asm.assemble(Op::S, &space, &space).unwrap();
    let one = space.ones();
    let v = (one.transpose() * &s * &one)[(0, 0)];
    let area = mesh.measure();
    // On the polyhedron, S1 ≈ 1 up to O(h²) geometry error.
    assert!((v / area - 1.0).abs() < 0.02, "{}", v / area);
}

#[test]
fn hypersingular_on_circle() {
    // H cos θ = -(1/2) cos θ with H = ∂_s S ∂_s and log scale a = 1.
    let mesh = build_circle_polygon(128, 1.0).unwrap();
    let kernel = Laplace::with_scale(2, 1.0).unwrap();
    for p in [0, 1] {
        let space = Space::new(&mesh, p).unwrap();
        let b = hypersingular_weak(
            &kernel,
            &space,
            QuadratureSettings::default_for(2),
            |x| [1.0 - x.x * x.x / x.norm_squared(), -x.x * x.y / x.norm_squared(), 0.0].map(|v| v / x.norm()),
            |x| x.x / x.norm(),
        )
        .unwrap();
        let exact = space.load(|x, _| -0.5 * x.x / x.norm());
        let e = (&b - &exact).norm() / exact.norm();
        assert!(e < 0.02, "p={p}: {e}");
        let c = hypersingular_weak(&kernel, &space, QuadratureSettings::default_for(2), |_| [0.0; 3], |_| 1.0).unwrap();
        assert!(c.norm() < 1e-12);
    }
}

#[test]
fn hypersingular_on_sphere() {
    // H z = -(2/3) z on the unit sphere.
    let mesh = build_icosphere(2);
    let space = Space::new(&mesh, 1).unwrap();
    let b = hypersingular_weak(
        &Laplace::new(3).unwrap(),
        &space,
        QuadratureSettings::default_for(3),
        |x| {
            let r = x.norm();
            let g = (Point::z() - x * (x.z / (r * r))) / r;
            [g.x, g.y, g.z]
        },
        |x| x.z / x.norm(),
    )
    .unwrap();
    let exact = space.load(|x, _| -2.0 / 3.0 * x.z / x.norm());
    let e = (&b - &exact).norm() / exact.norm();
    assert!(e < 0.05, "{e}");
    assert!(hypersingular_weak(&Laplace::new(3).unwrap(), &Space::new(&mesh, 0).unwrap(), QuadratureSettings::default_for(3), |_| [0.0; 3], |_| 0.0).is_err());
}

#[test]
fn projection_matrices_properties() {
    let mesh = build_square([0.0, 0.0], 1.0, 5).unwrap();
    let space = Space::new(&mesh, 0).unwrap();
    let (p, q) = projection_matrices(&space);
    let m = space.mass_matrix();
    let one = space.ones();
    assert!(((one.transpose() * &p * &one)[(0, 0)] - mesh.measure()).abs() < 1e-12);
    // A mean-zero coefficient vector.
    let mut v = DVector::zeros(space.dim());
    v[0] = 1.0;
    v[3] = -1.0;
    assert!((&p * &v).norm() < 1e-12);
    let minv = m.clone().try_inverse().unwrap();
    assert!((&p * &minv * &p - &p).norm() < 1e-10);
    assert!((&q + &p - &m).norm() < 1e-14);
}

#[test]
fn single_layer_potential_of_sphere() {
    let mesh = build_icosphere(3);
    let space = Space::new(&mesh, 0).unwrap();
    let pot = PotentialField::new(Laplace::new(3).unwrap(), space, space.ones(), PotentialKind::Single).unwrap();
    let inside = pot.eval_point(&Point::zeros()).unwrap();
    let outside = pot.eval_point(&Point::new(0.0, 0.0, 2.0)).unwrap();
    // Exact values on the sphere: 1 inside, 1/|x| outside.
    assert!((inside - 1.0).abs() < 5e-3, "{inside}");
    assert!((outside - 0.5).abs() < 5e-3, "{outside}");
    assert!(pot.eval_point(&mesh.vertices()[0]).is_err());
}

#[test]
fn matrix_dump_round_trip() {
    let mesh = build_square([0.0, 0.0], 1.0, 2).unwrap();
    let space = Space::new(&mesh, 0).unwrap();
    let asm = Assembler::new(Helmholtz::new(2, 1.5).unwrap(), &mesh, QuadratureSettings::default_for(2)).unwrap();
    let s = asm.assemble(Op::S, &space, &space).unwrap();
    let back: DMatrix<Complex64> = parse_matrix(&dump_matrix(&s)).unwrap();
    assert_eq!(back, s);
    assert!(parse_matrix::<f64>(&dump_matrix(&s)).is_err());
}
