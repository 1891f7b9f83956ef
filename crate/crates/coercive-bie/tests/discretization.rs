use coercive_bie::discretization::quadrature::{gauss_legendre, triangle_rule};
use coercive_bie::discretization::{DiagonalScaling, ScalingMode, Space};
use coercive_bie::geometry::{build_icosphere, build_square, Mesh, Panel, Point};
use coercive_bie::kernels::Laplace;
use coercive_bie::operators::{Assembler, Op, QuadratureSettings};
use nalgebra::{DMatrix, DVector};

fn no_matrix() -> Option<&'static DMatrix<f64>> {
    None
}

#[test]
fn space_dimensions() {
    let sq = build_square([0.0, 0.0], 1.0, 1).unwrap();
    assert_eq!(Space::new(&sq, 0).unwrap().dim(), 4);
    let ico = build_icosphere(0);
    assert_eq!(Space::new(&ico, 1).unwrap().dim(), 60);
    assert_eq!(Space::new(&sq.refine(), 0).unwrap().dim(), 8);
    assert_eq!(Space::new(&ico.refine(), 0).unwrap().dim(), 80);
    assert!(Space::new(&sq, 2).is_err());
}

#[test]
fn p0_mass_is_the_diagonal_of_areas() {
    let ico = build_icosphere(1);
    let space = Space::new(&ico, 0).unwrap();
    let m = space.mass_matrix();
    let areas = DMatrix::from_diagonal(&DVector::from_iterator(ico.n_elements(), ico.panels().iter().map(|p| p.area)));
    assert!((m - areas).abs().max() < 1e-15);
}

#[test]
fn p1_mass_block_on_a_unit_area_triangle() {
    // Right triangle with legs sqrt(2): area 1. Close it into a tetrahedron.
    let s = 2f64.sqrt();
    let v = vec![Point::zeros(), Point::new(s, 0.0, 0.0), Point::new(0.0, s, 0.0), Point::new(0.0, 0.0, s)];
    let mesh = Mesh::new(3, v, vec![vec![0, 2, 1], vec![0, 1, 3], vec![1, 2, 3], vec![0, 3, 2]]).unwrap();
    assert!((mesh.panel(0).area - 1.0).abs() < 1e-15);
    let space = Space::new(&mesh, 1).unwrap();
    let block = space.element_mass(0);
    let exact = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 1.0, 1.0, 2.0, 1.0, 1.0, 1.0, 2.0]) / 12.0;
    assert!((block - exact).abs().max() < 1e-15);
}

#[test]
fn mass_matrix_gives_the_l2_norm() {
    let ico = build_icosphere(1);
    let space = Space::new(&ico, 1).unwrap();
    let w = DVector::from_fn(space.dim(), |i, _| ((i * 7 % 11) as f64 - 5.0) / 3.0);
    let via_mass = w.dot(&(space.mass_matrix() * &w));
    let zero = |_: &Point, _: &Panel| 0.0;
    let direct = space.l2_error(&w, zero).powi(2);
    assert!((via_mass - direct).abs() < 1e-12 * direct);
    assert!(space.mass_matrix().cholesky().is_some());
}

#[test]
fn area_scaling_constants() {
    let ico = build_icosphere(1);
    let p0 = Space::new(&ico, 0).unwrap();
    let d0 = DiagonalScaling::new(&p0, ScalingMode::Area, no_matrix()).unwrap();
    let (c1, c2) = d0.norm_equivalence(&p0);
    assert!((c1 - 1.0).abs() < 1e-12 && (c2 - 1.0).abs() < 1e-12);
    let scaled = d0.scale_matrix(&p0.mass_matrix());
    assert!((scaled - DMatrix::identity(p0.dim(), p0.dim())).abs().max() < 1e-14);

    // p1: the reference block has eigenvalues area/12·{1, 1, 4}.
    let mut ratios = Vec::new();
    for level in 0..3 {
        let mesh = build_icosphere(level);
        let p1 = Space::new(&mesh, 1).unwrap();
        let d = DiagonalScaling::new(&p1, ScalingMode::Area, no_matrix()).unwrap();
        let (c1, c2) = d.norm_equivalence(&p1);
        assert!((c1 * c1 - 1.0 / 12.0).abs() < 1e-12 && (c2 * c2 - 4.0 / 12.0).abs() < 1e-12);
        ratios.push(c2 / c1);
    }
    assert!(ratios.iter().all(|r| (r - 2.0).abs() < 1e-10), "{ratios:?}");
}

#[test]
fn operator_diagonal_scaling_rejects_nonpositive_entries() {
    let sq = build_square([0.0, 0.0], 1.0, 2).unwrap();
    let space = Space::new(&sq, 0).unwrap();
    let mut a = DMatrix::<f64>::identity(8, 8);
    assert!(DiagonalScaling::new(&space, ScalingMode::OperatorDiagonal, Some(&a)).is_ok());
    a[(3, 3)] = 0.0;
    assert!(DiagonalScaling::new(&space, ScalingMode::OperatorDiagonal, Some(&a)).is_err());
    assert!(DiagonalScaling::new(&space, ScalingMode::OperatorDiagonal, no_matrix()).is_err());
}

#[test]
fn l2_projection_examples() {
    let ico = build_icosphere(1);
    let p0 = Space::new(&ico, 0).unwrap();
    let one = p0.l2_project(|_: &Point, _: &Panel| 1.0);
    assert!((one - p0.ones()).abs().max() < 1e-14);
    let p1 = Space::new(&ico, 1).unwrap();
    let linear = |x: &Point, _: &Panel| 1.0 + 2.0 * x.x - x.y + 0.5 * x.z;
    let c = p1.l2_project(linear);
    assert!(p1.l2_error(&c, linear) < 1e-12);

    // Y₁ = z projected onto p0 converges at first order.
    let y1 = |x: &Point, _: &Panel| x.z;
    let errors: Vec<f64> = (1..4)
        .map(|level| {
            let mesh = build_icosphere(level);
            let s = Space::new(&mesh, 0).unwrap();
            s.l2_error(&s.l2_project(y1), y1)
        })
        .collect();
    for w in errors.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((0.9..1.1).contains(&order), "{errors:?}");
    }
}

#[test]
fn quadrature_weights_sum_to_reference_measure() {
    for n in [1, 3, 6, 7, 10, 25] {
        let s: f64 = triangle_rule(n).points.iter().map(|p| p.w).sum();
        assert!((s - 0.5).abs() < 1e-14, "{n}");
        assert!(triangle_rule(n).points.iter().all(|p| p.w > 0.0));
    }
    for n in 1..20 {
        let (_, w) = gauss_legendre(n);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }
}

#[test]
fn separated_pairs_converge_exponentially_in_the_gauss_order() {
    // ∫∫ 1/|x - y| over two parallel unit segments at distance 3.
    let integral = |n: usize| {
        let (x, w) = gauss_legendre(n);
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += w[i] * w[j] / ((x[i] - x[j]).powi(2) + 9.0).sqrt();
            }
        }
        s
    };
    let reference = integral(30);
    let e4 = (integral(4) - reference).abs();
    let e8 = (integral(8) - reference).abs();
    assert!(e4 / e8.max(1e-300) > 1e3, "{e4} {e8}");
}

#[test]
fn singular_self_term_converges_with_the_rule_order() {
    let ico = build_icosphere(0);
    let space = Space::new(&ico, 0).unwrap();
    let entry = |singular_order: usize| {
        let asm = Assembler::new(Laplace::new(3).unwrap(), &ico, QuadratureSettings { regular_order: 6, singular_order }).unwrap();
        asm.assemble(Op::S, &space, &space).unwrap()[(0, 0)]
    };
    let reference = entry(20);
    assert!((entry(10) - reference).abs() <= 1e-6 * reference.abs());
}
