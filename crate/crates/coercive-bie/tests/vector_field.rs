use coercive_bie::error::Error;
use coercive_bie::geometry::{build_icosphere, build_square, star_radius, Point};
use coercive_bie::vector_field::{field_constants, Chart, Regime, VectorField};

fn square_charts(radius: f64) -> Vec<Chart> {
    [([0.5, 0.0], [0.0, -1.0]), ([1.0, 0.5], [1.0, 0.0]), ([0.5, 1.0], [0.0, 1.0]), ([0.0, 0.5], [-1.0, 0.0])]
        .iter()
        .map(|(c, d)| Chart { center: Point::new(c[0], c[1], 0.0), radius, direction: Point::new(d[0], d[1], 0.0) })
        .collect()
}

#[test]
fn star_field_constants() {
    let sphere = build_icosphere(2);
    let z = VectorField::star(Point::zeros());
    assert_eq!(z.min_normal_component(&sphere), star_radius(&sphere, &Point::zeros()));
    let interior = field_constants(&z, &sphere, Regime::Interior).unwrap();
    let exterior = field_constants(&z, &sphere, Regime::Exterior).unwrap();
    assert_eq!((interior.alpha, exterior.alpha), (-0.5, 0.5));
    assert_eq!(interior.lipschitz, 1.0);
    let sq = build_square([0.0, 0.0], 1.0, 4).unwrap();
    assert!((z.min_normal_component(&sq) - 0.5).abs() < 1e-15);
    let planar = field_constants(&z, &sq, Regime::Exterior).unwrap();
    assert_eq!(planar.alpha, 0.0);
}

#[test]
fn star_field_translates() {
    let shifted = VectorField::star(Point::new(1.0, 0.0, 0.0));
    let origin = VectorField::star(Point::zeros());
    for p in [Point::new(0.3, -2.0, 0.0), Point::new(5.0, 1.0, 2.0)] {
        let n = Point::zeros();
        assert!((shifted.eval(&(Point::new(1.0, 0.0, 0.0) + p), &n) - origin.eval(&p, &n)).norm() < 1e-15);
    }
}

#[test]
fn normal_field_has_unit_normal_component_and_no_guarantee() {
    let sphere = build_icosphere(1);
    let n = VectorField::normal();
    for p in sphere.panels() {
        assert!((n.eval(&p.centroid, &p.normal).dot(&p.normal) - 1.0).abs() < 1e-15);
    }
    assert_eq!(n.min_normal_component(&sphere), 1.0);
    assert!(matches!(field_constants(&n, &sphere, Regime::Interior), Err(Error::NoCoercivityGuarantee)));
}

#[test]
fn partition_field_on_the_unit_square() {
    let sq = build_square([0.5, 0.5], 1.0, 8).unwrap();
    let (a, mu) = (0.9, 0.8);
    let z = VectorField::partition(square_charts(a), mu, &sq).unwrap();
    let m_star = z.max_overlap().unwrap() as f64;
    assert!(z.min_normal_component(&sq) > 0.0);
    assert_eq!(z.partition_alpha().unwrap(), 3.0 * m_star * (1.0 / (1.0 - mu)) / (2.0 * a));
    assert_eq!(z.lipschitz().unwrap(), m_star / ((1.0 - mu) * a));
    let c = field_constants(&z, &sq, Regime::Interior).unwrap();
    assert_eq!(c.alpha, 3.0 * 2.0 * c.lipschitz / 2.0);
    // |Z| ≤ M* everywhere on the boundary.
    for p in sq.panels() {
        for t in [0.0, 0.3, 0.77] {
            let x = p.corners[0] + t * (p.corners[1] - p.corners[0]);
            assert!(z.eval(&x, &p.normal).norm() <= m_star + 1e-12);
        }
    }
}

#[test]
fn partition_alpha_grows_with_mu() {
    let sq = build_square([0.5, 0.5], 1.0, 4).unwrap();
    let alphas: Vec<f64> =
        [0.8, 0.85, 0.9, 0.95].iter().map(|&mu| VectorField::partition(square_charts(0.9), mu, &sq).unwrap().partition_alpha().unwrap()).collect();
    assert!(alphas.windows(2).all(|w| w[1] >= w[0]), "{alphas:?}");
}

#[test]
fn single_chart_cannot_cover_a_closed_boundary() {
    // With one chart whose cutoff is 1 on all of Γ, Z is constant and
    // ∫ Z·n = 0, so Z·n cannot be positive everywhere.
    let sq = build_square([0.5, 0.5], 1.0, 2).unwrap();
    let chart = Chart { center: Point::new(0.5, 0.5, 0.0), radius: 3.0, direction: Point::new(0.0, -1.0, 0.0) };
    let err = VectorField::partition(vec![chart], 0.5, &sq).unwrap_err();
    assert!(err.to_string().contains("not positive"), "{err}");
}

#[test]
fn bad_covers_are_rejected() {
    let sq = build_square([0.5, 0.5], 1.0, 4).unwrap();
    let err = VectorField::partition(square_charts(0.9), 0.3, &sq).unwrap_err();
    assert!(err.to_string().contains("outside every shrunken ball"), "{err}");
    assert!(VectorField::partition(square_charts(0.9), 1.0, &sq).is_err());
    let mut flipped = square_charts(0.9);
    flipped[0].direction = -flipped[0].direction;
    assert!(VectorField::partition(flipped, 0.8, &sq).is_err());
}
