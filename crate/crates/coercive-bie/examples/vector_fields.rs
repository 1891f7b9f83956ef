//! Multiplier fields and their coercivity constants.
//!
//! ```bash
//! cargo run --release --example vector_fields
//! ```

use coercive_bie::geometry::{build_icosphere, build_square, Point};
use coercive_bie::vector_field::{field_constants, Chart, Regime, VectorField};

fn main() -> coercive_bie::Result<()> {
    let sphere = build_icosphere(2);
    let star = VectorField::star(Point::zeros());
    for regime in [Regime::Interior, Regime::Exterior] {
        let c = field_constants(&star, &sphere, regime)?;
        println!("sphere, star field, {regime}: c = {:.4}, L = {}, alpha = {:+}", c.c, c.lipschitz, c.alpha);
    }

    // One chart per side of the unit square [0, 1]², each pushing outwards.
    let square = build_square([0.5, 0.5], 1.0, 8)?;
    let chart = |cx: f64, cy: f64, dx: f64, dy: f64| Chart {
        center: Point::new(cx, cy, 0.0),
        radius: 1.6,
        direction: Point::new(dx, dy, 0.0),
    };
    let charts = vec![
        chart(0.5, -0.5, 0.0, -1.0),
        chart(1.5, 0.5, 1.0, 0.0),
        chart(0.5, 1.5, 0.0, 1.0),
        chart(-0.5, 0.5, -1.0, 0.0),
    ];
    let partition = VectorField::partition(charts, 0.5, &square)?;
    let c = field_constants(&partition, &square, Regime::Interior)?;
    println!(
        "square, partition field: c = {:.4}, L = {:.4}, alpha = {:.4}, overlap = {:?}",
        c.c,
        c.lipschitz,
        c.alpha,
        partition.max_overlap()
    );
    for x in [Point::new(0.5, 0.0, 0.0), Point::new(0.0, 0.0, 0.0), Point::new(1.0, 0.7, 0.0)] {
        let z = partition.eval(&x, &Point::zeros());
        println!("  Z({:.1}, {:.1}) = ({:+.4}, {:+.4})", x.x, x.y, z.x, z.y);
    }

    // A shrunken cover that misses the corners is rejected.
    let small = vec![chart(0.5, -0.5, 0.0, -1.0)];
    if let Err(e) = VectorField::partition(small, 0.5, &square) {
        println!("rejected cover: {e}");
    }
    Ok(())
}
