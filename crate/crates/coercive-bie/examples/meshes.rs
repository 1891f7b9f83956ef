//! Built-in boundary meshes, refinement and the mesh file format.
//!
//! ```bash
//! cargo run --release --example meshes
//! ```

use coercive_bie::geometry::{build_circle_polygon, build_icosphere, build_lshape, build_square, star_radius, Mesh, Point};

fn describe(name: &str, mesh: &Mesh) {
    println!(
        "{name:<14} d={} elements={:>5} |Γ|={:.6} diam={:.4} h={:.4}",
        mesh.dim(),
        mesh.n_elements(),
        mesh.measure(),
        mesh.diameter(),
        mesh.h_max()
    );
}

fn main() -> coercive_bie::Result<()> {
    let circle = build_circle_polygon(16, 1.0)?;
    let mut fine = circle.clone();
    for _ in 0..3 {
        fine = fine.refine();
    }
    describe("circle-16", &circle);
    // Refinement moves new vertices onto the circle, so |Γ| tends to 2π.
    describe("circle-128", &fine);

    let square = build_square([0.0, 0.0], 1.0, 4)?;
    describe("square", &square);
    let lshape = build_lshape(1.0, 2)?;
    describe("lshape", &lshape);
    for level in 0..3 {
        describe(&format!("icosphere-{level}"), &build_icosphere(level));
    }

    // The L-shape is star-shaped with respect to a ball around (0.5, 0.5)
    // but not around (1.5, 1.5).
    for x0 in [Point::new(0.5, 0.5, 0.0), Point::new(1.5, 1.5, 0.0)] {
        println!("star radius of the L-shape about ({}, {}): {:.4}", x0.x, x0.y, star_radius(&lshape, &x0));
    }

    let text = square.to_text();
    let back = Mesh::parse(&text, std::path::Path::new("<memory>"))?;
    println!("\nmesh file round trip: {} elements\n{}", back.n_elements(), text.lines().take(3).collect::<Vec<_>>().join("\n"));
    Ok(())
}
