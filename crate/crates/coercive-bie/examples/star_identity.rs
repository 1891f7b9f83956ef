//! The star identity `K_Z + K_Zᵀ + S = 0` for `Z = x - x₀` (in 2-d the
//! single layer is replaced by `(|Γ|/2π) P`), measured on Galerkin matrices.
//!
//! ```bash
//! cargo run --release --example star_identity
//! ```

use coercive_bie::geometry::{build_circle_polygon, build_icosphere, build_lshape, Point};
use coercive_bie::problems::star_identity_residual;

fn main() -> coercive_bie::Result<()> {
    for level in 0..3 {
        let mesh = build_icosphere(level);
        let r = star_identity_residual(&mesh, Point::new(0.1, 0.0, 0.0), None)?;
        println!("icosphere level {level} ({:>4} panels): {r:.3e}", mesh.n_elements());
    }
    let circle = build_circle_polygon(256, 1.0)?;
    println!("256-gon: {:.3e}", star_identity_residual(&circle, Point::zeros(), None)?);
    // The identity holds for any x₀, even outside the domain.
    let lshape = build_lshape(1.0, 8)?;
    println!("L-shape, x₀ = (1.5, 1.5): {:.3e}", star_identity_residual(&lshape, Point::new(1.5, 1.5, 0.0), None)?);
    Ok(())
}
