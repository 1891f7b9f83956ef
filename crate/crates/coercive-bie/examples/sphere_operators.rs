//! Galerkin matrices of the layer operators on the unit sphere, checked
//! against their spherical-harmonic eigenvalues: `S Y_n = Y_n/(2n+1)` and
//! `D' Y_n = -Y_n/(2(2n+1))`.
//!
//! ```bash
//! cargo run --release --example sphere_operators
//! ```

use coercive_bie::discretization::Space;
use coercive_bie::geometry::{build_icosphere, Panel, Point};
use coercive_bie::kernels::Laplace;
use coercive_bie::operators::{Assembler, Op, QuadratureSettings};
use nalgebra::DVector;

fn main() -> coercive_bie::Result<()> {
    let mesh = build_icosphere(2);
    let space = Space::new(&mesh, 0)?;
    let asm = Assembler::new(Laplace::new(3)?, &mesh, QuadratureSettings::default_for(3))?;
    let ops = asm.assemble_many(&[Op::S, Op::Dprime], &space, &space)?;
    let mass = space.mass_matrix();
    let harmonics: [(usize, fn(&Point) -> f64); 3] = [(0, |_| 1.0), (1, |x| x.z), (2, |x| 3.0 * x.z * x.z - 1.0)];
    println!("{} panels", mesh.n_elements());
    println!("{:>2} {:>10} {:>10} {:>10} {:>10}", "n", "S", "exact", "D'", "exact");
    for (n, y) in harmonics {
        let v: DVector<f64> = space.l2_project(|x: &Point, _: &Panel| y(x));
        let norm = v.dot(&(&mass * &v));
        let rq = |m: &nalgebra::DMatrix<f64>| v.dot(&(m * &v)) / norm;
        let s = 1.0 / (2 * n + 1) as f64;
        println!("{n:>2} {:>10.5} {:>10.5} {:>10.5} {:>10.5}", rq(&ops[0]), s, rq(&ops[1]), -0.5 * s);
    }
    Ok(())
}
