//! Exterior Dirichlet problem on the unit sphere: the indirect star-field
//! formulation recovers the field of a point source at the centre,
//! `u(x) = 1/(4π|x|)`, away from the boundary.
//!
//! ```bash
//! cargo run --release --example edp_sphere_field
//! ```

use coercive_bie::discretization::Space;
use coercive_bie::formulations::{Formulation, Style, Variant};
use coercive_bie::geometry::{build_icosphere, Point};
use coercive_bie::kernels::Laplace;
use coercive_bie::operators::{Assembler, QuadratureSettings};
use coercive_bie::problems::{solve_dirichlet, ManufacturedSolution, SolveOptions};
use coercive_bie::vector_field::{Regime, VectorField};

fn main() -> coercive_bie::Result<()> {
    let kernel = Laplace::new(3)?;
    let exact = ManufacturedSolution::point_source(kernel, Point::zeros());
    let data = exact.data();
    let mut form = Formulation::laplace(Regime::Exterior, Style::Indirect, Variant::General, VectorField::star(Point::zeros()));
    form.alpha = Some(0.5);
    let probes = [Point::new(3.0, 0.0, 0.0), Point::new(0.0, -2.0, 2.0), Point::new(10.0, 0.0, 0.0)];
    for level in 1..=3 {
        let mesh = build_icosphere(level);
        let space = Space::new(&mesh, 0)?;
        let asm = Assembler::new(kernel, &mesh, QuadratureSettings::default_for(3))?;
        let sol = solve_dirichlet(&form, &asm, &space, &data, &SolveOptions::default())?;
        let field = sol.field(kernel, space, Some(&data))?;
        print!("level {level} ({:>4} panels, {} iterations):", mesh.n_elements(), sol.report.iterations);
        for x in &probes {
            let rel = (field.eval_point(x)? - exact.value(x)).abs() / exact.value(x);
            print!("  |x|={:.2}: {rel:.2e}", x.norm());
        }
        println!();
    }
    println!("u(3, 0, 0) = 1/(12π) = {:.6}", exact.value(&probes[0]));
    Ok(())
}
