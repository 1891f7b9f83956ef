//! Refinement study for the interior Dirichlet problem on the unit circle
//! with the coercive projected formulation. The exact solution is the field
//! of a point source at (2, 0).
//!
//! ```bash
//! cargo run --release --example idp_circle
//! ```

use coercive_bie::formulations::{Formulation, Style, Variant};
use coercive_bie::geometry::{build_circle_polygon, Point};
use coercive_bie::kernels::Laplace;
use coercive_bie::problems::{convergence_study, laplace_kernel, ManufacturedSolution, StudySettings};
use coercive_bie::vector_field::{Regime, VectorField};

fn main() -> coercive_bie::Result<()> {
    let mesh = build_circle_polygon(32, 1.0)?;
    let manufactured = ManufacturedSolution::point_source(Laplace::new(2)?, Point::new(2.0, 0.0, 0.0));
    let kernel = laplace_kernel(&mesh, Regime::Interior, None)?;
    let settings = StudySettings { levels: 5, ..Default::default() };
    for style in [Style::Direct, Style::Indirect] {
        let form = Formulation::laplace(Regime::Interior, style, Variant::TwodProjected, VectorField::star(Point::zeros()));
        let report = convergence_study(&form, &mesh, kernel, &manufactured, &settings)?;
        println!("{style} formulation, error measure {}", report.measure);
        println!("{:>6} {:>12} {:>7} {:>6} {:>8} {:>8}", "M_N", "error", "order", "iters", "cond2", "c_coer");
        for r in &report.rows {
            println!(
                "{:>6} {:>12.4e} {:>7} {:>6} {:>8.4} {:>8.4}",
                r.dofs,
                r.err_l2,
                r.order.map_or("-".into(), |o| format!("{o:.3}")),
                r.gmres_iters,
                r.cond2.unwrap_or(f64::NAN),
                r.certificate.map_or(f64::NAN, |c| c.c_coer)
            );
        }
        println!();
    }
    Ok(())
}
