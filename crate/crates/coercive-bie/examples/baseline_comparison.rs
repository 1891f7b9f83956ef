//! The classical second-kind equation next to the coercive formulations on
//! the L-shaped domain: same pipeline, no certificate for the baseline.
//!
//! ```bash
//! cargo run --release --example baseline_comparison
//! ```

use coercive_bie::formulations::{Formulation, Style, Variant};
use coercive_bie::geometry::{build_lshape, Point};
use coercive_bie::kernels::Laplace;
use coercive_bie::problems::{convergence_study, laplace_kernel, ManufacturedSolution, StudySettings};
use coercive_bie::vector_field::{Regime, VectorField};

fn main() -> coercive_bie::Result<()> {
    let mesh = build_lshape(1.0, 4)?;
    let kernel = laplace_kernel(&mesh, Regime::Interior, None)?;
    let manufactured = ManufacturedSolution::for_problem(Laplace::new(2)?, &mesh, Regime::Interior);
    let field = VectorField::star(Point::new(0.5, 0.5, 0.0));
    for variant in [Variant::Baseline, Variant::TwodProjected, Variant::TwodStar] {
        let form = Formulation::laplace(Regime::Interior, Style::Direct, variant, field.clone());
        let report = convergence_study(&form, &mesh, kernel, &manufactured, &StudySettings::default())?;
        let row = |f: fn(&coercive_bie::problems::StudyRow) -> String| report.rows.iter().map(f).collect::<Vec<_>>().join(" ");
        println!("{variant}");
        println!("  errors     {}", row(|r| format!("{:.3e}", r.err_l2)));
        println!("  iterations {}", row(|r| r.gmres_iters.to_string()));
        println!("  cond2      {}", row(|r| format!("{:.2}", r.cond2.unwrap_or(f64::NAN))));
        println!("  λ_min      {}", row(|r| format!("{:.4}", r.lmin_sym.unwrap_or(f64::NAN))));
        match &report.uncertified {
            Some(reason) => println!("  uncertified: {reason}"),
            None => println!("  c_coer     {}", row(|r| format!("{:.4}", r.certificate.map_or(f64::NAN, |c| c.c_coer)))),
        }
    }
    Ok(())
}
