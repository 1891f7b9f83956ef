//! Coercivity certificates and the GMRES convergence bound: the residual
//! history of a certified system stays below `12 γ_β^m`.
//!
//! ```bash
//! cargo run --release --example gmres_certificate
//! ```

use coercive_bie::discretization::{ScalingMode, Space};
use coercive_bie::formulations::{build_system, certify, Certification, Formulation, Style, Variant};
use coercive_bie::geometry::{build_square, Point};
use coercive_bie::kernels::Laplace;
use coercive_bie::operators::{Assembler, QuadratureSettings};
use coercive_bie::problems::{laplace_kernel, ManufacturedSolution};
use coercive_bie::solver::{fov_diagnostics, precondition_solve};
use coercive_bie::vector_field::{Regime, VectorField};

fn main() -> coercive_bie::Result<()> {
    let mesh = build_square([0.0, 0.0], 1.0, 16)?;
    let space = Space::new(&mesh, 0)?;
    let asm = Assembler::new(laplace_kernel(&mesh, Regime::Interior, None)?, &mesh, QuadratureSettings::default_for(2))?;
    let exact = ManufacturedSolution::point_source(Laplace::new(2)?, Point::new(1.5, 0.3, 0.0));
    for variant in [Variant::TwodProjected, Variant::TwodStar, Variant::Baseline] {
        let form = Formulation::laplace(Regime::Interior, Style::Direct, variant, VectorField::star(Point::zeros()));
        let system = build_system(&form, &asm, &space, &exact.data(), ScalingMode::Area)?;
        let fov = fov_diagnostics(&system.scaled().0);
        let run = precondition_solve(&system, 1e-10, 200)?;
        println!("{variant}: {} iterations, cond2 = {:.3}, λ_min(sym) = {:.4}", run.iterations, fov.cond2(), fov.lambda_min_sym);
        match certify(&system, &space) {
            Certification::Certified(c) => {
                println!(
                    "  c_coer = {:.4}, ‖A‖ ≈ {:.4}, cos β = {:.4}, γ_β = {:.4}, iteration bound {:.1}",
                    c.c_coer,
                    c.norm_estimate,
                    c.cos_beta,
                    c.gamma_beta,
                    c.iteration_bound(1e-10)
                );
                for (m, r) in run.residuals.iter().enumerate().step_by(2) {
                    println!("  m = {m:>2}: residual {r:.3e} ≤ bound {:.3e}", c.residual_bound(m));
                }
            }
            Certification::Uncertified { reason } => println!("  uncertified: {reason}"),
        }
    }
    Ok(())
}
