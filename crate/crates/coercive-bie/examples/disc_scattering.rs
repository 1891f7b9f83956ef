//! Sound-soft scattering of a plane wave by the unit disc with the
//! star-combined Helmholtz formulation, compared with the series solution.
//!
//! ```bash
//! cargo run --release --example disc_scattering
//! ```

use coercive_bie::formulations::{Eta, Formulation, Style};
use coercive_bie::geometry::{build_circle_polygon, Point};
use coercive_bie::problems::{scattering_study, PlaneWave, StudySettings};
use coercive_bie::vector_field::VectorField;

fn main() -> coercive_bie::Result<()> {
    let mesh = build_circle_polygon(64, 1.0)?;
    for k in [1.0, 5.0] {
        let form = Formulation::helmholtz(Style::Direct, VectorField::star(Point::zeros()), k, Eta::StarCombined { alpha: 0.5 });
        let wave = PlaneWave::new(k, Point::x())?;
        let report = scattering_study(&form, &mesh, &wave, &StudySettings::default())?;
        println!("k = {k}");
        println!("{:>6} {:>12} {:>7} {:>6} {:>10}", "M_N", "rel. error", "order", "iters", "λ_min");
        for r in &report.rows {
            println!(
                "{:>6} {:>12.4e} {:>7} {:>6} {:>10.4}",
                r.dofs,
                r.err_rel,
                r.order.map_or("-".into(), |o| format!("{o:.3}")),
                r.gmres_iters,
                r.lmin_sym.unwrap_or(f64::NAN)
            );
        }
        println!();
    }
    Ok(())
}
