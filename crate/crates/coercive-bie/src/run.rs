//! Executes a validated run plan.

use crate::config::{DataKind, ExperimentKind, RunPlan};
use crate::error::Result;
use crate::formulations::{Couplings, Equation};
use crate::kernels::Helmholtz;
use crate::problems::{
    convergence_study, laplace_kernel, manufactured_solve, scattering_study, star_identity_residual, ExperimentReport,
    ManufacturedSolution, PlaneWave,
};

/// Residual of the star identity on one refinement level.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityRow {
    pub level: usize,
    pub dofs: usize,
    pub h: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Study(ExperimentReport),
    Identity(Vec<IdentityRow>),
}

/// Result of a run together with the constants resolved on the mesh.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub outcome: Outcome,
    pub couplings: Couplings,
    /// Scale of the planar Laplace kernel actually used.
    pub log_scale: Option<f64>,
}

pub fn execute(plan: &RunPlan) -> Result<RunOutput> {
    let form = &plan.formulation;
    let mesh = &plan.mesh;
    let couplings = form.couplings(mesh);
    let mut log_scale = None;
    let outcome = if plan.kind == ExperimentKind::IdentityChecks {
        let mut rows = Vec::with_capacity(plan.settings.levels);
        let mut m = mesh.clone();
        for level in 0..plan.settings.levels {
            if level > 0 {
                m = m.refine();
            }
            let residual = star_identity_residual(&m, plan.center, Some(plan.quadrature))?;
            rows.push(IdentityRow { level, dofs: m.n_elements(), h: m.h_max(), residual });
        }
        Outcome::Identity(rows)
    } else {
        let single = plan.kind == ExperimentKind::Solve;
        let report = match (form.equation, plan.data) {
            (Equation::Laplace, _) => {
                let kernel = laplace_kernel(mesh, form.regime, plan.log_scale)?;
                if mesh.dim() == 2 {
                    log_scale = Some(kernel.scale());
                }
                let m = ManufacturedSolution::for_problem(kernel, mesh, form.regime);
                if single {
                    manufactured_solve(form, mesh, kernel, &m, &plan.settings)?
                } else {
                    convergence_study(form, mesh, kernel, &m, &plan.settings)?
                }
            }
            (Equation::Helmholtz, DataKind::PointSource) => {
                let kernel = Helmholtz::new(mesh.dim(), form.k)?;
                let m = ManufacturedSolution::for_problem(kernel, mesh, form.regime);
                if single {
                    manufactured_solve(form, mesh, kernel, &m, &plan.settings)?
                } else {
                    convergence_study(form, mesh, kernel, &m, &plan.settings)?
                }
            }
            (Equation::Helmholtz, DataKind::PlaneWave) => {
                let wave = PlaneWave::new(form.k, plan.direction)?;
                scattering_study(form, mesh, &wave, &plan.settings)?
            }
        };
        Outcome::Study(report)
    };
    Ok(RunOutput { outcome, couplings, log_scale })
}
