//! Output files of a run: the experiment CSV, the run manifest and the
//! listing of built-in options.

use serde::Serialize;

use crate::config::{Builtin, FieldName, RunConfig};
use crate::error::{Error, Result};
use crate::formulations::{Certificate, Equation, Style, Variant};
use crate::problems::ExperimentReport;
use crate::run::{IdentityRow, Outcome, RunOutput};
use crate::vector_field::Regime;

/// Header of the experiment CSV.
pub const STUDY_COLUMNS: [&str; 10] =
    ["level", "M_N", "h", "err_L2", "order", "gmres_iters", "cond2", "lmin_sym", "c_coer_cert", "norm_est"];

/// Header of the identity-check CSV.
pub const IDENTITY_COLUMNS: [&str; 4] = ["level", "M_N", "h", "residual"];

/// Shortest round-trip representation, so reruns give identical files.
fn num(v: f64) -> String {
    format!("{v:e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn write_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let to_err = |e: csv::Error| Error::Config(format!("writing CSV: {e}"));
    w.write_record(header).map_err(to_err)?;
    for row in rows {
        w.write_record(&row).map_err(to_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(format!("writing CSV: {e}")))?;
    Ok(String::from_utf8(bytes).expect("CSV of ASCII fields"))
}

/// One row per level with the columns of [`STUDY_COLUMNS`]; missing values
/// are empty.
pub fn study_csv(report: &ExperimentReport) -> Result<String> {
    write_csv(
        &STUDY_COLUMNS,
        report.rows.iter().map(|r| {
            vec![
                r.level.to_string(),
                r.dofs.to_string(),
                num(r.h),
                num(r.err_l2),
                opt(r.order),
                r.gmres_iters.to_string(),
                opt(r.cond2),
                opt(r.lmin_sym),
                opt(r.certificate.map(|c| c.c_coer)),
                opt(r.certificate.map(|c| c.norm_estimate)),
            ]
        }),
    )
}

pub fn identity_csv(rows: &[IdentityRow]) -> Result<String> {
    write_csv(
        &IDENTITY_COLUMNS,
        rows.iter().map(|r| vec![r.level.to_string(), r.dofs.to_string(), num(r.h), num(r.residual)]),
    )
}

pub fn output_csv(output: &RunOutput) -> Result<String> {
    match &output.outcome {
        Outcome::Study(report) => study_csv(report),
        Outcome::Identity(rows) => identity_csv(rows),
    }
}

/// Human-readable summary printed by the command-line tool.
pub fn summary(output: &RunOutput) -> String {
    let mut s = String::new();
    match &output.outcome {
        Outcome::Study(report) => {
            s += &format!("{:>5} {:>7} {:>11} {:>20} {:>7} {:>6} {:>9}\n", "level", "M_N", "h", report.measure.to_string(), "order", "iters", "cond2");
            for r in &report.rows {
                s += &format!(
                    "{:>5} {:>7} {:>11.4e} {:>20.4e} {:>7} {:>6} {:>9}\n",
                    r.level,
                    r.dofs,
                    r.h,
                    r.err_l2,
                    r.order.map(|o| format!("{o:.3}")).unwrap_or_else(|| "-".into()),
                    r.gmres_iters,
                    r.cond2.map(|c| format!("{c:.4}")).unwrap_or_else(|| "-".into()),
                );
            }
            match &report.uncertified {
                Some(reason) => s += &format!("uncertified: {reason}\n"),
                None => s += "certified coercive at every level\n",
            }
        }
        Outcome::Identity(rows) => {
            s += &format!("{:>5} {:>7} {:>11} {:>11}\n", "level", "M_N", "h", "residual");
            for r in rows {
                s += &format!("{:>5} {:>7} {:>11.4e} {:>11.4e}\n", r.level, r.dofs, r.h, r.residual);
            }
        }
    }
    s
}

#[derive(Serialize)]
struct RunInfo<'a> {
    package: &'a str,
    version: &'a str,
    manifest_format: u32,
    experiment: &'a str,
    csv: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    error_measure: Option<String>,
    threads: usize,
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct Resolved {
    dim: usize,
    elements: usize,
    alpha: f64,
    beta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    log_scale: Option<f64>,
}

#[derive(Serialize)]
struct LevelCertificate {
    level: usize,
    c_coer: f64,
    norm_est: f64,
    c1: f64,
    c2: f64,
    cos_beta: f64,
    gamma_beta: f64,
    cond_bound: f64,
    iteration_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    elman_bound_holds: Option<bool>,
}

impl LevelCertificate {
    fn new(level: usize, c: &Certificate, tol: f64, elman: Option<bool>) -> Self {
        LevelCertificate {
            level,
            c_coer: c.c_coer,
            norm_est: c.norm_estimate,
            c1: c.c1,
            c2: c.c2,
            cos_beta: c.cos_beta,
            gamma_beta: c.gamma_beta,
            cond_bound: c.cond_bound,
            iteration_bound: c.iteration_bound(tol),
            elman_bound_holds: elman,
        }
    }
}

#[derive(Serialize)]
struct CertificateSection {
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    levels: Vec<LevelCertificate>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    run: RunInfo<'a>,
    resolved: Resolved,
    certificate: CertificateSection,
    config: RunConfig,
}

/// Run manifest in TOML: the resolved configuration, the certificate values
/// per level (or `"uncertified"` with the reason), and versions.
pub fn manifest(config: &RunConfig, plan: &crate::config::RunPlan, output: &RunOutput, threads: usize) -> Result<String> {
    let resolved_config = config.resolved(plan.mesh.dim());
    let csv = resolved_config.experiment.output.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
    let (error_measure, certificate, warnings) = match &output.outcome {
        Outcome::Study(report) => {
            let certificate = match &report.uncertified {
                Some(reason) => CertificateSection { status: "uncertified", reason: Some(reason.clone()), levels: Vec::new() },
                None => CertificateSection {
                    status: "certified",
                    reason: None,
                    levels: report
                        .rows
                        .iter()
                        .filter_map(|r| r.certificate.map(|c| LevelCertificate::new(r.level, &c, plan.settings.solve.tol, r.elman_ok)))
                        .collect(),
                },
            };
            (Some(report.measure.to_string()), certificate, report.warnings.clone())
        }
        Outcome::Identity(_) => (
            None,
            CertificateSection {
                status: "uncertified",
                reason: Some("identity checks assemble operators but solve no system".into()),
                levels: Vec::new(),
            },
            Vec::new(),
        ),
    };
    let m = Manifest {
        run: RunInfo {
            package: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            manifest_format: 1,
            experiment: plan.kind.name(),
            csv,
            error_measure,
            threads,
            warnings,
        },
        resolved: Resolved {
            dim: plan.mesh.dim(),
            elements: plan.mesh.n_elements(),
            alpha: output.couplings.alpha,
            beta: output.couplings.beta,
            log_scale: output.log_scale,
        },
        certificate,
        config: resolved_config,
    };
    toml::to_string(&m).map_err(|e| Error::Config(format!("writing manifest: {e}")))
}

/// Available geometries, formulations and field kinds.
pub fn builtins_listing() -> String {
    let mut s = String::from("geometries (geometry.builtin):\n");
    for b in Builtin::ALL {
        let params: Vec<String> = b.parameters().iter().map(|(k, d)| format!("{k} = {d}")).collect();
        s += &format!("  {:<15} {}\n", b.name(), params.join("; "));
    }
    s += "  mesh files      geometry.mesh = \"path\" (BIE-MESH text format)\n";
    s += "\nformulations:\n";
    s += &format!("  formulation.equation  {}\n", [Equation::Laplace, Equation::Helmholtz].map(|e| e.to_string()).join(", "));
    s += &format!("  formulation.regime    {}\n", [Regime::Interior, Regime::Exterior].map(|e| e.to_string()).join(", "));
    s += &format!("  formulation.style     {}\n", [Style::Direct, Style::Indirect].map(|e| e.to_string()).join(", "));
    s += "  formulation.variant\n";
    for (v, what) in [
        (Variant::General, "1/2 (Z.n) I + sigma K_Z' + alpha S (any dimension)"),
        (Variant::TwodProjected, "Q A Q + beta P with the mean-value projection P (2-d)"),
        (Variant::TwodStar, "star field, alpha = 0, plus sigma |Gamma|/(4 pi) P (2-d)"),
        (Variant::Baseline, "classical 1/2 I -/+ D' and 1/2 I -/+ D, no certificate"),
    ] {
        s += &format!("    {:<15} {what}\n", v.to_string());
    }
    s += "  formulation.eta       star_combined (k|x - x0| + i eta_alpha), a number, or [re, im] (helmholtz)\n";
    s += "\nfield kinds (field.kind):\n";
    for f in FieldName::ALL {
        s += &format!("  {:<15} {}\n", f.name(), f.description());
    }
    s += "\nexperiments (experiment.kind): solve, convergence, conditioning, identity_checks\n";
    s
}
