//! Command-line driver: `run <config>` executes an experiment and writes its
//! CSV and manifest; `list-builtins` prints the available options.
//!
//! Exit codes: 2 for unreadable or unparseable configurations, 3 for
//! validation errors, 4 for solver failures.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use coercive_bie::config::RunConfig;
use coercive_bie::{report, run, Error};

#[derive(Parser)]
#[command(version, about = "Galerkin BEM for coercive second-kind integral equations")]
struct Cli {
    /// Worker threads for assembly (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory for the CSV and manifest.
    #[arg(long, global = true, default_value = ".")]
    output_dir: PathBuf,
    /// Reserved; no component of a run is randomised.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML configuration file.
    Run { config: PathBuf },
    /// List built-in geometries, formulations and field kinds.
    ListBuiltins,
}

const EXIT_PARSE: u8 = 2;
const EXIT_VALIDATION: u8 = 3;
const EXIT_SOLVER: u8 = 4;

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn library_failure(e: Error) -> ExitCode {
    let code = match e {
        Error::Stagnation { .. } | Error::NotConverged { .. } | Error::ElmanBoundViolated { .. } | Error::SingularSystem => EXIT_SOLVER,
        _ => EXIT_VALIDATION,
    };
    fail(code, e)
}

fn run_config(path: &Path, output_dir: &Path) -> ExitCode {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_PARSE, format!("{}: {e}", path.display())),
    };
    let config = match RunConfig::parse(&text) {
        Ok(c) => c,
        Err(e) => return fail(EXIT_PARSE, format!("{}: {e}", path.display())),
    };
    let base = path.parent().unwrap_or(Path::new("."));
    let plan = match config.validate(base) {
        Ok(p) => p,
        Err(e) => return library_failure(e),
    };
    let output = match run::execute(&plan) {
        Ok(o) => o,
        Err(e) => return library_failure(e),
    };
    print!("{}", report::summary(&output));
    let csv_name = config.resolved(plan.mesh.dim()).experiment.output.expect("resolved");
    let csv_path = output_dir.join(&csv_name);
    let manifest_path = csv_path.with_extension("manifest.toml");
    let written = report::output_csv(&output).and_then(|csv| {
        let manifest = report::manifest(&config, &plan, &output, rayon::current_num_threads())?;
        let io = |path: &Path| {
            let path = path.to_path_buf();
            move |source| Error::Io { path, source }
        };
        if let Some(dir) = csv_path.parent() {
            fs::create_dir_all(dir).map_err(io(dir))?;
        }
        fs::write(&csv_path, csv).map_err(io(&csv_path))?;
        fs::write(&manifest_path, manifest).map_err(io(&manifest_path))
    });
    if let Err(e) = written {
        return library_failure(e);
    }
    println!("wrote {} and {}", csv_path.display(), manifest_path.display());
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            return fail(EXIT_VALIDATION, "--threads must be at least 1");
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return fail(EXIT_VALIDATION, e);
        }
    }
    match cli.command {
        Command::ListBuiltins => {
            print!("{}", report::builtins_listing());
            ExitCode::SUCCESS
        }
        Command::Run { config } => run_config(&config, &cli.output_dir),
    }
}
