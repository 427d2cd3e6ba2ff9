use clap::Parser;
use sed_core::config::{defaults_document, parse_config, Experiment};
use sed_core::experiments::run_experiment;
use std::path::PathBuf;
use std::process::ExitCode;

/// Environment override for the output directory; `--out` takes precedence.
const OUTPUT_DIR_ENV: &str = "SED_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "sedsim", version, about = "Stochastic-electrodynamics experiments")]
struct Cli {
    /// vacuum-sample | oscillator-run | commutator-sum | nelson-run | hlike-ground
    experiment: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override `[run] seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Enforce the experiment's tolerances; exit 2 if any fails.
    #[arg(long)]
    check: bool,
    /// Print the annotated default configuration and exit.
    #[arg(long)]
    print_defaults: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.print_defaults {
        print!("{}", defaults_document());
        return ExitCode::SUCCESS;
    }
    let Some(name) = cli.experiment else {
        return fail("missing experiment name");
    };
    let experiment: Experiment = match name.parse() {
        Ok(e) => e,
        Err(e) => return fail(e),
    };
    let Some(path) = cli.config else {
        return fail("missing --config <path>");
    };
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => return fail(format!("cannot read {}: {e}", path.display())),
    };
    let mut rc = match parse_config(&text) {
        Ok(rc) => rc,
        Err(e) => return fail(e),
    };
    if rc.experiment != experiment {
        return fail(format!(
            "config describes experiment `{}` but `{experiment}` was requested",
            rc.experiment
        ));
    }
    if let Some(seed) = cli.seed {
        rc.seed = seed;
    }
    if let Some(dir) = std::env::var_os(OUTPUT_DIR_ENV) {
        rc.output_dir = PathBuf::from(dir);
    }
    if let Some(dir) = cli.out {
        rc.output_dir = dir;
    }
    let outcome = match run_experiment(&rc) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    for c in &outcome.checks {
        println!(
            "{} {}: value {:.10e}, target {:.10e}, tolerance {:.3e}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.value,
            c.target,
            c.tolerance
        );
    }
    println!("wrote {} files to {}", outcome.files.len(), rc.output_dir.display());
    if cli.check && !outcome.all_passed() {
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}
