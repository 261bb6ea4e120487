use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use momap_cli::{exit_code, output, run, CliError, Command, ExampleId, ExperimentConfig};

#[derive(Parser)]
#[command(name = "momap", version, about = "Momentum-map experiments: verification suites, Kirwan flow, Hessians, decompositions, cocycles")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    #[command(flatten)]
    opts: Opts,
}

#[derive(clap::Args)]
struct Opts {
    /// galilean, heisenberg, virasoro, siegel, unitary or user-algebra-file.
    #[arg(long, global = true)]
    example: Option<String>,
    /// TOML experiment config.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for report.json, CSV tables and plots.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Replace every check tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Print the JSON report on stdout instead of the summary.
    #[arg(long, global = true)]
    json: bool,
    /// Also write SVG plots (needs --out).
    #[arg(long, global = true)]
    svg: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Sub {
    /// Run every check suite for the example.
    Verify,
    /// Gradient descent on ‖J‖² and classification of the endpoint.
    Critical,
    /// Hessian checks at a critical point.
    Hessian,
    /// Stabilizer eigendecomposition at a critical point.
    Decompose,
    /// Cocycle and central extension checks.
    Cocycle,
}

fn config(opts: &Opts) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &opts.config {
        Some(p) => ExperimentConfig::from_file(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(e) = &opts.example {
        cfg.example = e.parse::<ExampleId>()?;
    }
    if let Some(s) = opts.seed {
        cfg.seed = s;
    }
    if let Some(t) = opts.tol {
        cfg.tol = Some(t);
    }
    if let Some(o) = &opts.out {
        cfg.output.dir = Some(o.clone());
    }
    cfg.output.svg |= opts.svg;
    cfg.validate()?;
    Ok(cfg)
}

fn main_inner(cli: Cli) -> Result<i32, CliError> {
    let cfg = config(&cli.opts)?;
    let cmd = match cli.command {
        Sub::Verify => Command::Verify,
        Sub::Critical => Command::Critical,
        Sub::Hessian => Command::Hessian,
        Sub::Decompose => Command::Decompose,
        Sub::Cocycle => Command::Cocycle,
    };
    let started = Instant::now();
    let report = run(cmd, &cfg)?;
    eprintln!("{} {}: {:.3} s", cmd.as_str(), cfg.example, started.elapsed().as_secs_f64());
    if cli.opts.json {
        print!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    if let Some(dir) = &cfg.output.dir {
        for p in output::write_all(&report, dir, cfg.output.svg)? {
            eprintln!("wrote {}", p.display());
        }
    } else if cfg.output.svg {
        eprintln!("--svg has no effect without --out");
    }
    Ok(exit_code(&report))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match main_inner(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("momap: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
