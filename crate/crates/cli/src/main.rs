//! `gclkit` command-line front end.
//!
//! Exit codes: 0 success, 1 I/O or verification failure, 2 configuration
//! error, 3 degenerate mesh, 4 flow divergence. Errors are reported on
//! stderr as one JSON line.

mod config;
mod run;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use config::{parse_triple, Amplitude, HarmonicRange, Overrides, RunConfig};
use gclkit::verify::{run_all, VerifyOptions};

#[derive(Parser)]
#[command(name = "gclkit", version, about = "Integrated face mesh velocities and GCL checks on deforming hex meshes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Sweep harmonic counts for one motion case and write a CSV table.
    Run(RunArgs),
    /// Run the built-in property suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Args)]
struct RunArgs {
    /// TOML file with any of the settings below; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// case1..case5, rigid-translation or rigid-rotation.
    #[arg(long)]
    case: Option<String>,
    /// Comma-separated subset of lvi, aevi, avg, trimap, ts-lvi, ts-aevi.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    /// Harmonic counts, `a..b` inclusive.
    #[arg(long)]
    n: Option<HarmonicRange>,
    /// Cells per direction, `nx,ny,nz`.
    #[arg(long, value_parser = parse_triple::<usize>)]
    mesh: Option<[usize; 3]>,
    /// Box lengths, `Lx,Ly,Lz`.
    #[arg(long, value_parser = parse_triple::<f64>)]
    lengths: Option<[f64; 3]>,
    /// Motion period.
    #[arg(long)]
    period: Option<f64>,
    /// Amplitude: one value or `ax,ay,az`.
    #[arg(long)]
    amp: Option<Amplitude>,
    #[arg(long)]
    alpha0: Option<f64>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    support_radius: Option<f64>,
    /// Run the freestream solver for each row.
    #[arg(long)]
    freestream: Option<Toggle>,
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fill the wall_ms column (makes output nondeterministic).
    #[arg(long)]
    timing: bool,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            case: self.case.clone(),
            methods: self.methods.clone(),
            n: self.n,
            mesh: self.mesh,
            lengths: self.lengths,
            period: self.period,
            amp: self.amp,
            alpha0: self.alpha0,
            radius: self.radius,
            seed: self.seed,
            support_radius: self.support_radius,
            freestream: self.freestream.map(|t| matches!(t, Toggle::On)),
            cfl: self.cfl,
            max_iters: self.max_iters,
            out: self.out.clone(),
            timing: self.timing.then_some(true),
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Randomised samples per property.
    #[arg(long, default_value_t = VerifyOptions::default().samples)]
    samples: usize,
    #[arg(long, default_value_t = VerifyOptions::default().seed)]
    seed: u64,
    /// Corrupt the trilinear face flux to check the suite catches it.
    #[arg(long)]
    mutate_trimap: bool,
}

/// Error kind paired with its exit code.
fn classify(err: &anyhow::Error) -> (&'static str, u8) {
    if let Some(e) = err.downcast_ref::<gclkit::Error>() {
        return match e {
            gclkit::Error::Degenerate { .. } => ("degenerate_mesh", 3),
            gclkit::Error::Diverged { .. } | gclkit::Error::NonPhysicalState(_) => ("divergence", 4),
            _ => ("config", 2),
        };
    }
    if err.downcast_ref::<std::io::Error>().is_some() {
        return ("io", 1);
    }
    ("config", 2)
}

fn report(err: &anyhow::Error) -> ExitCode {
    let (kind, code) = classify(err);
    let line = json!({ "error": kind, "exit_code": code, "message": format!("{err:#}") });
    eprintln!("{line}");
    ExitCode::from(code)
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("GCLKIT_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| anyhow::anyhow!("GCLKIT_THREADS must be a positive integer"))?;
        if n == 0 {
            anyhow::bail!("GCLKIT_THREADS must be a positive integer");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn cmd_run(args: RunArgs) -> anyhow::Result<()> {
    let base = match &args.config {
        Some(p) => Overrides::from_file(p)?,
        None => Overrides::default(),
    };
    let cfg = RunConfig::resolve(base.layered(args.overrides()))?;
    let rows = run::run_sweep(&cfg)?;
    match &cfg.out {
        Some(path) => {
            let ctx = || format!("writing {}", path.display());
            let mut w = BufWriter::new(File::create(path).with_context(ctx)?);
            run::write_csv(&mut w, &cfg, &rows).with_context(ctx)?;
            w.flush().with_context(ctx)?;
        }
        None => {
            let mut w = std::io::stdout().lock();
            run::write_csv(&mut w, &cfg, &rows).context("writing to stdout")?;
        }
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> bool {
    let opts = VerifyOptions { mutate_trimap: args.mutate_trimap, samples: args.samples, seed: args.seed };
    let results = run_all(&opts);
    let mut ok = true;
    for r in &results {
        println!("{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
        ok &= r.passed;
    }
    let passed = results.iter().filter(|r| r.passed).count();
    println!("{passed} of {} properties passed", results.len());
    ok
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        return report(&e);
    }
    match cli.command {
        Command::Run(args) => match cmd_run(args) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => report(&e),
        },
        Command::Verify(args) => {
            if cmd_verify(args) {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
