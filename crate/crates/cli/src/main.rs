//! `radlab`: single runs, parameter sweeps and assumption audits.
//!
//! Exit codes: 0 when every requested check passes, 2 when a check fails,
//! 1 on configuration or runtime errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use radlab_core::lab::{self, LabConfig, Overrides};

#[derive(Parser)]
#[command(name = "radlab", about = "Radial supersonic Euler flow: solve, verify, sweep")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full pipeline for one config; writes solution, gradient and report CSVs and the manifest.
    Run(Common),
    /// One pipeline run per point of the `[sweep]` axes; writes phase.csv.
    Sweep(Common),
    /// Initial-data checks only (A1 to A4).
    Audit(Common),
    /// Print the version.
    Version,
}

#[derive(Args)]
struct Common {
    /// Config file, or a manifest from an earlier run.
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Override both the sampling resolution and the solver cell count.
    #[arg(long)]
    resolution: Option<usize>,
    /// Require A4 and apply the rarefactive bounds when it holds.
    #[arg(long, overrides_with = "no_check_a4")]
    check_a4: bool,
    #[arg(long, overrides_with = "check_a4")]
    no_check_a4: bool,
    /// Recorded in the manifest; only randomized property tests consume it.
    #[arg(long)]
    seed: Option<u64>,
}

impl Common {
    fn load(&self) -> radlab_core::Result<LabConfig> {
        let mut cfg = LabConfig::load(&self.config)?;
        let check_a4 = match (self.check_a4, self.no_check_a4) {
            (true, _) => Some(true),
            (_, true) => Some(false),
            _ => None,
        };
        cfg.apply(&Overrides { resolution: self.resolution, check_a4 });
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(c: &Common) -> radlab_core::Result<u8> {
    let cfg = c.load()?;
    let pool = rayon_pool(c.workers)?;
    let o = pool.install(|| lab::execute(&cfg))?;
    lab::write_artifacts(&o, &c.out, c.seed)?;
    print!("{}", lab::summary(&o));
    println!("artifacts in {}", c.out.display());
    Ok(o.exit_code())
}

fn sweep(c: &Common) -> radlab_core::Result<u8> {
    let cfg = c.load()?;
    let rows = lab::sweep(&cfg, c.workers)?;
    let path = lab::write_sweep(&cfg, &rows, &c.out)?;
    let failed = rows.iter().filter(|r| !r.error.is_empty()).count();
    println!("{} points ({} failed) -> {}", rows.len(), failed, path.display());
    Ok(0)
}

fn audit(c: &Common) -> radlab_core::Result<u8> {
    let cfg = c.load()?;
    let a = lab::audit(&cfg)?;
    let path = a.write_profile(&c.out)?;
    print!("{}", a.summary());
    println!("profile in {}", path.display());
    Ok(a.exit_code())
}

fn rayon_pool(workers: usize) -> radlab_core::Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| radlab_core::Error::InvalidConfig(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.cmd {
        Cmd::Run(c) => run(c),
        Cmd::Sweep(c) => sweep(c),
        Cmd::Audit(c) => audit(c),
        Cmd::Version => {
            println!("radlab {}", env!("CARGO_PKG_VERSION"));
            Ok(0)
        }
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
