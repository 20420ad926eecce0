use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use coarray_doa::experiments::{output, run_eta_statistics, run_overload_demo, run_sweep, ExperimentConfig};
use coarray_doa::geometry::{ArrayGeometry, GeometryKind};

#[derive(Parser)]
#[command(name = "doa", version, about = "Coarray DOA estimation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo OSPA sweep
    Run(RunArgs),
    /// Statistics of the first coarray error-term entry
    EtaStats(RunArgs),
    /// More-sources-than-sensors demonstration
    Overload(RunArgs),
    /// Print sensor positions, coarray lags and DoF
    Geometry {
        kind: GeometryKind,
        n: usize,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON experiment file
    config: PathBuf,
    /// Monte Carlo trials (overrides the config)
    #[arg(long)]
    trials: Option<usize>,
    /// Master seed (overrides the config)
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Worker threads (0 = all cores)
    #[arg(long)]
    workers: Option<usize>,
    /// Record wall time in the `seconds` column
    #[arg(long)]
    timing: bool,
}

impl RunArgs {
    fn load(&self) -> coarray_doa::Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::from_file(&self.config)?;
        if let Some(t) = self.trials {
            cfg.trials = t;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(w) = self.workers {
            cfg.workers = w;
        }
        cfg.record_timing |= self.timing;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn report(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn run(cli: Cli) -> coarray_doa::Result<()> {
    match cli.command {
        Command::Run(args) => {
            let cfg = args.load()?;
            let r = run_sweep(&cfg)?;
            for s in &r.series {
                let cells: Vec<String> = r
                    .axis_values
                    .iter()
                    .zip(&s.ospa)
                    .map(|(x, o)| format!("{x}:{o:.4}"))
                    .collect();
                println!("{:<28} {}", s.label, cells.join(" "));
            }
            report(&output::save_sweep(&r, &args.out)?);
        }
        Command::EtaStats(args) => {
            let cfg = args.load()?;
            let s = run_eta_statistics(&cfg)?;
            println!("lag {}  trials {}", s.lag, s.trials);
            for c in &s.cells {
                println!(
                    "T={:<5} mean=({:+.3e},{:+.3e}) var={:.4e} oracle={:.4e}",
                    c.snapshots, c.mean.re, c.mean.im, c.variance, c.oracle_variance
                );
            }
            report(&output::save_eta_statistics(&s, &cfg.name, &args.out)?);
        }
        Command::Overload(args) => {
            let cfg = args.load()?;
            let r = run_overload_demo(&cfg)?;
            println!(
                "median sources recovered within 2 bins: {} of {}",
                r.median_recovered(),
                r.truth_bins.len()
            );
            report(&output::save_overload(&r, &cfg.name, &args.out)?);
        }
        Command::Geometry { kind, n } => {
            let g = ArrayGeometry::build(kind, n)?;
            let idx = g.coarray();
            println!("kind       {kind}");
            println!("positions  {:?}", g.positions());
            println!("aperture   {}", g.aperture());
            println!("lags       {:?}", idx.lags());
            println!("dof        {}", idx.dof());
            println!("contiguous -{0}..{0}", idx.contiguous_half_width());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
