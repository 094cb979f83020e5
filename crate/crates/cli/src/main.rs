//! Command-line front end for the focal-scheme laboratory.
//!
//! Each stage of the pipeline is independently invocable: curve
//! generation and validation, per-fiber first- and second-order focal
//! analysis, the residual fiber-conic experiment, the reconstruction
//! check, and full presets.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use foci_core::curve::{
    feasibility_params, random_nodal_curve_budget, validate_curve, NodalPlaneCurve,
};
use foci_core::experiment::{
    fiber_rnc_experiment, run_curve_opts, run_experiment, torelli_reconstruct, ExperimentConfig,
    Preset,
};
use foci_core::DEFAULT_PRIME;

#[derive(Parser)]
#[command(
    name = "foci",
    about = "Exact experiments on focal schemes of secant families",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GlobalOpts {
    /// Prime modulus of the ground field.
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u32,
    /// Master seed.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Accepted fibers per curve.
    #[arg(long, default_value_t = 30)]
    fibers: usize,
    /// Hilbert function cutoff.
    #[arg(long, default_value_t = 5)]
    tmax: usize,
    /// Worker threads (defaults to the rayon global pool).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random nodal plane model and write its curve file.
    Gen {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        opts: GlobalOpts,
    },
    /// Re-verify the invariants of a curve file.
    Validate {
        curve: PathBuf,
        #[command(flatten)]
        opts: GlobalOpts,
    },
    /// First-order focal analysis of the pencil fibers of a curve file.
    Focal {
        curve: PathBuf,
        #[command(flatten)]
        opts: GlobalOpts,
    },
    /// First- plus second-order analysis (includes the psi pipeline).
    SecondOrder {
        curve: PathBuf,
        #[command(flatten)]
        opts: GlobalOpts,
    },
    /// Residual fiber-conic experiment on a curve file.
    FiberRnc {
        curve: PathBuf,
        #[command(flatten)]
        opts: GlobalOpts,
    },
    /// Reconstruction check on a curve file.
    Torelli {
        curve: PathBuf,
        #[command(flatten)]
        opts: GlobalOpts,
    },
    /// Run a named preset end to end and write the full report.
    Preset {
        /// One of: g5d4, g6d5, g7d5, g8d6, paper-g8-conic.
        name: String,
        #[command(flatten)]
        opts: GlobalOpts,
    },
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Gen { g, d, opts } => {
            let params = feasibility_params(g, d)?;
            let curve = random_nodal_curve_budget(&params, opts.prime, opts.seed, 50)?;
            emit(&opts.out, curve.to_json())
        }
        Command::Validate { curve, opts } => {
            let curve = load_curve(&curve)?;
            let report = validate_curve(&curve);
            let ok = report.all_pass();
            let mut json = serde_json::to_string_pretty(&report.checks)?;
            json.push('\n');
            emit(&opts.out, json)?;
            if !ok {
                bail!("validation failed: {:?}", report.failed());
            }
            Ok(())
        }
        Command::Focal { curve, opts } => fiber_table(&curve, &opts, false),
        Command::SecondOrder { curve, opts } => fiber_table(&curve, &opts, true),
        Command::FiberRnc { curve, opts } => {
            let curve = load_curve(&curve)?;
            let config = curve_config(&curve, &opts);
            let params = config.validate()?;
            let out = with_pool(opts.threads, || {
                let run =
                    run_curve_opts(curve, &params, config.fibers_per_curve, config.t_max, false)?;
                let reference = run
                    .accepted
                    .first()
                    .ok_or_else(|| foci_core::LabError::Other("no accepted fibers".into()))?;
                let table =
                    fiber_rnc_experiment(&run.frame, &params, reference, &run.accepted[1..]);
                Ok(serde_json::to_string_pretty(&table).expect("serializable") + "\n")
            })?;
            emit(&opts.out, out)
        }
        Command::Torelli { curve, opts } => {
            let curve = load_curve(&curve)?;
            let config = curve_config(&curve, &opts);
            let params = config.validate()?;
            let out = with_pool(opts.threads, || {
                let run =
                    run_curve_opts(curve, &params, config.fibers_per_curve, config.t_max, true)?;
                let summary = torelli_reconstruct(
                    &params,
                    &run.accepted,
                    &run.seconds,
                    run.vertex.as_ref(),
                    config.p,
                );
                Ok(serde_json::to_string_pretty(&summary).expect("serializable") + "\n")
            })?;
            emit(&opts.out, out)
        }
        Command::Preset { name, opts } => {
            let preset =
                Preset::from_name(&name).ok_or_else(|| anyhow!("unknown preset {:?}", name))?;
            let mut config = preset.config(opts.seed);
            config.p = opts.prime;
            config.t_max = opts.tmax;
            config.threads = opts.threads;
            let report = run_experiment(&config)?;
            emit(&opts.out, report.to_json())
        }
    }
}

fn fiber_table(path: &PathBuf, opts: &GlobalOpts, second_order: bool) -> Result<()> {
    let curve = load_curve(path)?;
    let config = curve_config(&curve, opts);
    let params = config.validate()?;
    let out = with_pool(opts.threads, || {
        let run = run_curve_opts(
            curve,
            &params,
            config.fibers_per_curve,
            config.t_max,
            second_order,
        )?;
        let mut lines = Vec::new();
        for (i, a) in run.accepted.iter().enumerate() {
            let mut line = format!(
                "t={} class={:?} generic={} contained={}",
                a.fiber.param.label(),
                a.report.classification,
                a.one_generic.is_generic(),
                a.report.divisor_contained,
            );
            if let Some(s) = &run.seconds[i] {
                line.push_str(&format!(
                    " second_degree={:?} partition={}",
                    s.foci.total_degree, s.partition.pass
                ));
            }
            lines.push(line);
        }
        let skips: Vec<String> = run
            .skips
            .iter()
            .map(|(k, v)| format!("{}={}", k, v))
            .collect();
        lines.push(format!("skipped: {}", skips.join(" ")));
        Ok(lines.join("\n") + "\n")
    })?;
    emit(&opts.out, out)
}

fn load_curve(path: &PathBuf) -> Result<NodalPlaneCurve> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading curve file {}", path.display()))?;
    Ok(NodalPlaneCurve::from_json(&text)?)
}

fn curve_config(curve: &NodalPlaneCurve, opts: &GlobalOpts) -> ExperimentConfig {
    ExperimentConfig {
        g: curve.g,
        d: curve.d,
        p: curve.p,
        master_seed: opts.seed,
        curves: 1,
        fibers_per_curve: opts.fibers.max(10),
        t_max: opts.tmax,
        curve_retry_budget: 50,
        threads: opts.threads,
    }
}

fn with_pool<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> Result<T, foci_core::LabError> + Send,
) -> Result<T> {
    match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build()?;
            Ok(pool.install(f)?)
        }
        None => Ok(f()?),
    }
}

fn emit(out: &Option<PathBuf>, text: String) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
        }
        None => print!("{}", text),
    }
    Ok(())
}
