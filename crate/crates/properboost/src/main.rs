//! The `properboost` experiment CLI.
//!
//! Three subcommands:
//!
//! - `sweep` — train (loss, model) pairs over a γ×η grid of Long–Servedio
//!   datasets, write a CSV of the results, optionally render SVG panels.
//! - `ideal` — minimize the population surrogate over linear separators
//!   directly (no boosting) on one noisy dataset and report the optimum.
//! - `bound` — evaluate the weak-learning iteration bound for a model class.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numeric failure, 1 I/O
//! error.

use clap::{Args, Parser, Subcommand};
use properboost::booster::{ModelClass, RunConfig};
use properboost::datasets::{n_from_eta, LsDatasetSpec};
use properboost::experiments::{
    compute_rate_bound, emit_csv, emit_svg, ideal_linear_minimizer, logspace, run_sweep,
    RateExtras, SvgPanel, SweepConfig, SweepRecord,
};
use properboost::losses::{make_loss, LossKind};
use properboost::{Error, Result};
use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "properboost",
    version,
    about = "Proper-loss boosting over partition-linear models on the \
             Long–Servedio noisy datasets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train over a gamma x eta grid and emit CSV (and optional SVG panels).
    Sweep(SweepArgs),
    /// Minimize the linear surrogate directly (no boosting) on one dataset.
    Ideal(IdealArgs),
    /// Evaluate the weak-learning iteration bound for a model class.
    Bound(BoundArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated losses: matusita, log, square, asym1.
    #[arg(long, value_delimiter = ',', default_value = "square")]
    loss: Vec<LossKind>,
    /// Comma-separated model classes: ls, dt, adt, knn, lbp.
    #[arg(long, value_delimiter = ',', default_value = "ls")]
    model: Vec<ModelClass>,
    /// Log-spaced margin grid as lo:hi:n.
    #[arg(long, default_value = "1e-3:0.5:40")]
    gamma_grid: String,
    /// Comma-separated noise rates; each maps to N = round(1/eta) - 1 copies.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.25,0.4")]
    eta: Vec<f64>,
    /// Rotation angle applied to every dataset.
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    /// Iteration budget per training run.
    #[arg(long, default_value_t = 64)]
    iters: usize,
    /// Weak-learning edge threshold.
    #[arg(long, default_value_t = 1e-3)]
    gamma_wl: f64,
    /// Height multiplier K of the puller observation.
    #[arg(long = "K", default_value_t = 5.0)]
    big_k: f64,
    /// Neighborhood size for the knn model class.
    #[arg(long, default_value_t = 1)]
    knn_k: u64,
    /// Outdegree for the adt model class.
    #[arg(long, default_value_t = 2)]
    adt_outdegree: u64,
    /// Merge-floor parameter for the lbp model class.
    #[arg(long, default_value_t = 0.5)]
    lbp_beta: f64,
    /// Output CSV path.
    #[arg(long, default_value = "results.csv")]
    out: PathBuf,
    /// SVG panel spec `panel:path` with panel one of accuracy, posterior,
    /// calls; repeatable. Requires the sweep to cover exactly one
    /// (loss, model) pair per file.
    #[arg(long = "svg")]
    svg: Vec<String>,
}

#[derive(Args)]
struct IdealArgs {
    /// Loss to minimize: matusita, log, square, asym1.
    #[arg(long)]
    loss: LossKind,
    /// Margin parameter of the dataset.
    #[arg(long)]
    gamma: f64,
    /// Copy count N (noise rate eta = 1/(N+1)).
    #[arg(long = "N", conflicts_with = "eta")]
    n_copies: Option<u64>,
    /// Noise rate; maps to N = round(1/eta) - 1.
    #[arg(long, conflicts_with = "n_copies")]
    eta: Option<f64>,
    /// Height multiplier K of the puller observation.
    #[arg(long = "K", default_value_t = 5.0)]
    big_k: f64,
    /// Rotation angle of the dataset.
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
}

#[derive(Args)]
struct BoundArgs {
    /// Model class the bound is for: ls, dt, adt, knn, lbp.
    #[arg(long)]
    model: ModelClass,
    /// Loss entering the bound: matusita, log, square, asym1.
    #[arg(long)]
    loss: LossKind,
    /// Target surrogate suboptimality.
    #[arg(long)]
    epsilon: f64,
    /// Margin level at which the weight floor is evaluated.
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    /// Weak-learning edge threshold.
    #[arg(long, default_value_t = 1e-3)]
    gamma_wl: f64,
    /// Sample size (knn bound).
    #[arg(long, default_value_t = 16)]
    m: u64,
    /// Least reciprocal-neighborhood multiplicity (knn bound).
    #[arg(long, default_value_t = 4)]
    k_rec: u64,
    /// Outdegree (adt bound).
    #[arg(long, default_value_t = 4)]
    adt_n: u64,
    /// Merge-floor exponent in (0,1) (lbp bound).
    #[arg(long, default_value_t = 0.5)]
    lbp_c: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Sweep(args) => cmd_sweep(args),
        Command::Ideal(args) => cmd_ideal(args),
        Command::Bound(args) => cmd_bound(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("properboost: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn parse_gamma_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Config(format!(
            "--gamma-grid expects lo:hi:n, got '{s}'"
        )));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| Error::Config(format!("--gamma-grid: bad lower bound '{}'", parts[0])))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| Error::Config(format!("--gamma-grid: bad upper bound '{}'", parts[1])))?;
    let n: usize = parts[2]
        .parse()
        .map_err(|_| Error::Config(format!("--gamma-grid: bad point count '{}'", parts[2])))?;
    logspace(lo, hi, n)
}

fn parse_svg_spec(s: &str) -> Result<(SvgPanel, PathBuf)> {
    let (panel, path) = s.split_once(':').ok_or_else(|| {
        Error::Config(format!("--svg expects panel:path, got '{s}'"))
    })?;
    Ok((SvgPanel::from_str(panel)?, PathBuf::from(path)))
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let gammas = parse_gamma_grid(&args.gamma_grid)?;
    let cfg = SweepConfig {
        big_k: args.big_k,
        theta: args.theta,
        run: RunConfig {
            max_iters: args.iters,
            gamma_wl: args.gamma_wl,
            adt_outdegree: args.adt_outdegree,
            knn_k: args.knn_k,
            lbp_beta: args.lbp_beta,
            ..RunConfig::default()
        },
    };
    let svg_specs = args
        .svg
        .iter()
        .map(|s| parse_svg_spec(s))
        .collect::<Result<Vec<_>>>()?;

    let records: Vec<SweepRecord> =
        run_sweep(&args.loss, &args.model, &gammas, &args.eta, &cfg)?;

    let file = File::create(&args.out)?;
    emit_csv(&records, BufWriter::new(file))?;
    eprintln!(
        "properboost: wrote {} records to {}",
        records.len(),
        args.out.display()
    );
    for (panel, path) in svg_specs {
        let file = File::create(&path)?;
        emit_svg(&records, panel, BufWriter::new(file))?;
        eprintln!(
            "properboost: wrote {panel} panel to {}",
            path.display()
        );
    }
    Ok(())
}

fn cmd_ideal(args: IdealArgs) -> Result<()> {
    let n = match (args.n_copies, args.eta) {
        (Some(n), None) => n,
        (None, Some(eta)) => n_from_eta(eta)?,
        (None, None) => {
            return Err(Error::Config(
                "ideal: pass exactly one of --N or --eta".to_string(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap enforces the conflict"),
    };
    let loss = make_loss(args.loss);
    let spec = LsDatasetSpec::new(args.gamma, args.big_k, n, args.theta)?;
    let result = ideal_linear_minimizer(&loss, &spec)?;
    println!("loss            = {}", loss.name());
    println!("gamma           = {}", spec.gamma);
    println!("eta             = {}", spec.eta());
    println!("theta_star      = ({}, {})", result.theta[0], result.theta[1]);
    println!("clean_accuracy  = {}", result.clean_accuracy);
    println!("surrogate       = {}", result.surrogate);
    println!("steps           = {}", result.steps);
    println!("grad_norm       = {:e}", result.grad_norm);
    Ok(())
}

fn cmd_bound(args: BoundArgs) -> Result<()> {
    let loss = make_loss(args.loss);
    let extras = RateExtras {
        m: args.m,
        k_rec: args.k_rec,
        adt_n: args.adt_n,
        lbp_c: args.lbp_c,
    };
    let bound = compute_rate_bound(
        args.model,
        &loss,
        args.epsilon,
        args.theta,
        args.gamma_wl,
        &extras,
    )?;
    println!("{bound}");
    Ok(())
}
