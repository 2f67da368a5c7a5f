use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{info, warn};

use fracterm_cli::output::{fmt_f64, Table};
use fracterm_cli::{pipeline, CliError, Command, ExperimentConfig, Result, RunOptions};
use fracterm_core::{fit_bound_constants, MLParams, MlEvaluator};

/// Spectral solver for terminal value problems of time-fractional wave
/// equations.
#[derive(Debug, Parser)]
#[command(name = "fracterm", version)]
struct Cli {
    /// Experiment configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides the configured one.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for independent tasks (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Mittag-Leffler function utilities.
    #[command(subcommand)]
    Ml(MlCmd),
    /// Inspect the configured eigenbasis.
    #[command(subcommand)]
    Basis(BasisCmd),
    /// Check the hypotheses of the configured problem without solving.
    Validate,
    /// Solve the terminal value problem and write the report.
    Solve,
    /// Solve, reconstruct u(0) and march forward to T.
    Roundtrip,
    /// Solve and fit the blow-up rate and the Hölder modulus.
    Regularity,
    /// Evaluate the explicit constants only.
    Constants,
}

#[derive(Debug, Subcommand)]
enum MlCmd {
    /// Evaluate E_{α,β}(z) at one point.
    Eval {
        #[command(flatten)]
        p: MlArgs,
        #[arg(long, allow_hyphen_values = true)]
        z: f64,
    },
    /// Tabulate E_{α,β}(-t) on a log grid and report the bound constants.
    Scan {
        #[command(flatten)]
        p: MlArgs,
        #[arg(long, default_value_t = 1e3)]
        t_max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
}

#[derive(Debug, Args)]
struct MlArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
}

#[derive(Debug, Subcommand)]
enum BasisCmd {
    /// Print dimension, eigenvalues and the Weyl constant.
    Info,
}

fn init_logging() {
    let level = match std::env::var("FRACTERM_LOG").as_deref() {
        Ok("quiet") => log::LevelFilter::Error,
        Ok("debug") => log::LevelFilter::Debug,
        _ => log::LevelFilter::Info,
    };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).target(env_logger::Target::Stderr).init();
}

fn load(cli: &Cli) -> Result<ExperimentConfig> {
    let path = cli.config.as_ref().ok_or_else(|| CliError::Config {
        field: "--config".into(),
        message: "this command needs a configuration file".into(),
    })?;
    ExperimentConfig::load(path)
}

fn stdout_table(t: &Table) -> Result<()> {
    std::io::stdout().write_all(&t.to_bytes()).map_err(|e| CliError::Io { path: PathBuf::from("<stdout>"), source: e })
}

fn ml(cmd: &MlCmd) -> Result<bool> {
    match cmd {
        MlCmd::Eval { p, z } => {
            let ev = MlEvaluator::new(MLParams::new(p.alpha, p.beta)?);
            let v = ev.eval(*z)?;
            let mut t = Table::new(&["alpha", "beta", "z", "value", "error_bound", "branch"]);
            t.push(vec![
                fmt_f64(p.alpha),
                fmt_f64(p.beta),
                fmt_f64(*z),
                fmt_f64(v.value),
                fmt_f64(v.error_bound),
                v.branch.name().into(),
            ]);
            stdout_table(&t)?;
        }
        MlCmd::Scan { p, t_max, points } => {
            let ev = MlEvaluator::new(MLParams::new(p.alpha, p.beta)?);
            let mut t = Table::new(&["t", "value", "error_bound", "branch"]);
            let n = (*points).max(2);
            let lo = (t_max * 1e-6).ln();
            for i in 0..n {
                let x = (lo + (t_max.ln() - lo) * i as f64 / (n - 1) as f64).exp();
                let v = ev.eval_neg(x);
                t.push(vec![fmt_f64(x), fmt_f64(v.value), fmt_f64(v.error_bound), v.branch.name().into()]);
            }
            stdout_table(&t)?;
            let b = fit_bound_constants(p.alpha, p.beta, *t_max, n.max(400))?;
            info!("m = {}, M = {}", fmt_f64(b.m_alpha), fmt_f64(b.big_m_alpha));
            if let Some(z) = b.first_zero {
                warn!("E(-t) changes sign at t = {}; no positive lower constant", fmt_f64(z));
            }
        }
    }
    Ok(true)
}

fn basis_info(cfg: &ExperimentConfig) -> Result<bool> {
    let basis = cfg.basis()?;
    println!("dimension: {}", basis.dimension());
    println!("modes: {}", basis.len());
    println!("weyl_constant: {}", fmt_f64(basis.weyl_constant()));
    if let Some(m) = basis.collocation_points() {
        println!("collocation_points: {m}");
    }
    let mut t = Table::new(&["j", "lambda"]);
    for (j, l) in basis.lambdas().iter().enumerate() {
        t.push(vec![(j + 1).to_string(), fmt_f64(*l)]);
    }
    stdout_table(&t)?;
    Ok(true)
}

fn validate(cfg: &ExperimentConfig, seed: u64) -> Result<bool> {
    let preds = pipeline::validate(cfg, seed)?;
    let mut ok = true;
    for p in &preds {
        let tag = match (p.pass, p.advisory) {
            (true, _) => "PASS",
            (false, true) => "WARN",
            (false, false) => {
                ok = false;
                "FAIL"
            }
        };
        if p.message.is_empty() {
            println!("{tag} {}.{}", p.group, p.id);
        } else {
            println!("{tag} {}.{}: {}", p.group, p.id, p.message);
        }
    }
    Ok(ok)
}

fn execute(cli: &Cli) -> Result<bool> {
    let cmd = match &cli.command {
        Cmd::Ml(m) => return ml(m),
        Cmd::Basis(BasisCmd::Info) => return basis_info(&load(cli)?),
        Cmd::Validate => return validate(&load(cli)?, cli.seed),
        Cmd::Solve => Command::Solve,
        Cmd::Roundtrip => Command::Roundtrip,
        Cmd::Regularity => Command::Regularity,
        Cmd::Constants => Command::Constants,
    };
    let cfg = load(cli)?;
    let opts = RunOptions { out: cli.out.clone(), seed: cli.seed };
    let summary = pipeline::run(&cfg, cmd, &opts)?;
    for r in &summary.report {
        let tag = match (r.pass, r.is_advisory()) {
            (true, _) => "PASS",
            (false, true) => "WARN",
            (false, false) => "FAIL",
        };
        println!("{tag} {} {} / {}", r.id, fmt_f64(r.lhs), fmt_f64(r.rhs));
    }
    info!("wrote {} files to {}", summary.files.len(), summary.out_dir.display());
    Ok(summary.pass())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_logging();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            warn!("thread pool already initialised: {e}");
        }
    }
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(e.exit_code())
        }
    }
}
