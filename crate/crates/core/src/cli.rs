//! Command-line front end.
//!
//! Every subcommand writes CSV files plus a JSON sidecar holding the
//! effective parameters into the output directory. Exit codes: 0 on success,
//! 2 for invalid input, 1 for solver or I/O failures.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::Result;
use crate::markov::{gradient_field, insurer_profit, solve, stationary, TransitionModel};
use crate::montecarlo::{simulate, total_variation, RNG_NAME};
use crate::output::{
    fmt_f64, metadata, write_distribution, write_gradient, write_json, write_summary, CsvFile,
};
use crate::sweeps::{optimal_premium, sweep_grid};

#[derive(Debug, Parser)]
#[command(
    name = "riskdyn",
    version,
    about = "Risk-pool vs index-insurance evolutionary dynamics"
)]
pub struct Cli {
    /// TOML run configuration; defaults apply when omitted.
    #[arg(long, short, global = true)]
    pub config: Option<PathBuf>,

    /// Override a model parameter, e.g. `--set alpha=0.5`. Repeatable.
    #[arg(long = "set", value_name = "NAME=VALUE", global = true)]
    pub overrides: Vec<String>,

    /// Output directory (overrides `[output] dir`).
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads for sweeps and kernel assembly.
    #[arg(long, env = "RISKDYN_THREADS", global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Stationary distribution and adoption rates.
    Stationary,
    /// Selection gradient at every state.
    Gradient,
    /// Grid sweep over one or two parameters.
    Sweep,
    /// Insurer profit over a premium grid.
    Premium,
    /// Monte Carlo simulation of the same process.
    Mc {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        steps: Option<u64>,
        #[arg(long)]
        burnin: Option<u64>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Stationary => "stationary",
            Command::Gradient => "gradient",
            Command::Sweep => "sweep",
            Command::Premium => "premium",
            Command::Mc { .. } => "mc",
        }
    }
}

/// Parses `args` (program name first) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(files) => {
            for f in files {
                println!("wrote {}", f.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Resolves the effective configuration: file (or defaults), then overrides.
pub fn effective_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    for o in &cli.overrides {
        cfg.model.apply_override(o)?;
    }
    if let Some(dir) = &cli.out {
        cfg.output.dir = dir.clone();
    }
    if let Command::Mc {
        seed,
        steps,
        burnin,
    } = &cli.command
    {
        if let Some(s) = seed {
            cfg.mc.seed = *s;
        }
        if let Some(s) = steps {
            cfg.mc.steps = *s;
        }
        if let Some(b) = burnin {
            cfg.mc.burnin = *b;
        }
    }
    Ok(cfg)
}

pub fn execute(cli: &Cli) -> Result<Vec<PathBuf>> {
    if let Some(n) = cli.threads {
        // a second call in the same process keeps the existing pool
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let cfg = effective_config(cli)?;
    let dir = cfg.output.dir.clone();
    let mut meta = metadata(cli.command.name(), &cfg.model);
    meta["solver"] = serde_json::to_value(&cfg.solver).expect("serializable");
    let files = match &cli.command {
        Command::Stationary => cmd_stationary(&cfg, &dir, &mut meta)?,
        Command::Gradient => cmd_gradient(&cfg, &dir, &mut meta)?,
        Command::Sweep => cmd_sweep(&cfg, &dir, &mut meta)?,
        Command::Premium => cmd_premium(&cfg, &dir, &mut meta)?,
        Command::Mc { .. } => cmd_mc(&cfg, &dir, &mut meta)?,
    };
    let sidecar = write_json(&dir, &format!("{}.json", cli.command.name()), &meta)?;
    Ok(files.into_iter().chain(std::iter::once(sidecar)).collect())
}

fn cmd_stationary(cfg: &RunConfig, dir: &Path, meta: &mut Value) -> Result<Vec<PathBuf>> {
    let (model, res) = solve(&cfg.model, cfg.solver.options())?;
    meta["residual"] = json!(res.residual);
    meta["method"] = json!(res.method);
    meta["adoption"] = json!(res.adoption);
    meta["argmax"] = json!(res.adoption.argmax().to_string());
    Ok(vec![
        write_distribution(dir, "stationary.csv", model.space(), &res.probs)?,
        write_summary(dir, "stationary_summary.csv", res.adoption, res.residual)?,
    ])
}

fn cmd_gradient(cfg: &RunConfig, dir: &Path, meta: &mut Value) -> Result<Vec<PathBuf>> {
    let model = TransitionModel::build(&cfg.model)?;
    let field = gradient_field(&model);
    meta["states"] = json!(field.vectors.len());
    Ok(vec![write_gradient(dir, "gradient.csv", &field)?])
}

fn cmd_sweep(cfg: &RunConfig, dir: &Path, meta: &mut Value) -> Result<Vec<PathBuf>> {
    let spec = cfg.sweep_spec();
    let rows = sweep_grid(&spec)?;
    let mut header: Vec<&str> = spec.axes.iter().map(|a| a.name.as_str()).collect();
    header.extend(["p_S", "p_I", "p_A", "profit", "argmax"]);
    let mut csv = CsvFile::create(dir, "sweep.csv", &header)?;
    let mut files = Vec::new();
    let mut errors = Vec::new();
    let mut residuals = Vec::new();
    for (k, row) in rows.iter().enumerate() {
        let mut fields: Vec<String> = row.axis_values.iter().map(|(_, v)| fmt_f64(*v)).collect();
        match &row.outcome {
            Ok(pt) => {
                fields.extend([
                    fmt_f64(pt.adoption.s),
                    fmt_f64(pt.adoption.i),
                    fmt_f64(pt.adoption.a),
                    fmt_f64(pt.profit),
                    pt.argmax.to_string(),
                ]);
                residuals.push(json!(pt.residual));
                let space = crate::markov::StateSpace::new(row.params.z, row.params.strategies);
                if let Some(probs) = &pt.stationary {
                    files.push(write_distribution(
                        dir,
                        &format!("sweep_point_{k}_stationary.csv"),
                        &space,
                        probs,
                    )?);
                }
                if let Some(field) = &pt.gradient {
                    files.push(write_gradient(
                        dir,
                        &format!("sweep_point_{k}_gradient.csv"),
                        field,
                    )?);
                }
            }
            Err(msg) => {
                fields.extend(["NaN", "NaN", "NaN", "NaN", "invalid"].map(String::from));
                residuals.push(Value::Null);
                errors.push(json!({ "row": k, "error": msg }));
            }
        }
        csv.row(&fields)?;
    }
    meta["axes"] = json!(spec.axes);
    meta["mode"] = json!(spec.mode);
    meta["residuals"] = Value::Array(residuals);
    meta["errors"] = Value::Array(errors);
    let mut out = vec![csv.finish()?];
    out.extend(files);
    Ok(out)
}

fn cmd_premium(cfg: &RunConfig, dir: &Path, meta: &mut Value) -> Result<Vec<PathBuf>> {
    let grid = cfg.premium.grid()?;
    let curve = optimal_premium(&cfg.model, &grid, cfg.solver.options())?;
    let mut csv = CsvFile::create(
        dir,
        "premium.csv",
        &["c", "p_S", "p_I", "p_A", "profit", "argmax"],
    )?;
    for pt in &curve.points {
        csv.row(&[
            fmt_f64(pt.c),
            fmt_f64(pt.adoption.s),
            fmt_f64(pt.adoption.i),
            fmt_f64(pt.adoption.a),
            fmt_f64(pt.profit),
            pt.argmax.to_string(),
        ])?;
    }
    meta["premium"] = json!(cfg.premium);
    meta["c_star"] = json!(curve.c_star());
    meta["max_profit"] = json!(curve.max_profit());
    meta["interior_maximizer"] = json!(curve.is_interior());
    meta["skipped"] = json!(curve.skipped);
    meta["residuals"] = json!(curve.points.iter().map(|p| p.residual).collect::<Vec<_>>());
    Ok(vec![csv.finish()?])
}

fn cmd_mc(cfg: &RunConfig, dir: &Path, meta: &mut Value) -> Result<Vec<PathBuf>> {
    let sim_cfg = cfg.mc.sim_config(&cfg.model);
    let sim = simulate(&cfg.model, &sim_cfg)?;
    let model = TransitionModel::build(&cfg.model)?;
    let empirical_residual = crate::markov::residual(&model, &sim.freqs);
    meta["mc"] = json!({
        "rng": RNG_NAME,
        "seed": sim_cfg.seed,
        "steps": sim_cfg.steps,
        "burnin": sim_cfg.burnin,
        "thinning": sim_cfg.thinning,
        "initial": [sim_cfg.initial.s, sim_cfg.initial.i],
        "samples": sim.samples,
    });
    if cfg.model.mu > 0.0 {
        let exact = stationary(&model, cfg.solver.options())?;
        let tv = total_variation(&sim.freqs, &exact.probs);
        meta["tv_distance_to_exact"] = json!(tv);
        meta["exact_adoption"] = json!(exact.adoption);
    }
    meta["adoption"] = json!(sim.adoption);
    meta["profit"] = json!(insurer_profit(sim.adoption.i, &cfg.model));
    Ok(vec![
        write_distribution(dir, "mc.csv", &sim.space, &sim.freqs)?,
        write_summary(dir, "mc_summary.csv", sim.adoption, empirical_residual)?,
    ])
}
