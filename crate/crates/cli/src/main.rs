//! `orlicz-lab`: runs one scenario and writes a JSON report.
//!
//! Exit status is 0 when every asserted invariant holds, 1 when one fails
//! and 2 on errors.

mod complexes;
mod config;
mod report;
mod scenarios;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context as _, Result};
use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use config::{overlay, FileConfig};
use report::{Outcome, Report};
use scenarios::*;

#[derive(Parser, Debug)]
#[command(name = "orlicz-lab", version, about = "Orlicz cohomology laboratory")]
struct Cli {
    /// Scenario configuration (TOML or JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for randomized scenarios.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Tolerance for the scenario's main check.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Report path (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// CSV path for the scenario's plot series, when it has one.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Luxemburg norm of a finite function.
    Norm(NormArgs),
    /// Cohomology dimensions and coboundary continuity of a complex.
    Cohomology(CohomologyArgs),
    /// Norm-minimising representative of a cohomology class.
    Reduced(ReducedArgs),
    /// Chain maps, prisms and induced maps for a quasi-isometry.
    QiCheck(QiArgs),
    /// Averaged Poincaré homotopy on the unit disc.
    Poincare(PoincareArgs),
    /// Čech–de Rham zig-zag on the flat torus.
    Zigzag(ZigzagArgs),
    /// Convolution bounds, commutation with d and operator ratios.
    Convolve(ConvolveArgs),
    /// The Cartan identity for the flow homotopy.
    Cartan(CartanArgs),
    /// Piecewise-summable function with divergent global norm.
    Bourdon(BourdonArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Norm(_) => "norm",
            Command::Cohomology(_) => "cohomology",
            Command::Reduced(_) => "reduced",
            Command::QiCheck(_) => "qi-check",
            Command::Poincare(_) => "poincare",
            Command::Zigzag(_) => "zigzag",
            Command::Convolve(_) => "convolve",
            Command::Cartan(_) => "cartan",
            Command::Bourdon(_) => "bourdon",
        }
    }

    fn flags(&self) -> Result<Value> {
        Ok(match self {
            Command::Norm(a) => serde_json::to_value(a)?,
            Command::Cohomology(a) => serde_json::to_value(a)?,
            Command::Reduced(a) => serde_json::to_value(a)?,
            Command::QiCheck(a) => serde_json::to_value(a)?,
            Command::Poincare(a) => serde_json::to_value(a)?,
            Command::Zigzag(a) => serde_json::to_value(a)?,
            Command::Convolve(a) => serde_json::to_value(a)?,
            Command::Cartan(a) => serde_json::to_value(a)?,
            Command::Bourdon(a) => serde_json::to_value(a)?,
        })
    }
}

fn typed<A: DeserializeOwned + Serialize>(params: Map<String, Value>, scenario: &str) -> Result<(A, Value)> {
    let args: A = serde_json::from_value(Value::Object(params))
        .with_context(|| format!("invalid parameters for scenario '{scenario}'"))?;
    let echo = serde_json::to_value(&args)?;
    Ok((args, strip_nulls(echo)))
}

fn strip_nulls(v: Value) -> Value {
    match v {
        Value::Object(m) => Value::Object(m.into_iter().filter(|(_, v)| !v.is_null()).collect()),
        other => other,
    }
}

fn dispatch(scenario: &str, params: Map<String, Value>, ctx: &RunContext) -> Result<(Outcome, Value)> {
    macro_rules! go {
        ($args:ty, $run:path) => {{
            let (a, echo) = typed::<$args>(params, scenario)?;
            ($run(&a, ctx).with_context(|| format!("scenario '{scenario}' failed"))?, echo)
        }};
    }
    Ok(match scenario {
        "norm" => go!(NormArgs, norm),
        "cohomology" => go!(CohomologyArgs, cohomology),
        "reduced" => go!(ReducedArgs, reduced),
        "qi-check" => go!(QiArgs, qi_check),
        "poincare" => go!(PoincareArgs, poincare),
        "zigzag" => go!(ZigzagArgs, zigzag),
        "convolve" => go!(ConvolveArgs, convolve),
        "cartan" => go!(CartanArgs, cartan),
        "bourdon" => go!(BourdonArgs, bourdon),
        other => bail!("unknown scenario '{other}'"),
    })
}

fn run(cli: Cli) -> Result<bool> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let scenario = match (&cli.command, &file.scenario) {
        (Some(c), Some(s)) if c.name() != s => bail!("config is for scenario '{s}' but '{}' was requested", c.name()),
        (Some(c), _) => c.name().to_string(),
        (None, Some(s)) => s.clone(),
        (None, None) => bail!("no scenario: give a subcommand or a config with `scenario`"),
    };
    let flags = match &cli.command {
        Some(c) => c.flags()?,
        None => Value::Null,
    };
    let params = overlay(file.params.clone(), flags);
    let tol = cli.tol.or(file.tol);
    if let Some(t) = tol {
        if !(t > 0.0) {
            bail!("tolerance must be positive, got {t}");
        }
    }
    let ctx = RunContext { seed: cli.seed.or(file.seed), tol };
    if let Some(j) = cli.jobs.or(file.jobs) {
        rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global().context("configuring worker threads")?;
    }
    let start = Instant::now();
    let (outcome, echo) = dispatch(&scenario, params, &ctx)?;
    let pass = outcome.checks.iter().all(|c| c.pass);
    let report = Report {
        scenario: scenario.clone(),
        seed: ctx.seed,
        tol: ctx.tol,
        params: echo,
        values: outcome.values,
        checks: outcome.checks,
        pass,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    let text = serde_json::to_string_pretty(&report)?;
    match cli.out.as_ref().or(file.out.as_ref()) {
        Some(p) => std::fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display()))?,
        None => {
            let mut out = std::io::stdout().lock();
            if let Err(e) = writeln!(out, "{text}") {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    return Err(e.into());
                }
            }
        }
    }
    if let Some(p) = cli.csv.as_ref().or(file.csv.as_ref()) {
        match &outcome.series {
            Some(s) => s.write(p)?,
            None => eprintln!("scenario '{scenario}' has no series; {} not written", p.display()),
        }
    }
    for c in report.checks.iter().filter(|c| !c.pass) {
        eprintln!("FAILED {}: {}", c.name, c.value);
    }
    Ok(pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
