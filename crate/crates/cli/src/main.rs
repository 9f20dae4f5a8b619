//! `sigmatorus run` executes one JSON job; `sigmatorus sweep` runs a file of
//! newline-delimited jobs in parallel and prints one result per line plus a
//! summary.
//!
//! Exit codes: 0 decided, 2 inconclusive (budget ran out), 1 input error.

mod jobs;

use std::fs;
use std::io::{self, Write};
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context as _;
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use jobs::{execute, parse_job, Context, JobError, Status};

const TOOL: &str = "sigmatorus";

#[derive(Parser)]
#[command(name = "sigmatorus", version, about = "Decision procedures for difference equations on tori")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a single job.
    Run(RunArgs),
    /// Run every line of a newline-delimited job file.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct Common {
    /// Default seed for jobs that do not carry one.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Multiplies every iteration budget.
    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    budget_scale: f64,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add wall-clock time to each report (makes output nondeterministic).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, conflicts_with = "inline", required_unless_present = "inline")]
    job: Option<PathBuf>,
    #[arg(long)]
    inline: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SweepArgs {
    file: PathBuf,
    #[command(flatten)]
    common: Common,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(r) if r.is_finite() && r > 0.0 => Ok(r),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

/// Parses and runs one job, catching panics so a sweep survives them.
fn run_one(text: &str, common: &Common) -> (Status, Value) {
    let ctx = Context { seed: common.seed, budget_scale: common.budget_scale };
    let start = Instant::now();
    let mut env = Map::new();
    env.insert("tool".into(), TOOL.into());
    env.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    let result = parse_job(text).and_then(|job| {
        env.insert("command".into(), job.command.to_string().into());
        env.insert("seed".into(), job.seed.unwrap_or(ctx.seed).into());
        env.insert("params".into(), job.params.clone());
        log::info!("running {}", job.command);
        panic::catch_unwind(AssertUnwindSafe(|| execute(&job, &ctx))).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            Err(JobError::Internal(msg))
        })
    });
    let status = match result {
        Ok(out) => {
            env.insert("status".into(), serde_json::to_value(out.status).expect("status"));
            env.insert("report".into(), out.report);
            out.status
        }
        Err(e) => {
            log::warn!("job failed: {e}");
            env.insert("status".into(), "error".into());
            env.insert("error".into(), e.to_json());
            Status::Error
        }
    };
    if common.timing {
        env.insert("elapsed_ms".into(), (start.elapsed().as_secs_f64() * 1e3).into());
    }
    (status, Value::Object(env))
}

fn exit_code(s: Status) -> u8 {
    match s {
        Status::Decided => 0,
        Status::Inconclusive => 2,
        Status::Error => 1,
    }
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn io_error(e: &anyhow::Error) -> ExitCode {
    let v = json!({ "tool": TOOL, "version": env!("CARGO_PKG_VERSION"), "status": "error", "error": { "kind": "io", "message": format!("{e:#}") } });
    println!("{v}");
    ExitCode::from(1)
}

fn cmd_run(args: &RunArgs) -> anyhow::Result<u8> {
    let text = match (&args.job, &args.inline) {
        (Some(path), _) => fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?,
        (None, Some(s)) => s.clone(),
        (None, None) => unreachable!("clap requires --job or --inline"),
    };
    let (status, env) = run_one(&text, &args.common);
    let mut text = serde_json::to_string_pretty(&env)?;
    text.push('\n');
    emit(args.common.out.as_deref(), &text)?;
    Ok(exit_code(status))
}

fn cmd_sweep(args: &SweepArgs) -> anyhow::Result<u8> {
    let text = fs::read_to_string(&args.file).with_context(|| format!("reading {}", args.file.display()))?;
    let lines: Vec<(usize, &str)> = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()).collect();
    let results: Vec<(Status, Value)> = lines
        .par_iter()
        .map(|(i, line)| {
            let (status, mut env) = run_one(line, &args.common);
            env["line"] = (i + 1).into();
            (status, env)
        })
        .collect();
    let count = |s: Status| results.iter().filter(|(r, _)| *r == s).count();
    let summary = json!({ "summary": {
        "total": results.len(),
        "decided": count(Status::Decided),
        "inconclusive": count(Status::Inconclusive),
        "errors": count(Status::Error),
    }});
    let mut out = String::new();
    for (_, env) in &results {
        out.push_str(&serde_json::to_string(env)?);
        out.push('\n');
    }
    out.push_str(&summary.to_string());
    out.push('\n');
    emit(args.common.out.as_deref(), &out)?;
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Cmd::Run(a) => cmd_run(a),
        Cmd::Sweep(a) => cmd_sweep(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => io_error(&e),
    }
}
