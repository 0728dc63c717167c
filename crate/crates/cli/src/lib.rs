//! Command-line pipelines over recording, feature, segment, and survey
//! files. [`main_with`] is the whole program; the binary only forwards its
//! arguments.

pub mod args;
pub mod commands;
pub mod error;
pub mod formats;
pub mod manifest;

use blinkforge::pipeline::PipelineConfig;
use clap::Parser;

use crate::args::{Cli, Command};
use crate::commands::{dispatch, parse_json, Ctx};
use crate::error::{CliError, Result};
use crate::manifest::{read_bytes, sha256_hex, Manifest, Run};

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "BLINKFORGE_THREADS";

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got `{raw}`")))?;
    // Fails only when a pool already exists, as in repeated in-process runs.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn load_config(path: Option<&str>, run: &mut Run) -> Result<PipelineConfig> {
    let Some(path) = path else {
        return Ok(PipelineConfig::default());
    };
    let cfg: PipelineConfig = parse_json(&run.read(path)?, path)?;
    cfg.search
        .validate()
        .map_err(|e| CliError::data(path, e.to_string()))?;
    Ok(cfg)
}

/// Runs one command given the arguments after the program name.
pub fn execute(args: &[String]) -> Result<()> {
    let argv = std::iter::once("blinkforge".to_string()).chain(args.iter().cloned());
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError::Usage(e.to_string()))?;
    if let Command::Replay(r) = &cli.command {
        return replay(&r.manifest);
    }
    let mut run = Run::default();
    let config = load_config(cli.config.as_deref(), &mut run)?;
    let ctx = Ctx {
        seed: cli.seed,
        config,
    };
    dispatch(&ctx, &mut run, cli.command)?;
    run.finish(args.to_vec(), cli.seed, config)
}

fn check_digest(path: &str, want: &str) -> Result<bool> {
    Ok(sha256_hex(&read_bytes(path)?) == want)
}

/// Reruns the recorded arguments after checking the inputs are unchanged,
/// then requires every output to match its recorded digest.
fn replay(manifest_path: &str) -> Result<()> {
    let text = String::from_utf8(read_bytes(manifest_path)?)
        .map_err(|_| CliError::data(manifest_path, "manifest is not UTF-8 text"))?;
    let m: Manifest = parse_json(&text, manifest_path)?;
    if m.args.first().map(String::as_str) == Some("replay") {
        return Err(CliError::data(manifest_path, "manifest records a replay"));
    }
    for input in &m.inputs {
        if !check_digest(&input.path, &input.sha256)? {
            return Err(CliError::data(&input.path, "input differs from the recorded run"));
        }
    }
    execute(&m.args)?;
    for output in &m.outputs {
        if !check_digest(&output.path, &output.sha256)? {
            return Err(CliError::Internal(format!(
                "{} differs from the recorded run",
                output.path
            )));
        }
    }
    Ok(())
}

/// Whole program: parses `args`, runs, reports errors on stderr, and
/// returns the exit code.
pub fn main_with(args: Vec<String>) -> i32 {
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    let argv = std::iter::once("blinkforge".to_string()).chain(args.iter().cloned());
    if let Err(e) = Cli::try_parse_from(argv) {
        let _ = e.print();
        return e.exit_code();
    }
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    match execute(&args) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
