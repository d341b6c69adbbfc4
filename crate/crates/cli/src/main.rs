//! Batch front-end: load a TOML run configuration, dispatch the experiment,
//! and serialize the report. Exit status 0 means every row is clean, 1
//! flags degenerate rows or solver trouble, 2 is a configuration or I/O
//! failure.

mod config;
mod report;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::RunConfig;

#[derive(Parser, Debug)]
#[command(
    name = "smoothness-lab",
    about = "Approximation processes vs. smoothness: two-sided inequality reports and sharpness experiments",
    version
)]
struct Cli {
    /// Path to the TOML run configuration.
    #[arg(long)]
    config: PathBuf,

    /// Output path (defaults to the config's `output.path`, else stdout).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Output format override.
    #[arg(long, value_parser = ["csv", "json"])]
    format: Option<String>,

    /// Seed override for randomized families.
    #[arg(long)]
    seed: Option<u64>,

    /// Dyadic level range override, e.g. `1..6` (inclusive).
    #[arg(long)]
    levels: Option<String>,

    /// Grid size override (power of two).
    #[arg(long)]
    grid: Option<usize>,
}

fn parse_levels(text: &str) -> anyhow::Result<(usize, usize)> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| anyhow::anyhow!("--levels expects `a..b`, got `{text}`"))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn configure_threads() {
    if let Ok(v) = std::env::var("SMOOTHNESS_LAB_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
}

fn execute(cli: Cli) -> anyhow::Result<u8> {
    let text = std::fs::read_to_string(&cli.config)
        .map_err(|e| anyhow::anyhow!("cannot read config {}: {e}", cli.config.display()))?;
    let mut raw: config::RawConfig =
        toml::from_str(&text).map_err(|e| anyhow::anyhow!("config error: {e}"))?;

    // command-line overrides land before validation
    if let Some(seed) = cli.seed {
        raw.seed = Some(seed);
    }
    if let Some(grid) = cli.grid {
        raw.grid = Some(grid);
    }
    if let Some(levels) = &cli.levels {
        let (a, b) = parse_levels(levels)?;
        raw.levels.start = Some(a);
        raw.levels.end = Some(b);
    }
    if let Some(fmt) = &cli.format {
        raw.output.format = Some(fmt.clone());
    }
    if let Some(out) = &cli.out {
        raw.output.path = Some(out.clone());
    }

    let mut cfg = RunConfig::from_raw(raw)?;
    let outcome = run::run_command(&mut cfg)?;

    // the echo map may have grown while resolving defaults; rebuild the header
    let mut report = outcome.report;
    report.header = cfg.echo.clone();

    let path = cfg.out_path.clone();
    report
        .write(cfg.format, path.as_deref())
        .map_err(|e| anyhow::anyhow!("cannot write report: {e}"))?;

    if outcome.flagged_rows > 0 || outcome.solver_errors > 0 {
        eprintln!(
            "completed with {} flagged row(s), {} solver issue(s)",
            outcome.flagged_rows, outcome.solver_errors
        );
        Ok(1)
    } else {
        Ok(0)
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
