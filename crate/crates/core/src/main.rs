use std::path::PathBuf;
use std::process::ExitCode;

use clap::builder::PossibleValuesParser;
use clap::Parser;

use decoupled_mix::pipeline::{load_manifest, run_batch, GridSpec, ImageFormat, Mode, RunConfig};
use decoupled_mix::PhaseSource;

const EXIT_ITEM_FAILED: u8 = 1;
const EXIT_INVALID: u8 = 2;

/// Batch Mixup-family augmentation over an image manifest.
#[derive(Debug, Parser)]
#[command(name = "decoupled-mix", version)]
struct Cli {
    /// Mixing operator.
    #[arg(long, value_parser = PossibleValuesParser::new(["mixup", "cutmix", "fd", "cd", "style"]))]
    mode: String,
    /// Input manifest (JSON lines, header first).
    #[arg(long)]
    manifest: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Shape of the symmetric Beta distribution for lambda_v.
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Common-pattern weight. Defaults to 0.2 (0.6 is the second track
    /// profile); context mode defaults to 1.
    #[arg(long)]
    alpha: Option<f64>,
    /// Fix lambda_v instead of sampling it.
    #[arg(long = "lambda-v")]
    lambda_v: Option<f64>,
    /// Fix lambda_delta instead of sampling it.
    #[arg(long = "lambda-delta")]
    lambda_delta: Option<f64>,
    #[arg(long = "phase-source", default_value = "first",
          value_parser = PossibleValuesParser::new(["first", "second"]))]
    phase_source: String,
    /// Parameter sweep "l1,l2,...xa1,a2,..." rendered for the first pair.
    #[arg(long)]
    grid: Option<String>,
    /// Output image format.
    #[arg(long, default_value = "png", value_parser = PossibleValuesParser::new(["png", "ppm"]))]
    format: String,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

fn build_config(cli: &Cli) -> Result<RunConfig, String> {
    let mode: Mode = cli.mode.parse().map_err(|e| format!("{e}"))?;
    let mut config = RunConfig::new(mode, cli.out.clone());
    config.seed = cli.seed;
    config.beta_shape = cli.beta;
    config.alpha = cli.alpha.unwrap_or_else(|| mode.default_alpha());
    config.fixed_lambda_v = cli.lambda_v;
    config.fixed_lambda_delta = cli.lambda_delta;
    config.phase_source = cli.phase_source.parse::<PhaseSource>().map_err(|e| e.to_string())?;
    config.format = cli.format.parse::<ImageFormat>().map_err(|e| e.to_string())?;
    config.jobs = cli.jobs;
    config.grid = cli.grid.as_deref().map(str::parse::<GridSpec>).transpose().map_err(|e| e.to_string())?;
    config.validate().map_err(|e| e.to_string())?;
    Ok(config)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("DECOUPLED_MIX_LOG", "warn")).init();
    let cli = Cli::parse();

    let config = match build_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID);
        }
    };
    let manifest = match load_manifest(&cli.manifest) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {}: {e}", cli.manifest.display());
            return ExitCode::from(EXIT_INVALID);
        }
    };
    match run_batch(&config, &manifest) {
        Ok(report) if report.all_succeeded() => {
            println!("{} items written to {}", report.succeeded, config.output_dir.display());
            ExitCode::SUCCESS
        }
        Ok(report) => {
            eprintln!(
                "{} of {} items failed; see {}",
                report.failed.len(),
                report.items,
                config.output_dir.join("report.json").display()
            );
            ExitCode::from(EXIT_ITEM_FAILED)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
