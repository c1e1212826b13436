use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use colad_cli::artifacts::ArtifactDir;
use colad_cli::pipeline::report;
use colad_cli::{
    cmd_synth, load_synth_config, run_pipeline, CliError, ConfigFile, Result, RunConfig, Stage,
};

#[derive(Parser)]
#[command(
    name = "colad",
    version,
    about = "Collective anomaly detection on traffic time series with an LSTM"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bin a capture or raw series CSV, fit the scaler, write scaled splits
    Ingest(PipelineArgs),
    /// Generate a labeled synthetic series
    Synth(SynthArgs),
    /// Train one model per horizon count on the training split
    Train(PipelineArgs),
    /// Choose PET on the validation split and CR from the attack duration
    Calibrate(PipelineArgs),
    /// Score validation and test splits and extract anomaly regions
    Detect(PipelineArgs),
    /// Summarize the detection reports as a table
    Report(PipelineArgs),
    /// ingest, train, calibrate, detect and report in one go
    Run(PipelineArgs),
}

#[derive(Args)]
struct PipelineArgs {
    /// Run configuration file (flat key = value)
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated horizon counts, e.g. 1,2,3
    #[arg(long, value_delimiter = ',')]
    horizons: Option<Vec<usize>>,
    /// Bin width in seconds
    #[arg(long)]
    interval: Option<u64>,
    /// packets, bytes or tcp_syn
    #[arg(long)]
    metric: Option<String>,
    #[arg(long)]
    start_time: Option<u64>,
    #[arg(long)]
    end_time: Option<u64>,
    /// Train, validation and test fractions, e.g. 0.5,0.25,0.25
    #[arg(long, value_delimiter = ',')]
    split: Option<Vec<f64>>,
    #[arg(long)]
    hidden: Option<usize>,
    #[arg(long)]
    learning_rate: Option<f64>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    momentum: Option<f64>,
    #[arg(long)]
    bptt_window: Option<usize>,
    #[arg(long)]
    grid_min: Option<f64>,
    #[arg(long)]
    grid_max: Option<f64>,
    #[arg(long)]
    grid_step: Option<f64>,
    /// Fraction of validation steps that must stay at or below PET
    #[arg(long)]
    q: Option<f64>,
    /// Shortest attack to detect, in seconds; sets CR
    #[arg(long)]
    min_attack_duration: Option<u64>,
}

impl PipelineArgs {
    fn resolve(self) -> Result<RunConfig> {
        let file = match &self.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let flags = ConfigFile {
            input: self.input,
            out_dir: self.out,
            metric: self.metric,
            interval_seconds: self.interval,
            start_time: self.start_time,
            end_time: self.end_time,
            split: self.split,
            horizons: self.horizons,
            hidden_size: self.hidden,
            learning_rate: self.learning_rate,
            epochs: self.epochs,
            momentum: self.momentum,
            batch_size: None,
            bptt_window: self.bptt_window,
            init_scale: None,
            grid_min: self.grid_min,
            grid_max: self.grid_max,
            grid_step: self.grid_step,
            q: self.q,
            min_attack_duration_seconds: self.min_attack_duration,
            seed: self.seed,
        };
        file.merge(flags).resolve()
    }
}

#[derive(Args)]
struct SynthArgs {
    /// Synthetic series configuration (TOML)
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
}

fn run(cli: Cli) -> Result<()> {
    let (args, stages): (PipelineArgs, &[Stage]) = match cli.command {
        Command::Synth(args) => {
            let text = std::fs::read_to_string(&args.config).map_err(|e| {
                CliError::InvalidConfig(format!("cannot read {}: {e}", args.config.display()))
            })?;
            let mut config = load_synth_config(&text)?;
            if let Some(seed) = args.seed {
                config.seed = seed;
            }
            return cmd_synth(&config, &ArtifactDir::new(args.out));
        }
        Command::Report(args) => {
            let config = args.resolve()?;
            print!("{}", report(&config, &ArtifactDir::new(&config.out_dir))?);
            return Ok(());
        }
        Command::Ingest(args) => (args, &[Stage::Ingest]),
        Command::Train(args) => (args, &[Stage::Train]),
        Command::Calibrate(args) => (args, &[Stage::Calibrate]),
        Command::Detect(args) => (args, &[Stage::Detect]),
        Command::Run(args) => (args, &Stage::PIPELINE),
    };
    let config = args.resolve()?;
    run_pipeline(&config, stages)?;
    if stages.contains(&Stage::Report) {
        print!(
            "{}",
            std::fs::read_to_string(config.out_dir.join(colad_cli::artifacts::SUMMARY))
                .unwrap_or_default()
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
