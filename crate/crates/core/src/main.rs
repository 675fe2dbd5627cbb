use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tsforge::config::{LstmMode, Overrides, RunConfig};
use tsforge::pipeline::{self, RunSummary};
use tsforge::synth::{generate_synthetic, write_synthetic, RegimeParams};
use tsforge::Error;

/// Compare an LSTM network and a seasonal ARIMA model on daily closing prices.
#[derive(Debug, Parser)]
#[command(name = "tsforge", version)]
struct Cli {
    /// Log progress to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train both engines, forecast the test segment and score the forecasts.
    Run(RunArgs),
    /// Write a synthetic primary/secondary pair of CSV files.
    Generate(GenerateArgs),
    /// Check a config file and its inputs without training.
    Validate(RunArgs),
    /// Fit and forecast with the SARIMA engine only.
    FitSarima(RunArgs),
    /// Train and forecast with the LSTM engine only.
    TrainLstm(RunArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; overrides the file's `output_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    epochs: Option<usize>,
    /// one-step, recursive or both.
    #[arg(long)]
    mode: Option<LstmMode>,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            output_dir: self.out.clone(),
            epochs: self.epochs,
            mode: self.mode,
        }
    }
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 501)]
    days: usize,
    #[arg(long)]
    out: PathBuf,
    /// Correlation of the two series' daily shocks.
    #[arg(long)]
    rho: Option<f64>,
    /// Probability that a secondary trading day is missing.
    #[arg(long)]
    drop_probability: Option<f64>,
    /// TOML file of regime parameters; flags win over it.
    #[arg(long)]
    params: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = if cli.verbose {
        log::LevelFilter::Info
    } else {
        log::LevelFilter::Error
    };
    log::set_max_level(level);
    let _ = log::set_logger(&StderrLogger);

    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn execute(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Run(args) => {
            let config = RunConfig::from_file(&args.config, &args.overrides())?;
            finish(pipeline::run(&config)?)
        }
        Command::FitSarima(args) => {
            let config = RunConfig::from_file(&args.config, &args.overrides())?;
            finish(pipeline::run_sarima(&config)?)
        }
        Command::TrainLstm(args) => {
            let config = RunConfig::from_file(&args.config, &args.overrides())?;
            finish(pipeline::run_lstm(&config)?)
        }
        Command::Validate(args) => {
            let issues = pipeline::validate(&args.config, &args.overrides());
            for issue in &issues {
                println!("{issue}");
            }
            if issues.iter().any(|i| i.is_error()) {
                Ok(ExitCode::from(1))
            } else {
                println!("ok");
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Generate(args) => {
            let mut params = match &args.params {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|_| Error::MissingFile(path.clone()))?;
                    toml::from_str(&text)
                        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
                }
                None => RegimeParams::default(),
            };
            if let Some(rho) = args.rho {
                params.correlation = rho;
            }
            if let Some(p) = args.drop_probability {
                params.drop_probability = p;
            }
            let data = generate_synthetic(args.seed, args.days, &params)?;
            let (primary, secondary) = write_synthetic(&data, &args.out)?;
            println!("{}", primary.display());
            println!("{}", secondary.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn finish(summary: RunSummary) -> Result<ExitCode, Error> {
    for warning in &summary.warnings {
        eprintln!("warning: {warning}");
    }
    if let Some(report) = &summary.report {
        print!("{}", report.tables_text());
    }
    for file in &summary.files {
        println!("wrote {}", file.display());
    }
    Ok(ExitCode::SUCCESS)
}

struct StderrLogger;

impl log::Log for StderrLogger {
    fn enabled(&self, metadata: &log::Metadata) -> bool {
        metadata.level() <= log::max_level()
    }

    fn log(&self, record: &log::Record) {
        if self.enabled(record.metadata()) {
            eprintln!(
                "{}: {}",
                record.level().to_string().to_lowercase(),
                record.args()
            );
        }
    }

    fn flush(&self) {}
}
