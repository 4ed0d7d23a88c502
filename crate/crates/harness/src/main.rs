use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;

use uavdm_sim::{
    parse_config, run_experiment_parallel, summary_table, write_results, ExperimentConfig,
    HarnessError, OutputFormat,
};

#[derive(Parser)]
#[command(
    name = "uavdm",
    version,
    about = "Secure directional-modulation transmission along a UAV flight"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every strategy over the configured sweeps.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run with the power sweep replaced by `--powers`.
    SweepPower {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Transmit powers in dBm, comma separated.
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_hyphen_values = true
        )]
        powers: Vec<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Run with the antenna sweep replaced by `--antennas`.
    SweepAntennas {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Antenna counts, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        antennas: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Print the default configuration.
    DefaultConfig,
}

#[derive(Args)]
struct Common {
    /// Result file; overrides `output.path`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `output.format`.
    #[arg(long, value_parser = ["csv", "json"])]
    format: Option<String>,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    parallel: usize,
}

fn load(path: Option<&PathBuf>) -> Result<ExperimentConfig, HarnessError> {
    Ok(match path {
        Some(p) => parse_config(p)?,
        None => ExperimentConfig::default(),
    })
}

fn execute(mut cfg: ExperimentConfig, common: Common) -> Result<(), HarnessError> {
    if let Some(out) = common.out {
        cfg.output_path = out;
    }
    if let Some(f) = common.format {
        cfg.output_format = if f == "json" {
            OutputFormat::Json
        } else {
            OutputFormat::Csv
        };
    }
    cfg.validate()?;
    info!(
        "{} strategies x {} antenna counts x {} powers x {} points",
        cfg.strategies.len(),
        cfg.antenna_sweep.len(),
        cfg.power_sweep_dbm.len(),
        cfg.geometry.num_samples()
    );
    let results = run_experiment_parallel(&cfg, common.parallel)?;
    write_results(&results.records, cfg.output_format, &cfg.output_path)?;
    print!("{}", summary_table(&results.summaries));
    println!(
        "wrote {} records to {}",
        results.records.len(),
        cfg.output_path.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, common } => load(Some(&config)).and_then(|c| execute(c, common)),
        Command::SweepPower {
            config,
            powers,
            common,
        } => load(config.as_ref()).and_then(|mut c| {
            c.power_sweep_dbm = powers;
            execute(c, common)
        }),
        Command::SweepAntennas {
            config,
            antennas,
            common,
        } => load(config.as_ref()).and_then(|mut c| {
            c.antenna_sweep = antennas;
            execute(c, common)
        }),
        Command::DefaultConfig => {
            print!("{}", ExperimentConfig::default().to_config_string());
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
