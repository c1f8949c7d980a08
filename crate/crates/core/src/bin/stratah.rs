use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use stratah::io::{
    analyze, parse_dataset, parse_methods, render_analysis_json, render_analysis_table,
    render_simulation_json, render_simulation_table, AnalysisConfig, OutputFormat, WeightChoice,
};
use stratah::sim::{run_simulation, SimScenario};
use stratah::stratified::VarianceForm;
use stratah::{Error, Result};

#[derive(Parser)]
#[command(version, about = "Stratified average hazard analysis and simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a subject-level dataset (columns time, status, arm, stratum).
    Analyze {
        #[arg(long)]
        data: PathBuf,
        /// Truncation time.
        #[arg(long)]
        tau: f64,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Comma-separated subset of proposed, conventional, cmh1, cmh2.
        #[arg(long, default_value = "proposed,conventional,cmh1,cmh2")]
        method: String,
        /// equal, size, or comma-separated positive weights in stratum order.
        #[arg(long, default_value = "size")]
        weights: String,
        /// Label of the control arm in the `arm` column.
        #[arg(long)]
        control: String,
        #[arg(long, default_value_t = 100, value_parser = parse_unit)]
        unit: u32,
        #[arg(long, default_value = "table")]
        format: String,
        /// Use the influence-function variance instead of the default form.
        #[arg(long)]
        influence_variance: bool,
    },
    /// Run a Monte Carlo study described by a scenario file.
    Simulate {
        #[arg(long)]
        scenario: PathBuf,
        /// Override the number of replicates.
        #[arg(long)]
        reps: Option<usize>,
        /// Override the base seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "table")]
        format: String,
    },
}

fn parse_unit(s: &str) -> std::result::Result<u32, String> {
    match s {
        "1" => Ok(1),
        "100" => Ok(100),
        _ => Err("unit must be 1 or 100".into()),
    }
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Analyze {
            data,
            tau,
            alpha,
            method,
            weights,
            control,
            unit,
            format,
            influence_variance,
        } => {
            let dataset = parse_dataset(&read(&data)?, &control)?;
            let config = AnalysisConfig {
                tau,
                alpha,
                methods: parse_methods(&method)?,
                weights: weights.parse::<WeightChoice>()?,
                unit_scale: f64::from(unit),
                format: format.parse()?,
                variance_form: if influence_variance {
                    VarianceForm::Influence
                } else {
                    VarianceForm::Published
                },
            };
            let report = analyze(&dataset, &config)?;
            Ok(match config.format {
                OutputFormat::Table => render_analysis_table(&report),
                OutputFormat::Json => render_analysis_json(&report),
            })
        }
        Command::Simulate {
            scenario,
            reps,
            seed,
            format,
        } => {
            let format: OutputFormat = format.parse()?;
            let mut sc = SimScenario::from_toml_str(&read(&scenario)?)?;
            if let Some(r) = reps {
                sc.replications = r;
            }
            if let Some(s) = seed {
                sc.seed = s;
            }
            sc.validate()?;
            let result = run_simulation(&sc)?;
            Ok(match format {
                OutputFormat::Table => render_simulation_table(&result, 100.0),
                OutputFormat::Json => render_simulation_json(&sc, &result),
            })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
