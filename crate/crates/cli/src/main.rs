use clap::{Parser, Subcommand};
use mimo_agp_cli::{artifacts, CliError, ScenarioFile};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(version, about = "Constant-modulus MIMO radar waveform design", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the orthogonal chirp reference waveform as CSV
    GenerateReference {
        #[arg(long, default_value_t = 4)]
        num_tx: usize,
        #[arg(long, default_value_t = 16)]
        num_samples: usize,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
    /// Design a waveform for a scenario and write the artifact bundle
    Optimize {
        /// Scenario TOML; omitted means the default scenario
        #[arg(long)]
        scenario: Option<PathBuf>,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
        /// Override the scenario's similarity parameter
        #[arg(long)]
        epsilon: Option<f64>,
        /// Override the scenario's seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Monte Carlo check of a waveform's analytic SINR
    Validate {
        #[arg(long)]
        scenario: Option<PathBuf>,
        /// Waveform CSV to check
        #[arg(long)]
        waveform: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        draws: usize,
        /// Override the scenario's seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Write the normalized transmit beampattern of a waveform CSV
    Beampattern {
        #[arg(long)]
        waveform: PathBuf,
        #[arg(long, default_value_t = 4)]
        num_tx: usize,
        #[arg(long, default_value_t = 16)]
        num_samples: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load_scenario(path: Option<&PathBuf>, epsilon: Option<f64>, seed: Option<u64>) -> Result<ScenarioFile, CliError> {
    let mut scenario = match path {
        Some(p) => ScenarioFile::load(p)?,
        None => ScenarioFile::default(),
    };
    if let Some(e) = epsilon {
        scenario.epsilon = e;
    }
    if let Some(s) = seed {
        scenario.seed = s;
    }
    scenario.validate()?;
    Ok(scenario)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::GenerateReference { num_tx, num_samples, out } => {
            let t = mimo_agp_cli::generate_reference(num_tx, num_samples, &out)?;
            println!("wrote {} entries to {}", t.len(), out.display());
        }
        Command::Optimize { scenario, out, epsilon, seed } => {
            let scenario = load_scenario(scenario.as_ref(), epsilon, seed)?;
            let s = mimo_agp_cli::optimize(&scenario, &out)?;
            println!("reference SINR: {:.6} dB", s.reference_sinr_db);
            println!("final SINR:     {:.6} dB", s.final_sinr_db);
            println!("refinements:    {}", s.refinements);
            println!("converged:      {}", s.converged);
            println!("wall time:      {:.3} s", s.wall_time_s);
            println!("artifacts in {} (summary: {})", out.display(), artifacts::SUMMARY_FILE);
        }
        Command::Validate { scenario, waveform, draws, seed } => {
            let scenario = load_scenario(scenario.as_ref(), None, seed)?;
            let report = mimo_agp_cli::validate(&scenario, &waveform, draws, scenario.seed)?;
            println!("{report}");
        }
        Command::Beampattern { waveform, num_tx, num_samples, out } => {
            mimo_agp_cli::beampattern(&waveform, num_tx, num_samples, &out)?;
            println!("wrote beampattern to {}", out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
