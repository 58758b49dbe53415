use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use thz_doa::harness::{run_gain, run_spectra, run_sweep, ExperimentConfig, ResultTable, RunOptions};
use thz_doa::{Execution, Result};

#[derive(Parser)]
#[command(name = "thz-doa", version, about = "Wideband THz DoA estimation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte-Carlo RMSE versus SNR for every configured mode.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Append a wall-clock column (makes output non-reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Per-subcarrier and summed spectra of one seeded scenario.
    Spectra {
        #[command(flatten)]
        common: Common,
        /// SNR in dB; noiseless when omitted.
        #[arg(long, allow_hyphen_values = true)]
        snr_db: Option<f64>,
    },
    /// Array gain over the spatial grid for one direction and subcarrier.
    Gain {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        angle_deg: f64,
        /// Subcarrier index, 1-based.
        #[arg(long)]
        subcarrier: usize,
        #[arg(long, default_value_t = 1e-4)]
        step: f64,
    },
    /// Check a configuration against the schema and exit.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the configured master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; 0 uses every core, 1 runs sequentially.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::from_path(&self.config)?;
        if let Some(seed) = self.seed {
            cfg.sweep.seed = seed;
        }
        Ok(cfg)
    }

    fn execution(&self) -> Result<Execution> {
        if self.threads == 1 {
            return Ok(Execution::Sequential);
        }
        #[cfg(feature = "parallel")]
        if self.threads > 1 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(self.threads)
                .build_global()
                .map_err(|e| thz_doa::Error::Config(format!("thread pool: {e}")))?;
        }
        Ok(Execution::Parallel)
    }

    fn emit(&self, table: &ResultTable) -> Result<()> {
        match &self.out {
            Some(path) => {
                let mut w = BufWriter::new(File::create(path)?);
                table.write_csv(&mut w)?;
                w.flush()?;
            }
            None => table.write_csv(io::stdout().lock())?,
        }
        Ok(())
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep { common, timing } => {
            let cfg = common.load()?;
            let exec = common.execution()?;
            common.emit(&run_sweep(&cfg, RunOptions { exec, timing })?)
        }
        Command::Spectra { common, snr_db } => {
            let cfg = common.load()?;
            let exec = common.execution()?;
            common.emit(&run_spectra(&cfg, snr_db, RunOptions { exec, timing: false })?)
        }
        Command::Gain { common, angle_deg, subcarrier, step } => {
            let cfg = common.load()?;
            common.emit(&run_gain(&cfg, angle_deg, subcarrier, step)?)
        }
        Command::Validate { config } => {
            let cfg = ExperimentConfig::from_path(&config)?;
            println!("ok {}", cfg.hash());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or_default().trim_start_matches("error: ");
            eprintln!("error[usage]: {first}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error[{}]: {msg}", e.kind());
            ExitCode::FAILURE
        }
    }
}
