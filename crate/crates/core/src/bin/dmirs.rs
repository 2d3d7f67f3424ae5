use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dmirs_core::csv::{format_sig9, write_csv};
use dmirs_core::secrecy::secrecy_metrics;
use dmirs_core::sweep::{parse_counts, parse_values, run_heatmap, run_sweep_dab, run_sweep_nr, HeatmapGrid};
use dmirs_core::{parse_config, AnMode, Error, Position, Result, Scenario, SweepResult};

/// Secure-transmission simulator for IRS-aided directional modulation.
#[derive(Parser)]
#[command(name = "dmirs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON scenario file; omitted fields (or a missing file argument) use the reference scene.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Overrides the config seed.
    #[arg(long, env = "DMIRS_SEED")]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the secrecy metrics for one eavesdropper position.
    Metrics {
        #[command(flatten)]
        common: Common,
        /// Eavesdropper position as X,Y in meters.
        #[arg(long)]
        eve: Option<String>,
        #[arg(long)]
        an_mode: Option<AnMode>,
    },
    /// QPSK BER over (direct departure angle, IRS deflection angle).
    Heatmap {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "181x181")]
        grid: String,
        #[arg(long)]
        out: PathBuf,
        /// Monte-Carlo AN draws per cell; implies `--an-mode instantaneous`.
        #[arg(long)]
        mc_samples: Option<usize>,
        #[arg(long)]
        an_mode: Option<AnMode>,
    },
    /// Secrecy rate versus the number of IRS elements.
    SweepNr {
        #[command(flatten)]
        common: Common,
        /// START:STOP:STEP or a comma list.
        #[arg(long, default_value = "10:200:10")]
        nr: String,
        /// Transmit powers in dBm.
        #[arg(long, default_value = "10,15")]
        pt: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Secrecy rate versus the Alice-Bob distance.
    SweepDab {
        #[command(flatten)]
        common: Common,
        /// START:STOP:STEP or a comma list, in meters.
        #[arg(long, default_value = "10:50:1")]
        dab: String,
        #[arg(long, default_value = "10,15")]
        pt: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load(common: &Common) -> Result<Scenario> {
    let mut scenario = match &common.config {
        Some(path) => parse_config(&std::fs::read_to_string(path)?)?,
        None => Scenario::default(),
    };
    if let Some(seed) = common.seed {
        scenario.seed = seed;
    }
    Ok(scenario)
}

fn parse_position(text: &str) -> Result<Position> {
    let bad = || Error::Validation {
        field: "eve".into(),
        reason: format!("expected X,Y, got `{text}`"),
    };
    let (x, y) = text.split_once(',').ok_or_else(bad)?;
    Ok(Position::new(
        x.trim().parse().map_err(|_| bad())?,
        y.trim().parse().map_err(|_| bad())?,
    ))
}

fn write_result(result: &SweepResult, path: &Path) -> Result<()> {
    let file = BufWriter::new(File::create(path)?);
    let bytes = write_csv(result, file)?;
    eprintln!(
        "wrote {} rows ({bytes} bytes) to {}",
        result.rows.len(),
        path.display()
    );
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Metrics { common, eve, an_mode } => {
            let mut scenario = load(&common)?;
            if let Some(eve) = eve {
                scenario.eve = parse_position(&eve)?;
            }
            if let Some(mode) = an_mode {
                scenario.an_mode = mode;
            }
            scenario.validate()?;
            let m = secrecy_metrics(&scenario, scenario.eve, scenario.an_mode)?;
            let mut out = io::stdout().lock();
            writeln!(out, "eve={},{}", scenario.eve.x, scenario.eve.y)?;
            writeln!(out, "an_mode={}", scenario.an_mode)?;
            for (key, value) in m.fields() {
                writeln!(out, "{key}={}", format_sig9(value))?;
            }
        }
        Command::Heatmap {
            common,
            grid,
            out,
            mc_samples,
            an_mode,
        } => {
            let mut scenario = load(&common)?;
            if let Some(n) = mc_samples {
                scenario.mc_samples = n;
                scenario.an_mode = AnMode::Instantaneous;
            }
            if let Some(mode) = an_mode {
                scenario.an_mode = mode;
            }
            let result = run_heatmap(&scenario, HeatmapGrid::parse(&grid)?)?;
            write_result(&result, &out)?;
        }
        Command::SweepNr { common, nr, pt, out } => {
            let scenario = load(&common)?;
            let result = run_sweep_nr(&scenario, &parse_counts("nr", &nr)?, &parse_values("pt", &pt)?)?;
            write_result(&result, &out)?;
        }
        Command::SweepDab { common, dab, pt, out } => {
            let scenario = load(&common)?;
            let result = run_sweep_dab(&scenario, &parse_values("dab", &dab)?, &parse_values("pt", &pt)?)?;
            write_result(&result, &out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dmirs: {e}");
            if e.is_config_error() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}
