use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{error::ErrorKind, Parser, Subcommand};
use dpe_multipath::caf::Space;
use dpe_multipath::mc::Sweep;
use dpe_multipath::Execution;
use dpe_multipath_cli::bundled::{resolve, DEFAULT_SCENARIO};
use dpe_multipath_cli::commands::{self, parse_sweep, Outcome};
use dpe_multipath_cli::scenario_file::LoadedScenario;
use dpe_multipath_cli::table::Format;
use dpe_multipath_cli::CliError;

const EXIT_USAGE: u8 = 64;
const EXIT_SOFTWARE: u8 = 70;
const DEFAULT_SEED: u64 = 1;

/// Multipath error propagation for direct position estimation.
#[derive(Debug, Parser)]
#[command(name = "dpe-multipath", version)]
struct Cli {
    /// Scenario file, or a bundled name (table1, case1, case2, case3, table6).
    #[arg(long, global = true, default_value = DEFAULT_SCENARIO)]
    scenario: String,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Seed for Monte Carlo draws and grid noise.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Run on one thread.
    #[arg(long, global = true)]
    serial: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Project code-delay and Doppler biases to range and range-rate biases.
    Project {
        #[arg(long)]
        delay_chips: Option<f64>,
        #[arg(long)]
        doppler_hz: Option<f64>,
        /// Elevation sweep `start:end:step` in degrees.
        #[arg(long, value_parser = parse_sweep)]
        sweep: Option<Sweep>,
    },
    /// Center lines and their crossings.
    Intersect {
        #[arg(long, value_enum)]
        space: Option<SpaceArg>,
        /// Also read each crossing off a noiseless two-satellite grid.
        #[arg(long)]
        simulate: bool,
    },
    /// Error bound for one bias radius per satellite.
    Bounds {
        /// Comma-separated radii in m (0 = LOS); defaults to the scenario's paths.
        #[arg(long, value_delimiter = ',')]
        radii: Option<Vec<f64>>,
    },
    /// Summed cross-ambiguity function over a grid.
    Caf {
        #[arg(long, value_enum, default_value_t = SpaceArg::Position)]
        space: SpaceArg,
        #[arg(long, requires = "step")]
        half_extent: Option<f64>,
        #[arg(long, requires = "half_extent")]
        step: Option<f64>,
        /// Comma-separated PRNs to keep.
        #[arg(long, value_delimiter = ',')]
        prns: Option<Vec<u32>>,
    },
    /// Pair error for random azimuth separations.
    Montecarlo {
        #[arg(long)]
        rho_i: f64,
        #[arg(long)]
        rho_j: f64,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        /// Deterministic separation sweep `start:end:step` in degrees instead of random draws.
        #[arg(long, value_parser = parse_sweep)]
        sweep: Option<Sweep>,
    },
    /// Run every bundled reproduction and check it against expected values.
    Report,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum SpaceArg {
    Position,
    Velocity,
}

impl From<SpaceArg> for Space {
    fn from(s: SpaceArg) -> Self {
        match s {
            SpaceArg::Position => Space::Position,
            SpaceArg::Velocity => Space::Velocity,
        }
    }
}

fn load(cli: &Cli) -> Result<LoadedScenario, CliError> {
    let mut loaded = resolve(&cli.scenario)?;
    if let Some(seed) = cli.seed {
        loaded.scenario.seed = seed;
    }
    Ok(loaded)
}

fn run(cli: &Cli) -> anyhow::Result<u8> {
    let execution = if cli.serial {
        Execution::Serial
    } else {
        Execution::Parallel
    };
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    let outcome: Outcome = match &cli.command {
        Command::Project {
            delay_chips,
            doppler_hz,
            sweep,
        } => commands::project(&load(cli)?, *delay_chips, *doppler_hz, *sweep)?,
        Command::Intersect { space, simulate } => {
            commands::intersect(&load(cli)?, space.map(Space::from), *simulate, execution)?
        }
        Command::Bounds { radii } => commands::bounds(&load(cli)?, radii.clone())?,
        Command::Caf {
            space,
            half_extent,
            step,
            prns,
        } => {
            let grid = half_extent.zip(*step);
            commands::caf(&load(cli)?, (*space).into(), grid, prns.clone(), execution)?
        }
        Command::Montecarlo {
            rho_i,
            rho_j,
            trials,
            sweep,
        } => commands::montecarlo(*rho_i, *rho_j, *trials, seed, *sweep, execution)?,
        Command::Report => commands::report(seed, execution)?,
    };
    for t in &outcome.tables {
        t.write(&cli.out, cli.format)
            .with_context(|| format!("writing {}", t.name))?;
    }
    for line in &outcome.summary {
        println!("{line}");
    }
    Ok(outcome.exit_code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e
                .downcast_ref::<CliError>()
                .map_or(EXIT_SOFTWARE, CliError::exit_code);
            ExitCode::from(code)
        }
    }
}
