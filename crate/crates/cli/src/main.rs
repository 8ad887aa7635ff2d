use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use finscat_cli::{run_outputs, CliError, Format, OutputKind, ScenarioConfig};

#[derive(Parser)]
#[command(
    name = "finscat",
    version,
    about = "Scattering observables at finite distance"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Phase shifts delta_l
    Phases(Common),
    /// Finite-distance and conventional amplitudes on the (r, theta) grid
    Amplitude(Common),
    /// Wave function and scattered flux on the (r, theta) grid
    FieldMap(Common),
    /// Differential cross section on the (r, theta) grid
    CrossSection(Common),
    /// Total cross section per radius
    SigmaTotal(Common),
    /// Wave-front generatrix and curvature per anchor radius
    Wavefront(Common),
    /// Convergence towards the conventional results with fitted exponents
    CompareAsymptotic(Common),
    /// Every output listed in the config
    Run(Common),
}

#[derive(Args)]
struct Common {
    /// Scenario config (JSON)
    #[arg(long)]
    config: PathBuf,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Table format; overrides the config
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn execute(command: Command) -> Result<(), CliError> {
    let (kind, common) = match command {
        Command::Phases(c) => (Some(OutputKind::Phases), c),
        Command::Amplitude(c) => (Some(OutputKind::Amplitude), c),
        Command::FieldMap(c) => (Some(OutputKind::FieldMap), c),
        Command::CrossSection(c) => (Some(OutputKind::CrossSection), c),
        Command::SigmaTotal(c) => (Some(OutputKind::SigmaTotal), c),
        Command::Wavefront(c) => (Some(OutputKind::Wavefront), c),
        Command::CompareAsymptotic(c) => (Some(OutputKind::CompareAsymptotic), c),
        Command::Run(c) => (None, c),
    };
    let config = ScenarioConfig::load(&common.config)?;
    let outputs = kind.map_or_else(|| config.outputs.clone(), |k| vec![k]);
    let format = common.format.unwrap_or(config.format);
    let manifest = run_outputs(&config, &outputs, format, &common.out)?;
    for entry in &manifest.outputs {
        println!(
            "{} ({} rows)",
            common.out.join(&entry.file).display(),
            entry.rows
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("finscat: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
