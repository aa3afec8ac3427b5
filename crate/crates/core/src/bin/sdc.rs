//! Command-line front end: runs bench configs or built-in presets and writes
//! detection-plane profiles (CSV) and the idler map (PGM).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sdc_optics::config::{parse_config, render_config, BeamId, ExperimentConfig};
use sdc_optics::experiment::{run_experiment, ExperimentResult};
use sdc_optics::io::{write_intensity_pgm, write_profile_csv};
use sdc_optics::presets;
use sdc_optics::propagation::PropagationMethod;
use sdc_optics::{Error, GridSpec};

#[derive(Parser)]
#[command(
    name = "sdc",
    about = "Scalar-wave simulator for stimulated down-conversion image transfer",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a config file
    Run {
        /// Path to the config document
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run a built-in preset
    Preset {
        /// Preset name; see list-presets
        name: String,
        /// Output directory (defaults to the preset's own)
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// List the built-in presets
    ListPresets,
    /// Parse and validate a config file without running it
    Validate {
        /// Path to the config document
        config: PathBuf,
    },
}

#[derive(clap::Args)]
struct Overrides {
    /// Override the grid to N x N points
    #[arg(long, value_name = "N")]
    grid: Option<usize>,
    /// Override the sample spacing on both axes
    #[arg(long, value_name = "METERS")]
    dx: Option<f64>,
    /// Force the propagation method
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Tf,
    Ir,
}

impl From<MethodArg> for PropagationMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => PropagationMethod::Auto,
            MethodArg::Tf => PropagationMethod::TransferFunction,
            MethodArg::Ir => PropagationMethod::ImpulseResponse,
        }
    }
}

const EXIT_RUNTIME: u8 = 1;
const EXIT_INVALID: u8 = 2;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    ExitCode::from(dispatch(Cli::parse()))
}

fn dispatch(cli: Cli) -> u8 {
    match cli.command {
        Command::ListPresets => {
            for name in presets::PRESET_NAMES {
                println!("{name:6} {}", presets::description(name).unwrap_or(""));
            }
            0
        }
        Command::Validate { config } => validate_file(&config),
        Command::Run { config, overrides } => run_file(&config, &overrides),
        Command::Preset {
            name,
            out,
            overrides,
        } => run_preset(&name, out, &overrides),
    }
}

fn validate_file(path: &Path) -> u8 {
    let text = match fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return EXIT_RUNTIME;
        }
    };
    match parse_config(&text) {
        Ok(config) => {
            let grid = config.grid;
            println!(
                "ok: {} ({} x {} grid, detection at {} m)",
                path.display(),
                grid.nx(),
                grid.ny(),
                config.detection_distance
            );
            0
        }
        Err(e) => {
            eprintln!("error: {}:\n{e}", path.display());
            EXIT_INVALID
        }
    }
}

fn run_file(path: &Path, overrides: &Overrides) -> u8 {
    let text = match fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return EXIT_RUNTIME;
        }
    };
    let mut config = match parse_config(&text) {
        Ok(config) => config,
        Err(e) => {
            eprintln!("error: {}:\n{e}", path.display());
            return EXIT_INVALID;
        }
    };
    if let Err(e) = apply_overrides(&mut config, overrides) {
        eprintln!("error: {e}");
        return EXIT_INVALID;
    }
    let out_dir = PathBuf::from(&config.output_directory);
    execute(&config, &out_dir, None)
}

fn run_preset(name: &str, out: Option<PathBuf>, overrides: &Overrides) -> u8 {
    let Some(mut config) = presets::preset(name) else {
        eprintln!(
            "error: unknown preset `{name}`; available: {}",
            presets::PRESET_NAMES.join(", ")
        );
        return EXIT_INVALID;
    };
    if let Err(e) = apply_overrides(&mut config, overrides) {
        eprintln!("error: {e}");
        return EXIT_INVALID;
    }
    let out_dir = out.unwrap_or_else(|| PathBuf::from(&config.output_directory));
    println!("{name}: {}", presets::description(name).unwrap_or(""));
    execute(&config, &out_dir, Some(name))
}

fn apply_overrides(config: &mut ExperimentConfig, overrides: &Overrides) -> Result<(), Error> {
    if overrides.grid.is_some() || overrides.dx.is_some() {
        let g = config.grid;
        let (nx, ny) = match overrides.grid {
            Some(n) => (n, n),
            None => (g.nx(), g.ny()),
        };
        let (dx, dy) = match overrides.dx {
            Some(d) => (d, d),
            None => (g.dx(), g.dy()),
        };
        config.grid = GridSpec::new(nx, ny, dx, dy)?;
    }
    if let Some(m) = overrides.method {
        config.method = m.into();
    }
    Ok(())
}

fn execute(config: &ExperimentConfig, out_dir: &Path, preset_name: Option<&str>) -> u8 {
    let result = match run_experiment(config) {
        Ok(result) => result,
        Err(e) => {
            eprintln!("error: {e}");
            return match e {
                Error::Config(_) => EXIT_INVALID,
                _ => EXIT_RUNTIME,
            };
        }
    };
    report(config, &result);
    match write_outputs(config, &result, out_dir, preset_name) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_RUNTIME
        }
    }
}

fn report(config: &ExperimentConfig, result: &ExperimentResult) {
    let grid = config.grid;
    println!(
        "grid {} x {} points, {:.3e} x {:.3e} m spacing, detection at {} m",
        grid.nx(),
        grid.ny(),
        grid.dx(),
        grid.dy(),
        config.detection_distance
    );
    let m = &result.metrics;
    if !m.sampling_ok {
        println!("warning: at least one propagation leg violates its sampling criterion");
    }
    print_length("pump fringe spacing", m.pump_fringe_spacing);
    print_length("auxiliary fringe spacing", m.auxiliary_fringe_spacing);
    print_length("idler fringe spacing", m.idler_fringe_spacing);
    if let (Some(i), Some(p)) = (m.idler_fringe_spacing, m.pump_fringe_spacing) {
        println!("idler/pump fringe ratio    {:.4}", i / p);
    }
    print_length("pump centroid", m.pump_centroid);
    print_length("auxiliary centroid", m.auxiliary_centroid);
    print_length("idler centroid", m.idler_centroid);
    if let Some(v) = m.idler_visibility {
        println!("idler visibility           {v:.4}");
    }
    if let Some(c) = m.image_correlation {
        let partner = match c.partner {
            BeamId::Pump => "pump",
            BeamId::Auxiliary => "auxiliary",
        };
        println!(
            "idler vs {partner} image (axis / {:.4}): direct {:.4}, mirrored {:.4}",
            c.scale, c.direct, c.mirrored
        );
    }
    if let Some(r) = m.idler_regime {
        println!(
            "idler source far-field ratio {:.3e} ({})",
            r.ratio,
            if r.fraunhofer {
                "far field"
            } else {
                "near field"
            }
        );
    }
}

fn print_length(label: &str, value: Option<f64>) {
    match value {
        Some(v) => println!("{label:26} {v:.4e} m"),
        None => println!("{label:26} -"),
    }
}

fn write_outputs(
    config: &ExperimentConfig,
    result: &ExperimentResult,
    out_dir: &Path,
    preset_name: Option<&str>,
) -> Result<(), Error> {
    fs::create_dir_all(out_dir).map_err(|e| Error::Io {
        path: out_dir.display().to_string(),
        source: e,
    })?;
    let files = [
        ("pump_profile.csv", &result.pump_profile),
        ("auxiliary_profile.csv", &result.auxiliary_profile),
        ("idler_profile.csv", &result.idler_profile),
    ];
    for (file, profile) in files {
        let path = out_dir.join(file);
        write_profile_csv(profile, &path)?;
        println!("wrote {}", path.display());
    }
    let map_path = out_dir.join("idler_map.pgm");
    write_intensity_pgm(&result.idler_map, &map_path)?;
    println!("wrote {}", map_path.display());
    if preset_name.is_some() {
        let config_path = out_dir.join("config.conf");
        fs::write(&config_path, render_config(config))
            .map_err(|e| Error::Io {
                path: config_path.display().to_string(),
                source: e,
            })?;
        println!("wrote {}", config_path.display());
    }
    Ok(())
}
