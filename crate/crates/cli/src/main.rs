use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use shift_core::atoms::AtomSpec;
use shift_core::greens::GreenMode;
use shift_core::material::{MaterialModel, ModeSearch};
use shift_core::parallel::Execution;
use shift_core::run::{
    matsubara_from_env, modes_csv, modes_json, modes_report, parse_values, point_csv, point_json, run_point_with,
    scan_csv, scan_inputs, scan_json, Inputs, OutputFormat, RunConfig,
};
use shift_core::Error;

/// Atom–surface energy shifts near a Drude–Lorentz surface.
#[derive(Parser)]
#[command(name = "shift", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Shift report at a single distance and temperature.
    Point(ShiftArgs),
    /// Shift table over a grid of distances and temperatures (energies in s^-1).
    Scan(ShiftArgs),
    /// Surface-polariton modes of a material.
    Modes(ModesArgs),
}

#[derive(Args)]
struct ShiftArgs {
    /// Material file (JSON).
    #[arg(long)]
    material: PathBuf,
    /// Atom file (JSON).
    #[arg(long)]
    atom: PathBuf,
    /// Initial (upper) state label.
    #[arg(long)]
    upper: String,
    /// Final (lower) state label.
    #[arg(long)]
    lower: String,
    /// Distance(s) in m: a value, a comma list, or start:stop:N[log].
    #[arg(long = "z", visible_alias = "z-range", allow_hyphen_values = true)]
    z: String,
    /// Temperature(s) in K, same syntax as --z.
    #[arg(long = "T", visible_alias = "T-range", allow_hyphen_values = true)]
    temperature: String,
    /// Green tensor used for the real-frequency terms.
    #[arg(long, default_value = "nonretarded")]
    green: String,
    /// Use the two-resonance closed form for the resonant shift.
    #[arg(long)]
    closed_form: bool,
    /// Leave out the resonant two-polariton term.
    #[arg(long)]
    no_resonant: bool,
    /// Resonance window in units of gamma1 + gamma2.
    #[arg(long, default_value_t = 1.0)]
    resonance_tol: f64,
    /// Linewidth (rad/s) assigned to the modes; required for undamped materials.
    #[arg(long)]
    linewidth: Option<f64>,
    #[arg(long, default_value = "json")]
    format: String,
    /// Output file; stdout when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ModesArgs {
    #[arg(long)]
    material: PathBuf,
    /// Linewidth (rad/s) assigned to the modes; required for undamped materials.
    #[arg(long)]
    linewidth: Option<f64>,
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, result) = match cli.command {
        Command::Point(a) => ("point", point(a)),
        Command::Scan(a) => ("scan", scan(a)),
        Command::Modes(a) => ("modes", modes(a)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { context, error }) => {
            match context {
                Some(c) => eprintln!("shift {name}: {c}: {error}"),
                None => eprintln!("shift {name}: {error}"),
            }
            ExitCode::from(if error.is_config() { 2 } else { 3 })
        }
    }
}

struct Failure {
    context: Option<String>,
    error: Error,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Self { context: None, error }
    }
}

trait Context<T> {
    fn context(self, c: impl FnOnce() -> String) -> Result<T, Failure>;
}

impl<T> Context<T> for Result<T, Error> {
    fn context(self, c: impl FnOnce() -> String) -> Result<T, Failure> {
        self.map_err(|error| Failure { context: Some(c()), error })
    }
}

fn config(a: &ShiftArgs) -> Result<RunConfig, Failure> {
    let mut cfg = RunConfig::new(&a.material, &a.atom, &a.upper, &a.lower);
    cfg.z_values = parse_values(&a.z).context(|| "--z".into())?;
    cfg.t_values = parse_values(&a.temperature).context(|| "--T".into())?;
    cfg.green_mode = a.green.parse::<GreenMode>().context(|| "--green".into())?;
    cfg.closed_form = a.closed_form;
    cfg.resonant = !a.no_resonant;
    cfg.resonance_tol = a.resonance_tol;
    cfg.linewidth_override = a.linewidth;
    cfg.matsubara = matsubara_from_env()?;
    cfg.format = a.format.parse::<OutputFormat>().context(|| "--format".into())?;
    cfg.output = a.output.clone();
    cfg.validate()?;
    Ok(cfg)
}

fn load_inputs(cfg: &RunConfig) -> Result<Inputs, Failure> {
    let material = MaterialModel::load(&cfg.material).context(|| format!("material file {}", cfg.material.display()))?;
    let atom = AtomSpec::load(&cfg.atom).context(|| format!("atom file {}", cfg.atom.display()))?;
    atom.transition_frequency(&cfg.upper, &cfg.lower).context(|| format!("atom file {}", cfg.atom.display()))?;
    Ok(Inputs { material, atom })
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(Error::from).context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn point(a: ShiftArgs) -> Result<(), Failure> {
    let cfg = config(&a)?;
    if cfg.z_values.len() != 1 || cfg.t_values.len() != 1 {
        return Err(Error::InvalidInput("point takes a single --z and --T; use scan for grids".into()).into());
    }
    let inputs = load_inputs(&cfg)?;
    let report = run_point_with(&inputs, &cfg, cfg.z_values[0], cfg.t_values[0])?;
    let text = match cfg.format {
        OutputFormat::Json => point_json(&cfg, &report),
        OutputFormat::Csv => point_csv(&report),
    };
    emit(cfg.output.as_deref(), &text)
}

fn scan(a: ShiftArgs) -> Result<(), Failure> {
    let cfg = config(&a)?;
    let inputs = load_inputs(&cfg)?;
    let rows = scan_inputs(&inputs, &cfg, Execution::Parallel);
    let text = match cfg.format {
        OutputFormat::Json => scan_json(&cfg, &rows),
        OutputFormat::Csv => scan_csv(&rows),
    };
    emit(cfg.output.as_deref(), &text)
}

fn modes(a: ModesArgs) -> Result<(), Failure> {
    let format = a.format.parse::<OutputFormat>().context(|| "--format".into())?;
    let material = MaterialModel::load(&a.material).context(|| format!("material file {}", a.material.display()))?;
    let rows = modes_report(&material, &ModeSearch { linewidth_override: a.linewidth })?;
    let text = match format {
        OutputFormat::Json => modes_json(&material, &rows),
        OutputFormat::Csv => modes_csv(&rows),
    };
    emit(a.output.as_deref(), &text)
}
