use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::{info, warn};
use pps_relax::error::{IoError, ScenarioError};
use pps_relax::io::{self, DeviationSeries, Format};
use pps_relax::scenario::{self, Normalization, OutputKind, Trajectory};
use pps_relax::{linalg, normalize, Spin, SpinSystem};

#[derive(Parser)]
#[command(name = "pps-relax", version, about = "Relaxation and normalization of pseudo-pure spin-3/2 states")]
struct Cli {
    /// Output directory [default: $PPS_RELAX_OUT_DIR or .]
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value = "csv", value_parser = parse_format)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario described by a TOML config.
    Simulate { config: PathBuf },
    /// Normalize an external deviation-matrix series.
    Normalize {
        series: PathBuf,
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, default_value = "alpha")]
        normalization: Normalization,
        #[arg(long, value_delimiter = ',', default_value = "populations,alpha_curve")]
        outputs: Vec<OutputKind>,
    },
    /// Wigner grids and momentum marginals from a config (.toml) or series (.json).
    Wigner {
        input: PathBuf,
        #[command(flatten)]
        system: SystemArgs,
        /// Keep only the sample closest to this time (ms).
        #[arg(long)]
        at: Option<f64>,
    },
    /// Check a deviation series and report α per record.
    Validate {
        series: PathBuf,
        #[command(flatten)]
        system: SystemArgs,
    },
}

#[derive(clap::Args)]
struct SystemArgs {
    /// Polarization ε [default: from the series file]
    #[arg(long)]
    epsilon: Option<f64>,
    /// Spin, e.g. 3/2 [default: from the series file, else 3/2]
    #[arg(long)]
    spin: Option<Spin>,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

/// Maps onto the process exit code.
enum Failure {
    /// The input was read but describes something unphysical or invalid.
    Invalid(String),
    /// The input could not be read or parsed.
    Input(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::NonPhysicalRecord { .. } | IoError::EmptyTrajectory => Failure::Invalid(e.to_string()),
            IoError::Io { .. } | IoError::Parse { .. } => Failure::Input(e.to_string()),
        }
    }
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let out = cli.out.unwrap_or_else(io::default_out_dir);
    match cli.command {
        Command::Simulate { config } => {
            let cfg = io::load_config(&config)?;
            let traj = scenario::run_scenario(&cfg)?;
            write(&traj, cli.format, &out)
        }
        Command::Normalize {
            series,
            system,
            normalization,
            outputs,
        } => {
            let series = io::ingest_deviation_series(&series)?;
            let sys = system.resolve(&series)?;
            let traj = scenario::normalize_series(series.records, sys, normalization, &outputs)?;
            write(&traj, cli.format, &out)
        }
        Command::Wigner { input, system, at } => {
            let outputs = [OutputKind::Wigner, OutputKind::MomentumMarginal];
            let mut traj = if is_series(&input) {
                let series = io::ingest_deviation_series(&input)?;
                let sys = system.resolve(&series)?;
                scenario::normalize_series(series.records, sys, Normalization::Alpha, &outputs)?
            } else {
                let cfg = io::load_config(&input)?.with_outputs(&outputs);
                scenario::run_scenario(&cfg)?
            };
            if let Some(t) = at {
                keep_closest(&mut traj, t);
            }
            write(&traj, cli.format, &out)
        }
        Command::Validate { series, system } => {
            let series = io::ingest_deviation_series(&series)?;
            let sys = system.resolve(&series)?;
            validate(&series, &sys)
        }
    }
}

impl SystemArgs {
    fn resolve(&self, series: &DeviationSeries) -> Result<SpinSystem, Failure> {
        let epsilon = self.epsilon.or(series.meta.epsilon).ok_or_else(|| {
            Failure::Input("polarization unknown: pass --epsilon or set \"epsilon\" in the series file".into())
        })?;
        let spin = self.spin.or(series.meta.spin).unwrap_or(Spin::THREE_HALVES);
        if let Some((_, s)) = series.records.first() {
            if s.dim() != spin.dim() {
                return Err(Failure::Invalid(format!(
                    "series matrices are {0}x{0} but spin {spin} needs {1}x{1}",
                    s.dim(),
                    spin.dim()
                )));
            }
        }
        SpinSystem::new(spin, epsilon).map_err(|e| Failure::Invalid(e.to_string()))
    }
}

fn is_series(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn keep_closest(traj: &mut Trajectory, t: f64) {
    let best = traj
        .samples
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1.t_ms - t).abs().total_cmp(&(b.1.t_ms - t).abs()))
        .map(|(i, _)| i);
    if let Some(i) = best {
        let sample = traj.samples.swap_remove(i);
        if (sample.t_ms - t).abs() > 0.0 {
            info!("using sample at t = {} ms for requested {t} ms", sample.t_ms);
        }
        traj.samples = vec![sample];
    }
}

fn write(traj: &Trajectory, format: Format, out: &Path) -> Result<(), Failure> {
    for path in io::export(traj, format, out)? {
        println!("{}", path.display());
    }
    Ok(())
}

/// Ingestion already enforces the record invariants; this reports the
/// normalization each record would get and flags α above `2Iε`.
fn validate(series: &DeviationSeries, sys: &SpinSystem) -> Result<(), Failure> {
    let bound = sys.equilibrium_polarization();
    println!("record,t_ms,lambda_min,alpha,alpha_over_epsilon");
    let mut above = 0;
    for (k, (t, sigma)) in series.records.iter().enumerate() {
        let lambda_min = linalg::min_eigenvalue(sigma.matrix()).map_err(|e| Failure::Invalid(format!("record {k}: {e}")))?;
        let alpha = normalize::find_alpha(sigma, sys).map_err(|e| Failure::Invalid(format!("record {k} (t = {t} ms): {e}")))?;
        if alpha > bound {
            above += 1;
        }
        println!(
            "{k},{},{},{},{}",
            io::fmt_f64(*t),
            io::fmt_f64(lambda_min),
            io::fmt_f64(alpha),
            io::fmt_f64(alpha / sys.epsilon())
        );
    }
    if above > 0 {
        warn!("{above} record(s) need α above 2Iε = {bound:e}");
    }
    eprintln!("{} record(s) valid", series.records.len());
    Ok(())
}
