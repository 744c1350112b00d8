//! Config loading, deviation-series ingestion and trajectory export.
//!
//! Deviation series are JSON:
//!
//! ```json
//! { "epsilon": 1e-5, "spin": "3/2",
//!   "samples": [ { "t_ms": 0.0, "sigma": [[[re, im], ...], ...] }, ... ] }
//! ```
//!
//! `epsilon` and `spin` are optional. A trajectory exported as JSON is itself
//! a valid series file (extra per-sample fields are ignored on ingestion).
//!
//! CSV files are written one per output kind, with floats in shortest
//! round-trip form and `.` as the decimal separator.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use log::warn;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::IoError;
use crate::linalg::{ComplexMatrix, HERMITIAN_TOL, MAX_DIM};
use crate::observables::WignerGrid;
use crate::scenario::{OutputKind, ScenarioConfig, Trajectory};
use crate::states::{DeviationMatrix, Spin, TRACE_TOL};

/// Ingested records with a larger trace are rejected outright.
pub const INGEST_TRACE_TOL: f64 = 1e-8;

/// Symmetrization corrections above this are logged.
pub const SYMMETRIZE_WARN: f64 = 1e-8;

/// Environment variable overriding the default output directory.
pub const OUT_DIR_ENV: &str = "PPS_RELAX_OUT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

fn path_str(path: &Path) -> String {
    path.display().to_string()
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path_str(path),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), IoError> {
    fs::write(path, contents).map_err(|source| IoError::Io {
        path: path_str(path),
        source,
    })
}

pub fn parse_config(text: &str, origin: &str) -> Result<ScenarioConfig, IoError> {
    toml::from_str(text).map_err(|e| IoError::Parse {
        path: origin.to_string(),
        record: None,
        message: e.to_string(),
    })
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig, IoError> {
    parse_config(&read(path)?, &path_str(path))
}

/// Header of a series file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SeriesMeta {
    pub epsilon: Option<f64>,
    pub spin: Option<Spin>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeviationSeries {
    pub meta: SeriesMeta,
    pub records: Vec<(f64, DeviationMatrix)>,
}

#[derive(Deserialize)]
struct RecordIn {
    t_ms: f64,
    sigma: ComplexMatrix,
}

/// Symmetrizes and trace-checks one record.
fn clean_record(mat: ComplexMatrix) -> Result<DeviationMatrix, String> {
    if mat.dim() > MAX_DIM {
        return Err(format!("dimension {} exceeds {MAX_DIM}", mat.dim()));
    }
    let mut m = if mat.hermitian_residual() > 0.0 {
        let sym = mat.hermitian_part();
        let correction = sym.max_abs_diff(&mat);
        if correction > SYMMETRIZE_WARN {
            warn!("symmetrization changed an entry by {correction:e}");
        }
        sym
    } else {
        mat
    };
    let tr = m.trace().re;
    if tr.abs() >= INGEST_TRACE_TOL {
        return Err(format!("trace {tr:e} is not zero"));
    }
    if tr.abs() > TRACE_TOL {
        let shift = tr / m.dim() as f64;
        for i in 0..m.dim() {
            m[(i, i)].re -= shift;
        }
    }
    debug_assert!(m.hermitian_residual() <= HERMITIAN_TOL);
    DeviationMatrix::new(m).map_err(|e| e.to_string())
}

pub fn parse_series(text: &str, origin: &str) -> Result<DeviationSeries, IoError> {
    let parse_err = |record: Option<usize>, message: String| IoError::Parse {
        path: origin.to_string(),
        record,
        message,
    };
    let root: Value = serde_json::from_str(text).map_err(|e| parse_err(None, e.to_string()))?;
    let obj = root
        .as_object()
        .ok_or_else(|| parse_err(None, "top level must be an object".into()))?;

    let epsilon = match obj.get("epsilon") {
        None | Some(Value::Null) => None,
        Some(v) => Some(
            v.as_f64()
                .ok_or_else(|| parse_err(None, "epsilon must be a number".into()))?,
        ),
    };
    let spin = match obj.get("spin") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.parse::<Spin>().map_err(|e| parse_err(None, e.to_string()))?),
        Some(_) => return Err(parse_err(None, "spin must be a string such as \"3/2\"".into())),
    };
    let samples = obj
        .get("samples")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err(None, "missing \"samples\" array".into()))?;

    let mut records: Vec<(f64, DeviationMatrix)> = Vec::with_capacity(samples.len());
    for (idx, raw) in samples.iter().enumerate() {
        let rec: RecordIn = serde_json::from_value(raw.clone()).map_err(|e| parse_err(Some(idx), e.to_string()))?;
        let reject = |reason: String| IoError::NonPhysicalRecord {
            path: origin.to_string(),
            record: idx,
            t_ms: rec.t_ms,
            reason,
        };
        if !rec.t_ms.is_finite() || rec.t_ms < 0.0 {
            return Err(reject(format!("time {} is not a non-negative number", rec.t_ms)));
        }
        if let Some((t_prev, prev)) = records.last() {
            if rec.t_ms <= *t_prev {
                return Err(reject(format!("time {} does not increase past {t_prev}", rec.t_ms)));
            }
            if prev.dim() != rec.sigma.dim() {
                return Err(reject(format!("dimension {} differs from earlier records ({})", rec.sigma.dim(), prev.dim())));
            }
        }
        let sigma = clean_record(rec.sigma).map_err(reject)?;
        records.push((rec.t_ms, sigma));
    }
    Ok(DeviationSeries {
        meta: SeriesMeta { epsilon, spin },
        records,
    })
}

pub fn ingest_deviation_series(path: &Path) -> Result<DeviationSeries, IoError> {
    parse_series(&read(path)?, &path_str(path))
}

#[derive(Serialize)]
struct SeriesOut<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spin: Option<Spin>,
    samples: Vec<RecordOut<'a>>,
}

#[derive(Serialize)]
struct RecordOut<'a> {
    t_ms: f64,
    sigma: &'a ComplexMatrix,
}

pub fn series_to_json(series: &DeviationSeries) -> String {
    let out = SeriesOut {
        epsilon: series.meta.epsilon,
        spin: series.meta.spin,
        samples: series
            .records
            .iter()
            .map(|(t, s)| RecordOut {
                t_ms: *t,
                sigma: s.matrix(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&out).expect("series serializes");
    s.push('\n');
    s
}

pub fn export_series(series: &DeviationSeries, path: &Path) -> Result<(), IoError> {
    write(path, &series_to_json(series))
}

/// The deviation series underlying a trajectory.
pub fn trajectory_series(traj: &Trajectory) -> DeviationSeries {
    DeviationSeries {
        meta: SeriesMeta {
            epsilon: Some(traj.epsilon),
            spin: Some(traj.spin),
        },
        records: traj.samples.iter().map(|s| (s.t_ms, s.sigma.clone())).collect(),
    }
}

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn populations_csv(traj: &Trajectory) -> String {
    let n = traj.spin.dim();
    let mut out = String::from("t_ms");
    for k in 0..n {
        let _ = write!(out, ",p{k}");
    }
    out.push_str(",valid\n");
    for s in &traj.samples {
        out.push_str(&fmt_f64(s.t_ms));
        for p in s.populations() {
            out.push(',');
            out.push_str(&fmt_f64(p));
        }
        let _ = writeln!(out, ",{}", s.valid);
    }
    out
}

fn alpha_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t_ms,alpha,alpha_over_epsilon\n");
    for s in &traj.samples {
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt_f64(s.t_ms),
            fmt_f64(s.alpha),
            fmt_f64(s.alpha / traj.epsilon)
        );
    }
    out
}

fn concurrence_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t_ms,concurrence\n");
    for s in &traj.samples {
        let _ = writeln!(out, "{},{}", fmt_f64(s.t_ms), opt(s.concurrence));
    }
    out
}

fn wigner_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t_ms,q,p,w\n");
    for s in &traj.samples {
        if let Some(w) = &s.wigner {
            for q in 0..w.side {
                for p in 0..w.side {
                    let _ = writeln!(out, "{},{q},{p},{}", fmt_f64(s.t_ms), fmt_f64(w.get(q, p)));
                }
            }
        }
    }
    out
}

fn marginal_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t_ms,p,m\n");
    for s in &traj.samples {
        if let Some(m) = &s.momentum_marginal {
            for (p, v) in m.iter().enumerate() {
                let _ = writeln!(out, "{},{p},{}", fmt_f64(s.t_ms), fmt_f64(*v));
            }
        }
    }
    out
}

/// CSV text for one output kind.
pub fn to_csv(traj: &Trajectory, kind: OutputKind) -> String {
    match kind {
        OutputKind::Populations => populations_csv(traj),
        OutputKind::AlphaCurve => alpha_csv(traj),
        OutputKind::Concurrence => concurrence_csv(traj),
        OutputKind::Wigner => wigner_csv(traj),
        OutputKind::MomentumMarginal => marginal_csv(traj),
    }
}

#[derive(Serialize)]
struct TrajectoryOut<'a> {
    epsilon: f64,
    spin: Spin,
    normalization: String,
    samples: Vec<SampleOut<'a>>,
}

#[derive(Serialize)]
struct SampleOut<'a> {
    t_ms: f64,
    sigma: &'a ComplexMatrix,
    alpha: f64,
    rho: &'a ComplexMatrix,
    valid: bool,
    min_eigenvalue: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    concurrence: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wigner: Option<&'a WignerGrid>,
    #[serde(skip_serializing_if = "Option::is_none")]
    momentum_marginal: Option<&'a Vec<f64>>,
}

pub fn to_json(traj: &Trajectory) -> String {
    let out = TrajectoryOut {
        epsilon: traj.epsilon,
        spin: traj.spin,
        normalization: traj.normalization.to_string(),
        samples: traj
            .samples
            .iter()
            .map(|s| SampleOut {
                t_ms: s.t_ms,
                sigma: s.sigma.matrix(),
                alpha: s.alpha,
                rho: &s.rho,
                valid: s.valid,
                min_eigenvalue: s.min_eigenvalue,
                concurrence: s.concurrence,
                wigner: s.wigner.as_ref(),
                momentum_marginal: s.momentum_marginal.as_ref(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&out).expect("trajectory serializes");
    s.push('\n');
    s
}

/// Writes the trajectory into `dir`: one `<kind>.csv` per requested output,
/// or a single `trajectory.json`. Returns the files written.
pub fn export(traj: &Trajectory, format: Format, dir: &Path) -> Result<Vec<PathBuf>, IoError> {
    if traj.samples.is_empty() {
        return Err(IoError::EmptyTrajectory);
    }
    fs::create_dir_all(dir).map_err(|source| IoError::Io {
        path: path_str(dir),
        source,
    })?;
    match format {
        Format::Json => {
            let path = dir.join("trajectory.json");
            write(&path, &to_json(traj))?;
            Ok(vec![path])
        }
        Format::Csv => {
            let mut kinds = traj.outputs.clone();
            kinds.sort();
            kinds.dedup();
            let mut written = Vec::with_capacity(kinds.len());
            for kind in kinds {
                let path = dir.join(format!("{}.csv", kind.file_stem()));
                write(&path, &to_csv(traj, kind))?;
                written.push(path);
            }
            Ok(written)
        }
    }
}

/// `$PPS_RELAX_OUT_DIR` if set, else the current directory.
pub fn default_out_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}
