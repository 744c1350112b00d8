//! Browser bindings. Each export returns a flat `Float64Array`; row layouts
//! are documented per function. The `*_rows` functions hold the logic and
//! are what the native tests exercise.

use pps_relax::observables::{self, PhasePointGrid};
use pps_relax::scenario::{run_scenario, InitialState, NamedState, Normalization, OutputKind, ScenarioConfig};
use pps_relax::RelaxationTimes;
use wasm_bindgen::prelude::*;

/// Upper bound on grid points per request, to keep the page responsive.
pub const MAX_POINTS: usize = 20_000;

fn config(state: &str, normalization: &str, t_end: f64, t_step: f64, taus: &[f64]) -> Result<ScenarioConfig, String> {
    let state: NamedState = state.parse()?;
    let normalization: Normalization = normalization.parse()?;
    let taus = match *taus {
        [] => RelaxationTimes::default(),
        [a, b, c, d, e] => RelaxationTimes::new(a, b, c, d, e).map_err(|e| e.to_string())?,
        _ => return Err(format!("expected 5 relaxation times, got {}", taus.len())),
    };
    if t_step > 0.0 && t_end / t_step > MAX_POINTS as f64 {
        return Err(format!("grid too fine: more than {MAX_POINTS} points"));
    }
    let mut cfg = ScenarioConfig::new(InitialState::Named(state), normalization, t_end, t_step);
    cfg.taus = taus;
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

/// Rows `[t, p0, p1, p2, p3, α/ε, valid]`.
pub fn population_rows(state: &str, normalization: &str, t_end: f64, t_step: f64, taus: &[f64]) -> Result<Vec<f64>, String> {
    let cfg = config(state, normalization, t_end, t_step, taus)?.with_outputs(&[OutputKind::Populations, OutputKind::AlphaCurve]);
    let traj = run_scenario(&cfg).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(traj.samples.len() * 7);
    for s in &traj.samples {
        out.push(s.t_ms);
        out.extend(s.populations());
        out.push(s.alpha / traj.epsilon);
        out.push(if s.valid { 1.0 } else { 0.0 });
    }
    Ok(out)
}

/// Rows `[t, C]` for the cat state under α-normalization.
pub fn concurrence_rows(t_end: f64, t_step: f64, taus: &[f64]) -> Result<Vec<f64>, String> {
    let cfg = config("cat", "alpha", t_end, t_step, taus)?.with_outputs(&[OutputKind::Concurrence]);
    let curve = run_scenario(&cfg)
        .and_then(|t| t.concurrence_curve())
        .map_err(|e| e.to_string())?;
    Ok(curve.into_iter().flat_map(|(t, c)| [t, c]).collect())
}

/// 64 values `W(q, p)` (row `q`), then the 8 momentum marginals, for the
/// α-normalized state at `t`.
pub fn wigner_values(state: &str, t: f64, taus: &[f64]) -> Result<Vec<f64>, String> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(format!("time must be non-negative, got {t}"));
    }
    // A two-point grid whose first sample is t.
    let mut cfg = config(state, "alpha", t + 1.0, 1.0, taus)?.with_outputs(&[OutputKind::Wigner]);
    cfg.t_start = t;
    let traj = run_scenario(&cfg).map_err(|e| e.to_string())?;
    let w = traj.samples[0].wigner.clone().ok_or("no Wigner grid computed")?;
    let mut out = w.values.clone();
    out.extend(observables::momentum_marginal(&w));
    Ok(out)
}

/// Time of the first exactly-zero concurrence, or NaN.
pub fn death_time(curve: &[f64]) -> f64 {
    let pairs: Vec<(f64, f64)> = curve.chunks_exact(2).map(|c| (c[0], c[1])).collect();
    observables::sudden_death_time(&pairs).unwrap_or(f64::NAN)
}

#[wasm_bindgen]
pub fn populations(state: &str, normalization: &str, t_end: f64, t_step: f64, taus: &[f64]) -> Result<Vec<f64>, JsError> {
    population_rows(state, normalization, t_end, t_step, taus).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn concurrence(t_end: f64, t_step: f64, taus: &[f64]) -> Result<Vec<f64>, JsError> {
    concurrence_rows(t_end, t_step, taus).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = suddenDeathTime)]
pub fn sudden_death_time(curve: &[f64]) -> f64 {
    death_time(curve)
}

#[wasm_bindgen]
pub fn wigner(state: &str, t: f64, taus: &[f64]) -> Result<Vec<f64>, JsError> {
    wigner_values(state, t, taus).map_err(|e| JsError::new(&e))
}

/// Side of the Wigner grid shown by the page.
#[wasm_bindgen(js_name = wignerSide)]
pub fn wigner_side() -> usize {
    PhasePointGrid::new(4).map(|g| g.side()).unwrap_or(0)
}
