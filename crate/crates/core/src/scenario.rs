//! Scenario configuration and trajectory evaluation.

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{PipelineError, ScenarioError};
use crate::linalg::{self, ComplexMatrix};
use crate::normalize::{self, FixedNormalized};
use crate::observables::{self, PhasePointGrid, WignerGrid};
use crate::redfield::{self, RelaxationTimes};
use crate::states::{self, DensityMatrix, DeviationMatrix, PureKet, Spin, SpinSystem, DEFAULT_EPSILON};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedState {
    Basis00,
    Basis01,
    Basis10,
    Basis11,
    Cat,
}

impl NamedState {
    pub const ALL: [NamedState; 5] = [
        NamedState::Basis00,
        NamedState::Basis01,
        NamedState::Basis10,
        NamedState::Basis11,
        NamedState::Cat,
    ];

    pub fn ket(self) -> PureKet {
        match self {
            NamedState::Basis00 => PureKet::basis(4, 0),
            NamedState::Basis01 => PureKet::basis(4, 1),
            NamedState::Basis10 => PureKet::basis(4, 2),
            NamedState::Basis11 => PureKet::basis(4, 3),
            NamedState::Cat => PureKet::cat(),
        }
    }
}

impl std::str::FromStr for NamedState {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "basis00" => Ok(NamedState::Basis00),
            "basis01" => Ok(NamedState::Basis01),
            "basis10" => Ok(NamedState::Basis10),
            "basis11" => Ok(NamedState::Basis11),
            "cat" => Ok(NamedState::Cat),
            other => Err(format!("unknown state {other:?} (expected basis00, basis01, basis10, basis11 or cat)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialState {
    Named(NamedState),
    Explicit { amplitudes: Vec<[f64; 2]> },
}

impl InitialState {
    pub fn ket(&self) -> Result<PureKet, ScenarioError> {
        match self {
            InitialState::Named(s) => Ok(s.ket()),
            InitialState::Explicit { amplitudes } => {
                PureKet::new(amplitudes.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
                    .map_err(|e| ScenarioError::InvalidConfig(e.to_string()))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `σ/ε + 1/N`
    FixedInitial,
    /// `σ/(2Iε) + 1/N`
    FixedEquilibrium,
    /// time-dependent `α`
    Alpha,
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::FixedInitial => "fixed_initial",
            Normalization::FixedEquilibrium => "fixed_equilibrium",
            Normalization::Alpha => "alpha",
        })
    }
}

impl std::str::FromStr for Normalization {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fixed_initial" => Ok(Normalization::FixedInitial),
            "fixed_equilibrium" => Ok(Normalization::FixedEquilibrium),
            "alpha" => Ok(Normalization::Alpha),
            other => Err(format!("unknown normalization {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    Populations,
    AlphaCurve,
    Concurrence,
    Wigner,
    MomentumMarginal,
}

impl OutputKind {
    pub fn file_stem(self) -> &'static str {
        match self {
            OutputKind::Populations => "populations",
            OutputKind::AlphaCurve => "alpha_curve",
            OutputKind::Concurrence => "concurrence",
            OutputKind::Wigner => "wigner",
            OutputKind::MomentumMarginal => "momentum_marginal",
        }
    }

    pub const ALL: [OutputKind; 5] = [
        OutputKind::Populations,
        OutputKind::AlphaCurve,
        OutputKind::Concurrence,
        OutputKind::Wigner,
        OutputKind::MomentumMarginal,
    ];
}

impl std::str::FromStr for OutputKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        OutputKind::ALL
            .into_iter()
            .find(|k| k.file_stem() == s)
            .ok_or_else(|| format!("unknown output {s:?}"))
    }
}

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}

fn default_spin() -> Spin {
    Spin::THREE_HALVES
}

/// Everything needed to reproduce one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_spin")]
    pub spin: Spin,
    pub initial_state: InitialState,
    #[serde(default)]
    pub taus: RelaxationTimes,
    pub t_start: f64,
    pub t_end: f64,
    pub t_step: f64,
    pub normalization: Normalization,
    pub outputs: Vec<OutputKind>,
}

impl ScenarioConfig {
    /// Default ε, spin and relaxation times for `state` over `[0, t_end]`.
    pub fn new(state: InitialState, normalization: Normalization, t_end: f64, t_step: f64) -> Self {
        Self {
            epsilon: DEFAULT_EPSILON,
            spin: Spin::THREE_HALVES,
            initial_state: state,
            taus: RelaxationTimes::default(),
            t_start: 0.0,
            t_end,
            t_step,
            normalization,
            outputs: vec![OutputKind::Populations, OutputKind::AlphaCurve],
        }
    }

    pub fn with_outputs(mut self, outputs: &[OutputKind]) -> Self {
        self.outputs = outputs.to_vec();
        self
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let bad = |m: String| Err(ScenarioError::InvalidConfig(m));
        if !(self.t_start >= 0.0 && self.t_start.is_finite()) {
            return bad(format!("t_start must be >= 0, got {}", self.t_start));
        }
        if !(self.t_step > 0.0 && self.t_step.is_finite()) {
            return bad(format!("t_step must be > 0, got {}", self.t_step));
        }
        if !(self.t_end > self.t_start && self.t_end.is_finite()) {
            return bad(format!("t_end must exceed t_start, got {} <= {}", self.t_end, self.t_start));
        }
        if self.spin != Spin::THREE_HALVES {
            return bad(format!("relaxation is only modelled for spin 3/2, got {}", self.spin));
        }
        if let Err(e) = self.taus.validate() {
            return bad(e.to_string());
        }
        if let Err(e) = SpinSystem::new(self.spin, self.epsilon) {
            return bad(e.to_string());
        }
        let ket = self.initial_state.ket()?;
        if ket.dim() != self.spin.dim() {
            return bad(format!("initial state has {} amplitudes, expected {}", ket.dim(), self.spin.dim()));
        }
        Ok(())
    }

    /// `t_start, t_start + t_step, ...` up to and including `t_end` (within
    /// rounding).
    pub fn time_grid(&self) -> Vec<f64> {
        time_grid(self.t_start, self.t_end, self.t_step)
    }
}

pub fn time_grid(t_start: f64, t_end: f64, t_step: f64) -> Vec<f64> {
    let steps = ((t_end - t_start) / t_step + 1e-9).floor() as usize;
    (0..=steps).map(|k| t_start + k as f64 * t_step).collect()
}

/// One instant of a trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub t_ms: f64,
    pub sigma: DeviationMatrix,
    /// Polarization used to normalize `sigma`.
    pub alpha: f64,
    pub rho: ComplexMatrix,
    pub valid: bool,
    pub min_eigenvalue: f64,
    pub concurrence: Option<f64>,
    pub wigner: Option<WignerGrid>,
    pub momentum_marginal: Option<Vec<f64>>,
}

impl Sample {
    pub fn populations(&self) -> Vec<f64> {
        self.rho.real_diagonal()
    }

    /// The normalized matrix as a validated state, if it is one.
    pub fn density(&self) -> Option<DensityMatrix> {
        DensityMatrix::new(self.rho.clone()).ok()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub epsilon: f64,
    pub spin: Spin,
    pub normalization: Normalization,
    pub outputs: Vec<OutputKind>,
    pub samples: Vec<Sample>,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t_ms).collect()
    }

    /// `(t, C)` for every sample holding a valid state.
    pub fn concurrence_curve(&self) -> Result<Vec<(f64, f64)>, ScenarioError> {
        let states: Vec<(f64, DensityMatrix)> = self
            .samples
            .iter()
            .filter_map(|s| s.density().map(|d| (s.t_ms, d)))
            .collect();
        observables::concurrence_trajectory(states.iter().map(|(t, d)| (*t, d))).map_err(|(t_ms, e)| {
            ScenarioError::AtTime {
                t_ms,
                source: e.into(),
            }
        })
    }
}

/// Shared evaluation of `(t, σ)` pairs into samples.
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub sys: SpinSystem,
    pub normalization: Normalization,
    pub outputs: BTreeSet<OutputKind>,
    /// Preparation `(ψ, σ0)`; when present the α route uses the explicit
    /// pure-part decomposition and checks it against `1/N + σ/α`.
    pub preparation: Option<(PureKet, DeviationMatrix)>,
    grid: Option<PhasePointGrid>,
}

impl Pipeline {
    pub fn new(
        sys: SpinSystem,
        normalization: Normalization,
        outputs: &[OutputKind],
        preparation: Option<(PureKet, DeviationMatrix)>,
    ) -> Result<Self, ScenarioError> {
        let outputs: BTreeSet<OutputKind> = outputs.iter().copied().collect();
        let grid = if outputs.contains(&OutputKind::Wigner) || outputs.contains(&OutputKind::MomentumMarginal) {
            Some(PhasePointGrid::new(sys.dim()).map_err(|e| ScenarioError::InvalidConfig(e.to_string()))?)
        } else {
            None
        };
        Ok(Self {
            sys,
            normalization,
            outputs,
            preparation,
            grid,
        })
    }

    pub fn sample(&self, t_ms: f64, sigma: DeviationMatrix) -> Result<Sample, PipelineError> {
        let (alpha, rho, valid, min_eigenvalue) = match self.normalization {
            Normalization::Alpha => {
                let alpha = normalize::find_alpha(&sigma, &self.sys)?;
                let rho = match &self.preparation {
                    Some((psi, sigma0)) => normalize::normalize_time_dependent(&sigma, sigma0, psi, &self.sys, alpha)?,
                    None => normalize::normalize_with_alpha(&sigma, alpha)?,
                };
                let min = linalg::min_eigenvalue(rho.matrix()).map_err(crate::error::NormalizeError::from)?;
                (alpha, rho.into_matrix(), true, min)
            }
            Normalization::FixedInitial => {
                let eps = self.sys.epsilon();
                let out = normalize::fixed_normalize_initial(&sigma, eps)?;
                fixed_parts(eps, out)
            }
            Normalization::FixedEquilibrium => {
                let out = normalize::fixed_normalize_equilibrium(&sigma, self.sys.epsilon(), self.sys.spin())?;
                fixed_parts(self.sys.equilibrium_polarization(), out)
            }
        };

        let concurrence = if self.outputs.contains(&OutputKind::Concurrence) && valid && rho.dim() == 4 {
            let state = DensityMatrix::new(rho.clone())?;
            Some(observables::concurrence_general(&state)?)
        } else {
            None
        };
        let (wigner, momentum_marginal) = match &self.grid {
            Some(grid) => {
                let w = observables::wigner_of(&rho, grid)?;
                let m = self
                    .outputs
                    .contains(&OutputKind::MomentumMarginal)
                    .then(|| observables::momentum_marginal(&w));
                let w = self.outputs.contains(&OutputKind::Wigner).then_some(w);
                (w, m)
            }
            None => (None, None),
        };

        Ok(Sample {
            t_ms,
            sigma,
            alpha,
            rho,
            valid,
            min_eigenvalue,
            concurrence,
            wigner,
            momentum_marginal,
        })
    }

    /// Evaluates every `(t, σ)`; order is preserved.
    pub fn run(&self, series: Vec<(f64, DeviationMatrix)>) -> Result<Vec<Sample>, ScenarioError> {
        let eval = |(t, sigma): (f64, DeviationMatrix)| {
            self.sample(t, sigma)
                .map_err(|source| ScenarioError::AtTime { t_ms: t, source })
        };
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            series.into_par_iter().map(eval).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            series.into_iter().map(eval).collect()
        }
    }
}

fn fixed_parts(polarization: f64, out: FixedNormalized) -> (f64, ComplexMatrix, bool, f64) {
    (polarization, out.matrix, out.valid, out.min_eigenvalue)
}

/// Evolves the configured initial state and normalizes every grid point.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Trajectory, ScenarioError> {
    cfg.validate()?;
    let sys = SpinSystem::new(cfg.spin, cfg.epsilon).map_err(|e| ScenarioError::InvalidConfig(e.to_string()))?;
    let psi = cfg.initial_state.ket()?;
    let sigma0 = states::initial_deviation(&sys, &psi).map_err(|e| ScenarioError::InvalidConfig(e.to_string()))?;
    let sigma_inf = states::equilibrium_deviation(&sys);

    let series = cfg
        .time_grid()
        .into_iter()
        .map(|t| {
            redfield::evolve_sigma(&sigma0, &sigma_inf, t, &cfg.taus)
                .map(|s| (t, s))
                .map_err(|e| ScenarioError::AtTime {
                    t_ms: t,
                    source: e.into(),
                })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let pipeline = Pipeline::new(sys, cfg.normalization, &cfg.outputs, Some((psi, sigma0)))?;
    Ok(Trajectory {
        epsilon: cfg.epsilon,
        spin: cfg.spin,
        normalization: cfg.normalization,
        outputs: cfg.outputs.clone(),
        samples: pipeline.run(series)?,
    })
}

/// Normalizes an externally supplied deviation series.
pub fn normalize_series(
    series: Vec<(f64, DeviationMatrix)>,
    sys: SpinSystem,
    normalization: Normalization,
    outputs: &[OutputKind],
) -> Result<Trajectory, ScenarioError> {
    if let Some((_, s)) = series.iter().find(|(_, s)| s.dim() != sys.dim()) {
        return Err(ScenarioError::InvalidConfig(format!(
            "series matrices are {0}x{0} but spin {1} needs {2}x{2}",
            s.dim(),
            sys.spin(),
            sys.dim()
        )));
    }
    let pipeline = Pipeline::new(sys, normalization, outputs, None)?;
    Ok(Trajectory {
        epsilon: sys.epsilon(),
        spin: sys.spin(),
        normalization,
        outputs: outputs.to_vec(),
        samples: pipeline.run(series)?,
    })
}
