//! Closed-form Redfield propagator for pure quadrupolar relaxation of a
//! spin 3/2, acting on `Δ = σ − σ∞`.
//!
//! The ten independent upper-triangle elements split into four sectors:
//!
//! * `Δ12`, `Δ03`: single exponentials with time constant `τ12`;
//! * `(Δ01, Δ23)`: envelope `e^{-t/τ01}`, mixed through `e^{-t/τ2}`;
//! * `(Δ02, Δ13)`: envelope `e^{-t/τ02}`, mixed through `e^{-t/τ1}`;
//! * populations `(Δ00, Δ11, Δ22)` with modes `e^{-t/τ1}`, `e^{-t/τ2}` and
//!   `e^{-2t/τ12}`; `Δ33` is fixed by its own law, which equals
//!   `-(Δ00 + Δ11 + Δ22)`.
//!
//! Times are in milliseconds.

use serde::{Deserialize, Serialize};

use crate::error::RedfieldError;
use crate::linalg::ComplexMatrix;
use crate::states::DeviationMatrix;

const DIM: usize = 4;
const DELTA_TOL: f64 = 1e-12;

/// The five characteristic times, in ms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelaxationTimes {
    pub tau01: f64,
    pub tau02: f64,
    pub tau12: f64,
    pub tau1: f64,
    pub tau2: f64,
}

impl Default for RelaxationTimes {
    /// ²³Na in an oriented lyotropic liquid crystal.
    fn default() -> Self {
        Self {
            tau01: 4.6,
            tau02: 4.7,
            tau12: 11.1,
            tau1: 20.8,
            tau2: 23.8,
        }
    }
}

impl RelaxationTimes {
    pub fn new(tau01: f64, tau02: f64, tau12: f64, tau1: f64, tau2: f64) -> Result<Self, RedfieldError> {
        let taus = Self {
            tau01,
            tau02,
            tau12,
            tau1,
            tau2,
        };
        taus.validate()?;
        Ok(taus)
    }

    pub fn validate(&self) -> Result<(), RedfieldError> {
        for (name, value) in self.named() {
            if !(value.is_finite() && value > 0.0) {
                return Err(RedfieldError::InvalidTime { name, value });
            }
        }
        Ok(())
    }

    pub fn named(&self) -> [(&'static str, f64); 5] {
        [
            ("tau01", self.tau01),
            ("tau02", self.tau02),
            ("tau12", self.tau12),
            ("tau1", self.tau1),
            ("tau2", self.tau2),
        ]
    }

    pub fn max(&self) -> f64 {
        self.named().iter().map(|&(_, v)| v).fold(0.0, f64::max)
    }
}

/// `Δ = σ − σ∞`, a 4×4 Hermitian traceless matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaMatrix(ComplexMatrix);

impl DeltaMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self, RedfieldError> {
        if mat.dim() != DIM {
            return Err(RedfieldError::WrongDimension(mat.dim()));
        }
        let scale = mat.max_abs().max(1.0);
        let herm = mat.hermitian_residual();
        if herm > DELTA_TOL * scale {
            return Err(RedfieldError::InvalidDelta(format!("Hermitian residual {herm:e}")));
        }
        let tr = mat.trace().norm();
        if tr > DELTA_TOL * scale {
            return Err(RedfieldError::InvalidDelta(format!("trace {tr:e}")));
        }
        Ok(Self(mat))
    }

    pub fn between(sigma: &DeviationMatrix, sigma_inf: &DeviationMatrix) -> Result<Self, RedfieldError> {
        Self::new(sigma.matrix() - sigma_inf.matrix())
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }
}

/// Evaluates `Δ(t)` from `Δ(0)` using the closed-form element laws.
pub fn propagate_delta(d0: &DeltaMatrix, t: f64, taus: &RelaxationTimes) -> Result<DeltaMatrix, RedfieldError> {
    if t.is_nan() || t < 0.0 {
        return Err(RedfieldError::NegativeTime(t));
    }
    taus.validate()?;
    let d = &d0.0;
    let mut out = ComplexMatrix::zeros(DIM);

    let e1 = (-t / taus.tau1).exp();
    let e2 = (-t / taus.tau2).exp();
    let e12 = (-t / taus.tau12).exp();
    let e12x2 = (-2.0 * t / taus.tau12).exp();

    out[(1, 2)] = d[(1, 2)] * e12;
    out[(0, 3)] = d[(0, 3)] * e12;

    let env = (-t / taus.tau01).exp();
    let (same, cross) = ((1.0 + e2) / 2.0, (1.0 - e2) / 2.0);
    out[(0, 1)] = (d[(0, 1)] * same + d[(2, 3)] * cross) * env;
    out[(2, 3)] = (d[(0, 1)] * cross + d[(2, 3)] * same) * env;

    let env = (-t / taus.tau02).exp();
    let (same, cross) = ((1.0 + e1) / 2.0, (1.0 - e1) / 2.0);
    out[(0, 2)] = (d[(0, 2)] * same + d[(1, 3)] * cross) * env;
    out[(1, 3)] = (d[(0, 2)] * cross + d[(1, 3)] * same) * env;

    let (p0, p1, p2) = (d[(0, 0)].re, d[(1, 1)].re, d[(2, 2)].re);
    let d00 = (e2 + e1) / 2.0 * p0 + (-e12x2 + e2) / 2.0 * p1 + (-e12x2 + e1) / 2.0 * p2;
    let d11 = (e2 - e1) / 2.0 * p0 + (e12x2 + e2) / 2.0 * p1 + (e12x2 - e1) / 2.0 * p2;
    let d22 = (-e2 + e1) / 2.0 * p0 + (e12x2 - e2) / 2.0 * p1 + (e12x2 + e1) / 2.0 * p2;
    let d33 = -((e2 + e1) / 2.0 * p0 + (e12x2 + e2) / 2.0 * p1 + (e12x2 + e1) / 2.0 * p2);

    let sum = d00 + d11 + d22;
    let scale = p0.abs().max(p1.abs()).max(p2.abs()).max(1.0);
    assert!(
        (d33 + sum).abs() <= DELTA_TOL * scale,
        "Δ33 law disagrees with trace closure: {d33:e} vs {:e}",
        -sum
    );

    out[(0, 0)].re = d00;
    out[(1, 1)].re = d11;
    out[(2, 2)].re = d22;
    out[(3, 3)].re = d33;

    for i in 0..DIM {
        for j in 0..i {
            out[(i, j)] = out[(j, i)].conj();
        }
    }
    Ok(DeltaMatrix(out))
}

/// `σ(t) = σ∞ + Δ(t)` with `Δ(0) = σ0 − σ∞`.
pub fn evolve_sigma(
    sigma0: &DeviationMatrix,
    sigma_inf: &DeviationMatrix,
    t: f64,
    taus: &RelaxationTimes,
) -> Result<DeviationMatrix, RedfieldError> {
    if sigma0.dim() != DIM {
        return Err(RedfieldError::WrongDimension(sigma0.dim()));
    }
    let d0 = DeltaMatrix::between(sigma0, sigma_inf)?;
    let dt = propagate_delta(&d0, t, taus)?;
    let sigma = sigma_inf.matrix() + dt.matrix();
    DeviationMatrix::new(sigma).map_err(|e| RedfieldError::InvalidDelta(e.to_string()))
}
