//! The state family: maximally mixed state, pseudo-pure states, deviation
//! matrices and the high-temperature equilibrium.
//!
//! Basis ordering is fixed throughout the crate: index 0 is `|3/2⟩ = |00⟩`,
//! index 1 `|1/2⟩ = |01⟩`, index 2 `|-1/2⟩ = |10⟩` and index 3
//! `|-3/2⟩ = |11⟩`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::StateError;
use crate::linalg::{self, ComplexMatrix, C0, C1, HERMITIAN_TOL};

pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
pub const KET_NORM_TOL: f64 = 1e-12;

/// Room-temperature order of magnitude of the polarization.
pub const DEFAULT_EPSILON: f64 = 1e-5;

/// A nuclear spin quantum number, stored as `2I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Spin {
    twice: u32,
}

impl Spin {
    pub const THREE_HALVES: Spin = Spin { twice: 3 };

    pub fn from_twice(twice: u32) -> Result<Self, StateError> {
        if twice == 0 {
            return Err(StateError::InvalidSpin("0".into()));
        }
        Ok(Self { twice })
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// Hilbert-space dimension `2I + 1`.
    pub fn dim(self) -> usize {
        self.twice as usize + 1
    }

    /// Magnetic quantum numbers `I, I-1, ..., -I` in basis order.
    pub fn m_values(self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.value() - k as f64).collect()
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for Spin {
    type Err = StateError;

    /// Accepts `"3/2"`, `"1"` or `"1.5"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || StateError::InvalidSpin(s.to_string());
        let s = s.trim();
        let twice = if let Some((num, den)) = s.split_once('/') {
            let num: u32 = num.trim().parse().map_err(|_| bad())?;
            match den.trim() {
                "2" => num,
                "1" => num.checked_mul(2).ok_or_else(bad)?,
                _ => return Err(bad()),
            }
        } else {
            let v: f64 = s.parse().map_err(|_| bad())?;
            let t = 2.0 * v;
            if !(t.is_finite() && t > 0.0 && t.fract() == 0.0 && t <= u32::MAX as f64) {
                return Err(bad());
            }
            t as u32
        };
        Self::from_twice(twice).map_err(|_| bad())
    }
}

impl TryFrom<String> for Spin {
    type Error = StateError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Spin> for String {
    fn from(s: Spin) -> String {
        s.to_string()
    }
}

/// Spin and polarization of the ensemble.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinSystem {
    spin: Spin,
    epsilon: f64,
}

impl SpinSystem {
    pub fn new(spin: Spin, epsilon: f64) -> Result<Self, StateError> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(StateError::InvalidEpsilon(epsilon));
        }
        Ok(Self { spin, epsilon })
    }

    pub fn spin_three_halves(epsilon: f64) -> Result<Self, StateError> {
        Self::new(Spin::THREE_HALVES, epsilon)
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn dim(&self) -> usize {
        self.spin.dim()
    }

    /// Equilibrium polarization `2Iε`.
    pub fn equilibrium_polarization(&self) -> f64 {
        2.0 * self.spin.value() * self.epsilon
    }
}

/// Normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureKet {
    amps: Vec<Complex64>,
}

impl PureKet {
    pub fn new(amps: Vec<Complex64>) -> Result<Self, StateError> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if amps.is_empty() || !norm.is_finite() || (norm - 1.0).abs() > KET_NORM_TOL {
            return Err(StateError::InvalidKet { norm });
        }
        Ok(Self { amps })
    }

    /// Computational basis vector `|k⟩` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dimension {dim}");
        let mut amps = vec![C0; dim];
        amps[k] = C1;
        Self { amps }
    }

    /// `(|00⟩ + |11⟩)/√2`, i.e. `(|3/2⟩ + |-3/2⟩)/√2`.
    pub fn cat() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self {
            amps: vec![h, C0, C0, h],
        }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amps)
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self, StateError> {
        let residual = mat.hermitian_residual();
        if residual > HERMITIAN_TOL {
            return Err(StateError::NotDensityMatrix(format!(
                "Hermitian residual {residual:e}"
            )));
        }
        let tr = mat.trace();
        if (tr - C1).norm() > TRACE_TOL {
            return Err(StateError::NotDensityMatrix(format!("trace {tr}")));
        }
        let min = linalg::min_eigenvalue(&mat)?;
        if min < -PSD_TOL {
            return Err(StateError::NotDensityMatrix(format!(
                "min eigenvalue {min:e}"
            )));
        }
        Ok(Self(mat))
    }

    /// `1/N`
    pub fn maximally_mixed(dim: usize) -> Self {
        Self(maximally_mixed(dim))
    }

    pub fn from_ket(psi: &PureKet) -> Self {
        Self(psi.projector())
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.0.real_diagonal()
    }
}

/// Hermitian, traceless matrix: the observable part `ρ - 1/N`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeviationMatrix(ComplexMatrix);

impl DeviationMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self, StateError> {
        let residual = mat.hermitian_residual();
        if residual > HERMITIAN_TOL {
            return Err(StateError::NotDeviationMatrix(format!(
                "Hermitian residual {residual:e}"
            )));
        }
        let tr = mat.trace();
        if tr.norm() > TRACE_TOL {
            return Err(StateError::NotDeviationMatrix(format!("trace {tr}")));
        }
        Ok(Self(mat))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(ComplexMatrix::zeros(dim))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }
}

pub fn maximally_mixed(dim: usize) -> ComplexMatrix {
    ComplexMatrix::identity(dim).scale(1.0 / dim as f64)
}

fn check_ket(sys: &SpinSystem, psi: &PureKet) -> Result<(), StateError> {
    if psi.dim() != sys.dim() {
        return Err(StateError::DimensionMismatch {
            expected: sys.dim(),
            got: psi.dim(),
        });
    }
    Ok(())
}

/// `(1 - ε)/N + ε|ψ⟩⟨ψ|`
pub fn make_pps(sys: &SpinSystem, psi: &PureKet) -> Result<DensityMatrix, StateError> {
    check_ket(sys, psi)?;
    let eps = sys.epsilon();
    let mixed = maximally_mixed(sys.dim()).scale(1.0 - eps);
    Ok(DensityMatrix(&mixed + &psi.projector().scale(eps)))
}

/// `σ0 = ε(|ψ⟩⟨ψ| - 1/N)`
pub fn initial_deviation(sys: &SpinSystem, psi: &PureKet) -> Result<DeviationMatrix, StateError> {
    check_ket(sys, psi)?;
    let d = &psi.projector() - &maximally_mixed(sys.dim());
    Ok(DeviationMatrix(d.scale(sys.epsilon())))
}

/// `I_z` in basis order.
pub fn iz(spin: Spin) -> ComplexMatrix {
    ComplexMatrix::from_diag(&spin.m_values())
}

/// High-temperature Zeeman equilibrium `ρ_z = I_z/(N I) + 1/N`.
pub fn equilibrium_state(sys: &SpinSystem) -> DensityMatrix {
    let spin = sys.spin();
    let n = spin.dim() as f64;
    let diag: Vec<f64> = spin
        .m_values()
        .iter()
        .map(|m| m / (n * spin.value()) + 1.0 / n)
        .collect();
    DensityMatrix(ComplexMatrix::from_diag(&diag))
}

/// `σ∞ = 2Iε(ρ_z - 1/N)`
pub fn equilibrium_deviation(sys: &SpinSystem) -> DeviationMatrix {
    let n = sys.dim();
    let d = &equilibrium_state(sys).0 - &maximally_mixed(n);
    DeviationMatrix(d.scale(sys.equilibrium_polarization()))
}
