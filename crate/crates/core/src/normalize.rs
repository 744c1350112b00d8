//! Turning a deviation matrix into a density matrix.
//!
//! Any traceless Hermitian `σ` can be written as `σ = α(ρ_α − 1/N)` for a
//! polarization `α > 0` and a density matrix `ρ_α`. The polarization is not
//! constant under non-unital relaxation: it starts at `ε` for a pseudo-pure
//! state and ends at `2Iε` at thermal equilibrium. `find_alpha` picks the
//! smallest `α` for which `ρ_α` is positive semidefinite, which pins the
//! smallest eigenvalue of `ρ_α` to zero.
//!
//! The two fixed-polarization schemes (`ε` throughout, or `2Iε` throughout)
//! are kept for comparison; they produce matrices that are not valid states
//! at some instants, so they return a raw matrix plus a verdict.

use log::warn;

use crate::error::NormalizeError;
use crate::linalg::{self, ComplexMatrix, C1, HERMITIAN_TOL};
use crate::states::{maximally_mixed, DensityMatrix, DeviationMatrix, PureKet, Spin, SpinSystem, PSD_TOL, TRACE_TOL};

/// Below this max-entry magnitude `σ` is treated as zero.
pub const DEGENERATE_SIGMA: f64 = 1e-18;

/// Relative excess over `2Iε` that triggers a warning in `find_alpha`.
pub const ALPHA_BOUND_SLACK: f64 = 1e-9;

const IDENTITY_TOL: f64 = 1e-14;

/// Output of a fixed-polarization normalization.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedNormalized {
    pub matrix: ComplexMatrix,
    pub min_population: f64,
    pub min_eigenvalue: f64,
    /// Hermitian, unit trace and PSD within tolerance.
    pub valid: bool,
}

impl FixedNormalized {
    fn assess(matrix: ComplexMatrix) -> Result<Self, NormalizeError> {
        let min_population = matrix.real_diagonal().into_iter().fold(f64::INFINITY, f64::min);
        let min_eigenvalue = linalg::min_eigenvalue(&matrix)?;
        let valid = matrix.hermitian_residual() <= HERMITIAN_TOL
            && (matrix.trace() - C1).norm() <= TRACE_TOL
            && min_eigenvalue >= -PSD_TOL;
        Ok(Self {
            matrix,
            min_population,
            min_eigenvalue,
            valid,
        })
    }

    pub fn populations(&self) -> Vec<f64> {
        self.matrix.real_diagonal()
    }
}

fn scaled_plus_mixed(sigma: &DeviationMatrix, polarization: f64) -> ComplexMatrix {
    &sigma.matrix().scale(1.0 / polarization) + &maximally_mixed(sigma.dim())
}

/// `σ/ε + 1/N`: exact at `t = 0`, not a state later on.
pub fn fixed_normalize_initial(sigma: &DeviationMatrix, epsilon: f64) -> Result<FixedNormalized, NormalizeError> {
    if !(epsilon > 0.0) {
        return Err(NormalizeError::InvalidAlpha(epsilon));
    }
    FixedNormalized::assess(scaled_plus_mixed(sigma, epsilon))
}

/// `σ/(2Iε) + 1/N`: exact at equilibrium, wrong at `t = 0`.
pub fn fixed_normalize_equilibrium(
    sigma: &DeviationMatrix,
    epsilon: f64,
    spin: Spin,
) -> Result<FixedNormalized, NormalizeError> {
    if !(epsilon > 0.0) {
        return Err(NormalizeError::InvalidAlpha(epsilon));
    }
    FixedNormalized::assess(scaled_plus_mixed(sigma, 2.0 * spin.value() * epsilon))
}

/// Smallest `α > 0` with `1/N + σ/α ⪰ 0`, i.e. `α = −N λ_min(σ)`.
pub fn find_alpha(sigma: &DeviationMatrix, sys: &SpinSystem) -> Result<f64, NormalizeError> {
    let max = sigma.matrix().max_abs();
    if max < DEGENERATE_SIGMA {
        return Err(NormalizeError::DegenerateSigma(max));
    }
    let lambda_min = linalg::min_eigenvalue(sigma.matrix())?;
    if lambda_min >= 0.0 {
        // Only reachable through rounding: a traceless nonzero Hermitian
        // matrix always has a negative eigenvalue.
        return Err(NormalizeError::DegenerateSigma(max));
    }
    let alpha = -(sigma.dim() as f64) * lambda_min;
    let bound = sys.equilibrium_polarization();
    if alpha > bound * (1.0 + ALPHA_BOUND_SLACK) {
        warn!("α = {alpha:e} exceeds the equilibrium polarization 2Iε = {bound:e}");
    }
    Ok(alpha)
}

/// `1/N + σ/α`, checked for positivity.
pub fn normalize_with_alpha(sigma: &DeviationMatrix, alpha: f64) -> Result<DensityMatrix, NormalizeError> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(NormalizeError::InvalidAlpha(alpha));
    }
    finish(scaled_plus_mixed(sigma, alpha), alpha)
}

fn finish(rho: ComplexMatrix, alpha: f64) -> Result<DensityMatrix, NormalizeError> {
    let min_eigenvalue = linalg::min_eigenvalue(&rho)?;
    if min_eigenvalue < -PSD_TOL {
        return Err(NormalizeError::NotPsd { alpha, min_eigenvalue });
    }
    Ok(DensityMatrix::new(rho)?)
}

/// `(ε/α)|ψ⟩⟨ψ| + (σ − σ0)/α + (1 − ε/α)/N`.
///
/// The result must coincide with `1/N + σ/α` whenever `σ0 = ε(|ψ⟩⟨ψ| − 1/N)`;
/// a mismatch means `σ0`, `ψ` and `ε` do not describe the same preparation.
pub fn normalize_time_dependent(
    sigma: &DeviationMatrix,
    sigma0: &DeviationMatrix,
    psi: &PureKet,
    sys: &SpinSystem,
    alpha: f64,
) -> Result<DensityMatrix, NormalizeError> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(NormalizeError::InvalidAlpha(alpha));
    }
    let n = sys.dim();
    if psi.dim() != n || sigma.dim() != n || sigma0.dim() != n {
        return Err(crate::error::StateError::DimensionMismatch {
            expected: n,
            got: if psi.dim() != n { psi.dim() } else if sigma.dim() != n { sigma.dim() } else { sigma0.dim() },
        }
        .into());
    }
    let ratio = sys.epsilon() / alpha;
    let pure = psi.projector().scale(ratio);
    let drift = (sigma.matrix() - sigma0.matrix()).scale(1.0 / alpha);
    let mixed = maximally_mixed(n).scale(1.0 - ratio);
    let rho = &(&pure + &drift) + &mixed;

    let direct = scaled_plus_mixed(sigma, alpha);
    let mismatch = rho.max_abs_diff(&direct);
    if mismatch > IDENTITY_TOL * ratio.max(1.0) {
        return Err(NormalizeError::InconsistentInitialState(mismatch));
    }
    finish(rho, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::redfield::{evolve_sigma, RelaxationTimes};
    use crate::states::{equilibrium_deviation, equilibrium_state, initial_deviation};
    use approx::assert_relative_eq;

    const EPS: f64 = 1e-5;

    fn sys() -> SpinSystem {
        SpinSystem::spin_three_halves(EPS).unwrap()
    }

    fn basis11() -> PureKet {
        PureKet::basis(4, 3)
    }

    #[test]
    fn fixed_initial_recovers_pure_state_at_start() {
        let s0 = initial_deviation(&sys(), &basis11()).unwrap();
        let out = fixed_normalize_initial(&s0, EPS).unwrap();
        assert!(out.matrix.max_abs_diff(&basis11().projector()) < 1e-15);
        assert!(out.valid);
    }

    #[test]
    fn fixed_initial_at_equilibrium_is_unphysical() {
        let out = fixed_normalize_initial(&equilibrium_deviation(&sys()), EPS).unwrap();
        let pops = out.populations();
        let want = [1.0, 0.5, 0.0, -0.5];
        for (p, w) in pops.iter().zip(want) {
            assert!((p - w).abs() < 1e-12, "{pops:?}");
        }
        assert!(!out.valid);
        assert!(out.min_population < 0.0);
    }

    #[test]
    fn fixed_equilibrium_endpoints() {
        let spin = Spin::THREE_HALVES;
        let at_eq = fixed_normalize_equilibrium(&equilibrium_deviation(&sys()), EPS, spin).unwrap();
        assert!(at_eq.matrix.max_abs_diff(equilibrium_state(&sys()).matrix()) < 1e-15);
        assert!(at_eq.valid);

        let s0 = initial_deviation(&sys(), &basis11()).unwrap();
        let at0 = fixed_normalize_equilibrium(&s0, EPS, spin).unwrap();
        let pops = at0.populations();
        assert!((pops[3] - 0.5).abs() < 1e-15);
        for p in &pops[..3] {
            assert!((p - 1.0 / 6.0).abs() < 1e-15);
        }

        let zero = fixed_normalize_equilibrium(&DeviationMatrix::zeros(4), EPS, spin).unwrap();
        assert_eq!(zero.matrix, maximally_mixed(4));
    }

    #[test]
    fn alpha_endpoints() {
        for psi in [PureKet::basis(4, 0), basis11(), PureKet::cat()] {
            let s0 = initial_deviation(&sys(), &psi).unwrap();
            assert_relative_eq!(find_alpha(&s0, &sys()).unwrap(), EPS, max_relative = 1e-12);
        }
        let sinf = equilibrium_deviation(&sys());
        assert_relative_eq!(find_alpha(&sinf, &sys()).unwrap(), 3.0 * EPS, max_relative = 1e-12);
    }

    #[test]
    fn alpha_of_zero_sigma_is_undefined() {
        assert!(matches!(
            find_alpha(&DeviationMatrix::zeros(4), &sys()),
            Err(NormalizeError::DegenerateSigma(_))
        ));
    }

    #[test]
    fn pure_state_recovered_at_start() {
        for psi in [basis11(), PureKet::cat()] {
            let s0 = initial_deviation(&sys(), &psi).unwrap();
            let rho = normalize_time_dependent(&s0, &s0, &psi, &sys(), EPS).unwrap();
            assert!(rho.matrix().max_abs_diff(&psi.projector()) < 1e-14);
        }
    }

    #[test]
    fn equilibrium_recovered_at_end() {
        let psi = basis11();
        let s0 = initial_deviation(&sys(), &psi).unwrap();
        let sinf = equilibrium_deviation(&sys());
        let rho = normalize_time_dependent(&sinf, &s0, &psi, &sys(), 3.0 * EPS).unwrap();
        assert!(rho.matrix().max_abs_diff(equilibrium_state(&sys()).matrix()) < 1e-14);
    }

    #[test]
    fn invalid_alpha_rejected() {
        let s0 = initial_deviation(&sys(), &basis11()).unwrap();
        for a in [0.0, -1.0, f64::NAN] {
            assert!(matches!(
                normalize_time_dependent(&s0, &s0, &basis11(), &sys(), a),
                Err(NormalizeError::InvalidAlpha(_))
            ));
        }
    }

    #[test]
    fn too_small_alpha_is_not_psd() {
        let s0 = initial_deviation(&sys(), &basis11()).unwrap();
        let err = normalize_with_alpha(&s0, 0.5 * EPS).unwrap_err();
        assert!(matches!(err, NormalizeError::NotPsd { .. }));
    }

    #[test]
    fn mismatched_preparation_detected() {
        let s0 = initial_deviation(&sys(), &basis11()).unwrap();
        let err = normalize_time_dependent(&s0, &s0, &PureKet::cat(), &sys(), EPS).unwrap_err();
        assert!(matches!(err, NormalizeError::InconsistentInitialState(_)));
    }

    #[test]
    fn basis11_at_ten_ms_is_a_state() {
        let taus = RelaxationTimes::default();
        let psi = basis11();
        let s0 = initial_deviation(&sys(), &psi).unwrap();
        let st = evolve_sigma(&s0, &equilibrium_deviation(&sys()), 10.0, &taus).unwrap();
        let alpha = find_alpha(&st, &sys()).unwrap();
        let rho = normalize_time_dependent(&st, &s0, &psi, &sys(), alpha).unwrap();
        let pops = rho.populations();
        assert!(pops.iter().all(|&p| p >= 0.0));
        assert!((pops.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let min = linalg::min_eigenvalue(rho.matrix()).unwrap();
        assert!(min.abs() < 1e-12, "{min:e}");
    }
}
