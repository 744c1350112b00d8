//! Concurrence and discrete Wigner functions.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::ObservableError;
use crate::linalg::{self, pauli_y, ComplexMatrix};
use crate::states::DensityMatrix;

/// Eigenvalues of `ρ ρ̃` below this are an error rather than rounding.
pub const CONCURRENCE_CLIP: f64 = -1e-12;

/// Non-X entries must be below this fraction of the largest entry.
pub const X_LAYOUT_TOL: f64 = 1e-9;

pub const WIGNER_IMAG_TOL: f64 = 1e-10;

fn spin_flip() -> ComplexMatrix {
    pauli_y().kron(&pauli_y())
}

/// Wootters concurrence of a two-qubit state.
///
/// The spectrum of `R = ρ (σy⊗σy) ρ* (σy⊗σy)` equals that of the Hermitian
/// matrix `√ρ ρ̃ √ρ`, which is what gets diagonalized here.
pub fn concurrence_general(rho: &DensityMatrix) -> Result<f64, ObservableError> {
    if rho.dim() != 4 {
        return Err(ObservableError::InvalidState(format!(
            "expected a 4x4 matrix, got {0}x{0}",
            rho.dim()
        )));
    }
    let m = rho.matrix();
    let yy = spin_flip();
    let tilde = yy.matmul(&m.conj()).matmul(&yy);
    let sqrt_rho = linalg::hermitian_eigen(m)?.map_spectrum(|l| l.max(0.0).sqrt());
    let h = sqrt_rho.matmul(&tilde).matmul(&sqrt_rho).hermitian_part();
    let lambdas = linalg::hermitian_eigenvalues(&h)?;
    let mut roots = [0.0f64; 4];
    for (r, &l) in roots.iter_mut().zip(&lambdas) {
        if l < CONCURRENCE_CLIP {
            return Err(ObservableError::InvalidState(format!(
                "negative eigenvalue {l:e} of ρρ̃"
            )));
        }
        *r = l.max(0.0).sqrt();
    }
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).max(0.0))
}

/// Entries of an X-shaped 4×4 density matrix:
///
/// ```text
/// a 0 0 w
/// 0 b z 0
/// 0 z* c 0
/// w* 0 0 d
/// ```
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XStateView {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub w: Complex64,
    pub z: Complex64,
}

impl XStateView {
    pub fn from_matrix(m: &ComplexMatrix) -> Result<Self, ObservableError> {
        if m.dim() != 4 {
            return Err(ObservableError::InvalidState(format!("X layout needs 4x4, got {0}x{0}", m.dim())));
        }
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                if i != j && i + j != 3 {
                    worst = worst.max(m[(i, j)].norm());
                }
            }
        }
        if worst > X_LAYOUT_TOL * m.max_abs() {
            return Err(ObservableError::NotXState(worst));
        }
        Ok(Self {
            a: m[(0, 0)].re,
            b: m[(1, 1)].re,
            c: m[(2, 2)].re,
            d: m[(3, 3)].re,
            w: m[(0, 3)],
            z: m[(1, 2)],
        })
    }

    pub fn from_density(rho: &DensityMatrix) -> Result<Self, ObservableError> {
        Self::from_matrix(rho.matrix())
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::from_diag(&[self.a, self.b, self.c, self.d]);
        m[(0, 3)] = self.w;
        m[(3, 0)] = self.w.conj();
        m[(1, 2)] = self.z;
        m[(2, 1)] = self.z.conj();
        m
    }
}

/// Closed-form concurrence `2 max{0, |z| − √(ad), |w| − √(bc)}`.
pub fn concurrence_xstate(x: &XStateView) -> f64 {
    let c1 = x.z.norm() - (x.a * x.d).max(0.0).sqrt();
    let c2 = x.w.norm() - (x.b * x.c).max(0.0).sqrt();
    2.0 * c1.max(c2).max(0.0)
}

/// Concurrence at each sample; failures carry the offending time.
pub fn concurrence_trajectory<'a, I>(samples: I) -> Result<Vec<(f64, f64)>, (f64, ObservableError)>
where
    I: IntoIterator<Item = (f64, &'a DensityMatrix)>,
{
    samples
        .into_iter()
        .map(|(t, rho)| concurrence_general(rho).map(|c| (t, c)).map_err(|e| (t, e)))
        .collect()
}

/// First sample time at which a previously positive curve is exactly zero.
pub fn sudden_death_time(curve: &[(f64, f64)]) -> Option<f64> {
    let first_positive = curve.iter().position(|&(_, c)| c > 0.0)?;
    curve[first_positive..].iter().find(|&&(_, c)| c == 0.0).map(|&(t, _)| t)
}

/// Number of strict sign flips along `values`, skipping entries with
/// `|v| <= zero_tol`.
pub fn sign_changes(values: &[f64], zero_tol: f64) -> usize {
    let signs: Vec<bool> = values.iter().filter(|v| v.abs() > zero_tol).map(|&v| v > 0.0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Phase-space point operators `A(q, p)` on a `2N × 2N` grid:
///
/// `A(q, p) = U^q R V^{-p} exp(iπqp/N) / 2N`
///
/// with `U|k⟩ = |k+1⟩`, `R|k⟩ = |−k⟩` (indices mod N) and `V = F U F†`,
/// where `F` is the DFT with kernel `exp(+2πi jk/N)/√N`. The first `N × N`
/// block is built from the definition, the rest from the periodicity
/// `A(q + ξq N, p + ξp N) = A(q, p) (−1)^{ξp q + ξq p + ξq ξp N}`.
#[derive(Clone, Debug)]
pub struct PhasePointGrid {
    n: usize,
    ops: Vec<ComplexMatrix>,
}

/// `F_jk = exp(2πi jk/N)/√N`
pub fn dft_matrix(n: usize) -> ComplexMatrix {
    let mut f = ComplexMatrix::zeros(n);
    let norm = 1.0 / (n as f64).sqrt();
    for j in 0..n {
        for k in 0..n {
            f[(j, k)] = Complex64::from_polar(norm, 2.0 * PI * (j * k % n) as f64 / n as f64);
        }
    }
    f
}

pub fn shift_operator(n: usize) -> ComplexMatrix {
    let mut u = ComplexMatrix::zeros(n);
    for k in 0..n {
        u[((k + 1) % n, k)] = Complex64::new(1.0, 0.0);
    }
    u
}

pub fn reflection_operator(n: usize) -> ComplexMatrix {
    let mut r = ComplexMatrix::zeros(n);
    for k in 0..n {
        r[((n - k) % n, k)] = Complex64::new(1.0, 0.0);
    }
    r
}

/// Momentum shift `V = F U F†`, diagonal in the computational basis.
pub fn momentum_shift_operator(n: usize) -> ComplexMatrix {
    let f = dft_matrix(n);
    f.matmul(&shift_operator(n)).matmul(&f.adjoint())
}

fn check_dim(n: usize) -> Result<(), ObservableError> {
    if !(2..=linalg::MAX_DIM).contains(&n) || n % 2 != 0 {
        return Err(ObservableError::UnsupportedDimension(n));
    }
    Ok(())
}

/// `A(q, p)` straight from the definition, for any integer grid point.
pub fn phase_point_operator(n: usize, q: usize, p: usize) -> Result<ComplexMatrix, ObservableError> {
    check_dim(n)?;
    let u = shift_operator(n);
    let r = reflection_operator(n);
    let v_inv = momentum_shift_operator(n).adjoint();
    let phase = Complex64::from_polar(1.0 / (2 * n) as f64, PI * ((q * p) % (2 * n)) as f64 / n as f64);
    Ok(u.pow(q as u32).matmul(&r).matmul(&v_inv.pow(p as u32)).scale_c(phase))
}

/// `(−1)^{ξp q + ξq p + ξq ξp N}`
pub fn periodicity_sign(n: usize, q: usize, p: usize, xi_q: usize, xi_p: usize) -> f64 {
    if (xi_p * q + xi_q * p + xi_q * xi_p * n) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl PhasePointGrid {
    pub fn new(n: usize) -> Result<Self, ObservableError> {
        check_dim(n)?;
        let side = 2 * n;
        let mut fundamental = Vec::with_capacity(n * n);
        for q in 0..n {
            for p in 0..n {
                fundamental.push(phase_point_operator(n, q, p)?);
            }
        }
        let mut ops = Vec::with_capacity(side * side);
        for q in 0..side {
            for p in 0..side {
                let (xi_q, q0) = (q / n, q % n);
                let (xi_p, p0) = (p / n, p % n);
                let sign = periodicity_sign(n, q0, p0, xi_q, xi_p);
                let a = fundamental[q0 * n + p0].scale(sign);
                debug_assert!(a.is_hermitian(linalg::HERMITIAN_TOL));
                ops.push(a);
            }
        }
        Ok(Self { n, ops })
    }

    /// Hilbert-space dimension `N`.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Grid side `2N`.
    pub fn side(&self) -> usize {
        2 * self.n
    }

    pub fn get(&self, q: usize, p: usize) -> &ComplexMatrix {
        let side = self.side();
        &self.ops[(q % side) * side + (p % side)]
    }
}

/// Real `2N × 2N` array `W(q, p)`, row index `q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WignerGrid {
    pub side: usize,
    pub values: Vec<f64>,
}

impl WignerGrid {
    pub fn get(&self, q: usize, p: usize) -> f64 {
        self.values[q * self.side + p]
    }

    /// `W(q, ·)`
    pub fn row(&self, q: usize) -> &[f64] {
        &self.values[q * self.side..(q + 1) * self.side]
    }
}

/// `W(q, p) = Tr[ρ A(q, p)]` for any Hermitian matrix of the grid's dimension.
pub fn wigner_of(m: &ComplexMatrix, grid: &PhasePointGrid) -> Result<WignerGrid, ObservableError> {
    if m.dim() != grid.dim() {
        return Err(ObservableError::DimensionMismatch {
            state: m.dim(),
            grid: grid.dim(),
        });
    }
    let side = grid.side();
    let mut values = Vec::with_capacity(side * side);
    for q in 0..side {
        for p in 0..side {
            let w = m.trace_product(grid.get(q, p));
            if w.im.abs() > WIGNER_IMAG_TOL {
                return Err(ObservableError::ComplexWigner { q, p, residue: w.im.abs() });
            }
            values.push(w.re);
        }
    }
    Ok(WignerGrid { side, values })
}

pub fn wigner(rho: &DensityMatrix, grid: &PhasePointGrid) -> Result<WignerGrid, ObservableError> {
    wigner_of(rho.matrix(), grid)
}

/// `M(p) = Σ_q W(q, p)`
pub fn momentum_marginal(w: &WignerGrid) -> Vec<f64> {
    (0..w.side)
        .map(|p| (0..w.side).map(|q| w.get(q, p)).sum())
        .collect()
}

/// `Σ_p W(q, p)`
pub fn position_marginal(w: &WignerGrid) -> Vec<f64> {
    (0..w.side).map(|q| w.row(q).iter().sum()).collect()
}
