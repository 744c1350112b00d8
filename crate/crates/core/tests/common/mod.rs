//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use pps_relax::linalg::ComplexMatrix;
use pps_relax::{Complex64, RelaxationTimes};
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize, scale: f64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n {
        m[(i, i)] = c(rng.gen_range(-scale..scale), 0.0);
        for j in i + 1..n {
            m[(i, j)] = c(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale));
            m[(j, i)] = m[(i, j)].conj();
        }
    }
    m
}

pub fn random_traceless<R: Rng>(rng: &mut R, n: usize, scale: f64) -> ComplexMatrix {
    let mut m = random_hermitian(rng, n, scale);
    let mean = m.trace().re / n as f64;
    for i in 0..n {
        m[(i, i)].re -= mean;
    }
    // Remove the rounding left in the trace.
    let rest = m.trace().re;
    m[(n - 1, n - 1)].re -= rest;
    m
}

/// `G G† / Tr` with a complex Gaussian-ish `G`.
pub fn random_density<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let mut g = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    let m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    m.scale(1.0 / tr).hermitian_part()
}

pub fn random_ket<R: Rng>(rng: &mut R, n: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n)
        .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// `exp(M)` by scaling and squaring around a Taylor series.
pub fn expm(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.dim();
    let norm = m.frobenius();
    let mut squarings = 0;
    while norm / f64::powi(2.0, squarings) > 0.25 {
        squarings += 1;
    }
    let a = m.scale(1.0 / f64::powi(2.0, squarings));
    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..30 {
        term = term.matmul(&a).scale(1.0 / k as f64);
        sum = &sum + &term;
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum);
    }
    sum
}

pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let h = random_hermitian(rng, n, 2.0);
    expm(&h.scale_c(c(0.0, 1.0)))
}

/// Characteristic polynomial coefficients `[1, c1, ..., cn]` of
/// `det(λ − M)` by Faddeev–LeVerrier.
pub fn char_poly(m: &ComplexMatrix) -> Vec<Complex64> {
    let n = m.dim();
    let mut coeffs = vec![c(1.0, 0.0)];
    let mut mk = ComplexMatrix::zeros(n);
    let id = ComplexMatrix::identity(n);
    for k in 1..=n {
        let prev = *coeffs.last().unwrap();
        mk = m.matmul(&(&mk + &id.scale_c(prev)));
        let ck = -mk.trace() / k as f64;
        coeffs.push(ck);
    }
    coeffs
}

/// All roots of a monic polynomial by Durand–Kerner iteration.
pub fn durand_kerner(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let eval = |x: Complex64| coeffs.iter().fold(c(0.0, 0.0), |acc, &a| acc * x + a);
    let radius = 1.0 + coeffs[1..].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let seed = c(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * radius).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut denom = c(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * radius {
            break;
        }
    }
    roots
}

/// Rate equations behind the quadrupolar relaxation laws, integrated with
/// classic RK4.
pub struct RedfieldOde {
    pub taus: RelaxationTimes,
}

impl RedfieldOde {
    fn rhs(&self, d: &ComplexMatrix) -> ComplexMatrix {
        let t = &self.taus;
        let mut out = ComplexMatrix::zeros(4);

        out[(1, 2)] = -d[(1, 2)] / t.tau12;
        out[(0, 3)] = -d[(0, 3)] / t.tau12;

        // Pair blocks: −x/τ_env − P₋x/τ_mix with P₋ = ½[[1, −1], [−1, 1]].
        for &((a, b), tau_env, tau_mix) in &[(((0, 1), (2, 3)), t.tau01, t.tau2), (((0, 2), (1, 3)), t.tau02, t.tau1)] {
            let (x, y) = (d[a], d[b]);
            let half_diff = (x - y) * 0.5;
            out[a] = -x / tau_env - half_diff / tau_mix;
            out[b] = -y / tau_env + half_diff / tau_mix;
        }

        // Populations: −A1/τ1 − A2/τ2 − 2A3/τ12 on (Δ00, Δ11, Δ22).
        let (p0, p1, p2) = (d[(0, 0)].re, d[(1, 1)].re, d[(2, 2)].re);
        let a1 = [(p0 + p2) / 2.0, -(p0 + p2) / 2.0, (p0 + p2) / 2.0];
        let a2 = [(p0 + p1) / 2.0, (p0 + p1) / 2.0, -(p0 + p1) / 2.0];
        let a3 = [-(p1 + p2) / 2.0, (p1 + p2) / 2.0, (p1 + p2) / 2.0];
        let mut sum = 0.0;
        for i in 0..3 {
            let v = -a1[i] / t.tau1 - a2[i] / t.tau2 - 2.0 * a3[i] / t.tau12;
            out[(i, i)] = c(v, 0.0);
            sum += v;
        }
        out[(3, 3)] = c(-sum, 0.0);

        for i in 0..4 {
            for j in 0..i {
                out[(i, j)] = out[(j, i)].conj();
            }
        }
        out
    }

    pub fn integrate(&self, d0: &ComplexMatrix, t: f64, h: f64) -> ComplexMatrix {
        let steps = (t / h).ceil() as usize;
        let h = t / steps as f64;
        let mut d = d0.clone();
        for _ in 0..steps {
            let k1 = self.rhs(&d);
            let k2 = self.rhs(&(&d + &k1.scale(h / 2.0)));
            let k3 = self.rhs(&(&d + &k2.scale(h / 2.0)));
            let k4 = self.rhs(&(&d + &k3.scale(h)));
            let incr = &(&k1 + &k2.scale(2.0)) + &(&k3.scale(2.0) + &k4);
            d = &d + &incr.scale(h / 6.0);
        }
        d
    }
}

/// The four matrix families printed for `A(q, p)`, `q = 0..3`, each with
/// global phase `exp(−iπqp/4)/8`.
pub fn printed_phase_point(q: usize, p: usize) -> ComplexMatrix {
    let i = c(0.0, 1.0);
    let ip = i.powu(p as u32);
    let mip = (-i).powu(p as u32);
    let sp = c(if p % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
    let one = c(1.0, 0.0);
    let mut m = ComplexMatrix::zeros(4);
    let places: [((usize, usize), Complex64); 4] = match q {
        0 => [((0, 0), one), ((1, 3), ip), ((2, 2), sp), ((3, 1), mip)],
        1 => [((0, 1), one), ((1, 0), ip), ((2, 3), sp), ((3, 2), mip)],
        2 => [((0, 2), one), ((1, 1), ip), ((2, 0), sp), ((3, 3), mip)],
        3 => [((0, 3), one), ((1, 2), ip), ((2, 1), sp), ((3, 0), mip)],
        _ => panic!("printed families cover q = 0..3"),
    };
    for (idx, v) in places {
        m[idx] = v;
    }
    let phase = Complex64::from_polar(1.0 / 8.0, -std::f64::consts::PI * (q * p) as f64 / 4.0);
    m.scale_c(phase)
}
