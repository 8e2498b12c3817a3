use num_complex::Complex64;

use super::fock::{coherent_amplitudes, PureState};
use super::{EnergyConvention, FockBasis, Moments, OracleObservables, LEAK_TOLERANCE};
use crate::error::{ensure_finite, Error, Result};
use crate::model::PhysicalParams;
use crate::numerics::{uniform_steps, Rk4};

/// Largest accepted `|Tr ρ - 1|` during integration.
pub const TRACE_TOLERANCE: f64 = 1e-6;
/// Largest accepted population of the highest retained level.
pub const EDGE_TOLERANCE: f64 = 1e-8;

/// Dense row-major density matrix on levels `0..dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn from_pure(state: &PureState) -> Self {
        let c = &state.amplitudes;
        let dim = c.len();
        let mut data = Vec::with_capacity(dim * dim);
        for a in c {
            for b in c {
                data.push(a * b.conj());
            }
        }
        DensityMatrix { dim, data }
    }

    #[inline]
    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.data[m * self.dim + n]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|k| self.get(k, k)).sum()
    }

    /// `max |ρ_mn - ρ_nm*|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for m in 0..self.dim {
            for n in m..self.dim {
                worst = worst.max((self.get(m, n) - self.get(n, m).conj()).norm());
            }
        }
        worst
    }

    pub fn population(&self, k: usize) -> f64 {
        self.get(k, k).re
    }

    pub(crate) fn moments(&self) -> Moments {
        let tr = self.trace().re;
        let mut b = Complex64::new(0.0, 0.0);
        let mut b2 = Complex64::new(0.0, 0.0);
        let mut n = 0.0;
        let mut n2 = 0.0;
        for k in 0..self.dim {
            let kf = k as f64;
            let p = self.population(k);
            n += kf * p;
            n2 += kf * kf * p;
            if k >= 1 {
                b += self.get(k, k - 1) * kf.sqrt();
            }
            if k >= 2 {
                b2 += self.get(k, k - 2) * (kf * (kf - 1.0)).sqrt();
            }
        }
        Moments {
            b: b / tr,
            b2: b2 / tr,
            n: n / tr,
            n2: n2 / tr,
        }
    }
}

/// Output of a Lindblad run.
#[derive(Debug, Clone, PartialEq)]
pub struct LindbladSeries {
    pub observables: Vec<OracleObservables>,
    pub n_max: usize,
    /// Step actually used (the requested step adjusted to land on `t_max`).
    pub dt: f64,
    pub max_trace_drift: f64,
    pub max_hermiticity_defect: f64,
    /// Largest population seen in the highest retained level.
    pub max_edge_population: f64,
}

/// Generator of the damped, thermally driven oscillator
///
/// `dρ/dt = -i[H, ρ] + γ(n_d+1) D[b]ρ + γ n_d D[b†]ρ`,
///
/// with `D[L]ρ = LρL† - ½{L†L, ρ}` and `H` diagonal in the number basis.
struct Generator {
    dim: usize,
    energies: Vec<f64>,
    sqrt_k: Vec<f64>,
    /// Diagonal of the truncated `b b†`.
    raise_diag: Vec<f64>,
    down: f64,
    up: f64,
}

impl Generator {
    fn new(basis: &FockBasis, p: &PhysicalParams) -> Self {
        let dim = basis.dim();
        Generator {
            dim,
            energies: basis.energies.clone(),
            sqrt_k: (0..=dim).map(|k| (k as f64).sqrt()).collect(),
            raise_diag: (0..dim)
                .map(|k| if k + 1 < dim { (k + 1) as f64 } else { 0.0 })
                .collect(),
            down: p.gamma * (p.n_d + 1.0),
            up: p.gamma * p.n_d,
        }
    }

    fn apply(&self, rho: &[Complex64], out: &mut [Complex64]) {
        let d = self.dim;
        for m in 0..d {
            for n in 0..d {
                let idx = m * d + n;
                let r = rho[idx];
                let decay =
                    0.5 * self.down * (m + n) as f64 + 0.5 * self.up * (self.raise_diag[m] + self.raise_diag[n]);
                let mut v = Complex64::new(decay * -r.re, decay * -r.im)
                    + Complex64::new(0.0, -(self.energies[m] - self.energies[n])) * r;
                if m + 1 < d && n + 1 < d {
                    v += rho[idx + d + 1] * (self.down * self.sqrt_k[m + 1] * self.sqrt_k[n + 1]);
                }
                if m >= 1 && n >= 1 && self.up != 0.0 {
                    v += rho[idx - d - 1] * (self.up * self.sqrt_k[m] * self.sqrt_k[n]);
                }
                out[idx] = v;
            }
        }
    }
}

/// Integrates the master equation from the coherent state `|β⟩` with RK4,
/// sampling observables at every step.
pub fn lindblad_evolve(
    p: &PhysicalParams,
    beta: Complex64,
    t_max: f64,
    dt: f64,
    n_max: usize,
) -> Result<LindbladSeries> {
    lindblad_evolve_with(p, beta, t_max, dt, n_max, 1, EnergyConvention::PowerLaw)
}

/// As [`lindblad_evolve`], sampling every `sample_every` steps (and always at
/// `t_max`) with the given energy convention.
pub fn lindblad_evolve_with(
    p: &PhysicalParams,
    beta: Complex64,
    t_max: f64,
    dt: f64,
    n_max: usize,
    sample_every: usize,
    convention: EnergyConvention,
) -> Result<LindbladSeries> {
    ensure_finite("beta", beta.re)?;
    ensure_finite("beta", beta.im)?;
    let basis = FockBasis::new(p, n_max, convention)?;
    let (steps, h) = uniform_steps(t_max, dt)?;
    let stride = sample_every.max(1);

    let (pure, tail) = coherent_amplitudes(beta, n_max);
    if tail > LEAK_TOLERANCE {
        return Err(Error::TruncationLeak {
            n_max,
            leak: tail,
            tolerance: LEAK_TOLERANCE,
        });
    }
    let mut rho = DensityMatrix::from_pure(&pure);
    let norm = rho.trace().re;
    rho.data.iter_mut().for_each(|v| *v /= norm);

    let generator = Generator::new(&basis, p);
    let mut rk = Rk4::new(rho.data.len());
    let mut series = LindbladSeries {
        observables: vec![OracleObservables::from_moments(0.0, p.n, &rho.moments())],
        n_max,
        dt: h,
        max_trace_drift: (rho.trace() - 1.0).norm(),
        max_hermiticity_defect: rho.hermiticity_defect(),
        max_edge_population: rho.population(n_max),
    };

    for k in 0..steps {
        rk.step(|_, y, dy| generator.apply(y, dy), k as f64 * h, h, &mut rho.data);
        let t = (k + 1) as f64 * h;
        if rho.data.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite { step: k + 1, tau: t });
        }
        let drift = (rho.trace() - 1.0).norm();
        series.max_trace_drift = series.max_trace_drift.max(drift);
        if drift > TRACE_TOLERANCE {
            return Err(Error::TraceDrift { t, drift });
        }
        let edge = rho.population(n_max).abs();
        series.max_edge_population = series.max_edge_population.max(edge);
        if edge > EDGE_TOLERANCE {
            return Err(Error::TruncationLeak {
                n_max,
                leak: edge,
                tolerance: EDGE_TOLERANCE,
            });
        }
        if (k + 1) % stride == 0 || k + 1 == steps {
            series.max_hermiticity_defect = series.max_hermiticity_defect.max(rho.hermiticity_defect());
            series
                .observables
                .push(OracleObservables::from_moments(t, p.n, &rho.moments()));
        }
    }
    Ok(series)
}
