use num_complex::Complex64;

use super::{EnergyConvention, FockBasis, Moments, OracleObservables, LEAK_TOLERANCE};
use crate::error::{Error, Result};
use crate::model::PhysicalParams;

/// Pure state amplitudes in the number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    pub amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub(crate) fn moments(&self) -> Moments {
        let c = &self.amplitudes;
        let norm = self.norm_sqr();
        let mut b = Complex64::new(0.0, 0.0);
        let mut b2 = Complex64::new(0.0, 0.0);
        let mut n = 0.0;
        let mut n2 = 0.0;
        for k in 0..c.len() {
            let kf = k as f64;
            let p = c[k].norm_sqr();
            n += kf * p;
            n2 += kf * kf * p;
            if k >= 1 {
                b += c[k - 1].conj() * c[k] * kf.sqrt();
            }
            if k >= 2 {
                b2 += c[k - 2].conj() * c[k] * (kf * (kf - 1.0)).sqrt();
            }
        }
        Moments {
            b: b / norm,
            b2: b2 / norm,
            n: n / norm,
            n2: n2 / norm,
        }
    }
}

/// Number-basis amplitudes `e^{-|β|²/2} β^n / √(n!)` for `n = 0..=n_max`,
/// computed in the log domain, together with the probability beyond `n_max`.
pub fn coherent_amplitudes(beta: Complex64, n_max: usize) -> (PureState, f64) {
    let r = beta.norm();
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); n_max + 1];
    if r == 0.0 {
        amplitudes[0] = Complex64::new(1.0, 0.0);
        return (PureState { amplitudes }, 0.0);
    }
    let ln_r = r.ln();
    let theta = beta.arg();
    let log_weight = |k: usize, ln_fact: f64| -0.5 * r * r + k as f64 * ln_r - 0.5 * ln_fact;

    let mut ln_fact = 0.0;
    for (k, amp) in amplitudes.iter_mut().enumerate() {
        if k > 0 {
            ln_fact += (k as f64).ln();
        }
        *amp = Complex64::from_polar(log_weight(k, ln_fact).exp(), k as f64 * theta);
    }

    let mut tail = 0.0;
    let mut k = n_max;
    loop {
        k += 1;
        ln_fact += (k as f64).ln();
        let p = (2.0 * log_weight(k, ln_fact)).exp();
        tail += p;
        let past_peak = k as f64 > r * r + 1.0;
        if past_peak && (p == 0.0 || p < 1e-18 * tail) {
            break;
        }
    }
    (PureState { amplitudes }, tail)
}

fn lossless_basis(p: &PhysicalParams, n_max: usize, convention: EnergyConvention) -> Result<FockBasis> {
    if p.gamma != 0.0 {
        return Err(Error::param(
            "gamma",
            format!("the unitary oracle needs gamma = 0, got {}", p.gamma),
        ));
    }
    FockBasis::new(p, n_max, convention)
}

fn initial_state(beta: Complex64, n_max: usize) -> Result<PureState> {
    if !(beta.re.is_finite() && beta.im.is_finite()) {
        return Err(Error::param("beta", "must be finite"));
    }
    let (state, tail) = coherent_amplitudes(beta, n_max);
    if tail > LEAK_TOLERANCE {
        return Err(Error::TruncationLeak {
            n_max,
            leak: tail,
            tolerance: LEAK_TOLERANCE,
        });
    }
    Ok(state)
}

fn evolve(basis: &FockBasis, initial: &PureState, t: f64) -> OracleObservables {
    let amplitudes = initial
        .amplitudes
        .iter()
        .zip(&basis.energies)
        .map(|(c, &e)| c * Complex64::from_polar(1.0, -e * t))
        .collect();
    let state = PureState { amplitudes };
    OracleObservables::from_moments(t, basis.n, &state.moments())
}

/// Exact lossless evolution of the coherent state `|β⟩` to physical time `t`
/// under `E_n = Δn + λ/(l+1) n^{l+1}`.
pub fn fock_evolve_lossless(p: &PhysicalParams, beta: Complex64, t: f64, n_max: usize) -> Result<OracleObservables> {
    let series = fock_series_lossless(p, beta, &[t], n_max, EnergyConvention::PowerLaw)?;
    Ok(series[0])
}

/// Lossless evolution sampled at each of `times`.
pub fn fock_series_lossless(
    p: &PhysicalParams,
    beta: Complex64,
    times: &[f64],
    n_max: usize,
    convention: EnergyConvention,
) -> Result<Vec<OracleObservables>> {
    let basis = lossless_basis(p, n_max, convention)?;
    let initial = initial_state(beta, n_max)?;
    times
        .iter()
        .map(|&t| {
            if t.is_finite() {
                Ok(evolve(&basis, &initial, t))
            } else {
                Err(Error::param("t", "must be finite"))
            }
        })
        .collect()
}
