//! Quantum-classical correspondence diagnostics.

use num_complex::Complex64;
use serde::Serialize;

use crate::classical::intensity_power;
use crate::cumulants::Trajectory;
use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Classical amplitudes below this modulus make `R` meaningless.
pub const MIN_CLASSICAL_AMPLITUDE: f64 = 1e-300;

/// `R(τ) = |z⁽¹⁾(τ) / z_cl(τ)| / N`.
pub fn validity_ratio(traj: &Trajectory) -> Result<Vec<f64>> {
    let n = traj.params.n;
    traj.z1
        .iter()
        .zip(&traj.z_cl)
        .zip(&traj.grid)
        .map(|((z1, zcl), &tau)| {
            let modulus = zcl.norm();
            if modulus < MIN_CLASSICAL_AMPLITUDE {
                Err(Error::AmplitudeUnderflow { tau, modulus })
            } else {
                Ok(z1.norm() / (n * modulus))
            }
        })
        .collect()
}

/// Breaking-time and quantum-correction scale estimates. Fields that need
/// dissipation (or a nonzero amplitude) are `None` when undefined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidityReport {
    /// Position of the maximum of `|Q|`, `τ₁ = (Γl)⁻¹`.
    pub tau1: Option<f64>,
    /// `Q(τ₁) ≈ l / Γ²`.
    pub q_max_estimate: Option<f64>,
    /// Power-law breaking time `N^{1/2} |Ω_l|^{1/2} / (l^{3/2} |z0|^{3l-1})`.
    pub tau_star_hamiltonian: Option<f64>,
    /// Logarithmic breaking time on the plateau, `Γ⁻¹ ln N`.
    pub tau_star_plateau: Option<f64>,
    /// `R(τ₁) ≈ l / (N Γ²)`.
    pub r_plateau_estimate: Option<f64>,
    /// `Ω_l = Δ̄ + |z0|^{2l}`.
    pub omega_l: f64,
}

pub fn breaking_report(m: &ModelParams, z0: Complex64) -> ValidityReport {
    let l = m.l as f64;
    let omega_l = m.detuning + intensity_power(z0, m.l);
    let modulus = z0.norm();
    let tau_star_hamiltonian =
        (modulus > 0.0).then(|| m.n.sqrt() * omega_l.abs().sqrt() / (l.powf(1.5) * modulus.powi(3 * m.l as i32 - 1)));
    let dissipative = m.damping > 0.0;
    let g = m.damping;
    ValidityReport {
        tau1: dissipative.then(|| 1.0 / (g * l)),
        q_max_estimate: dissipative.then(|| l / (g * g)),
        tau_star_hamiltonian,
        tau_star_plateau: dissipative.then(|| m.n.ln() / g),
        r_plateau_estimate: dissipative.then(|| l / (m.n * g * g)),
        omega_l,
    }
}

/// Leading large-time term of `Q` without damping,
/// `z0 |z0|^{2(3l-1)} l³ τ² e^{-iΩ_l τ}`.
pub fn asymptotic_q_lossless(m: &ModelParams, z0: Complex64, tau: f64) -> Complex64 {
    let l = m.l as f64;
    let omega_l = m.detuning + intensity_power(z0, m.l);
    let amplitude = z0.norm_sqr().powi(3 * m.l as i32 - 1) * l.powi(3) * tau * tau;
    z0 * amplitude * Complex64::new(0.0, -omega_l * tau).exp()
}

/// Leading large-time term of `z⁽¹⁾` without damping, `Q_asym / Ω_l`.
pub fn asymptotic_shift_lossless(m: &ModelParams, z0: Complex64, tau: f64) -> Complex64 {
    let omega_l = m.detuning + intensity_power(z0, m.l);
    asymptotic_q_lossless(m, z0, tau) / omega_l
}

/// Mean of the last 20% of `values`: the saturation level of a curve that
/// has reached a plateau.
pub fn saturation_level(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let start = values.len() - (values.len() / 5).max(1);
    let tail = &values[start..];
    tail.iter().sum::<f64>() / tail.len() as f64
}

/// Least-squares slope of `ln y` against `x` over the points with
/// `x` in `[from, to]` and `y > 0`.
pub fn log_slope(x: &[f64], y: &[f64], from: f64, to: f64) -> f64 {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(&xi, &yi)| xi >= from && xi <= to && yi > 0.0)
        .map(|(&xi, &yi)| (xi, yi.ln()))
        .collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return f64::NAN;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Index of the largest element, first one on ties.
pub fn argmax(values: &[f64]) -> Option<usize> {
    values
        .iter()
        .enumerate()
        .fold(None, |best: Option<(usize, f64)>, (k, &v)| match best {
            Some((_, bv)) if bv >= v => best,
            _ => Some((k, v)),
        })
        .map(|(k, _)| k)
}
