//! Zero-order (classical) motion `i ż = -iΓ/2 z + V(z, z*)` with
//! `V = Δ̄ z + |z|^{2l} z`.

use num_complex::Complex64;

use crate::model::ModelParams;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Below this value of `Γlτ` the series branch of [`mu`] is used.
const MU_SERIES_CUTOFF: f64 = 1e-6;

/// Damped effective time `μ_l(τ) = [1 - e^{-Γlτ}] / (Γl)`, continuous at `Γ = 0`.
pub fn mu(tau: f64, damping: f64, l: u32) -> f64 {
    let rate = damping * l as f64;
    let x = rate * tau;
    if x.abs() < MU_SERIES_CUTOFF {
        tau * (1.0 - x / 2.0 + x * x / 6.0)
    } else {
        -(-x).exp_m1() / rate
    }
}

/// `|z|^{2l}`.
#[inline]
pub(crate) fn intensity_power(z: Complex64, l: u32) -> f64 {
    z.norm_sqr().powi(l as i32)
}

/// Exact classical trajectory
/// `z_cl(τ) = z0 e^{(-iΔ̄ - Γ/2)τ} e^{-i|z0|^{2l} μ_l(τ)}`.
pub fn classical_state(m: &ModelParams, z0: Complex64, tau: f64) -> Complex64 {
    let phase = m.detuning * tau + intensity_power(z0, m.l) * mu(tau, m.damping, m.l);
    z0 * (-0.5 * m.damping * tau).exp() * (-I * phase).exp()
}

/// The parameters entering the classical drift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalDrift {
    pub l: u32,
    pub detuning: f64,
    pub damping: f64,
}

impl From<&ModelParams> for ClassicalDrift {
    fn from(m: &ModelParams) -> Self {
        ClassicalDrift {
            l: m.l,
            detuning: m.detuning,
            damping: m.damping,
        }
    }
}

impl ClassicalDrift {
    /// `V(z, z*) = Δ̄ z + |z|^{2l} z`.
    pub fn potential(&self, z: Complex64) -> Complex64 {
        z * (self.detuning + intensity_power(z, self.l))
    }
}

/// `dz/dτ = -i V(z, z*) - (Γ/2) z`.
pub fn classical_rhs(d: &ClassicalDrift, z: Complex64) -> Complex64 {
    -I * d.potential(z) - 0.5 * d.damping * z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_fixed, uniform_steps};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn params(l: u32, damping: f64, detuning: f64) -> ModelParams {
        ModelParams::new(l, damping, detuning, 0.0, 1.0).unwrap()
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu(5.0, 0.0, 3), 5.0);
        assert_relative_eq!(mu(2.0, 0.5, 1), 2.0 * (1.0 - (-1.0f64).exp()), max_relative = 1e-15);
        assert_relative_eq!(mu(2.0, 0.5, 1), 1.264241, epsilon = 1e-6);
        assert_relative_eq!(mu(1e3, 0.5, 2), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn mu_series_branch_is_accurate() {
        for &(tau, g) in &[(1.0, 1e-7), (1e-3, 1e-4), (10.0, 1e-8)] {
            let x: f64 = g * tau;
            let exact = -(-x).exp_m1() / g;
            assert_relative_eq!(mu(tau, g, 1), exact, max_relative = 1e-12);
        }
        // continuity across the cutoff
        let below = mu(1.0, 0.999_999e-6, 1);
        let above = mu(1.0, 1.000_001e-6, 1);
        assert!((below - above).abs() < 1e-12);
    }

    #[test]
    fn mu_bounds_and_monotonicity() {
        for &l in &[1u32, 2, 5] {
            for &g in &[0.0, 0.05, 0.5, 3.0] {
                let mut prev = 0.0;
                for k in 0..400 {
                    let tau = 0.05 * k as f64;
                    let v = mu(tau, g, l);
                    assert!(v >= prev);
                    assert!(v <= tau * (1.0 + 1e-15));
                    if g > 0.0 {
                        assert!(v <= 1.0 / (g * l as f64) * (1.0 + 1e-15));
                    }
                    let x = g * l as f64 * tau;
                    assert!((v - tau).abs() <= tau * x / 2.0 * (1.0 + 1e-9) + 1e-15);
                    prev = v;
                }
            }
        }
    }

    #[test]
    fn classical_state_examples() {
        let z = classical_state(&params(1, 0.0, 0.0), Complex64::new(1.0, 0.0), PI);
        assert!((z - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
        let z = classical_state(&params(3, 0.5, 1.0), Complex64::new(0.0, 0.0), 7.0);
        assert_eq!(z, Complex64::new(0.0, 0.0));
        // modulus decays as e^{-Γτ/2}
        let z = classical_state(&params(2, 0.5, 0.0), Complex64::new(1.0, 0.0), 2.0);
        assert_relative_eq!(z.norm(), (-0.5f64).exp(), max_relative = 1e-14);
        assert_relative_eq!(z.norm(), 0.606531, epsilon = 1e-6);
    }

    #[test]
    fn classical_rhs_examples() {
        let one = Complex64::new(1.0, 0.0);
        let d = ClassicalDrift {
            l: 1,
            detuning: 0.0,
            damping: 0.0,
        };
        assert_eq!(classical_rhs(&d, one), -I);
        assert_eq!(classical_rhs(&d, Complex64::new(0.0, 0.0)), Complex64::new(0.0, 0.0));
        let d = ClassicalDrift {
            l: 1,
            detuning: 1.0,
            damping: 1.0,
        };
        assert!((classical_rhs(&d, one) - Complex64::new(-0.5, -2.0)).norm() < 1e-15);
    }

    #[test]
    fn modulus_decouples_from_phase() {
        let z0 = Complex64::new(0.8, -0.6);
        for &l in &[1u32, 2, 3, 5] {
            for &g in &[0.0, 0.05, 0.5] {
                for &d in &[0.0, 1.0, -2.5] {
                    let m = params(l, g, d);
                    for k in 0..50 {
                        let tau = 0.37 * k as f64;
                        let z = classical_state(&m, z0, tau);
                        let expected = z0.norm() * (-0.5 * g * tau).exp();
                        assert_relative_eq!(z.norm(), expected, max_relative = 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn rk4_reproduces_exact_solution() {
        let z0 = Complex64::new(1.0, 0.0);
        let (steps, dt) = uniform_steps(10.0, 1e-3).unwrap();
        for &l in &[1u32, 2, 3, 5] {
            for &g in &[0.0, 0.05, 0.5] {
                for &d in &[0.0, 1.0] {
                    let m = params(l, g, d);
                    let drift = ClassicalDrift::from(&m);
                    let mut y = vec![z0];
                    let mut worst: f64 = 0.0;
                    integrate_fixed(
                        |_, y, dy| dy[0] = classical_rhs(&drift, y[0]),
                        &mut y,
                        steps,
                        dt,
                        |_, tau, y| {
                            let exact = classical_state(&m, z0, tau);
                            worst = worst.max((y[0] - exact).norm() / exact.norm());
                        },
                    )
                    .unwrap();
                    assert!(worst <= 1e-8, "l={l} Γ={g} Δ̄={d}: {worst:e}");
                }
            }
        }
    }
}
