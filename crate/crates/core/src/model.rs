//! Oscillator and reservoir parameters in physical and scaled units.
//!
//! The scaled model replaces the coupling `λ` by `g_l = λ N^l` and measures
//! time, damping and detuning in units of `g_l`:
//! `τ = g_l t`, `Γ = γ / g_l`, `Δ̄ = Δ / g_l`.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

/// Parameters of the oscillator and its reservoir in frequency units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalParams {
    /// Nonlinearity order (`l = 1` is the Kerr oscillator).
    pub l: u32,
    /// Anharmonic coupling `λ_l`.
    pub lambda: f64,
    /// Semiclassical photon-number scale.
    pub n: f64,
    /// Detuning `Δ`.
    #[serde(default)]
    pub delta: f64,
    /// Amplitude damping rate `γ`.
    #[serde(default)]
    pub gamma: f64,
    /// Mean thermal occupation of the reservoir.
    #[serde(default)]
    pub n_d: f64,
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<()> {
        ensure_finite("lambda", self.lambda)?;
        ensure_finite("n", self.n)?;
        ensure_finite("delta", self.delta)?;
        ensure_finite("gamma", self.gamma)?;
        ensure_finite("n_d", self.n_d)?;
        if self.l == 0 {
            return Err(Error::param("l", "nonlinearity order must be >= 1"));
        }
        if self.lambda <= 0.0 {
            return Err(Error::param("lambda", format!("must be > 0, got {}", self.lambda)));
        }
        if self.n < 1.0 {
            return Err(Error::param("n", format!("must be >= 1, got {}", self.n)));
        }
        if self.gamma < 0.0 {
            return Err(Error::param("gamma", format!("must be >= 0, got {}", self.gamma)));
        }
        if self.n_d < 0.0 {
            return Err(Error::param("n_d", format!("must be >= 0, got {}", self.n_d)));
        }
        Ok(())
    }

    /// `g_l = λ N^l`.
    pub fn coupling(&self) -> f64 {
        self.lambda * self.n.powi(self.l as i32)
    }
}

/// Scaled parameters driving every semiclassical computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub l: u32,
    /// Scaled damping `Γ = γ / g_l`.
    pub damping: f64,
    /// Scaled detuning `Δ̄ = Δ / g_l`.
    pub detuning: f64,
    pub n_d: f64,
    pub n: f64,
    /// `g_l = λ N^l`, kept for conversion back to physical units.
    pub g_l: f64,
}

impl ModelParams {
    /// Scaled parameters with unit coupling `g_l = 1`.
    pub fn new(l: u32, damping: f64, detuning: f64, n_d: f64, n: f64) -> Result<Self> {
        Self::with_coupling(l, damping, detuning, n_d, n, 1.0)
    }

    pub fn with_coupling(l: u32, damping: f64, detuning: f64, n_d: f64, n: f64, g_l: f64) -> Result<Self> {
        let m = ModelParams {
            l,
            damping,
            detuning,
            n_d,
            n,
            g_l,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("damping", self.damping)?;
        ensure_finite("detuning", self.detuning)?;
        ensure_finite("n_d", self.n_d)?;
        ensure_finite("n", self.n)?;
        ensure_finite("g_l", self.g_l)?;
        if self.l == 0 {
            return Err(Error::param("l", "nonlinearity order must be >= 1"));
        }
        if self.damping < 0.0 {
            return Err(Error::param("damping", format!("must be >= 0, got {}", self.damping)));
        }
        if self.n_d < 0.0 {
            return Err(Error::param("n_d", format!("must be >= 0, got {}", self.n_d)));
        }
        if self.n < 1.0 {
            return Err(Error::param("n", format!("must be >= 1, got {}", self.n)));
        }
        if self.g_l <= 0.0 {
            return Err(Error::param("g_l", format!("must be > 0, got {}", self.g_l)));
        }
        Ok(())
    }

    /// Equilibrium symmetric-ordering cumulant `B⁽⁰⁾ = n_d + 1/2`.
    pub fn b_equilibrium(&self) -> f64 {
        self.n_d + 0.5
    }

    /// Inverse of [`scale_parameters`].
    pub fn to_physical(&self) -> PhysicalParams {
        PhysicalParams {
            l: self.l,
            lambda: self.g_l / self.n.powi(self.l as i32),
            n: self.n,
            delta: self.detuning * self.g_l,
            gamma: self.damping * self.g_l,
            n_d: self.n_d,
        }
    }
}

pub fn scale_parameters(p: &PhysicalParams) -> Result<ModelParams> {
    p.validate()?;
    let g_l = p.coupling();
    if !(g_l.is_finite() && g_l > 0.0) {
        return Err(Error::param(
            "lambda",
            format!("coupling g_l = {g_l} is not representable"),
        ));
    }
    Ok(ModelParams {
        l: p.l,
        damping: p.gamma / g_l,
        detuning: p.delta / g_l,
        n_d: p.n_d,
        n: p.n,
        g_l,
    })
}

/// Physical time `t = τ / g_l`.
pub fn physical_time(tau: f64, m: &ModelParams) -> Result<f64> {
    ensure_finite("tau", tau)?;
    Ok(tau / m.g_l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn phys(l: u32, lambda: f64, n: f64, delta: f64, gamma: f64, n_d: f64) -> PhysicalParams {
        PhysicalParams {
            l,
            lambda,
            n,
            delta,
            gamma,
            n_d,
        }
    }

    #[test]
    fn kerr_scaling_to_unit_coupling() {
        let m = scale_parameters(&phys(1, 1e-6, 1e6, 0.0, 0.05, 0.0)).unwrap();
        assert_relative_eq!(m.g_l, 1.0, max_relative = 1e-14);
        assert_relative_eq!(m.damping, 0.05, max_relative = 1e-14);
        assert_eq!(m.detuning, 0.0);
    }

    #[test]
    fn identity_scaling_at_unit_n() {
        let m = scale_parameters(&phys(2, 1.0, 1.0, 3.0, 0.0, 0.0)).unwrap();
        assert_eq!(m.g_l, 1.0);
        assert_eq!(m.damping, 0.0);
        assert_eq!(m.detuning, 3.0);
    }

    #[test]
    fn small_coupling_scaling() {
        let m = scale_parameters(&phys(1, 2e-8, 1e4, 2e-4, 1e-5, 1.0)).unwrap();
        assert_relative_eq!(m.g_l, 2e-4, max_relative = 1e-14);
        assert_relative_eq!(m.damping, 0.05, max_relative = 1e-12);
        assert_relative_eq!(m.detuning, 1.0, max_relative = 1e-12);
        assert_eq!(m.n_d, 1.0);
        assert_relative_eq!(m.b_equilibrium(), 1.5);
    }

    #[test]
    fn rejects_bad_physical_input() {
        assert!(scale_parameters(&phys(1, 0.0, 10.0, 0.0, 0.0, 0.0)).is_err());
        assert!(scale_parameters(&phys(1, -1.0, 10.0, 0.0, 0.0, 0.0)).is_err());
        assert!(scale_parameters(&phys(1, 1.0, 0.5, 0.0, 0.0, 0.0)).is_err());
        assert!(scale_parameters(&phys(0, 1.0, 10.0, 0.0, 0.0, 0.0)).is_err());
        assert!(scale_parameters(&phys(1, f64::NAN, 10.0, 0.0, 0.0, 0.0)).is_err());
        assert!(scale_parameters(&phys(1, 1.0, 10.0, f64::INFINITY, 0.0, 0.0)).is_err());
        assert!(scale_parameters(&phys(1, 1.0, 10.0, 0.0, -0.1, 0.0)).is_err());
        assert!(scale_parameters(&phys(1, 1.0, 10.0, 0.0, 0.0, -1.0)).is_err());
    }

    #[test]
    fn physical_time_examples() {
        let unit = ModelParams::new(1, 0.0, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(physical_time(1.0, &unit).unwrap(), 1.0);
        assert_eq!(physical_time(0.0, &unit).unwrap(), 0.0);
        let slow = ModelParams::with_coupling(1, 0.0, 0.0, 0.0, 1.0, 2e-4).unwrap();
        assert_relative_eq!(physical_time(2.0, &slow).unwrap(), 1e4, max_relative = 1e-14);
        assert!(physical_time(f64::NAN, &unit).is_err());
    }

    #[test]
    fn equal_coupling_gives_equal_scaled_dynamics() {
        // λ N^l identical for both pairs
        let a = scale_parameters(&phys(2, 1e-4, 100.0, 0.3, 0.2, 1.0)).unwrap();
        let b = scale_parameters(&phys(2, 1e-8, 1e4, 0.3, 0.2, 1.0)).unwrap();
        assert_relative_eq!(a.g_l, b.g_l, max_relative = 1e-15);
        assert_relative_eq!(a.damping, b.damping, max_relative = 1e-15);
        assert_relative_eq!(a.detuning, b.detuning, max_relative = 1e-15);
    }

    proptest::proptest! {
        #[test]
        fn scaling_round_trip(
            l in 1u32..6,
            lambda in 1e-9f64..10.0,
            n in 1.0f64..1e4,
            delta in -5.0f64..5.0,
            gamma in 0.0f64..2.0,
            n_d in 0.0f64..3.0,
        ) {
            let p = phys(l, lambda, n, delta, gamma, n_d);
            let back = scale_parameters(&p).unwrap().to_physical();
            let close = |x: f64, y: f64| (x - y).abs() <= 4.0 * f64::EPSILON * x.abs().max(y.abs()).max(f64::MIN_POSITIVE);
            proptest::prop_assert_eq!(back.l, p.l);
            proptest::prop_assert!(close(back.lambda, p.lambda), "{} vs {}", back.lambda, p.lambda);
            proptest::prop_assert!(close(back.delta, p.delta) || (back.delta - p.delta).abs() < 1e-300);
            proptest::prop_assert!(close(back.gamma, p.gamma) || p.gamma == 0.0);
            proptest::prop_assert_eq!(back.n, p.n);
            proptest::prop_assert_eq!(back.n_d, p.n_d);
        }
    }
}
