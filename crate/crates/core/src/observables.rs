//! Principal squeezing `S` and the Fano factor `F` in scaled units.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::classical::mu;
use crate::cumulants::Trajectory;
use crate::error::{ensure_finite, Error, Result};
use crate::model::ModelParams;

/// Amplitudes below this modulus have no usable phase reference.
pub const MIN_AMPLITUDE: f64 = 1e-12;

/// `S = 2(B - |C|)`; the state is squeezed iff `S < 1`.
pub fn principal_squeezing(c: Complex64, b: f64) -> f64 {
    2.0 * (b - c.norm())
}

/// `φ(a) = 2a[a - (1 + a²)^{1/2}]`, evaluated without cancellation.
pub fn squeezing_phi(a: f64) -> f64 {
    -2.0 * a / (a + (1.0 + a * a).sqrt())
}

/// `l x0^{2l}`, the squeezing rate per unit scaled time for real `x0`.
fn rate(m: &ModelParams, x0: f64) -> f64 {
    m.l as f64 * x0.powi(2 * m.l as i32)
}

fn check_x0(x0: f64) -> Result<()> {
    ensure_finite("x0", x0)?;
    if x0 <= 0.0 {
        return Err(Error::param(
            "x0",
            format!("closed-form squeezing needs a real positive amplitude, got {x0}"),
        ));
    }
    Ok(())
}

/// `S(τ) = e^{-Γτ}[1 + φ(a)] + (n_d + 1/2) 2Γτ` with `a = l x0^{2l} μ_l(τ)`,
/// for real positive initial amplitude `x0`.
pub fn squeezing_closed(m: &ModelParams, x0: f64, tau: f64) -> Result<f64> {
    check_x0(x0)?;
    ensure_finite("tau", tau)?;
    let a = rate(m, x0) * mu(tau, m.damping, m.l);
    let g = m.damping * tau;
    Ok((-g).exp() * (1.0 + squeezing_phi(a)) + m.b_equilibrium() * 2.0 * g)
}

/// Approximate squeezing regimes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `Γτ ≪ 1`: `S = 1 + (1 - Γτ) φ(l x0^{2l} τ) + 2 n_d Γτ`.
    WeakDissipation,
    /// `τ ≪ 1`: `S = 1 - 2τ [l x0^{2l} - Γ n_d]`.
    ShortTime,
    /// `Γ = 0`: `S = 1 + φ(l x0^{2l} τ)`.
    Lossless,
    /// `a ≫ 1`: `S = (l x0^{2l} τ)^{-1}`.
    ///
    /// The exact lossless expression behaves as `1/(4a²)` for large `a`, so
    /// this estimate overstates `S` by a factor `4a`.
    Asymptotic,
}

impl Regime {
    pub const ALL: [Regime; 4] = [
        Regime::WeakDissipation,
        Regime::ShortTime,
        Regime::Lossless,
        Regime::Asymptotic,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Regime::WeakDissipation => "weak_dissipation",
            Regime::ShortTime => "short_time",
            Regime::Lossless => "lossless",
            Regime::Asymptotic => "asymptotic",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Regime::ALL
            .into_iter()
            .find(|r| r.tag() == s)
            .ok_or_else(|| Error::UnknownRegime(s.to_string()))
    }
}

/// A limit-formula value together with the quantity whose smallness (or
/// largeness, for [`Regime::Asymptotic`]) the formula assumes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitEstimate {
    pub value: f64,
    /// `Γτ` for the weak-dissipation and lossless regimes, `τ` for the
    /// short-time regime and `a = l x0^{2l} τ` for the asymptotic regime.
    pub indicator: f64,
}

pub fn squeezing_limit(m: &ModelParams, x0: f64, tau: f64, regime: Regime) -> Result<LimitEstimate> {
    check_x0(x0)?;
    ensure_finite("tau", tau)?;
    let k = rate(m, x0);
    let g = m.damping * tau;
    let a = k * tau;
    let (value, indicator) = match regime {
        Regime::WeakDissipation => (1.0 + (1.0 - g) * squeezing_phi(a) + 2.0 * m.n_d * g, g),
        Regime::ShortTime => (1.0 - 2.0 * tau * (k - m.damping * m.n_d), tau),
        Regime::Lossless => (1.0 + squeezing_phi(a), g),
        Regime::Asymptotic => (1.0 / a, a),
    };
    Ok(LimitEstimate { value, indicator })
}

/// Thermal occupation above which squeezing cannot start.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CriticalPhonons {
    Finite(f64),
    /// No threshold exists without dissipation.
    Unbounded,
}

/// `n_d^(cr) = l x0^{2l} / Γ`.
pub fn critical_phonons(m: &ModelParams, x0: f64) -> CriticalPhonons {
    if m.damping > 0.0 {
        CriticalPhonons::Finite(rate(m, x0) / m.damping)
    } else {
        CriticalPhonons::Unbounded
    }
}

/// Nonlinear polarization `𝒫^(2l+1) = g_l x0^{2l}` in frequency units.
pub fn nonlinear_polarization(m: &ModelParams, x0: f64) -> f64 {
    m.g_l * x0.powi(2 * m.l as i32)
}

/// `F = 2B + (z*/z) C + c.c.`
pub fn fano_from_cumulants(z: Complex64, c: Complex64, b: f64) -> Result<f64> {
    let modulus = z.norm();
    if modulus.is_nan() || modulus < MIN_AMPLITUDE {
        return Err(Error::DegenerateAmplitude(modulus));
    }
    let phase = z.conj() / z;
    Ok(2.0 * b + 2.0 * (phase * c).re)
}

/// `F(τ) = e^{-Γτ} + (n_d + 1/2) 2Γτ`, independent of `l`, `Δ̄` and `z0`.
pub fn fano_closed(m: &ModelParams, tau: f64) -> f64 {
    let g = m.damping * tau;
    (-g).exp() + m.b_equilibrium() * 2.0 * g
}

/// `S` and `F` sampled on a trajectory grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSeries {
    pub grid: Vec<f64>,
    pub s: Vec<f64>,
    pub f: Vec<f64>,
    /// `None` for exact cumulant evaluation, otherwise the limit formula used.
    pub regime: Option<Regime>,
}

impl ObservableSeries {
    /// Evaluates `S = 2(B - |C|)` and `F` from the cumulants along `traj`.
    pub fn from_trajectory(traj: &Trajectory) -> Result<Self> {
        let mut s = Vec::with_capacity(traj.len());
        let mut f = Vec::with_capacity(traj.len());
        for st in &traj.states {
            s.push(principal_squeezing(st.c, st.b));
            f.push(fano_from_cumulants(st.z, st.c, st.b)?);
        }
        Ok(ObservableSeries {
            grid: traj.grid.clone(),
            s,
            f,
            regime: None,
        })
    }

    /// Limit-formula series for real `x0`; `F` uses the closed form.
    pub fn from_limit(m: &ModelParams, x0: f64, grid: &[f64], regime: Regime) -> Result<Self> {
        let s = grid
            .iter()
            .map(|&t| squeezing_limit(m, x0, t, regime).map(|e| e.value))
            .collect::<Result<Vec<_>>>()?;
        Ok(ObservableSeries {
            grid: grid.to_vec(),
            s,
            f: grid.iter().map(|&t| fano_closed(m, t)).collect(),
            regime: Some(regime),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cumulants::cumulants_closed;
    use approx::assert_relative_eq;

    const I: Complex64 = Complex64::new(0.0, 1.0);

    fn params(l: u32, damping: f64, n_d: f64) -> ModelParams {
        ModelParams::new(l, damping, 0.0, n_d, 1e4).unwrap()
    }

    fn three_minus_two_root_two() -> f64 {
        3.0 - 2.0 * 2f64.sqrt()
    }

    #[test]
    fn principal_squeezing_examples() {
        assert_eq!(principal_squeezing(Complex64::new(0.0, 0.0), 0.5), 1.0);
        let c = -(1.0 + I) * (-2.0 * I).exp();
        assert_relative_eq!(
            principal_squeezing(c, 1.5),
            three_minus_two_root_two(),
            max_relative = 1e-13
        );
        assert_eq!(principal_squeezing(Complex64::new(0.0, 0.0), 1.5), 3.0);
    }

    #[test]
    fn phi_matches_naive_form() {
        for &a in &[0.0, 1e-3, 0.5, 1.0, 3.0, 20.0] {
            let naive = 2.0 * a * (a - (1.0f64 + a * a).sqrt());
            assert_relative_eq!(squeezing_phi(a), naive, max_relative = 1e-10, epsilon = 1e-15);
        }
        assert_relative_eq!(1.0 + squeezing_phi(1e4), 1.0 / 4e8, max_relative = 1e-6);
    }

    #[test]
    fn squeezing_closed_examples() {
        assert_eq!(squeezing_closed(&params(3, 0.2, 1.0), 0.8, 0.0).unwrap(), 1.0);
        assert_relative_eq!(
            squeezing_closed(&params(1, 0.0, 0.0), 1.0, 1.0).unwrap(),
            three_minus_two_root_two(),
            epsilon = 1e-12
        );
        let mu = 2.0 * (1.0 - (-1.0f64).exp());
        let expected = (-1.0f64).exp() * (1.0 + squeezing_phi(mu)) + 3.0;
        let s = squeezing_closed(&params(1, 0.5, 1.0), 1.0, 2.0).unwrap();
        assert_relative_eq!(s, expected, max_relative = 1e-14);
        assert_relative_eq!(s, 3.0445, epsilon = 1e-4);
    }

    #[test]
    fn squeezing_closed_rejects_non_positive_amplitude() {
        assert!(squeezing_closed(&params(1, 0.0, 0.0), 0.0, 1.0).is_err());
        assert!(squeezing_closed(&params(1, 0.0, 0.0), -1.0, 1.0).is_err());
    }

    #[test]
    fn closed_squeezing_agrees_with_cumulants() {
        for &l in &[1u32, 2, 3, 5] {
            for &g in &[0.0, 0.05, 0.5] {
                for &nd in &[0.0, 1.0] {
                    let m = params(l, g, nd);
                    for k in 0..=200 {
                        let tau = 0.05 * k as f64;
                        let (c, b) = cumulants_closed(&m, Complex64::new(1.0, 0.0), tau);
                        let s = squeezing_closed(&m, 1.0, tau).unwrap();
                        assert!((s - principal_squeezing(c, b)).abs() < 1e-12, "l={l} Γ={g} τ={tau}");
                    }
                }
            }
        }
    }

    #[test]
    fn limit_examples() {
        let e = squeezing_limit(&params(1, 0.05, 0.0), 1.0, 0.01, Regime::ShortTime).unwrap();
        assert_relative_eq!(e.value, 0.98, max_relative = 1e-14);
        assert_eq!(e.indicator, 0.01);
        let e = squeezing_limit(&params(1, 0.0, 0.0), 1.0, 100.0, Regime::Asymptotic).unwrap();
        assert_relative_eq!(e.value, 0.01, max_relative = 1e-14);
        assert_eq!(e.indicator, 100.0);
        let e = squeezing_limit(&params(1, 0.0, 0.0), 1.0, 1.0, Regime::Lossless).unwrap();
        assert_relative_eq!(e.value, three_minus_two_root_two(), epsilon = 1e-13);
        let e = squeezing_limit(&params(2, 0.01, 1.0), 1.0, 2.0, Regime::WeakDissipation).unwrap();
        let expected = 1.0 + 0.98 * squeezing_phi(4.0) + 0.04;
        assert_relative_eq!(e.value, expected, max_relative = 1e-14);
    }

    #[test]
    fn regime_tags_round_trip() {
        for r in Regime::ALL {
            assert_eq!(r.tag().parse::<Regime>().unwrap(), r);
        }
        assert!(matches!("exactish".parse::<Regime>(), Err(Error::UnknownRegime(_))));
    }

    #[test]
    fn short_time_limit_error_is_second_order() {
        let m = params(2, 0.3, 1.0);
        let gap = |tau: f64| {
            (squeezing_limit(&m, 1.0, tau, Regime::ShortTime).unwrap().value - squeezing_closed(&m, 1.0, tau).unwrap())
                .abs()
        };
        let ratio = gap(1e-2) / gap(1e-3);
        assert!((80.0..120.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn asymptotic_limit_gap_vanishes_without_damping() {
        let m = params(1, 0.0, 0.0);
        let gap = |tau: f64| {
            (squeezing_limit(&m, 1.0, tau, Regime::Asymptotic).unwrap().value - squeezing_closed(&m, 1.0, tau).unwrap())
                .abs()
        };
        assert!(gap(10.0) > gap(100.0));
        assert!(gap(100.0) > gap(1000.0));
        assert!(gap(1000.0) < 1e-3);
    }

    #[test]
    fn initial_slope() {
        let h = 1e-5;
        for &(l, g, nd, x0) in &[(1u32, 0.0, 0.0, 1.0), (1, 0.05, 1.0, 1.0), (3, 0.5, 2.0, 0.9)] {
            let m = params(l, g, nd);
            let slope = (squeezing_closed(&m, x0, h).unwrap() - squeezing_closed(&m, x0, -h).unwrap()) / (2.0 * h);
            let expected = -2.0 * (l as f64 * x0.powi(2 * l as i32) - g * nd);
            assert!((slope - expected).abs() < 1e-4, "{slope} vs {expected}");
        }
    }

    #[test]
    fn critical_phonon_examples() {
        assert_eq!(
            critical_phonons(&params(1, 0.05, 0.0), 1.0),
            CriticalPhonons::Finite(1.0 / 0.05)
        );
        assert_eq!(
            critical_phonons(&params(2, 0.5, 0.0), 1.0),
            CriticalPhonons::Finite(4.0)
        );
        assert_eq!(critical_phonons(&params(1, 0.0, 0.0), 1.0), CriticalPhonons::Unbounded);
    }

    #[test]
    fn fano_from_cumulants_examples() {
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(fano_from_cumulants(one, Complex64::new(0.0, 0.0), 0.5).unwrap(), 1.0);
        let z = (-I).exp();
        let c = -(1.0 + I) * (-2.0 * I).exp();
        assert_relative_eq!(fano_from_cumulants(z, c, 1.5).unwrap(), 1.0, epsilon = 1e-14);
        assert_eq!(fano_from_cumulants(one, Complex64::new(0.5, 0.0), 0.5).unwrap(), 2.0);
        assert!(matches!(
            fano_from_cumulants(Complex64::new(1e-13, 0.0), one, 0.5),
            Err(Error::DegenerateAmplitude(_))
        ));
    }

    #[test]
    fn fano_closed_examples() {
        for k in 0..10 {
            assert_eq!(fano_closed(&params(1, 0.0, 1.0), k as f64), 1.0);
        }
        assert_relative_eq!(fano_closed(&params(1, 0.05, 0.0), 2.0), 1.004837, epsilon = 1e-6);
        assert_relative_eq!(fano_closed(&params(1, 0.5, 1.0), 2.0), 3.367879, epsilon = 1e-6);
    }

    #[test]
    fn fano_closed_is_independent_of_order() {
        for k in 0..50 {
            let tau = 0.3 * k as f64;
            let reference = fano_closed(&params(1, 0.2, 0.7), tau);
            for l in 2..=6 {
                assert_eq!(fano_closed(&params(l, 0.2, 0.7), tau).to_bits(), reference.to_bits());
            }
        }
    }

    #[test]
    fn fano_from_closed_cumulants_matches_closed_form() {
        for &l in &[1u32, 2, 5] {
            for &g in &[0.0, 0.05, 0.5] {
                let m = params(l, g, 1.0);
                for k in 0..=40 {
                    let tau = 0.25 * k as f64;
                    let z = crate::classical::classical_state(&m, Complex64::new(1.0, 0.0), tau);
                    let (c, b) = cumulants_closed(&m, Complex64::new(1.0, 0.0), tau);
                    let f = fano_from_cumulants(z, c, b).unwrap();
                    assert!((f - fano_closed(&m, tau)).abs() < 1e-10 * b.max(1.0));
                }
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn fano_closed_is_super_poissonian(g in 0.0f64..1.0, nd in 0.0f64..2.0, tau in 0.0f64..10.0) {
            proptest::prop_assert!(fano_closed(&params(1, g, nd), tau) >= 1.0);
        }
    }
}
