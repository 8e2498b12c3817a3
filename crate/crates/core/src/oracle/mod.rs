//! Exact quantum references in a truncated number basis.
//!
//! Both paths report observables in the same scaled convention as the
//! semiclassical engine: `z = ⟨b⟩/N^{1/2}`, `C = ⟨b²⟩ - ⟨b⟩²`,
//! `B = ⟨b†b⟩ - |⟨b⟩|² + 1/2`, `S = 2(B - |C|)` and
//! `F = (⟨n²⟩ - ⟨n⟩²)/⟨n⟩`.

mod fock;
mod lindblad;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::PhysicalParams;
use crate::observables::principal_squeezing;

pub use fock::{coherent_amplitudes, fock_evolve_lossless, fock_series_lossless, PureState};
pub use lindblad::{lindblad_evolve, lindblad_evolve_with, DensityMatrix, LindbladSeries};

/// Largest tail probability accepted for a truncated coherent state.
pub const LEAK_TOLERANCE: f64 = 1e-12;

/// How the number-diagonal energies are formed from `λ/(l+1) (b†b)^{l+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnergyConvention {
    /// `E_n = Δn + λ/(l+1) n^{l+1}`.
    #[default]
    PowerLaw,
    /// Normal-ordered `λ/(l+1) b†^{l+1} b^{l+1}`, `E_n = Δn + λ/(l+1) n!/(n-l-1)!`.
    NormalOrdered,
}

/// Number basis `0..=n_max` with the diagonal Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct FockBasis {
    pub n_max: usize,
    pub energies: Vec<f64>,
    /// Photon-number scale used to form `z = ⟨b⟩ / N^{1/2}`.
    pub n: f64,
}

impl FockBasis {
    pub fn new(p: &PhysicalParams, n_max: usize, convention: EnergyConvention) -> Result<Self> {
        p.validate()?;
        if n_max == 0 {
            return Err(Error::param("n_max", "truncation must keep at least two levels"));
        }
        let l = p.l as usize;
        let scale = p.lambda / (l as f64 + 1.0);
        let energies = (0..=n_max)
            .map(|k| {
                let nf = k as f64;
                let nonlinear = match convention {
                    EnergyConvention::PowerLaw => nf.powi(l as i32 + 1),
                    EnergyConvention::NormalOrdered => (0..=l).map(|j| (nf - j as f64).max(0.0)).product::<f64>(),
                };
                p.delta * nf + scale * nonlinear
            })
            .collect();
        Ok(FockBasis {
            n_max,
            energies,
            n: p.n,
        })
    }

    pub fn dim(&self) -> usize {
        self.n_max + 1
    }
}

/// Truncation heuristic `⌈|β|² + 10|β| + 20⌉`, widened by the number of
/// levels a thermal distribution with mean `n_d` needs to fall below ~1e-12.
pub fn default_truncation(beta: Complex64, n_d: f64) -> usize {
    let r = beta.norm();
    let coherent = (r * r + 10.0 * r + 20.0).ceil() as usize;
    let thermal = if n_d > 0.0 {
        (28.0 / (1.0 + 1.0 / n_d).ln()).ceil() as usize
    } else {
        0
    };
    coherent + thermal
}

/// Raw moments of the mode operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Moments {
    pub b: Complex64,
    pub b2: Complex64,
    pub n: f64,
    pub n2: f64,
}

/// Observables in the scaled convention at physical time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleObservables {
    pub t: f64,
    pub z: Complex64,
    pub c: Complex64,
    pub b: f64,
    pub s: f64,
    pub f: f64,
    /// `⟨b†b⟩`, unscaled.
    pub mean_number: f64,
}

impl OracleObservables {
    pub(crate) fn from_moments(t: f64, n_scale: f64, mo: &Moments) -> Self {
        let c = mo.b2 - mo.b * mo.b;
        let b = mo.n - mo.b.norm_sqr() + 0.5;
        let variance = mo.n2 - mo.n * mo.n;
        OracleObservables {
            t,
            z: mo.b / n_scale.sqrt(),
            c,
            b,
            s: principal_squeezing(c, b),
            f: if mo.n > 0.0 { variance / mo.n } else { f64::NAN },
            mean_number: mo.n,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energies_follow_convention() {
        let p = PhysicalParams {
            l: 1,
            lambda: 0.5,
            n: 10.0,
            delta: 0.25,
            gamma: 0.0,
            n_d: 0.0,
        };
        let power = FockBasis::new(&p, 4, EnergyConvention::PowerLaw).unwrap();
        let normal = FockBasis::new(&p, 4, EnergyConvention::NormalOrdered).unwrap();
        for k in 0..=4 {
            let nf = k as f64;
            assert_eq!(power.energies[k], 0.25 * nf + 0.25 * nf * nf);
            assert_eq!(normal.energies[k], 0.25 * nf + 0.25 * nf * (nf - 1.0).max(0.0));
        }
        let cubic = FockBasis::new(&PhysicalParams { l: 2, ..p }, 3, EnergyConvention::NormalOrdered).unwrap();
        assert_eq!(cubic.energies[2], 0.5);
        assert_eq!(cubic.energies[3], 0.75 + 0.5 / 3.0 * 6.0);
    }

    #[test]
    fn truncation_heuristic() {
        assert_eq!(default_truncation(Complex64::new(10.0, 0.0), 0.0), 220);
        assert!(default_truncation(Complex64::new(5.0, 0.0), 1.0) > default_truncation(Complex64::new(5.0, 0.0), 0.0));
    }
}
