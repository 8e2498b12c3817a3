//! Run configuration read from JSON.
//!
//! ```json
//! {
//!   "model": { "scaled": { "l": 1, "damping": 0.5, "n_d": 1, "n": 100 } },
//!   "z0": [1.0, 0.0],
//!   "tau_max": 2.0
//! }
//! ```

use std::fs;
use std::path::Path;

use anharmonic_core::{scale_parameters, Complex64, ModelParams, PhysicalParams};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const DEFAULT_DT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Simulate,
    Figure,
    Compare,
    Report,
}

/// Scaled parameters as written in a config; omitted fields default to zero
/// and `g_l` to one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaledSpec {
    pub l: u32,
    #[serde(default)]
    pub damping: f64,
    #[serde(default)]
    pub detuning: f64,
    #[serde(default)]
    pub n_d: f64,
    pub n: f64,
    #[serde(default = "unit")]
    pub g_l: f64,
}

fn unit() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    Physical(PhysicalParams),
    Scaled(ScaledSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSpec {
    /// Highest retained number state; chosen from `|β|` and `n_d` when absent.
    pub n_max: Option<usize>,
    /// Physical-time step of the Lindblad integrator.
    pub dt: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub mode: Option<Mode>,
    pub model: ModelSpec,
    #[serde(default = "default_z0")]
    pub z0: [f64; 2],
    pub tau_max: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    /// Spacing of emitted rows in scaled time; every grid point when absent.
    #[serde(default)]
    pub output_step: Option<f64>,
    #[serde(default)]
    pub oracle: Option<OracleSpec>,
}

fn default_z0() -> [f64; 2] {
    [1.0, 0.0]
}

fn default_dt() -> f64 {
    DEFAULT_DT
}

impl RunConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text =
            fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read `{}`: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> CliResult<()> {
        self.model_params()?;
        let z0 = self.z0();
        if !(z0.re.is_finite() && z0.im.is_finite()) {
            return Err(CliError::Config("z0: must be finite".into()));
        }
        if z0.norm() == 0.0 {
            return Err(CliError::Config(
                "z0: must be nonzero (the Fano factor and R are phase-referenced to z)".into(),
            ));
        }
        if !(self.tau_max.is_finite() && self.tau_max >= 0.0) {
            return Err(CliError::Config(format!("tau_max: must be >= 0, got {}", self.tau_max)));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(CliError::Config(format!("dt: must be > 0, got {}", self.dt)));
        }
        if let Some(step) = self.output_step {
            if !(step.is_finite() && step > 0.0) {
                return Err(CliError::Config(format!("output_step: must be > 0, got {step}")));
            }
        }
        if let Some(OracleSpec { n_max, dt }) = self.oracle {
            if n_max == Some(0) {
                return Err(CliError::Config("oracle.n_max: must be >= 1".into()));
            }
            if let Some(dt) = dt {
                if !(dt.is_finite() && dt > 0.0) {
                    return Err(CliError::Config(format!("oracle.dt: must be > 0, got {dt}")));
                }
            }
        }
        Ok(())
    }

    pub fn model_params(&self) -> CliResult<ModelParams> {
        let m = match self.model {
            ModelSpec::Physical(p) => scale_parameters(&p)?,
            ModelSpec::Scaled(s) => ModelParams::with_coupling(s.l, s.damping, s.detuning, s.n_d, s.n, s.g_l)?,
        };
        Ok(m)
    }

    pub fn physical_params(&self) -> CliResult<PhysicalParams> {
        Ok(match self.model {
            ModelSpec::Physical(p) => p,
            ModelSpec::Scaled(_) => self.model_params()?.to_physical(),
        })
    }

    pub fn z0(&self) -> Complex64 {
        Complex64::new(self.z0[0], self.z0[1])
    }

    /// Number of integration steps between emitted rows.
    pub fn output_stride(&self, h: f64) -> usize {
        match self.output_step {
            Some(step) => ((step / h).round() as usize).max(1),
            None => 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_filled() {
        let cfg = RunConfig::from_json(r#"{"model": {"scaled": {"l": 2, "n": 100}}, "tau_max": 1}"#).unwrap();
        assert_eq!(cfg.dt, 1e-3);
        assert_eq!(cfg.z0, [1.0, 0.0]);
        let m = cfg.model_params().unwrap();
        assert_eq!((m.l, m.damping, m.detuning, m.n_d, m.g_l), (2, 0.0, 0.0, 0.0, 1.0));
    }

    #[test]
    fn physical_model_is_scaled() {
        let cfg = RunConfig::from_json(
            r#"{"model": {"physical": {"l": 1, "lambda": 0.01, "n": 100, "gamma": 0.5}}, "tau_max": 1}"#,
        )
        .unwrap();
        let m = cfg.model_params().unwrap();
        assert!((m.g_l - 1.0).abs() < 1e-15);
        assert!((m.damping - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        let bad = [
            r#"{"model": {"scaled": {"l": 1, "n": 100}}, "tau_max": 1, "extra": 3}"#,
            r#"{"model": {"scaled": {"l": 1, "n": 100, "gamma": 1}}, "tau_max": 1}"#,
            r#"{"model": {"scaled": {"l": 0, "n": 100}}, "tau_max": 1}"#,
            r#"{"model": {"scaled": {"l": 1, "n": 100}}, "tau_max": -1}"#,
            r#"{"model": {"scaled": {"l": 1, "n": 100}}, "tau_max": 1, "dt": 0}"#,
            r#"{"model": {"scaled": {"l": 1, "n": 100}}, "tau_max": 1, "z0": [0, 0]}"#,
            r#"{"model": {"scaled": {"l": 1, "n": 100, "damping": -0.1}}, "tau_max": 1}"#,
            r#"{"model": {"scaled": {"l": 1, "n": 100}}}"#,
            r#"{"model": {"scaled": {"l": 1, "n": 100}}, "tau_max": 1, "oracle": {"n_max": 0}}"#,
            "not json",
        ];
        for text in bad {
            let err = RunConfig::from_json(text).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{text}: {err}");
        }
    }

    #[test]
    fn stride_rounds_to_grid() {
        let mut cfg = RunConfig::from_json(r#"{"model": {"scaled": {"l": 1, "n": 100}}, "tau_max": 1}"#).unwrap();
        assert_eq!(cfg.output_stride(1e-3), 1);
        cfg.output_step = Some(0.01);
        assert_eq!(cfg.output_stride(1e-3), 10);
        cfg.output_step = Some(1e-4);
        assert_eq!(cfg.output_stride(1e-3), 1);
    }
}
