pub mod compare;
pub mod figure;
pub mod simulate;

use anharmonic_core::breaking_report;

use crate::config::RunConfig;
use crate::error::CliResult;

pub use compare::compare;
pub use figure::{figure_curves, write_figure, Figure};
pub use simulate::{simulate, EngineChoice, KernelChoice, SimulateOptions};

/// Breaking-time estimates for the configured model as pretty JSON.
pub fn report(cfg: &RunConfig) -> CliResult<String> {
    let m = cfg.model_params()?;
    let report = breaking_report(&m, cfg.z0());
    let mut text = serde_json::to_string_pretty(&report).expect("report is serialisable");
    text.push('\n');
    Ok(text)
}
