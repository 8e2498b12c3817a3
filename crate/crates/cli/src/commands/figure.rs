use std::fs;
use std::path::{Path, PathBuf};

use anharmonic_core::{
    closed_form_trajectory, integrate_semiclassical, principal_squeezing, Complex64, ModelParams, ShiftKernel,
};

use crate::error::{CliError, CliResult};
use crate::table::{Format, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Figure {
    /// Squeezing against scaled time.
    Fig1,
    /// Modulus of the quantum correction.
    Fig2,
    /// First-order quantum-classical difference.
    Fig3,
}

/// Integration step for every figure curve.
const FIG_DT: f64 = 1e-3;
/// Photon-number scale; none of the plotted quantities depends on it.
const FIG_N: f64 = 1e4;

/// One emitted curve.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub file_name: String,
    pub table: Table,
}

fn file_name(fig: &str, panel: char, l: u32, gamma: f64, n_d: f64) -> String {
    format!("{fig}_{panel}_l{l}_gamma{gamma}_nd{n_d}.csv")
}

fn header(table: &mut Table, fig: &str, panel: char, m: &ModelParams) {
    table
        .meta("figure", fig)
        .meta("panel", panel)
        .meta("l", m.l)
        .meta("damping", m.damping)
        .meta("n_d", m.n_d)
        .meta("detuning", m.detuning)
        .meta("z0", "1 0");
}

/// Keeps every `stride`-th index and the last one.
fn decimate(len: usize, stride: usize) -> impl Iterator<Item = usize> {
    (0..len).filter(move |&k| k % stride == 0 || k + 1 == len)
}

fn fig1() -> CliResult<Vec<Curve>> {
    let z0 = Complex64::new(1.0, 0.0);
    let tau_max = 10.0;
    let styles = [("solid", 0.0, 0.0), ("dashed", 0.05, 0.0), ("dotted", 0.05, 1.0)];
    let mut curves = Vec::new();
    for (panel, l) in [('a', 1u32), ('b', 5)] {
        for &(style, gamma, n_d) in &styles {
            let m = ModelParams::new(l, gamma, 0.0, n_d, FIG_N)?;
            let closed = closed_form_trajectory(&m, z0, tau_max, FIG_DT)?;
            let ode = integrate_semiclassical(&m, z0, tau_max, FIG_DT, false)?;
            let mut table = Table::new(&["tau", "S", "S_ode"]);
            header(&mut table, "fig1", panel, &m);
            table.meta("style", style);
            for k in decimate(closed.len(), 10) {
                let (c, o) = (&closed.states[k], &ode.states[k]);
                table.push(vec![
                    c.tau,
                    principal_squeezing(c.c, c.b),
                    principal_squeezing(o.c, o.b),
                ]);
            }
            curves.push(Curve {
                file_name: file_name("fig1", panel, l, gamma, n_d),
                table,
            });
        }
    }
    Ok(curves)
}

/// Fig. 2 and Fig. 3 share panels: `a` is Γ = 0.05, `b` is Γ = 0.5, each
/// over `τ ∈ [0, 10/Γ]` with about 2000 emitted rows.
fn quantum_correction_figure(fig: &str, orders: &[u32]) -> CliResult<Vec<Curve>> {
    let z0 = Complex64::new(1.0, 0.0);
    let mut curves = Vec::new();
    for (panel, gamma) in [('a', 0.05), ('b', 0.5)] {
        let tau_max = 10.0 / gamma;
        let steps = (tau_max / FIG_DT).round() as usize;
        let stride = (steps / 2000).max(1);
        for &l in orders {
            let m = ModelParams::new(l, gamma, 0.0, 0.0, FIG_N)?;
            let closed = closed_form_trajectory(&m, z0, tau_max, FIG_DT)?;
            let table = if fig == "fig2" {
                let ode = integrate_semiclassical(&m, z0, tau_max, FIG_DT, false)?;
                let mut table = Table::new(&["tau", "abs_Q", "re_Q", "im_Q", "abs_Q_ode"]);
                header(&mut table, fig, panel, &m);
                for k in decimate(closed.len(), stride) {
                    let q = closed.q[k];
                    table.push(vec![closed.grid[k], q.norm(), q.re, q.im, ode.q[k].norm()]);
                }
                table
            } else {
                let bare = closed.clone().with_kernel(ShiftKernel::Bare)?;
                let mut table = Table::new(&["tau", "abs_z1", "abs_z1_damped"]);
                header(&mut table, fig, panel, &m);
                table.meta("abs_z1", "bare integral of Q");
                table.meta("abs_z1_damped", "integral of Q with kernel exp(-damping (tau - s) / 2)");
                for k in decimate(closed.len(), stride) {
                    table.push(vec![closed.grid[k], bare.z1[k].norm(), closed.z1[k].norm()]);
                }
                table
            };
            curves.push(Curve {
                file_name: file_name(fig, panel, l, gamma, 0.0),
                table,
            });
        }
    }
    Ok(curves)
}

pub fn figure_curves(which: Figure) -> CliResult<Vec<Curve>> {
    match which {
        Figure::Fig1 => fig1(),
        Figure::Fig2 => quantum_correction_figure("fig2", &[1, 3]),
        Figure::Fig3 => quantum_correction_figure("fig3", &[1, 3, 5]),
    }
}

/// Writes every curve of `which` into `dir`, creating it if needed.
pub fn write_figure(which: Figure, dir: &Path) -> CliResult<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut written = Vec::new();
    for curve in figure_curves(which)? {
        let path = dir.join(&curve.file_name);
        curve.table.write(&path, Format::Csv)?;
        written.push(path);
    }
    Ok(written)
}
