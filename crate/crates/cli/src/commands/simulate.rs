use anharmonic_core::cumulants::Engine;
use anharmonic_core::{
    closed_form_trajectory, fano_closed, fano_from_cumulants, integrate_semiclassical, principal_squeezing,
    ShiftKernel, Trajectory,
};

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::table::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum EngineChoice {
    /// Closed-form cumulants along the exact classical orbit.
    #[default]
    Closed,
    /// Fixed-step RK4 integration of the self-consistent system.
    Ode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum KernelChoice {
    #[default]
    Damped,
    Bare,
}

impl From<KernelChoice> for ShiftKernel {
    fn from(k: KernelChoice) -> Self {
        match k {
            KernelChoice::Damped => ShiftKernel::Damped,
            KernelChoice::Bare => ShiftKernel::Bare,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SimulateOptions {
    pub engine: EngineChoice,
    /// Feed `Q/N` back into the mean amplitude (ODE engine only).
    pub with_q: bool,
    pub kernel: KernelChoice,
}

pub const SIMULATE_COLUMNS: [&str; 13] = [
    "tau", "re_z", "im_z", "re_C", "im_C", "B", "S", "F", "re_zcl", "im_zcl", "abs_Q", "abs_z1", "R",
];

pub fn trajectory(cfg: &RunConfig, opts: &SimulateOptions) -> CliResult<Trajectory> {
    let m = cfg.model_params()?;
    let traj = match opts.engine {
        EngineChoice::Closed => closed_form_trajectory(&m, cfg.z0(), cfg.tau_max, cfg.dt)?,
        EngineChoice::Ode => integrate_semiclassical(&m, cfg.z0(), cfg.tau_max, cfg.dt, opts.with_q)?,
    };
    Ok(traj.with_kernel(opts.kernel.into())?)
}

fn engine_label(engine: Engine) -> &'static str {
    match engine {
        Engine::Closed => "closed",
        Engine::Ode { include_q: false } => "ode",
        Engine::Ode { include_q: true } => "ode+q",
    }
}

pub fn simulate(cfg: &RunConfig, opts: &SimulateOptions) -> CliResult<Table> {
    let traj = trajectory(cfg, opts)?;
    let m = traj.params;
    let mut table = Table::new(&SIMULATE_COLUMNS);
    table
        .meta("command", "simulate")
        .meta("engine", engine_label(traj.engine))
        .meta("kernel", format!("{:?}", traj.kernel).to_lowercase());
    push_model_meta(&mut table, cfg)?;
    let h = if traj.len() > 1 { traj.grid[1] } else { 0.0 };
    table.meta("dt", h).meta("tau_max", cfg.tau_max);
    if let Some(err) = traj.error_estimate {
        table.meta("richardson_error", err);
    }

    let stride = cfg.output_stride(h.max(f64::MIN_POSITIVE));
    let last = traj.len() - 1;
    for k in (0..traj.len()).filter(|&k| k % stride == 0 || k == last) {
        let s = &traj.states[k];
        let f = match traj.engine {
            Engine::Closed => fano_closed(&m, s.tau),
            Engine::Ode { .. } => fano_from_cumulants(s.z, s.c, s.b)?,
        };
        table.push(vec![
            s.tau,
            s.z.re,
            s.z.im,
            s.c.re,
            s.c.im,
            s.b,
            principal_squeezing(s.c, s.b),
            f,
            traj.z_cl[k].re,
            traj.z_cl[k].im,
            traj.q[k].norm(),
            traj.z1[k].norm(),
            traj.r[k],
        ]);
    }
    Ok(table)
}

pub(crate) fn push_model_meta(table: &mut Table, cfg: &RunConfig) -> CliResult<()> {
    let m = cfg.model_params()?;
    table
        .meta("l", m.l)
        .meta("damping", m.damping)
        .meta("detuning", m.detuning)
        .meta("n_d", m.n_d)
        .meta("n", m.n)
        .meta("g_l", m.g_l)
        .meta("z0", format!("{} {}", cfg.z0[0], cfg.z0[1]));
    Ok(())
}
