use anharmonic_core::oracle::{
    default_truncation, fock_series_lossless, lindblad_evolve_with, EnergyConvention, FockBasis,
};
use anharmonic_core::{
    fano_from_cumulants, integrate_semiclassical, principal_squeezing, scale_parameters, ModelParams,
    OracleObservables, PhysicalParams,
};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::table::Table;

/// Upper bound on `ω_max · dt` for the Lindblad RK4 step.
const PHASE_PER_STEP: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRun {
    pub n: f64,
    pub n_max: usize,
    pub oracle: &'static str,
    pub oracle_dt: Option<f64>,
    pub max_trace_drift: Option<f64>,
    pub tau: Vec<f64>,
    pub s_sc: Vec<f64>,
    pub f_sc: Vec<f64>,
    pub absz_sc: Vec<f64>,
    pub oracle_obs: Vec<OracleObservables>,
}

impl ComparisonRun {
    pub fn s_error(&self) -> Vec<f64> {
        self.s_sc
            .iter()
            .zip(&self.oracle_obs)
            .map(|(a, o)| (a - o.s).abs())
            .collect()
    }

    pub fn f_error(&self) -> Vec<f64> {
        self.f_sc
            .iter()
            .zip(&self.oracle_obs)
            .map(|(a, o)| (a - o.f).abs())
            .collect()
    }

    pub fn absz_error(&self) -> Vec<f64> {
        self.absz_sc
            .iter()
            .zip(&self.oracle_obs)
            .map(|(a, o)| (a - o.z.norm()).abs())
            .collect()
    }
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(0.0, f64::max)
}

/// Output grid `τ_k = k τ_max / M` with `M = ⌈τ_max / output_step⌉`.
fn output_grid(cfg: &RunConfig) -> (usize, f64) {
    let step = cfg.output_step.unwrap_or(cfg.dt);
    if cfg.tau_max == 0.0 {
        return (0, 0.0);
    }
    let intervals = ((cfg.tau_max / step) - 1e-9).ceil().max(1.0) as usize;
    (intervals, cfg.tau_max / intervals as f64)
}

/// Runs the semiclassical engine and the matching exact oracle for one
/// photon-number scale. `n_max` falls back to the truncation heuristic;
/// `with_q` feeds `Q/N` back into the mean amplitude.
pub fn compare_once(
    cfg: &RunConfig,
    p: &PhysicalParams,
    n_max: Option<usize>,
    with_q: bool,
) -> CliResult<ComparisonRun> {
    let m: ModelParams = scale_parameters(p)?;
    let z0 = cfg.z0();
    let (intervals, spacing) = output_grid(cfg);

    let sub = if intervals == 0 {
        1
    } else {
        ((spacing / cfg.dt) - 1e-9).ceil().max(1.0) as usize
    };
    let h = if intervals == 0 { cfg.dt } else { spacing / sub as f64 };
    let traj = integrate_semiclassical(&m, z0, cfg.tau_max, h, with_q)?;
    let mut tau = Vec::with_capacity(intervals + 1);
    let mut s_sc = Vec::with_capacity(intervals + 1);
    let mut f_sc = Vec::with_capacity(intervals + 1);
    let mut absz_sc = Vec::with_capacity(intervals + 1);
    for k in 0..=intervals {
        let s = &traj.states[(k * sub).min(traj.len() - 1)];
        tau.push(s.tau);
        s_sc.push(principal_squeezing(s.c, s.b));
        f_sc.push(fano_from_cumulants(s.z, s.c, s.b)?);
        absz_sc.push(s.z.norm());
    }

    let beta = z0 * p.n.sqrt();
    let oracle_spec = cfg.oracle.unwrap_or_default();
    let n_max = n_max.unwrap_or_else(|| default_truncation(beta, p.n_d));

    let run = if p.gamma == 0.0 {
        let times: Vec<f64> = tau.iter().map(|t| t / m.g_l).collect();
        let obs = fock_series_lossless(p, beta, &times, n_max, EnergyConvention::PowerLaw)?;
        ComparisonRun {
            n: p.n,
            n_max,
            oracle: "fock",
            oracle_dt: None,
            max_trace_drift: None,
            tau,
            s_sc,
            f_sc,
            absz_sc,
            oracle_obs: obs,
        }
    } else {
        let basis = FockBasis::new(p, n_max, EnergyConvention::PowerLaw)?;
        let (lo, hi) = basis
            .energies
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| {
                (lo.min(e), hi.max(e))
            });
        let omega_max = hi - lo;
        let mut dt = oracle_spec.dt.unwrap_or(cfg.dt / m.g_l);
        if omega_max > 0.0 {
            dt = dt.min(PHASE_PER_STEP / omega_max);
        }
        let t_spacing = spacing / m.g_l;
        let (oracle_sub, oracle_h) = if intervals == 0 {
            (1, dt)
        } else {
            let s = ((t_spacing / dt) - 1e-9).ceil().max(1.0) as usize;
            (s, t_spacing / s as f64)
        };
        let series = lindblad_evolve_with(
            p,
            beta,
            cfg.tau_max / m.g_l,
            oracle_h,
            n_max,
            oracle_sub,
            EnergyConvention::PowerLaw,
        )?;
        if series.observables.len() != tau.len() {
            return Err(CliError::Numeric(anharmonic_core::Error::InvalidGrid(format!(
                "oracle produced {} samples for {} output times",
                series.observables.len(),
                tau.len()
            ))));
        }
        ComparisonRun {
            n: p.n,
            n_max,
            oracle: "lindblad",
            oracle_dt: Some(series.dt),
            max_trace_drift: Some(series.max_trace_drift),
            tau,
            s_sc,
            f_sc,
            absz_sc,
            oracle_obs: series.observables,
        }
    };
    Ok(run)
}

/// Same scaled model at another photon-number scale: `g_l`, `Γ` and `Δ̄`
/// are kept, `λ = g_l / N^l`.
pub fn rescaled(p: &PhysicalParams, n: f64) -> CliResult<PhysicalParams> {
    let m = scale_parameters(p)?;
    let moved = ModelParams::with_coupling(m.l, m.damping, m.detuning, m.n_d, n, m.g_l)?;
    Ok(moved.to_physical())
}

pub fn compare(cfg: &RunConfig, second_n: Option<f64>, with_q: bool) -> CliResult<Table> {
    let p = cfg.physical_params()?;
    let first = compare_once(cfg, &p, cfg.oracle.and_then(|o| o.n_max), with_q)?;
    let second = match second_n {
        Some(n) => {
            if !(n.is_finite() && n >= 1.0) {
                return Err(CliError::Config(format!("--second-n: must be >= 1, got {n}")));
            }
            Some(compare_once(cfg, &rescaled(&p, n)?, None, with_q)?)
        }
        None => None,
    };

    let mut columns = vec![
        "tau",
        "S_sc",
        "S_oracle",
        "dS",
        "F_sc",
        "F_oracle",
        "dF",
        "absz_sc",
        "absz_oracle",
        "dabsz",
    ];
    if second.is_some() {
        columns.extend([
            "S_sc_2",
            "S_oracle_2",
            "dS_2",
            "F_sc_2",
            "F_oracle_2",
            "dF_2",
            "dS_ratio",
            "dF_ratio",
        ]);
    }
    let mut table = Table::new(&columns);
    let m = scale_parameters(&p)?;
    table
        .meta("command", "compare")
        .meta("oracle", first.oracle)
        .meta("engine", if with_q { "ode+q" } else { "ode" })
        .meta("l", p.l)
        .meta("lambda", p.lambda)
        .meta("n", p.n)
        .meta("delta", p.delta)
        .meta("gamma", p.gamma)
        .meta("n_d", p.n_d)
        .meta("g_l", m.g_l)
        .meta("z0", format!("{} {}", cfg.z0[0], cfg.z0[1]))
        .meta("tau_max", cfg.tau_max)
        .meta("n_max", first.n_max);
    if let Some(dt) = first.oracle_dt {
        table.meta("oracle_dt", dt);
    }
    if let Some(drift) = first.max_trace_drift {
        table.meta("max_trace_drift", drift);
    }
    table.meta("max_dS", max_of(&first.s_error()));
    table.meta("max_dF", max_of(&first.f_error()));

    let (ds, df, dz) = (first.s_error(), first.f_error(), first.absz_error());
    if let Some(sec) = &second {
        let (ds2, df2) = (sec.s_error(), sec.f_error());
        let ratio_s = max_of(&ds) / max_of(&ds2);
        let ratio_f = max_of(&df) / max_of(&df2);
        table
            .meta("second_n", sec.n)
            .meta("second_n_max", sec.n_max)
            .meta("max_dS_2", max_of(&ds2))
            .meta("max_dF_2", max_of(&df2))
            .meta("max_error_ratio_S", ratio_s)
            .meta("max_error_ratio_F", ratio_f)
            .meta("verdict", verdict(ratio_s, first.n, sec.n));
    }

    for k in 0..first.tau.len() {
        let o = &first.oracle_obs[k];
        let mut row = vec![
            first.tau[k],
            first.s_sc[k],
            o.s,
            ds[k],
            first.f_sc[k],
            o.f,
            df[k],
            first.absz_sc[k],
            o.z.norm(),
            dz[k],
        ];
        if let Some(sec) = &second {
            let o2 = &sec.oracle_obs[k];
            let (ds2, df2) = ((sec.s_sc[k] - o2.s).abs(), (sec.f_sc[k] - o2.f).abs());
            row.extend([
                sec.s_sc[k],
                o2.s,
                ds2,
                sec.f_sc[k],
                o2.f,
                df2,
                ratio(ds[k], ds2),
                ratio(df[k], df2),
            ]);
        }
        table.push(row);
    }
    Ok(table)
}

fn ratio(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        f64::NAN
    } else {
        a / b
    }
}

/// First-order convergence means the error ratio tracks `N₂/N₁`; accept
/// between 0.75 and 1.5 times that.
fn verdict(ratio: f64, n1: f64, n2: f64) -> String {
    let expected = n2 / n1;
    let tag = if ratio >= 0.75 * expected && ratio <= 1.5 * expected {
        "consistent"
    } else {
        "inconsistent"
    };
    format!("{tag} with 1/N scaling (expected ratio {expected}, got {ratio:.4})")
}
