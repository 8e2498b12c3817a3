//! Second-order cumulant dynamics.
//!
//! The state is the triple `(z, C, B)`: the mean amplitude, the scaled
//! cumulant `C = ⟨(Δα)²⟩` and the symmetric-ordering cumulant
//! `B = ⟨|Δα|²⟩ + 1/2`. Two representations are provided:
//!
//! - closed forms built from the exact classical solution (first order in
//!   `Γτ` for the thermal source), see [`cumulants_closed`];
//! - the full self-consistent ODE system integrated with RK4, see
//!   [`integrate_semiclassical`], which is the reference for dissipative runs.

use num_complex::Complex64;

use crate::classical::{classical_state, intensity_power, mu, ClassicalDrift};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::numerics::{integrate_fixed, kernel_trapezoid, uniform_steps};
use crate::validity;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `(z, C, B)` at scaled time `tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CumulantState {
    pub tau: f64,
    pub z: Complex64,
    pub c: Complex64,
    pub b: f64,
}

impl CumulantState {
    /// Coherent-state initial data: `C = 0`, `B = 1/2`.
    pub fn coherent(z0: Complex64) -> Self {
        CumulantState {
            tau: 0.0,
            z: z0,
            c: ZERO,
            b: 0.5,
        }
    }

    /// `B² - |C|²`, equal to 1/4 for a minimum-uncertainty Gaussian.
    pub fn purity_defect(&self) -> f64 {
        self.b * self.b - self.c.norm_sqr()
    }
}

/// Closed-form cumulants for coherent initial data:
///
/// `C = -μ l z0² |z0|^{2(l-1)} (μ l |z0|^{2l} + i) e^{(-Γ - 2iΔ̄)τ - 2i|z0|^{2l} μ}`,
/// `B = e^{-Γτ} [1/2 + l² |z0|^{4l} μ²] + (n_d + 1/2) Γτ`.
pub fn cumulants_closed(m: &ModelParams, z0: Complex64, tau: f64) -> (Complex64, f64) {
    let l = m.l as f64;
    let mu = mu(tau, m.damping, m.l);
    let p = intensity_power(z0, m.l);
    let a = l * p * mu;
    let lower = if m.l == 1 {
        1.0
    } else {
        z0.norm_sqr().powi(m.l as i32 - 1)
    };
    let phase = -(m.damping * tau) - I * (2.0 * m.detuning * tau + 2.0 * p * mu);
    let c = -(l * mu) * z0 * z0 * lower * (a + I) * phase.exp();
    let b = (-m.damping * tau).exp() * (0.5 + a * a) + m.b_equilibrium() * m.damping * tau;
    (c, b)
}

/// Quantum correction
/// `Q = ½l(l+1) z*^l z^{l-1} C + ½l(l-1) z*^{l-2} z^{l+1} C* + l(l+1) z*^{l-1} z^l (B - 1/2)`.
pub fn quantum_correction(m: &ModelParams, z: Complex64, c: Complex64, b: f64) -> Complex64 {
    let l = m.l;
    let lf = l as f64;
    let zc = z.conj();
    let mut q = 0.5 * lf * (lf + 1.0) * zc.powu(l) * z.powu(l - 1) * c
        + lf * (lf + 1.0) * zc.powu(l - 1) * z.powu(l) * (b - 0.5);
    // the C* coefficient vanishes identically for l = 1
    if l >= 2 {
        q += 0.5 * lf * (lf - 1.0) * zc.powu(l - 2) * z.powu(l + 1) * c.conj();
    }
    q
}

/// Time derivatives of `(z, C, B)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivatives {
    pub dz: Complex64,
    pub dc: Complex64,
    pub db: f64,
}

/// `(∂V/∂α, ∂V/∂α*)` at `z` for `V = Δ̄ z + |z|^{2l} z`.
fn potential_partials(m: &ModelParams, z: Complex64) -> (f64, Complex64) {
    let l = m.l as f64;
    let r = z.norm_sqr();
    let d_alpha = m.detuning + (l + 1.0) * r.powi(m.l as i32);
    let d_alpha_conj = l * r.powi(m.l as i32 - 1) * z * z;
    (d_alpha, d_alpha_conj)
}

fn cumulant_derivatives(m: &ModelParams, z: Complex64, c: Complex64, b: f64, b_eq: Option<f64>) -> (Complex64, f64) {
    let (va, vac) = potential_partials(m, z);
    let dc = -I * (2.0 * va * c + 2.0 * vac * b) - m.damping * c;
    // i dB/dτ = w - w* with w = (∂V/∂α*) C*, so dB/dτ is real by construction
    let w = vac * c.conj();
    let relax = match b_eq {
        Some(eq) => b - eq,
        None => b,
    };
    let db = 2.0 * w.im - m.damping * relax;
    (dc, db)
}

/// Right-hand side of the self-consistent system:
///
/// - `dz/dτ = -(Γ/2) z - i V(z) - (i/N) Q` (the `Q` term only if `include_q`),
/// - `i dC/dτ = 2 (∂V/∂α) C + 2 (∂V/∂α*) B - iΓ C`,
/// - `i dB/dτ = -(∂V*/∂α) C + (∂V/∂α*) C* - iΓ (B - B⁽⁰⁾)`.
pub fn semiclassical_rhs(m: &ModelParams, s: &CumulantState, include_q: bool) -> Derivatives {
    let drift = ClassicalDrift::from(m);
    let mut dz = -I * drift.potential(s.z) - 0.5 * m.damping * s.z;
    if include_q {
        dz -= I * quantum_correction(m, s.z, s.c, s.b) / m.n;
    }
    let (dc, db) = cumulant_derivatives(m, s.z, s.c, s.b, Some(m.b_equilibrium()));
    Derivatives { dz, dc, db }
}

/// Cumulant equations without the thermal source term `ΓB⁽⁰⁾`, i.e. the
/// homogeneous part solved by the linearised classical flow.
pub fn homogeneous_cumulant_rhs(m: &ModelParams, z: Complex64, c: Complex64, b: f64) -> (Complex64, f64) {
    cumulant_derivatives(m, z, c, b, None)
}

/// How the first-order shift integrates the quantum correction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShiftKernel {
    /// Exact solution of `i ż⁽¹⁾ = -iΓ/2 z⁽¹⁾ + Q`:
    /// `z⁽¹⁾ = -i ∫₀^τ e^{-Γ(τ-τ')/2} Q(τ') dτ'`.
    #[default]
    Damped,
    /// Undamped integral `z⁽¹⁾ = -i ∫₀^τ Q(τ') dτ'`, as used for the
    /// published quantum-classical difference curves.
    Bare,
}

impl ShiftKernel {
    fn rate(self, m: &ModelParams) -> f64 {
        match self {
            ShiftKernel::Damped => 0.5 * m.damping,
            ShiftKernel::Bare => 0.0,
        }
    }
}

/// Which representation produced a trajectory's cumulants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Closed,
    Ode { include_q: bool },
}

/// A time series of cumulant states with the classical reference and the
/// first-order diagnostics evaluated on the same grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub params: ModelParams,
    pub z0: Complex64,
    pub engine: Engine,
    pub grid: Vec<f64>,
    pub states: Vec<CumulantState>,
    /// Exact classical solution on the grid.
    pub z_cl: Vec<Complex64>,
    /// `Q` evaluated at `z_cl` with the trajectory's `C` and `B`.
    pub q: Vec<Complex64>,
    /// First-order shift `z⁽¹⁾`.
    pub z1: Vec<Complex64>,
    /// Validity ratio `R = |z⁽¹⁾ / z_cl| / N`.
    pub r: Vec<f64>,
    pub kernel: ShiftKernel,
    /// Richardson estimate of the RK4 error in `(z, C, B)` at the final time.
    pub error_estimate: Option<f64>,
}

impl Trajectory {
    fn assemble(
        params: ModelParams,
        z0: Complex64,
        engine: Engine,
        states: Vec<CumulantState>,
        kernel: ShiftKernel,
    ) -> Result<Self> {
        let grid: Vec<f64> = states.iter().map(|s| s.tau).collect();
        let z_cl: Vec<Complex64> = grid.iter().map(|&t| classical_state(&params, z0, t)).collect();
        let q = states
            .iter()
            .zip(&z_cl)
            .map(|(s, &zc)| quantum_correction(&params, zc, s.c, s.b))
            .collect();
        let mut traj = Trajectory {
            params,
            z0,
            engine,
            grid,
            states,
            z_cl,
            q,
            z1: Vec::new(),
            r: Vec::new(),
            kernel,
            error_estimate: None,
        };
        traj.refresh_shift()?;
        Ok(traj)
    }

    fn refresh_shift(&mut self) -> Result<()> {
        self.z1 = if self.grid.len() < 2 {
            vec![ZERO; self.grid.len()]
        } else {
            first_order_shift(self, self.kernel)?
        };
        self.r = validity::validity_ratio(self)?;
        Ok(())
    }

    /// Recomputes `z⁽¹⁾` and `R` with another kernel.
    pub fn with_kernel(mut self, kernel: ShiftKernel) -> Result<Self> {
        if kernel != self.kernel {
            self.kernel = kernel;
            self.refresh_shift()?;
        }
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn last(&self) -> &CumulantState {
        self.states.last().expect("trajectory has at least the initial state")
    }
}

fn check_z0(z0: Complex64) -> Result<()> {
    if z0.re.is_finite() && z0.im.is_finite() {
        Ok(())
    } else {
        Err(Error::param("z0", "must be finite"))
    }
}

/// Trajectory built from the closed forms on a uniform grid.
pub fn closed_form_trajectory(m: &ModelParams, z0: Complex64, tau_max: f64, dt: f64) -> Result<Trajectory> {
    m.validate()?;
    check_z0(z0)?;
    let (steps, h) = uniform_steps(tau_max, dt)?;
    let states = (0..=steps)
        .map(|k| {
            let tau = k as f64 * h;
            let (c, b) = cumulants_closed(m, z0, tau);
            CumulantState {
                tau,
                z: classical_state(m, z0, tau),
                c,
                b,
            }
        })
        .collect();
    Trajectory::assemble(*m, z0, Engine::Closed, states, ShiftKernel::Damped)
}

fn pack(s: &CumulantState) -> [Complex64; 3] {
    [s.z, s.c, Complex64::new(s.b, 0.0)]
}

fn run_ode(
    m: &ModelParams,
    z0: Complex64,
    steps: usize,
    h: f64,
    include_q: bool,
    mut record: impl FnMut(CumulantState),
) -> Result<CumulantState> {
    let mut y = pack(&CumulantState::coherent(z0));
    let rhs = |tau: f64, y: &[Complex64], dy: &mut [Complex64]| {
        let s = CumulantState {
            tau,
            z: y[0],
            c: y[1],
            b: y[2].re,
        };
        let d = semiclassical_rhs(m, &s, include_q);
        dy[0] = d.dz;
        dy[1] = d.dc;
        dy[2] = Complex64::new(d.db, 0.0);
    };
    let mut last = CumulantState::coherent(z0);
    integrate_fixed(rhs, &mut y, steps, h, |_, tau, y| {
        last = CumulantState {
            tau,
            z: y[0],
            c: y[1],
            b: y[2].re,
        };
        record(last);
    })?;
    Ok(last)
}

/// Integrates the self-consistent system from coherent initial data with
/// fixed-step RK4 and fills all companion arrays.
///
/// The final state is also recomputed with half the step; for a fourth-order
/// method the stored (full-step) error is about `16/15` of the difference,
/// which is kept in [`Trajectory::error_estimate`].
pub fn integrate_semiclassical(
    m: &ModelParams,
    z0: Complex64,
    tau_max: f64,
    dt: f64,
    include_q: bool,
) -> Result<Trajectory> {
    m.validate()?;
    check_z0(z0)?;
    let (steps, h) = uniform_steps(tau_max, dt)?;
    let mut states = Vec::with_capacity(steps + 1);
    let coarse = run_ode(m, z0, steps, h, include_q, |s| states.push(s))?;
    let fine = run_ode(m, z0, 2 * steps, 0.5 * h, include_q, |_| {})?;
    let diff = pack(&coarse)
        .iter()
        .zip(pack(&fine).iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);

    let mut traj = Trajectory::assemble(*m, z0, Engine::Ode { include_q }, states, ShiftKernel::Damped)?;
    traj.error_estimate = Some(diff * 16.0 / 15.0);
    Ok(traj)
}

/// First-order shift `z⁽¹⁾(τ)` from the trajectory's `Q` array by composite
/// trapezoid quadrature, with `z⁽¹⁾(0) = 0`.
pub fn first_order_shift(traj: &Trajectory, kernel: ShiftKernel) -> Result<Vec<Complex64>> {
    let integral = kernel_trapezoid(&traj.q, &traj.grid, kernel.rate(&traj.params))?;
    Ok(integral.into_iter().map(|v| -I * v).collect())
}
