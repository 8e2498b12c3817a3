//! Deterministic fixed-step kernels shared by the semiclassical engine and
//! the Lindblad oracle.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance used to decide whether a grid is uniform.
const UNIFORM_TOL: f64 = 1e-9;

/// Classical fourth-order Runge-Kutta stepper with reusable stage buffers.
///
/// The right-hand side writes `dy/dτ` into its output slice.
#[derive(Debug, Clone)]
pub struct Rk4 {
    k1: Vec<Complex64>,
    k2: Vec<Complex64>,
    k3: Vec<Complex64>,
    k4: Vec<Complex64>,
    probe: Vec<Complex64>,
}

impl Rk4 {
    pub fn new(dim: usize) -> Self {
        let zero = vec![Complex64::new(0.0, 0.0); dim];
        Rk4 {
            k1: zero.clone(),
            k2: zero.clone(),
            k3: zero.clone(),
            k4: zero.clone(),
            probe: zero,
        }
    }

    pub fn dim(&self) -> usize {
        self.k1.len()
    }

    /// Advances `y` in place from `tau` to `tau + dt`.
    pub fn step<F>(&mut self, mut f: F, tau: f64, dt: f64, y: &mut [Complex64])
    where
        F: FnMut(f64, &[Complex64], &mut [Complex64]),
    {
        assert_eq!(y.len(), self.dim(), "state dimension mismatch");
        let half = 0.5 * dt;

        f(tau, y, &mut self.k1);
        for ((p, &yi), &k) in self.probe.iter_mut().zip(y.iter()).zip(&self.k1) {
            *p = yi + k * half;
        }
        f(tau + half, &self.probe, &mut self.k2);
        for ((p, &yi), &k) in self.probe.iter_mut().zip(y.iter()).zip(&self.k2) {
            *p = yi + k * half;
        }
        f(tau + half, &self.probe, &mut self.k3);
        for ((p, &yi), &k) in self.probe.iter_mut().zip(y.iter()).zip(&self.k3) {
            *p = yi + k * dt;
        }
        f(tau + dt, &self.probe, &mut self.k4);

        let sixth = dt / 6.0;
        for (i, yi) in y.iter_mut().enumerate() {
            *yi += (self.k1[i] + (self.k2[i] + self.k3[i]) * 2.0 + self.k4[i]) * sixth;
        }
    }
}

/// One RK4 step from `tau` to `tau + dt`, returning the new state.
pub fn rk4_step<F>(f: F, state: &[Complex64], tau: f64, dt: f64) -> Vec<Complex64>
where
    F: FnMut(f64, &[Complex64], &mut [Complex64]),
{
    let mut y = state.to_vec();
    Rk4::new(state.len()).step(f, tau, dt, &mut y);
    y
}

/// Number of steps and the adjusted uniform step that land exactly on
/// `tau_max`. The adjusted step never exceeds `dt`.
pub fn uniform_steps(tau_max: f64, dt: f64) -> Result<(usize, f64)> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::param("dt", format!("must be finite and > 0, got {dt}")));
    }
    if !(tau_max.is_finite() && tau_max >= 0.0) {
        return Err(Error::param(
            "tau_max",
            format!("must be finite and >= 0, got {tau_max}"),
        ));
    }
    if tau_max == 0.0 {
        return Ok((0, dt));
    }
    let steps = (tau_max / dt - 1e-9).ceil().max(1.0) as usize;
    Ok((steps, tau_max / steps as f64))
}

/// Integrates `y` over `steps` uniform steps of size `dt`, calling `observe`
/// at every grid point including the initial one.
///
/// Fails with [`Error::NonFinite`] on the first step that produces a
/// non-finite component.
pub fn integrate_fixed<F, O>(mut f: F, y: &mut [Complex64], steps: usize, dt: f64, mut observe: O) -> Result<()>
where
    F: FnMut(f64, &[Complex64], &mut [Complex64]),
    O: FnMut(usize, f64, &[Complex64]),
{
    let mut rk = Rk4::new(y.len());
    observe(0, 0.0, y);
    for k in 0..steps {
        let tau = k as f64 * dt;
        rk.step(&mut f, tau, dt, y);
        let next = (k + 1) as f64 * dt;
        if y.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite { step: k + 1, tau: next });
        }
        observe(k + 1, next, y);
    }
    Ok(())
}

/// The uniform spacing of `grid`, or an error if it is too short or not uniform.
pub fn uniform_spacing(grid: &[f64]) -> Result<f64> {
    if grid.len() < 2 {
        return Err(Error::InvalidGrid(format!(
            "need at least 2 points, got {}",
            grid.len()
        )));
    }
    let h = (grid[grid.len() - 1] - grid[0]) / (grid.len() - 1) as f64;
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidGrid("grid must be strictly increasing".into()));
    }
    for (k, w) in grid.windows(2).enumerate() {
        if ((w[1] - w[0]) - h).abs() > UNIFORM_TOL * h {
            return Err(Error::InvalidGrid(format!("non-uniform spacing at index {k}")));
        }
    }
    Ok(h)
}

/// Cumulative damped trapezoid integral
/// `I(τ_k) = ∫₀^{τ_k} e^{-κ(τ_k - τ')} f(τ') dτ'` on a uniform grid.
///
/// Uses the recurrence `I_{k+1} = e^{-κh} I_k + h/2 (e^{-κh} f_k + f_{k+1})`.
pub fn kernel_trapezoid(values: &[Complex64], grid: &[f64], kappa: f64) -> Result<Vec<Complex64>> {
    if values.len() != grid.len() {
        return Err(Error::InvalidGrid(format!(
            "{} values for {} grid points",
            values.len(),
            grid.len()
        )));
    }
    if !(kappa.is_finite() && kappa >= 0.0) {
        return Err(Error::param("kappa", format!("must be finite and >= 0, got {kappa}")));
    }
    let h = uniform_spacing(grid)?;
    let decay = (-kappa * h).exp();
    let mut out = Vec::with_capacity(values.len());
    let mut acc = Complex64::new(0.0, 0.0);
    out.push(acc);
    for w in values.windows(2) {
        acc = acc * decay + (w[0] * decay + w[1]) * (0.5 * h);
        out.push(acc);
    }
    Ok(out)
}
