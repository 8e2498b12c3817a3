//! Semiclassical (1/N-expansion) dynamics of dissipative anharmonic
//! oscillators with Hamiltonian `Δ b†b + λ/(l+1) (b†b)^(l+1)`.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: physical and scaled parameters.
//! - [`numerics`]: fixed-step RK4 and the damped trapezoid quadrature.
//! - [`classical`]: the zero-order (N → ∞) motion and its exact solution.
//! - [`cumulants`]: second-order cumulants, quantum correction `Q` and the
//!   first-order shift `z⁽¹⁾`, both in closed form and by integration.
//! - [`observables`]: principal squeezing and the Fano factor.
//! - [`validity`]: the validity ratio `R(τ)` and breaking-time estimates.
//! - [`oracle`]: exact Fock-space references (unitary and Lindblad).

pub mod classical;
pub mod cumulants;
mod error;
pub mod model;
pub mod numerics;
pub mod observables;
pub mod oracle;
pub mod validity;

pub use num_complex::Complex64;

pub use classical::{classical_rhs, classical_state, mu, ClassicalDrift};
pub use cumulants::{
    closed_form_trajectory, cumulants_closed, first_order_shift, integrate_semiclassical, quantum_correction,
    semiclassical_rhs, CumulantState, ShiftKernel, Trajectory,
};
pub use error::{Error, Result};
pub use model::{physical_time, scale_parameters, ModelParams, PhysicalParams};
pub use observables::{
    critical_phonons, fano_closed, fano_from_cumulants, principal_squeezing, squeezing_closed, squeezing_limit,
    CriticalPhonons, ObservableSeries, Regime,
};
pub use oracle::{fock_evolve_lossless, lindblad_evolve, OracleObservables};
pub use validity::{breaking_report, validity_ratio, ValidityReport};
