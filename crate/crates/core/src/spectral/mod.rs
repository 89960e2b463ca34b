//! Energy-representation coefficients `C(E₁, E₂, t)` and their evolution.
//!
//! Two evolutions are provided: the exact phase-shift evolution
//! `C(t) = exp(−L t)·C(0)` on an energy grid ([`phase`]), and a
//! finite-difference integrator for the local Kramers equation on a momentum
//! grid ([`kramers`]). Momentum coefficients are stored as
//! `C_p = √(p₁p₂)·C_E`; see [`momentum_coefficient`].

mod field;
pub mod kramers;
pub mod phase;
mod scales;

pub use field::{
    energy_coefficient, init_false_vacuum, init_false_vacuum_momentum, momentum_coefficient, Axis, Coordinates,
    Diagnostics, EnvironmentParams, FieldMeta, GridSpec, MomentumGridSpec, SpectralField,
};
pub use kramers::{evolve_kramers_local, KramersOptions, KramersRun};
pub use phase::{evolve_phase_shift, persistence_quadrature, fit_log_slope};
pub use scales::{decoherence_scales, DecoherenceScales};
