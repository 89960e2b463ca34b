//! Macroscopic quantum tunneling out of a cubic metastable well.
//!
//! The crate covers the isolated problem (WKB resonance data, instanton and
//! WKB rates, escape temperatures), the suppression of tunneling by a
//! dissipative/diffusive environment (stationary-phase ratio `R(D)`), direct
//! evolution of the energy-representation coefficients, and the mapping of
//! current-biased Josephson junctions onto the cubic model.
//!
//! Modules are layered bottom-up:
//!
//! * [`quadrature`], [`roots`], [`elliptic`]: numerical primitives.
//! * [`potential`]: the cubic well with its plateau continuation.
//! * [`wkb`]: actions, elliptic parametrization, ground state and resonance.
//! * [`closed`]: closed-system rates and escape temperatures.
//! * [`saddle`]: the open-system saddle-point system and `R(D)`.
//! * [`spectral`]: coefficient fields, exact phase-shift evolution, the local
//!   Kramers integrator and diagnostics.
//! * [`josephson`]: junction parameter map, prediction and inversion.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod closed;
pub mod elliptic;
pub mod error;
pub mod josephson;
pub mod potential;
pub mod quadrature;
pub mod roots;
pub mod saddle;
pub mod spectral;
pub mod units;
pub mod wkb;

pub use closed::ClosedRateReport;
pub use error::{Error, Result};
pub use josephson::{DerivedJunction, JunctionParams};
pub use potential::CubicPotential;
pub use saddle::{Regime, SuppressionResult};
pub use spectral::{DecoherenceScales, EnvironmentParams, SpectralField};
pub use units::Units;
pub use wkb::{EllipticPoint, EnergyConvention, ResonanceData, TauConvention};
