//! Physical constants and unit modes.

use serde::{Deserialize, Serialize};

/// Reduced Planck constant as frozen for reproducing the junction numbers [J s].
pub const HBAR_FROZEN: f64 = 1.054572e-34;
/// Elementary charge, frozen [C].
pub const E_CHARGE_FROZEN: f64 = 1.602176e-19;
/// Boltzmann constant, frozen [J/K].
pub const K_B_FROZEN: f64 = 1.380650e-23;

pub const HBAR_CODATA: f64 = 1.054_571_817e-34;
pub const E_CHARGE_CODATA: f64 = 1.602_176_634e-19;
pub const K_B_CODATA: f64 = 1.380_649e-23;

/// The set of constants a computation runs under.
///
/// `natural()` sets `hbar = k_B = 1` (and the charge to 1, unused there);
/// the SI variants differ only in the constant table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Units {
    pub hbar: f64,
    pub k_b: f64,
    pub e_charge: f64,
}

impl Units {
    pub const fn natural() -> Self {
        Self { hbar: 1.0, k_b: 1.0, e_charge: 1.0 }
    }

    pub const fn si_frozen() -> Self {
        Self { hbar: HBAR_FROZEN, k_b: K_B_FROZEN, e_charge: E_CHARGE_FROZEN }
    }

    pub const fn si_codata() -> Self {
        Self { hbar: HBAR_CODATA, k_b: K_B_CODATA, e_charge: E_CHARGE_CODATA }
    }
}

impl Default for Units {
    fn default() -> Self {
        Self::natural()
    }
}
