//! Decay of the isolated system: instanton and WKB rates, persistence,
//! escape temperatures.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::potential::CubicPotential;
use crate::wkb::{self, ResonanceData, ACTION_FACTOR_AT_SEPARATRIX};

/// Instanton rate `Γ = (Ω₀/2π)·a_q·e^(−Λ₀)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InstantonRate {
    pub gamma: f64,
    /// Bounce exponent `S_B/ħ = 18ε_s/(5ε₀)`.
    pub lambda0: f64,
    /// Prefactor `(120πΛ₀)^(1/2)`.
    pub a_q: f64,
}

pub fn instanton_rate(pot: &CubicPotential) -> Result<InstantonRate> {
    let (eps0, eps_s) = (pot.eps0(), pot.eps_s());
    if eps0 >= eps_s {
        return Err(Error::BarrierTooShallow { eps0, eps_s });
    }
    let lambda0 = 18.0 * eps_s / (5.0 * eps0);
    let a_q = (120.0 * PI * lambda0).sqrt();
    let gamma = pot.omega0 / (2.0 * PI) * a_q * (-lambda0).exp();
    Ok(InstantonRate { gamma, lambda0, a_q })
}

/// `Γ = (1/2τ)·e^(−Λ)`, identical to `2ε/ħ`.
pub fn wkb_rate(res: &ResonanceData) -> f64 {
    (-res.lambda).exp() / (2.0 * res.tau)
}

/// `T_esc = (ε_s/k_B)/ln(1/(2τΓ))`.
pub fn escape_temperature(gamma: f64, eps_s: f64, tau: f64, k_b: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::Domain(format!("escape temperature needs a positive rate, got {gamma}")));
    }
    let x = 2.0 * tau * gamma;
    if x >= 1.0 {
        return Err(Error::RateAbovePrefactor(x));
    }
    Ok(eps_s / k_b / (1.0 / x).ln())
}

/// Inverse of [`escape_temperature`]: `Γ = (1/2τ)·e^(−ε_s/k_B T)`.
pub fn rate_from_escape_temperature(t_esc: f64, eps_s: f64, tau: f64, k_b: f64) -> Result<f64> {
    if !(t_esc > 0.0) {
        return Err(Error::Domain(format!("escape temperature must be positive, got {t_esc}")));
    }
    Ok((-eps_s / (k_b * t_esc)).exp() / (2.0 * tau))
}

/// Instanton escape temperature with `τ = π/Ω₀`:
/// `T = (ε₀/k_B)/(3.6 − (ε₀/ε_s)·ln a_q)`.
pub fn instanton_escape_temperature(pot: &CubicPotential) -> Result<f64> {
    let inst = instanton_rate(pot)?;
    escape_temperature(inst.gamma, pot.eps_s(), PI / pot.omega0, pot.units.k_b)
}

/// WKB escape temperature in the mixed convention: harmonic `ε₀`
/// in the numerator, the exponent `F(k_ref)` of the anharmonic reflected
/// state and the frequency correction `ln f(k_GS)`:
/// `T = (ε₀/k_B)/(F(k_ref) − (ε₀/ε_s)·ln f(k_GS))`.
pub fn wkb_escape_temperature_mixed(pot: &CubicPotential) -> Result<f64> {
    let gs = wkb::ground_state(pot, 0)?;
    let k_ref = wkb::reflect(gs.k)?;
    let eps0 = pot.eps0();
    let denom = wkb::action_factor(k_ref)? - eps0 / pot.eps_s() * gs.f.ln();
    Ok(eps0 / pot.units.k_b / denom)
}

/// `ρ²(t) = exp(−2εt/ħ)`. Valid before the late-time power law sets in.
pub fn persistence_closed(res: &ResonanceData, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("time must be >= 0, got {t}")));
    }
    Ok((-2.0 * res.eps * t / res.hbar).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedRateReport {
    pub gamma_instanton: f64,
    pub gamma_wkb: f64,
    pub lambda0: f64,
    pub a_q: f64,
    pub lambda: f64,
    pub tau: f64,
    pub t_esc_instanton: f64,
    pub t_esc_wkb: f64,
    /// Mixed convention, see [`wkb_escape_temperature_mixed`].
    pub t_esc_wkb_mixed: f64,
    pub k_gs: f64,
    pub k_ref: f64,
    pub zeta_gs: f64,
    pub f_gs: f64,
    pub action_factor_ref: f64,
}

impl ClosedRateReport {
    /// `Λ₀ − ln a_q`, the instanton counterpart of `Λ`.
    pub fn instanton_exponent(&self) -> f64 {
        self.lambda0 - self.a_q.ln()
    }
}

pub fn closed_report(pot: &CubicPotential, res: &ResonanceData) -> Result<ClosedRateReport> {
    let inst = instanton_rate(pot)?;
    let gamma_wkb = wkb_rate(res);
    let gs = wkb::EllipticPoint::at(res.k_gs)?;
    let action_factor_ref = if res.k_ref < 1.0 { wkb::action_factor(res.k_ref)? } else { ACTION_FACTOR_AT_SEPARATRIX };
    Ok(ClosedRateReport {
        gamma_instanton: inst.gamma,
        gamma_wkb,
        lambda0: inst.lambda0,
        a_q: inst.a_q,
        lambda: res.lambda,
        tau: res.tau,
        t_esc_instanton: instanton_escape_temperature(pot)?,
        t_esc_wkb: escape_temperature(gamma_wkb, pot.eps_s(), res.tau, pot.units.k_b)?,
        t_esc_wkb_mixed: wkb_escape_temperature_mixed(pot)?,
        k_gs: res.k_gs,
        k_ref: res.k_ref,
        zeta_gs: gs.zeta,
        f_gs: gs.f,
        action_factor_ref,
    })
}
