//! Current-biased Josephson junction mapped onto the cubic well.
//!
//! Near `s = I/I_c → 1` each washboard well is cubic with
//! `ε_s = (2/3)E_J(1 − s²)^(3/2)`, `Ω₀ = ω_p0(1 − s²)^(1/4)`,
//! `ω_p0 = (2eI_c/ħC)^(1/2)`, mass `M = ħ²C/(2e)²` and friction `γ = 1/(RC)`.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::closed::escape_temperature;
use crate::error::{Error, Result};
use crate::potential::CubicPotential;
use crate::roots::{brent, RootOptions};
use crate::saddle::{junction_d, r_large_d, solve_saddle_or_asymptotic, Regime};
use crate::units::Units;
use crate::wkb::{self, EnergyConvention, ResonanceOptions, TauConvention};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JunctionParams {
    /// Bias current `I` [A].
    pub bias_current: f64,
    /// Critical current `I_c` [A]; absent when it is to be inferred.
    pub critical_current: Option<f64>,
    /// Capacitance `C` [F].
    pub capacitance: f64,
    /// Shunt resistance `R` [Ω].
    pub resistance: f64,
}

impl JunctionParams {
    /// The junction of the zero-temperature tunneling experiment:
    /// `I = 24.710 μA`, `I_c = 24.873 μA`, `C = 4.28 pF`, `R = 9.3 Ω`.
    pub fn reference() -> Self {
        Self { bias_current: 24.710e-6, critical_current: Some(24.873e-6), capacitance: 4.28e-12, resistance: 9.3 }
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [("bias current", self.bias_current), ("capacitance", self.capacitance), ("resistance", self.resistance)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        if let Some(ic) = self.critical_current {
            if !(ic > 0.0 && ic.is_finite()) {
                return Err(Error::Domain(format!("critical current must be positive, got {ic}")));
            }
        }
        Ok(())
    }
}

/// Escape temperature reported by the experiment [K].
pub const EXPERIMENTAL_T_ESC: f64 = 45e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedJunction {
    pub e_j: f64,
    pub mass: f64,
    pub gamma: f64,
    pub s: f64,
    /// `√(1 − s²)`.
    pub kappa: f64,
    pub eps_s: f64,
    pub omega_p0: f64,
    pub omega0: f64,
    pub eps0: f64,
    pub units: Units,
}

impl DerivedJunction {
    /// `Ω₀ = (2eI/ħC)^(1/2)·s^(−1/2)·(1 − s²)^(1/4)`, the bias-current form.
    pub fn omega0_bias_form(&self, params: &JunctionParams) -> f64 {
        let u = &self.units;
        (2.0 * u.e_charge * params.bias_current / (u.hbar * params.capacitance)).sqrt()
            * self.s.powf(-0.5)
            * (1.0 - self.s * self.s).powf(0.25)
    }

    /// Cubic well with the same `M`, `Ω₀` and `ε_s`.
    pub fn to_potential(&self, u_inf: f64) -> Result<CubicPotential> {
        CubicPotential::from_barrier(self.mass, self.omega0, self.eps_s, u_inf, self.units)
    }

    /// The junction as tabulated with the experiment:
    /// `ε_s/k_B = 589.74 mK`, `Ω₀ = 44.918·10⁹ s⁻¹`, remaining fields from
    /// [`JunctionParams::reference`] and the frozen constants.
    pub fn reference_tabulated() -> Self {
        let mut dj = derive(&JunctionParams::reference(), Units::si_frozen()).expect("valid preset");
        dj.eps_s = 589.74e-3 * dj.units.k_b;
        dj.omega0 = 44.918e9;
        dj.eps0 = 0.5 * dj.units.hbar * dj.omega0;
        dj
    }
}

pub fn derive(params: &JunctionParams, units: Units) -> Result<DerivedJunction> {
    params.validate()?;
    let ic = params
        .critical_current
        .ok_or_else(|| Error::Argument("deriving the junction needs the critical current".into()))?;
    let s = params.bias_current / ic;
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::NoMetastableWell(s));
    }
    let (hbar, e) = (units.hbar, units.e_charge);
    let e_j = hbar * ic / (2.0 * e);
    let mass = hbar * hbar * params.capacitance / (4.0 * e * e);
    let one_minus = (1.0 - s) * (1.0 + s);
    let eps_s = 2.0 / 3.0 * e_j * one_minus.powf(1.5);
    let omega_p0 = (2.0 * e * ic / (hbar * params.capacitance)).sqrt();
    // Ω₀² = 3ε_s/(2(1 − s²)M), finite for every s in (0, 1)
    let omega0 = (3.0 * eps_s / (2.0 * one_minus * mass)).sqrt();
    Ok(DerivedJunction {
        e_j,
        mass,
        gamma: 1.0 / (params.resistance * params.capacitance),
        s,
        kappa: one_minus.sqrt(),
        eps_s,
        omega_p0,
        omega0,
        eps0: 0.5 * hbar * omega0,
        units,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PredictOptions {
    /// `U_∞/E₀` in the decoherence parameter.
    pub u_inf_over_e0: f64,
    pub energy: EnergyConvention,
}

impl Default for PredictOptions {
    fn default() -> Self {
        Self { u_inf_over_e0: 0.0, energy: EnergyConvention::Anharmonic }
    }
}

/// Above this `D` the large-`D` expansion is used directly; its relative
/// error there is far below the reporting precision.
pub const LARGE_D_SWITCH: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub t_esc: f64,
    pub lambda: f64,
    pub d: f64,
    pub r: f64,
    pub regime: Regime,
    pub e0: f64,
    /// `τ = π/Ω₀`.
    pub tau: f64,
    pub gamma_closed: f64,
    pub gamma_open: f64,
    /// `ε_s/(k_B T_esc) = Λ − ln R`.
    pub exponent: f64,
}

/// Open-system escape temperature with `σ² = E₀ ≈ ε₀`, `τ = π/Ω₀`:
/// `Γ_open = R·(1/2τ)e^(−Λ)`, so `ε_s/(k_B T_esc) = Λ − ln R`.
pub fn predict_escape_temperature(dj: &DerivedJunction, opts: PredictOptions) -> Result<Prediction> {
    let pot = dj.to_potential(0.0)?;
    let res = wkb::resonance_with(&pot, ResonanceOptions { energy: opts.energy, tau: TauConvention::Harmonic })?;
    let d = junction_d(dj.gamma, dj.omega0, opts.u_inf_over_e0, res.lambda);
    let (r, regime) = if d > LARGE_D_SWITCH {
        (r_large_d(d).r, Regime::LargeDAsymptotic)
    } else {
        let sol = solve_saddle_or_asymptotic(d)?;
        (sol.r, sol.regime)
    };
    let tau = res.tau;
    let gamma_closed = (-res.lambda).exp() / (2.0 * tau);
    let gamma_open = r * gamma_closed;
    let exponent = res.lambda - r.ln();
    Ok(Prediction {
        t_esc: dj.eps_s / (dj.units.k_b * exponent),
        lambda: res.lambda,
        d,
        r,
        regime,
        e0: res.e0,
        tau,
        gamma_closed,
        gamma_open,
        exponent,
    })
}

/// Measured rate `Γ = (Ω₀/2π)·e^(−ε_s/k_B T)`.
pub fn rate_from_experiment(t_esc: f64, eps_s: f64, omega0: f64, k_b: f64) -> Result<f64> {
    crate::closed::rate_from_escape_temperature(t_esc, eps_s, PI / omega0, k_b)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Inversion {
    pub critical_current: f64,
    pub s: f64,
    pub k_ref: f64,
    /// `ρ̄ = (9e³/(2ħCI))^(1/2)`.
    pub rho_bar: f64,
    /// `Λ = F(k_ref)/(1 − 2ζ(k_ref))`.
    pub lambda: f64,
    pub residuals: [f64; 2],
    pub newton_iterations: usize,
    /// Whether the bracketed fallback produced the answer.
    pub used_fallback: bool,
    /// `4F/(1 − 2ζ) − (2/5)ln(1/(1 − 2ζ))` at the solution.
    pub eqn3_lhs: f64,
    /// The constant `lhs − (4/5)ln(1/s)` of the closed-form matching condition.
    pub eqn3_constant: f64,
}

struct InversionProblem {
    bias: f64,
    capacitance: f64,
    gamma: f64,
    target: f64,
    rho_bar: f64,
    units: Units,
}

impl InversionProblem {
    fn omega0(&self, s: f64) -> f64 {
        let u = &self.units;
        (2.0 * u.e_charge * self.bias / (u.hbar * self.capacitance)).sqrt() * s.powf(-0.5) * ((1.0 - s) * (1.0 + s)).powf(0.25)
    }

    fn ratio(&self, s: f64) -> f64 {
        self.rho_bar * s.sqrt() / ((1.0 - s) * (1.0 + s)).powf(1.25)
    }

    fn lambda(k: f64) -> Result<f64> {
        Ok(wkb::action_factor(k)? / (1.0 - 2.0 * wkb::zeta(k)?))
    }

    fn log_rate(&self, s: f64, k: f64) -> Result<f64> {
        let om = self.omega0(s);
        Ok((om * om / (2.0 * PI * self.gamma) * 4.0 / (27.0 * 16.0 * PI.powi(3))).ln() - 4.0 * Self::lambda(k)?)
    }

    fn residuals(&self, s: f64, k: f64) -> Result<[f64; 2]> {
        Ok([self.ratio(s) - (1.0 - 2.0 * wkb::zeta(k)?), self.log_rate(s, k)? - self.target.ln()])
    }

    /// `k_ref(s)` from the first condition.
    fn k_of_s(&self, s: f64) -> Result<f64> {
        wkb::invert_zeta(0.5 * (1.0 - self.ratio(s)))
    }
}

const S_LO: f64 = 0.9;

fn newton(prob: &InversionProblem, s0: f64, k0: f64) -> Option<(f64, f64, usize)> {
    let (mut s, mut k) = (s0, k0);
    let norm = |r: [f64; 2]| r[0].hypot(r[1]);
    let mut r = prob.residuals(s, k).ok()?;
    for it in 0..60 {
        if norm(r) < 1e-13 {
            return Some((s, k, it));
        }
        let hs = 1e-7 * (1.0 - s);
        let hk = 1e-7 * k.max(1e-3);
        let rs_p = prob.residuals(s + hs, k).ok()?;
        let rs_m = prob.residuals(s - hs, k).ok()?;
        let rk_p = prob.residuals(s, k + hk).ok()?;
        let rk_m = prob.residuals(s, (k - hk).max(0.0)).ok()?;
        let j = [
            [(rs_p[0] - rs_m[0]) / (2.0 * hs), (rk_p[0] - rk_m[0]) / (k + hk - (k - hk).max(0.0))],
            [(rs_p[1] - rs_m[1]) / (2.0 * hs), (rk_p[1] - rk_m[1]) / (k + hk - (k - hk).max(0.0))],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let ds = -(j[1][1] * r[0] - j[0][1] * r[1]) / det;
        let dk = -(-j[1][0] * r[0] + j[0][0] * r[1]) / det;
        let mut damp = 1.0;
        loop {
            let (sn, kn) = (s + damp * ds, k + damp * dk);
            if sn > S_LO && sn < 1.0 && kn > 0.0 && kn < 1.0 {
                if let Ok(rn) = prob.residuals(sn, kn) {
                    if norm(rn) < norm(r) {
                        s = sn;
                        k = kn;
                        r = rn;
                        break;
                    }
                }
            }
            damp *= 0.5;
            if damp < 1e-6 {
                return if norm(r) < 1e-9 { Some((s, k, it)) } else { None };
            }
        }
    }
    if norm(r) < 1e-9 {
        Some((s, k, 60))
    } else {
        None
    }
}

fn fallback(prob: &InversionProblem) -> Result<(f64, f64)> {
    let g = |s: f64| prob.k_of_s(s).and_then(|k| prob.log_rate(s, k)).map(|v| v - prob.target.ln()).unwrap_or(f64::NAN);
    // the first condition needs ratio(s) <= 1, which bounds s from above
    let n = 2000;
    let grid: Vec<f64> = (0..=n).map(|i| S_LO + (1.0 - S_LO) * (1.0 - (i as f64 / n as f64).powi(2)).max(0.0)).rev().collect();
    let (lo, hi) = crate::roots::first_sign_change(g, &grid)
        .ok_or_else(|| Error::Solver(format!("inversion: no solution with s in ({S_LO}, 1)")))?;
    let s = if lo == hi { lo } else { brent(g, lo, hi, RootOptions::default())? };
    Ok((s, prob.k_of_s(s)?))
}

/// Solves for `(s, k_ref)` given the bias current and the measured rate:
/// `ρ̄·s^(1/2)/(1 − s²)^(5/4) = 1 − 2ζ(k_ref)` and
/// `(Ω₀²/2πγ)·(4/(27·16π³))·e^(−4Λ) = Γ_exp`.
pub fn invert_critical_current(
    bias_current: f64,
    capacitance: f64,
    resistance: f64,
    gamma_exp: f64,
    units: Units,
) -> Result<Inversion> {
    JunctionParams { bias_current, critical_current: None, capacitance, resistance }.validate()?;
    if !(gamma_exp > 0.0) {
        return Err(Error::Domain(format!("measured rate must be positive, got {gamma_exp}")));
    }
    let (hbar, e) = (units.hbar, units.e_charge);
    let prob = InversionProblem {
        bias: bias_current,
        capacitance,
        gamma: 1.0 / (resistance * capacitance),
        target: gamma_exp,
        rho_bar: (9.0 * e.powi(3) / (2.0 * hbar * capacitance * bias_current)).sqrt(),
        units,
    };
    let s0 = 0.995;
    let start = prob.k_of_s(s0).ok().and_then(|k0| newton(&prob, s0, k0));
    let (s, k, iterations, used_fallback) = match start {
        Some((s, k, it)) => (s, k, it, false),
        None => {
            let (s, k) = fallback(&prob)?;
            (s, k, 0, true)
        }
    };
    let residuals = prob.residuals(s, k)?;
    if residuals[0].abs() > 1e-8 || residuals[1].abs() > 1e-8 {
        return Err(Error::Solver(format!(
            "inversion did not converge: residuals {:e}, {:e} at s = {s}, k_ref = {k}",
            residuals[0], residuals[1]
        )));
    }
    let one_m = 1.0 - 2.0 * wkb::zeta(k)?;
    let eqn3_lhs = 4.0 * wkb::action_factor(k)? / one_m - 0.4 * (1.0 / one_m).ln();
    Ok(Inversion {
        critical_current: bias_current / s,
        s,
        k_ref: k,
        rho_bar: prob.rho_bar,
        lambda: InversionProblem::lambda(k)?,
        residuals,
        newton_iterations: iterations,
        used_fallback,
        eqn3_lhs,
        eqn3_constant: eqn3_lhs - 0.8 * (1.0 / s).ln(),
    })
}

/// Inversion against the experiment: rate from [`EXPERIMENTAL_T_ESC`] with
/// the tabulated `ε_s` and `Ω₀`.
pub fn invert_reference() -> Result<Inversion> {
    let dj = DerivedJunction::reference_tabulated();
    let p = JunctionParams::reference();
    let rate = rate_from_experiment(EXPERIMENTAL_T_ESC, dj.eps_s, dj.omega0, dj.units.k_b)?;
    invert_critical_current(p.bias_current, p.capacitance, p.resistance, rate, dj.units)
}

/// Escape temperature for a rate, with `τ = π/Ω₀`.
pub fn escape_temperature_of_rate(dj: &DerivedJunction, rate: f64) -> Result<f64> {
    escape_temperature(rate, dj.eps_s, PI / dj.omega0, dj.units.k_b)
}
