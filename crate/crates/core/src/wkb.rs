//! WKB data of the cubic well.
//!
//! Inside the well (`x_L < x < x_R`) the action `S(x_R, x_L)` at energy
//! `E = 2ε_s·ζ(k)` has the closed form `(ε_s/Ω₀)·F(k)`, and the small
//! oscillation frequency at that energy is `Ω₀·f(k)`, with `ζ`, `f`, `F`
//! built from complete elliptic integrals of modulus `k`. The action under
//! the barrier at `E` equals the action inside the well at `ε_s − E`, which
//! in the parametrization is the exchange `k → k_ref` with
//! `ζ(k_ref) = ½ − ζ(k)`. Everything needed for the resonance (false ground
//! energy, half period, penetrability and width) follows from these.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::elliptic::complete_ke;
use crate::error::{Error, Result};
use crate::potential::CubicPotential;
use crate::quadrature::{integrate, integrate_sqrt_endpoints, Branch, Tolerance};
use crate::roots::{brent, RootOptions};

/// `√(2M|U(x) − E|)`.
pub fn momentum(pot: &CubicPotential, energy: f64, x: f64) -> f64 {
    (2.0 * pot.mass * (pot.evaluate(x) - energy).abs()).sqrt()
}

/// Asymptotic momentum on the plateau, `√(2M(E + U_∞))`.
pub fn momentum_at_infinity(pot: &CubicPotential, energy: f64) -> f64 {
    (2.0 * pot.mass * (energy + pot.u_inf)).max(0.0).sqrt()
}

fn branch_flags(pot: &CubicPotential, energy: f64, lo: f64, hi: f64) -> Branch {
    let scale = pot.x_s();
    let near = |x: f64, t: f64| (x - t).abs() <= 1e-12 * scale;
    let (mut at_lo, mut at_hi) = (false, false);
    if let Ok(tp) = pot.turning_points(energy) {
        for t in [tp.left, tp.right, tp.outer] {
            at_lo |= near(lo, t);
            at_hi |= near(hi, t);
        }
    }
    match (at_lo, at_hi) {
        (true, true) => Branch::Both,
        (true, false) => Branch::Lower,
        (false, true) => Branch::Upper,
        (false, false) => Branch::None,
    }
}

/// `S(x, y) = ∫_y^x p(x') dx'` at energy `E`. Ends that coincide with a
/// turning point are integrated through the `x = x_t ± u²` substitution.
pub fn action(pot: &CubicPotential, energy: f64, y: f64, x: f64, tol: Tolerance) -> Result<f64> {
    if y > x {
        return Err(Error::Argument(format!("action needs y <= x, got y = {y}, x = {x}")));
    }
    let branch = branch_flags(pot, energy, y, x);
    integrate_sqrt_endpoints(|s| momentum(pot, energy, s), y, x, branch, tol)
}

/// Action inside the well, `S(x_R, x_L)`.
pub fn well_action(pot: &CubicPotential, energy: f64, tol: Tolerance) -> Result<f64> {
    let tp = pot.turning_points(energy)?;
    integrate_sqrt_endpoints(|s| momentum(pot, energy, s), tp.left, tp.right, Branch::Both, tol)
}

/// Action under the barrier, `S(x_out, x_R)`.
pub fn barrier_action(pot: &CubicPotential, energy: f64, tol: Tolerance) -> Result<f64> {
    let tp = pot.turning_points(energy)?;
    integrate_sqrt_endpoints(|s| momentum(pot, energy, s), tp.right, tp.outer, Branch::Both, tol)
}

/// Classical half period `∫ M/p dx` across the well, i.e. `∂S(x_R, x_L)/∂E`.
///
/// Uses `U − E = −(λ/6)(x − x_L)(x − x_R)(x − x_out)` so the `u²` factor of
/// the endpoint substitution cancels analytically.
pub fn half_period(pot: &CubicPotential, energy: f64, tol: Tolerance) -> Result<f64> {
    let tp = pot.turning_points(energy)?;
    let (a, b, c) = (tp.left, tp.right, tp.outer);
    let coef = 2.0 * pot.mass * pot.lambda / 6.0;
    let mid = 0.5 * (a + b);
    let umax = (mid - a).sqrt();
    let lower = integrate(
        |u| {
            let x = a + u * u;
            2.0 * pot.mass / (coef * (b - x) * (c - x)).sqrt()
        },
        0.0,
        umax,
        tol,
    )?;
    let upper = integrate(
        |u| {
            let x = b - u * u;
            2.0 * pot.mass / (coef * (x - a) * (c - x)).sqrt()
        },
        0.0,
        (b - mid).sqrt(),
        tol,
    )?;
    Ok(lower.value + upper.value)
}

fn q_of(k: f64) -> f64 {
    0.25 * (1.0 + 14.0 * k * k + k.powi(4))
}

fn check_k(k: f64, upper_open: bool) -> Result<()> {
    let ok = if upper_open { (0.0..1.0).contains(&k) } else { (0.0..=1.0).contains(&k) };
    if ok {
        Ok(())
    } else {
        Err(Error::Argument(format!(
            "elliptic parameter k = {k} outside [0, 1{}",
            if upper_open { ")" } else { "]" }
        )))
    }
}

/// Energy fraction `ζ(k)`: `E = 2ε_s·ζ(k)`.
pub fn zeta(k: f64) -> Result<f64> {
    check_k(k, false)?;
    let q = q_of(k);
    let k2 = 1.0 + k * k;
    Ok((2.0 + 3.0 * k2 / q.sqrt() - k2.powi(3) / q.powf(1.5)) / 8.0)
}

/// Frequency ratio `f(k) = Ω/Ω₀`; vanishes at the separatrix `k = 1`.
pub fn freq_factor(k: f64) -> Result<f64> {
    check_k(k, false)?;
    if k == 1.0 {
        return Ok(0.0);
    }
    let (kk, _) = complete_ke(k)?;
    Ok(1.0 / (2.0 / PI * (4.0 * q_of(k)).powf(0.25) * kk))
}

/// Action factor `F(k)`: `S(x_R, x_L) = (ε_s/Ω₀)·F(k)`.
pub fn action_factor(k: f64) -> Result<f64> {
    check_k(k, true)?;
    let k2 = k * k;
    let q = q_of(k);
    let a = 16.0 / 15.0 * (2.0 - k2).powi(2) - 0.2 * (1.0 - k2) * (21.0 - 5.0 * k2);
    let b = 8.0 / 15.0 * (2.0 - k2) - (1.0 - k2);
    let (kk, ee) = complete_ke(k)?;
    let one_minus = (1.0 - k) * (1.0 + k);
    Ok(27.0 / 8.0 * (4.0 / q).powf(1.25) * (a * ee - one_minus * b * kk))
}

/// Limit of `F(k)` at the separatrix; equals the bounce exponent factor 18/5.
pub const ACTION_FACTOR_AT_SEPARATRIX: f64 = 3.6;

/// A point of the elliptic parametrization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticPoint {
    pub k: f64,
    pub zeta: f64,
    pub f: f64,
    pub action_factor: f64,
}

impl EllipticPoint {
    pub fn at(k: f64) -> Result<Self> {
        Ok(Self { k, zeta: zeta(k)?, f: freq_factor(k)?, action_factor: action_factor(k)? })
    }
}

const K_TOP: f64 = 1.0 - f64::EPSILON;

/// Bohr–Sommerfeld level `n`: `S(x_R, x_L) = (n + ½)πħ`, i.e.
/// `F(k) = (1 + 2n)·π·ε₀/ε_s`.
pub fn ground_state(pot: &CubicPotential, n: u32) -> Result<EllipticPoint> {
    let target = (1.0 + 2.0 * n as f64) * PI * pot.eps0() / pot.eps_s();
    let top = action_factor(K_TOP)?;
    if !(target < top) {
        return Err(Error::LevelNotTrapped { n, target, max: ACTION_FACTOR_AT_SEPARATRIX });
    }
    let k = brent(|k| action_factor(k).unwrap_or(f64::NAN) - target, 0.0, K_TOP, RootOptions::default())?;
    EllipticPoint::at(k)
}

/// Solves `ζ(k_ref) = ½ − ζ(k)`.
pub fn reflect(k: f64) -> Result<f64> {
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::Argument(format!("reflect needs 0 < k < 1, got {k}")));
    }
    let target = 0.5 - zeta(k)?;
    reflect_energy_fraction(target)
}

/// Solves `ζ(k) = target` for `target ∈ [0, ½]`.
pub fn invert_zeta(target: f64) -> Result<f64> {
    reflect_energy_fraction(target)
}

fn reflect_energy_fraction(target: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&target) {
        return Err(Error::Domain(format!("energy fraction {target} outside [0, 1/2]")));
    }
    if target == 0.0 {
        return Ok(0.0);
    }
    if target == 0.5 {
        return Ok(1.0);
    }
    brent(|k| zeta(k).unwrap_or(f64::NAN) - target, 0.0, 1.0, RootOptions::default())
}

/// Which ground energy sets the penetrability denominator and the reflected state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnergyConvention {
    /// `E₀ = 2ε_s·ζ(k_GS)` from the Bohr–Sommerfeld level.
    #[default]
    Anharmonic,
    /// `E₀ = ε₀ = ħΩ₀/2`, reflected state from `ζ(k_ref) = ½ − ε₀/(2ε_s)`.
    Harmonic,
}

/// Which half period enters the width `ε = (ħ/4τ)e^(−Λ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TauConvention {
    /// `τ = π/(Ω₀·f(k_GS))`, the half period at the false ground energy.
    #[default]
    Anharmonic,
    /// `τ = π/Ω₀`.
    Harmonic,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ResonanceOptions {
    pub energy: EnergyConvention,
    pub tau: TauConvention,
}

/// Resonance of the false ground state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonanceData {
    pub e0: f64,
    pub eps: f64,
    pub tau: f64,
    /// Penetrability `Λ = (2/ħ)S(x_out, x_R)` at `E₀`.
    pub lambda: f64,
    pub k_gs: f64,
    pub k_ref: f64,
    pub hbar: f64,
    pub options: ResonanceOptions,
}

impl ResonanceData {
    /// Resonance with prescribed pole `E₀ ± iε` and half period `τ`; `Λ` is
    /// set so that `ε = (ħ/4τ)e^(−Λ)` holds. The elliptic parameters are left at 0.
    pub fn from_pole(e0: f64, eps: f64, tau: f64, hbar: f64) -> Self {
        let lambda = (hbar / (4.0 * tau * eps)).ln();
        Self { e0, eps, tau, lambda, k_gs: 0.0, k_ref: 0.0, hbar, options: ResonanceOptions::default() }
    }

    pub fn e_plus(&self) -> Complex64 {
        Complex64::new(self.e0, self.eps)
    }

    pub fn e_minus(&self) -> Complex64 {
        Complex64::new(self.e0, -self.eps)
    }

    pub fn phase_profile(&self) -> PhaseShiftProfile {
        PhaseShiftProfile { e0: self.e0, eps: self.eps }
    }

    /// Rebuilds the width from `Λ` and `τ`.
    pub fn from_parts(e0: f64, lambda: f64, tau: f64, hbar: f64, k_gs: f64, k_ref: f64, options: ResonanceOptions) -> Self {
        let eps = hbar / (4.0 * tau) * (-lambda).exp();
        Self { e0, eps, tau, lambda, k_gs, k_ref, hbar, options }
    }
}

pub fn resonance(pot: &CubicPotential) -> Result<ResonanceData> {
    resonance_with(pot, ResonanceOptions::default())
}

pub fn resonance_with(pot: &CubicPotential, options: ResonanceOptions) -> Result<ResonanceData> {
    let gs = ground_state(pot, 0)?;
    let eps_s = pot.eps_s();
    let (e0, k_ref) = match options.energy {
        EnergyConvention::Anharmonic => (2.0 * eps_s * gs.zeta, reflect(gs.k)?),
        EnergyConvention::Harmonic => {
            let e0 = pot.eps0();
            (e0, invert_zeta(0.5 - e0 / (2.0 * eps_s))?)
        }
    };
    let lambda = eps_s / e0 * action_factor(k_ref)?;
    let tau = match options.tau {
        TauConvention::Anharmonic => PI / (pot.omega0 * gs.f),
        TauConvention::Harmonic => PI / pot.omega0,
    };
    Ok(ResonanceData::from_parts(e0, lambda, tau, pot.units.hbar, gs.k, k_ref, options))
}

/// Near-resonance phase shift data `(E₀, ε)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseShiftProfile {
    pub e0: f64,
    pub eps: f64,
}

impl PhaseShiftProfile {
    /// `∂δ/∂E = −(i/2)[1/(E − E₋) − 1/(E − E₊)] = −ε/((E − E₀)² + ε²)`.
    pub fn derivative(&self, energy: f64) -> f64 {
        let d = energy - self.e0;
        -self.eps / (d * d + self.eps * self.eps)
    }

    /// `δ(E) − f₀ = arg √((E − E₋)/(E − E₊))`, continuous on the real line.
    pub fn phase(&self, energy: f64) -> f64 {
        let e = Complex64::new(energy, 0.0);
        let ratio = (e - Complex64::new(self.e0, -self.eps)) / (e - Complex64::new(self.e0, self.eps));
        // ratio = e^{2iφ} with φ = atan(ε/(E−E₀)) ∈ (0, π); use the continuous branch
        let half = 0.5 * ratio.arg();
        if energy > self.e0 {
            half
        } else {
            half + if half <= 0.0 { PI } else { 0.0 }
        }
    }
}

/// Normalized Lorentzian spectral weight of the false vacuum.
pub fn norm_profile(res: &ResonanceData, energy: f64) -> f64 {
    lorentzian(res.e0, res.eps, energy)
}

pub(crate) fn lorentzian(e0: f64, eps: f64, energy: f64) -> f64 {
    let d = energy - e0;
    eps / (PI * (d * d + eps * eps))
}
