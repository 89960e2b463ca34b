//! Stationary-phase treatment of the open-system persistence amplitude.
//!
//! In units of the resonance width (`r = (E − E₀)/ε`) the decay kernel is
//! `Lħ/ε = i(r₁ − r₂) + 2D(g(r₁) − g(r₂))²` with `g(r) = 1/(1 + r²)`. The
//! long-time persistence is dominated by the pair of complex saddles
//! `r₁ = ±ξ − iη`, `r₂ = ±ξ + iη` with the lowest positive `η`, and the
//! open-to-closed rate ratio is
//! `R = η(1 − 16Dξ²η·[(1 + ξ² − η²)² + 4ξ²η²]^(−2))`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::roots::{brent, first_sign_change, RootOptions};

/// `D = γħσ²(E₀ + U_∞)/ε³`.
pub fn decoherence_d(gamma: f64, sigma2: f64, e0: f64, u_inf: f64, eps: f64, hbar: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("resonance width must be positive, got {eps}")));
    }
    if gamma < 0.0 || sigma2 < 0.0 || u_inf < 0.0 || !(e0 + u_inf > 0.0) {
        return Err(Error::Domain(format!(
            "decoherence parameter needs gamma, sigma2, U_inf >= 0 and E0 + U_inf > 0 (gamma = {gamma}, sigma2 = {sigma2}, E0 = {e0}, U_inf = {u_inf})"
        )));
    }
    Ok(gamma * hbar * sigma2 * (e0 + u_inf) / eps.powi(3))
}

/// Junction form `D = 16π³(γ/Ω₀)(1 + U_∞/E₀)e^(3Λ)`, valid for
/// `σ² = E₀ = ħΩ₀/2` and `τ = π/Ω₀`.
pub fn junction_d(gamma: f64, omega0: f64, u_inf_over_e0: f64, lambda: f64) -> f64 {
    16.0 * PI.powi(3) * gamma / omega0 * (1.0 + u_inf_over_e0) * (3.0 * lambda).exp()
}

/// Parameters of the kernel `L[E₁, E₂]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayKernel {
    pub e0: f64,
    pub eps: f64,
    pub d: f64,
}

fn g(r: Complex64) -> Complex64 {
    1.0 / (1.0 + r * r)
}

impl DecayKernel {
    /// `Lħ/ε` at reduced energies `r₁`, `r₂`.
    pub fn reduced(&self, r1: f64, r2: f64) -> Complex64 {
        self.reduced_complex(Complex64::new(r1, 0.0), Complex64::new(r2, 0.0))
    }

    /// Analytic continuation of [`Self::reduced`].
    pub fn reduced_complex(&self, r1: Complex64, r2: Complex64) -> Complex64 {
        let dg = g(r1) - g(r2);
        Complex64::i() * (r1 - r2) + 2.0 * self.d * dg * dg
    }

    /// `Lħ/ε` at energies `E₁`, `E₂`.
    pub fn at_energies(&self, e1: f64, e2: f64) -> Complex64 {
        self.reduced((e1 - self.e0) / self.eps, (e2 - self.e0) / self.eps)
    }
}

/// `ξ²(η)` from `3ξ² = √((2 − η²)² + 3η⁴) − 1 − η²`.
pub fn xi_squared(eta: f64) -> Result<f64> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::Domain(format!("xi^2(eta) is non-negative only for 0 < eta <= 1, got eta = {eta}")));
    }
    let e2 = eta * eta;
    let v = (((2.0 - e2).powi(2) + 3.0 * e2 * e2).sqrt() - 1.0 - e2) / 3.0;
    Ok(v.max(0.0))
}

/// Imaginary part of the stationarity condition divided by `η`.
fn condition_over_eta(d: f64, eta: f64) -> f64 {
    let xi2 = match xi_squared(eta) {
        Ok(v) => v,
        Err(_) => return f64::NAN,
    };
    let e2 = eta * eta;
    let a = 1.0 + xi2 - e2;
    let b = a * a + 4.0 * xi2 * e2;
    32.0 * d * xi2 * (a * a + 4.0 * e2 * (1.0 - e2)) - b.powi(3) / eta
}

fn ratio_at(d: f64, xi2: f64, eta: f64) -> f64 {
    let e2 = eta * eta;
    let a = 1.0 + xi2 - e2;
    let b = a * a + 4.0 * xi2 * e2;
    eta * (1.0 - 16.0 * d * xi2 * eta / (b * b))
}

/// Residuals `(f₁, f₂)` of the complex stationarity conditions
/// `∂(Lħ/ε)/∂r₁ = 0` and its partner at `r₁ = ξ − iη`, `r₂ = ξ + iη`.
pub fn stationarity_residuals(d: f64, xi: f64, eta: f64) -> (Complex64, Complex64) {
    let r1 = Complex64::new(xi, -eta);
    let r2 = Complex64::new(xi, eta);
    let dg = g(r1) - g(r2);
    let i = Complex64::i();
    let f1 = i - 8.0 * d * dg * r1 / ((1.0 + r1 * r1) * (1.0 + r1 * r1));
    let f2 = i - 8.0 * d * dg * r2 / ((1.0 + r2 * r2) * (1.0 + r2 * r2));
    (f1, f2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Exact,
    SmallDAsymptotic,
    LargeDAsymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuppressionResult {
    pub d: f64,
    pub eta: f64,
    /// Positive member of the `±ξ` pair.
    pub xi: f64,
    pub r: f64,
    /// `max(|f₁|, |f₂|)` at the saddle.
    pub residual: f64,
    pub regime: Regime,
    /// The saddle estimate is reliable for `εt/ħ ≫ D^(−1/3)`; this stores `D^(−1/3)`.
    pub reliable_after: f64,
}

/// Asymptotic saddle with its expansion parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticSaddle {
    pub r: f64,
    pub eta: f64,
    pub xi: f64,
    /// Set when the expansion parameter (`δ` or `η`) is at most 0.1.
    pub in_validity: bool,
}

/// `R ≈ 1 − (3/2)(D/2)^(1/3)` with `η = 1 − δ`, `ξ = δ`, `δ = (D/2)^(1/3)`.
pub fn r_small_d(d: f64) -> AsymptoticSaddle {
    let delta = (0.5 * d).cbrt();
    AsymptoticSaddle { r: 1.0 - 1.5 * delta, eta: 1.0 - delta, xi: delta, in_validity: delta <= 0.1 }
}

/// `R ≈ 4/(27D)` with `η = 8/(27D)`, `ξ = 1/√3`.
pub fn r_large_d(d: f64) -> AsymptoticSaddle {
    let eta = 8.0 / (27.0 * d);
    AsymptoticSaddle { r: 4.0 / (27.0 * d), eta, xi: 1.0 / 3f64.sqrt(), in_validity: eta <= 0.1 }
}

/// Scan grid for the lowest root: logarithmic from `η_lo` to ½, then
/// logarithmic in `1 − η` down to `1 − 10⁻¹²`. `η = 1` itself is a root
/// for every `D` and is excluded.
pub fn scan_grid(d: f64, points: usize) -> Vec<f64> {
    let lo = 1e-6f64.min(1e-3 * 8.0 / (27.0 * d));
    let n = points.max(16);
    let mut grid: Vec<f64> = (0..n)
        .map(|i| (lo.ln() + (0.5f64.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect();
    let (a, b) = (0.5f64.ln(), 1e-12f64.ln());
    grid.extend((1..n).map(|i| 1.0 - (a + (b - a) * i as f64 / (n - 1) as f64).exp()));
    grid
}

const SCAN_POINTS: usize = 800;

/// Lowest positive-`η` saddle for `D > 0`.
pub fn solve_saddle(d: f64) -> Result<SuppressionResult> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::Domain(format!("D must be positive and finite, got {d}")));
    }
    let grid = scan_grid(d, SCAN_POINTS);
    let cond = |eta: f64| condition_over_eta(d, eta);
    let (lo, hi) = first_sign_change(cond, &grid).ok_or_else(|| {
        Error::Solver(format!(
            "no sign change of the saddle condition for D = {d} on eta in [{:e}, {}]",
            grid[0],
            grid[grid.len() - 1]
        ))
    })?;
    let eta = if lo == hi { lo } else { brent(cond, lo, hi, RootOptions::default())? };
    let xi2 = xi_squared(eta)?;
    let xi = xi2.sqrt();
    let (f1, f2) = stationarity_residuals(d, xi, eta);
    Ok(SuppressionResult {
        d,
        eta,
        xi,
        r: ratio_at(d, xi2, eta),
        residual: f1.norm().max(f2.norm()),
        regime: Regime::Exact,
        reliable_after: d.powf(-1.0 / 3.0),
    })
}

/// [`solve_saddle`], falling back to the asymptotic expansion that is in its
/// validity range when the scan finds no root.
pub fn solve_saddle_or_asymptotic(d: f64) -> Result<SuppressionResult> {
    match solve_saddle(d) {
        Ok(r) => Ok(r),
        Err(Error::Solver(msg)) => {
            let (asym, regime) = if d < 1.0 {
                (r_small_d(d), Regime::SmallDAsymptotic)
            } else {
                (r_large_d(d), Regime::LargeDAsymptotic)
            };
            if !asym.in_validity {
                return Err(Error::Solver(msg));
            }
            let (f1, f2) = stationarity_residuals(d, asym.xi, asym.eta);
            Ok(SuppressionResult {
                d,
                eta: asym.eta,
                xi: asym.xi,
                r: asym.r,
                residual: f1.norm().max(f2.norm()),
                regime,
                reliable_after: d.powf(-1.0 / 3.0),
            })
        }
        Err(e) => Err(e),
    }
}

/// `n` logarithmically spaced values from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo) || n == 0 || (n == 1 && hi != lo) {
        return Err(Error::Argument(format!("log grid needs 0 < lo <= hi and enough points (lo = {lo}, hi = {hi}, n = {n})")));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let (a, b) = (lo.log10(), hi.log10());
    Ok((0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64)
            }
        })
        .collect())
}

/// Default sweep: 81 points over `[10⁻⁴, 10⁴]`.
pub fn default_d_grid() -> Vec<f64> {
    log_grid(1e-4, 1e4, 81).expect("valid constant grid")
}

/// Solves every grid point (in parallel); rows keep the input order.
pub fn suppression_table(d_grid: &[f64]) -> Result<Vec<SuppressionResult>> {
    d_grid
        .par_iter()
        .map(|&d| solve_saddle(d).map_err(|e| Error::Solver(format!("row D = {d}: {e}"))))
        .collect()
}
