use serde::{Deserialize, Serialize};

use super::field::EnvironmentParams;
use crate::error::{Error, Result};
use crate::saddle::decoherence_d;
use crate::wkb::ResonanceData;

/// Time and length scales of decoherence near the false ground state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecoherenceScales {
    /// `1/γ`.
    pub tau_r: f64,
    /// `ħ/(2σ√M)`.
    pub lambda_b: f64,
    /// `α²ħ√(E₀ + U_∞)/(ε√M)`.
    pub l_d: f64,
    pub alpha: f64,
    /// `τ_R·(λ_B/l_D)²`.
    pub tau_d: f64,
    /// `ħ/ε`.
    pub tau_tunn: f64,
    pub d: f64,
    /// `τ_tunn/(α⁴D)`; equals `4·τ_D` exactly with the prefactors above.
    pub tau_d_tunneling_form: f64,
}

pub fn decoherence_scales(
    res: &ResonanceData,
    env: &EnvironmentParams,
    mass: f64,
    u_inf: f64,
    alpha: f64,
) -> Result<DecoherenceScales> {
    if !(env.gamma > 0.0) {
        return Err(Error::Domain("no relaxation scale: gamma must be > 0".into()));
    }
    if !(alpha > 0.0 && mass > 0.0) {
        return Err(Error::Domain(format!("alpha and mass must be positive, got {alpha}, {mass}")));
    }
    let hbar = res.hbar;
    let tau_r = 1.0 / env.gamma;
    let lambda_b = hbar / (2.0 * env.sigma2.sqrt() * mass.sqrt());
    let l_d = alpha * alpha * hbar * (res.e0 + u_inf).sqrt() / (res.eps * mass.sqrt());
    let tau_tunn = hbar / res.eps;
    let d = decoherence_d(env.gamma, env.sigma2, res.e0, u_inf, res.eps, hbar)?;
    Ok(DecoherenceScales {
        tau_r,
        lambda_b,
        l_d,
        alpha,
        tau_d: tau_r * (lambda_b / l_d).powi(2),
        tau_tunn,
        d,
        tau_d_tunneling_form: tau_tunn / (alpha.powi(4) * d),
    })
}
