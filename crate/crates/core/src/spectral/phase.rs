//! Exact evolution in the phase-shift approximation.
//!
//! `L[E₁, E₂] = i(E₁ − E₂)/ħ + 2γσ²(E₀ + U_∞)(δ′₁ − δ′₂)²` with
//! `δ′ = ∂δ/∂E` taken from the resonance profile.

use num_complex::Complex64;
use rayon::prelude::*;

use super::field::{Coordinates, FieldMeta, SpectralField};
use crate::error::{Error, Result};

/// `L[E₁, E₂]` in inverse time.
pub fn decay_generator(meta: &FieldMeta, e1: f64, e2: f64) -> Complex64 {
    let prof = meta.resonance.phase_profile();
    let dd = prof.derivative(e1) - prof.derivative(e2);
    let re = 2.0 * meta.env.gamma * meta.env.sigma2 * (meta.resonance.e0 + meta.u_inf) * dd * dd;
    Complex64::new(re, (e1 - e2) / meta.hbar())
}

/// Advances an energy-grid field by `t`: `C ← exp(−L·t)·C` nodewise.
pub fn evolve_phase_shift(field: &SpectralField, t: f64) -> Result<SpectralField> {
    if field.coords != Coordinates::Energy {
        return Err(Error::Config("phase-shift evolution runs on energy grids".into()));
    }
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("evolution time must be >= 0, got {t}")));
    }
    let n = field.axis.len;
    let xs = field.axis.values();
    let meta = field.meta;
    let mut out = field.clone();
    out.values.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        for (j, c) in row.iter_mut().enumerate() {
            *c *= (-decay_generator(&meta, xs[i], xs[j]) * t).exp();
        }
    });
    out.t = field.t + t;
    Ok(out)
}

/// `ρ²(T)` for the false vacuum by direct double quadrature in reduced
/// energies `r = (E − E₀)/ε`, `T = εt/ħ`:
/// `ρ² = Σᵢⱼ wᵢwⱼ exp(−T[i(rᵢ − rⱼ) + 2D(gᵢ − gⱼ)²])`, `g = 1/(1 + r²)`,
/// on `|r| ≤ half_width` with trapezoid weights and the Lorentzian `w`
/// renormalized to unit mass.
pub fn persistence_quadrature(d: f64, big_t: f64, half_width: f64, step: f64) -> Result<f64> {
    if !(half_width > 0.0 && step > 0.0 && step < half_width) {
        return Err(Error::Argument(format!("bad quadrature grid: half width {half_width}, step {step}")));
    }
    let m = (2.0 * half_width / step).round() as usize;
    let h = 2.0 * half_width / m as f64;
    let r: Vec<f64> = (0..=m).map(|i| -half_width + i as f64 * h).collect();
    let mut a: Vec<f64> = r
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let end = if i == 0 || i == m { 0.5 } else { 1.0 };
            end * h / (std::f64::consts::PI * (1.0 + x * x))
        })
        .collect();
    let total: f64 = a.iter().sum();
    a.iter_mut().for_each(|x| *x /= total);
    let g: Vec<f64> = r.iter().map(|x| 1.0 / (1.0 + x * x)).collect();
    // factor e^{-iT r_i} out of each row
    let b: Vec<Complex64> = a.iter().zip(&r).map(|(ai, ri)| Complex64::from_polar(*ai, big_t * ri)).collect();
    let rows: Vec<Complex64> = (0..=m)
        .into_par_iter()
        .map(|i| {
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..=m {
                let dg = g[i] - g[j];
                s += b[j] * (-2.0 * d * big_t * dg * dg).exp();
            }
            s * Complex64::from_polar(a[i], -big_t * r[i])
        })
        .collect();
    let sum: Complex64 = rows.iter().sum();
    if sum.im.abs() > 1e-10 * sum.re.abs().max(1.0) {
        return Err(Error::Solver(format!("persistence quadrature has imaginary residue {:e}", sum.im)));
    }
    Ok(sum.re)
}

/// Least-squares slope of `−ln ρ²` against `x`.
pub fn fit_log_slope(x: &[f64], rho2: &[f64]) -> Result<f64> {
    if x.len() != rho2.len() || x.len() < 2 {
        return Err(Error::Argument("log-slope fit needs two or more matching samples".into()));
    }
    if rho2.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::Domain("log-slope fit needs positive persistence values".into()));
    }
    let y: Vec<f64> = rho2.iter().map(|v| -v.ln()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::saddle::decoherence_d;
    use crate::spectral::field::{init_false_vacuum, EnvironmentParams, GridSpec};
    use crate::wkb::ResonanceData;
    use approx::assert_relative_eq;

    fn meta(env: EnvironmentParams) -> FieldMeta {
        FieldMeta { resonance: ResonanceData::from_pole(1.0, 0.01, 1.0, 1.0), env, mass: 1.0, u_inf: 0.5 }
    }

    #[test]
    fn closed_evolution_is_pure_phase() {
        let f0 = init_false_vacuum(meta(EnvironmentParams::closed()), GridSpec { half_width: 20.0, nodes: 81 }).unwrap();
        let f = evolve_phase_shift(&f0, 250.0).unwrap();
        for (a, b) in f.values.iter().zip(&f0.values) {
            assert!((a.norm() - b.norm()).abs() <= 1e-13 * b.norm());
        }
        assert_eq!(f.t, 250.0);
    }

    #[test]
    fn diagonal_is_frozen() {
        let f0 = init_false_vacuum(meta(EnvironmentParams::new(3.0, 2.0).unwrap()), GridSpec { half_width: 20.0, nodes: 81 })
            .unwrap();
        let f = evolve_phase_shift(&f0, 40.0).unwrap();
        for i in 0..f.len() {
            assert_eq!(f.get(i, i), f0.get(i, i));
        }
        assert_eq!(f.diagnostics(), f0.diagnostics());
    }

    #[test]
    fn off_diagonal_decay_rate_matches_generator() {
        let m = meta(EnvironmentParams::new(3e-6, 2.0).unwrap());
        let f0 = init_false_vacuum(m, GridSpec { half_width: 20.0, nodes: 81 }).unwrap();
        let (t1, t2) = (10.0, 30.0);
        let a = evolve_phase_shift(&f0, t1).unwrap();
        let b = evolve_phase_shift(&f0, t2).unwrap();
        let (i, j) = (38, 45);
        let slope = -(b.get(i, j).norm().ln() - a.get(i, j).norm().ln()) / (t2 - t1);
        let prof = m.resonance.phase_profile();
        let (e1, e2) = (f0.axis.value(i), f0.axis.value(j));
        let dd = prof.derivative(e1) - prof.derivative(e2);
        let expected = 2.0 * 3e-6 * 2.0 * 1.5 * dd * dd;
        assert_relative_eq!(slope, expected, max_relative = 1e-10);
    }

    #[test]
    fn generator_in_reduced_units() {
        let m = meta(EnvironmentParams::new(2e-7, 0.4).unwrap());
        let res = m.resonance;
        let d = decoherence_d(m.env.gamma, m.env.sigma2, res.e0, m.u_inf, res.eps, res.hbar).unwrap();
        let kern = crate::saddle::DecayKernel { e0: res.e0, eps: res.eps, d };
        for (e1, e2) in [(1.0, 1.02), (0.97, 1.001), (1.1, 0.9)] {
            let l = decay_generator(&m, e1, e2) * res.hbar / res.eps;
            assert!((l - kern.at_energies(e1, e2)).norm() < 1e-10 * l.norm());
        }
    }

    #[test]
    fn semigroup_and_hermiticity() {
        let f0 = init_false_vacuum(meta(EnvironmentParams::new(1e-6, 1.0).unwrap()), GridSpec { half_width: 20.0, nodes: 121 })
            .unwrap();
        let ab = evolve_phase_shift(&evolve_phase_shift(&f0, 70.0).unwrap(), 130.0).unwrap();
        let direct = evolve_phase_shift(&f0, 200.0).unwrap();
        for (x, y) in ab.values.iter().zip(&direct.values) {
            assert!((x - y).norm() < 1e-13);
        }
        assert!(direct.hermiticity_residual() < 1e-12);
    }

    #[test]
    fn field_persistence_equals_direct_quadrature() {
        let res = ResonanceData::from_pole(1.0, 0.01, 1.0, 1.0);
        // choose γ so that D = 1
        let (sigma2, u_inf) = (1.0, 0.5);
        let gamma = res.eps.powi(3) / (res.hbar * sigma2 * (res.e0 + u_inf));
        let m = FieldMeta { resonance: res, env: EnvironmentParams::new(gamma, sigma2).unwrap(), mass: 1.0, u_inf };
        let spec = GridSpec { half_width: 20.0, nodes: 401 };
        let f0 = init_false_vacuum(m, spec).unwrap();
        for big_t in [0.5, 2.0, 4.0] {
            let ft = evolve_phase_shift(&f0, big_t * res.hbar / res.eps).unwrap();
            let a = ft.persistence(&f0).unwrap();
            let b = persistence_quadrature(1.0, big_t, 20.0, 0.1).unwrap();
            assert!((a - b).abs() < 1e-8, "T = {big_t}: {a} vs {b}");
        }
    }

    #[test]
    fn quadrature_at_zero_time() {
        assert_relative_eq!(persistence_quadrature(0.7, 0.0, 20.0, 0.1).unwrap(), 1.0, max_relative = 1e-13);
    }

    #[test]
    fn log_slope_of_exponential() {
        let x: Vec<f64> = (0..9).map(|i| 2.0 + 0.5 * i as f64).collect();
        let y: Vec<f64> = x.iter().map(|t| 0.8 * (-1.7 * t).exp()).collect();
        assert_relative_eq!(fit_log_slope(&x, &y).unwrap(), 1.7, max_relative = 1e-12);
        assert!(fit_log_slope(&x[..1], &y[..1]).is_err());
    }
}
