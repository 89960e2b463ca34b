use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::wkb::{lorentzian, ResonanceData};

/// Environment coupling: dissipation rate `γ` and diffusion coefficient `σ²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentParams {
    pub gamma: f64,
    pub sigma2: f64,
}

impl EnvironmentParams {
    pub fn new(gamma: f64, sigma2: f64) -> Result<Self> {
        if !(gamma >= 0.0 && sigma2 >= 0.0) || !gamma.is_finite() || !sigma2.is_finite() {
            return Err(Error::Domain(format!("environment needs gamma >= 0 and sigma2 >= 0, got {gamma}, {sigma2}")));
        }
        Ok(Self { gamma, sigma2 })
    }

    /// No environment.
    pub fn closed() -> Self {
        Self { gamma: 0.0, sigma2: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coordinates {
    Energy,
    Momentum,
}

/// Uniform axis `start + i·step`, `i < len`. Both field axes share it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl Axis {
    pub fn value(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.value(i)).collect()
    }

    pub fn last(&self) -> f64 {
        self.value(self.len - 1)
    }

    /// Trapezoid weights.
    pub fn weights(&self) -> Vec<f64> {
        let mut w = vec![self.step; self.len];
        if self.len > 1 {
            w[0] *= 0.5;
            w[self.len - 1] *= 0.5;
        }
        w
    }
}

/// Everything the evolutions need besides the coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldMeta {
    pub resonance: ResonanceData,
    pub env: EnvironmentParams,
    pub mass: f64,
    pub u_inf: f64,
}

impl FieldMeta {
    pub fn hbar(&self) -> f64 {
        self.resonance.hbar
    }

    /// `E = p²/2M − U_∞`.
    pub fn energy_of(&self, p: f64) -> f64 {
        p * p / (2.0 * self.mass) - self.u_inf
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralField {
    pub coords: Coordinates,
    pub axis: Axis,
    /// Row-major: `values[i·len + j] = C(x_i, x_j)`.
    pub values: Vec<Complex64>,
    pub t: f64,
    pub meta: FieldMeta,
    /// Per-axis Lorentzian mass captured by the grid before renormalization.
    pub captured_weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// `N = Σ C(E,E) ΔE`.
    pub n: f64,
    /// `⟨E⟩ = Σ E·C(E,E) ΔE`.
    pub mean_e: f64,
}

/// `C_p = √(p₁p₂)·C_E`.
pub fn momentum_coefficient(c_e: Complex64, p1: f64, p2: f64) -> Complex64 {
    c_e * (p1 * p2).sqrt()
}

/// Inverse of [`momentum_coefficient`].
pub fn energy_coefficient(c_p: Complex64, p1: f64, p2: f64) -> Complex64 {
    c_p / (p1 * p2).sqrt()
}

impl SpectralField {
    /// Field with `C(x_i, x_j) = f(x_i, x_j)` at time 0.
    pub fn from_fn<F>(coords: Coordinates, axis: Axis, meta: FieldMeta, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Complex64,
    {
        if axis.len < 3 || !(axis.step > 0.0) {
            return Err(Error::Config(format!("grid needs at least 3 nodes and a positive step (len = {}, step = {})", axis.len, axis.step)));
        }
        if coords == Coordinates::Momentum && !(axis.start > 0.0) {
            return Err(Error::Config(format!("momentum grid must stay at p > 0, starts at {}", axis.start)));
        }
        let xs = axis.values();
        let values = xs.iter().flat_map(|&a| xs.iter().map(move |&b| (a, b))).map(|(a, b)| f(a, b)).collect();
        Ok(Self { coords, axis, values, t: 0.0, meta, captured_weight: 1.0 })
    }

    pub fn len(&self) -> usize {
        self.axis.len
    }

    pub fn is_empty(&self) -> bool {
        self.axis.len == 0
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.axis.len + j]
    }

    /// Iterates `(x₁, x₂, C)` in storage order.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64, Complex64)> + '_ {
        let n = self.axis.len;
        self.values.iter().enumerate().map(move |(k, &c)| (self.axis.value(k / n), self.axis.value(k % n), c))
    }

    /// Measure factor turning `Σ C ΔxΔx` into an energy-space double integral.
    fn measure(&self) -> f64 {
        match self.coords {
            Coordinates::Energy => 1.0,
            Coordinates::Momentum => 1.0 / (self.meta.mass * self.meta.mass),
        }
    }

    /// `max |C(x_i, x_j) − conj C(x_j, x_i)|`.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.axis.len;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// `Σ C·Δx²` with uniform weights; the quantity conserved by the
    /// flux-form Kramers drift.
    pub fn plain_total(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() * self.axis.step * self.axis.step
    }

    pub fn diagnostics(&self) -> Diagnostics {
        let w = self.axis.weights();
        let (mut n, mut mean_e) = (0.0, 0.0);
        for (i, wi) in w.iter().enumerate() {
            let x = self.axis.value(i);
            let c = self.get(i, i).re;
            let (dn, e) = match self.coords {
                Coordinates::Energy => (wi * c, x),
                Coordinates::Momentum => (wi * c / self.meta.mass, self.meta.energy_of(x)),
            };
            n += dn;
            mean_e += e * dn;
        }
        Diagnostics { n, mean_e }
    }

    /// `ρ²(t) = Σ C(t)·conj C(0)` over the grid with the energy measure.
    pub fn persistence(&self, initial: &SpectralField) -> Result<f64> {
        if self.coords != initial.coords || self.axis != initial.axis || self.values.len() != initial.values.len() {
            return Err(Error::Argument("persistence needs fields on the same grid".into()));
        }
        let w = self.axis.weights();
        let n = self.axis.len;
        let mut sum = Complex64::new(0.0, 0.0);
        for (i, wi) in w.iter().enumerate() {
            let (a, b) = (&self.values[i * n..(i + 1) * n], &initial.values[i * n..(i + 1) * n]);
            let row: Complex64 = w.iter().zip(a.iter().zip(b)).map(|(wj, (x, y))| wj * x * y.conj()).sum();
            sum += wi * row;
        }
        sum *= self.measure();
        if sum.im.abs() > 1e-10 * sum.re.abs().max(1.0) {
            return Err(Error::Solver(format!("persistence has imaginary residue {:e}", sum.im)));
        }
        Ok(sum.re)
    }
}

/// Energy grid `E₀ + r·ε`, `|r| ≤ half_width`, with `nodes` (odd) points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub half_width: f64,
    pub nodes: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { half_width: 20.0, nodes: 401 }
    }
}

const MIN_HALF_WIDTH: f64 = 5.0;
/// Smallest grid step relative to `|E₀|` that keeps energy differences accurate.
const MIN_RELATIVE_STEP: f64 = 1e-9;

fn check_spec(spec: &GridSpec) -> Result<()> {
    if !(spec.half_width >= MIN_HALF_WIDTH) {
        return Err(Error::Config(format!(
            "grid half width {} eps is too narrow (minimum {MIN_HALF_WIDTH})",
            spec.half_width
        )));
    }
    if spec.nodes < 3 || spec.nodes.is_multiple_of(2) {
        return Err(Error::Config(format!("grid needs an odd node count >= 3, got {}", spec.nodes)));
    }
    Ok(())
}

/// False vacuum `C(E₁, E₂) = √(w(E₁)·w(E₂))` with the Lorentzian weight
/// renormalized so that `Σ w ΔE = 1` on each axis.
pub fn init_false_vacuum(meta: FieldMeta, spec: GridSpec) -> Result<SpectralField> {
    check_spec(&spec)?;
    let res = meta.resonance;
    let step = 2.0 * spec.half_width * res.eps / (spec.nodes - 1) as f64;
    if !(step >= MIN_RELATIVE_STEP * res.e0.abs()) {
        return Err(Error::Config(format!(
            "energy step {step:e} is not resolvable around E0 = {:e}; the width is too small for an absolute energy grid",
            res.e0
        )));
    }
    let axis = Axis { start: res.e0 - spec.half_width * res.eps, step, len: spec.nodes };
    let q = axis.weights();
    let w: Vec<f64> = axis.values().iter().map(|&e| lorentzian(res.e0, res.eps, e)).collect();
    let mass: f64 = w.iter().zip(&q).map(|(a, b)| a * b).sum();
    let amp: Vec<f64> = w.iter().map(|x| (x / mass).sqrt()).collect();
    let n = spec.nodes;
    let values = (0..n * n).map(|k| Complex64::new(amp[k / n] * amp[k % n], 0.0)).collect();
    Ok(SpectralField { coords: Coordinates::Energy, axis, values, t: 0.0, meta, captured_weight: mass })
}

/// Momentum grid `[p_min, p_max]` with `nodes` points, `p_min > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentumGridSpec {
    pub p_min: f64,
    pub p_max: f64,
    pub nodes: usize,
}

/// False vacuum in momentum coordinates, `C_p = √(p₁p₂)·√(w(E₁)w(E₂))`,
/// normalized so that `N = 1`.
pub fn init_false_vacuum_momentum(meta: FieldMeta, spec: MomentumGridSpec) -> Result<SpectralField> {
    if !(spec.p_min > 0.0 && spec.p_max > spec.p_min) || spec.nodes < 3 {
        return Err(Error::Config(format!(
            "momentum grid needs 0 < p_min < p_max and >= 3 nodes (got {}, {}, {})",
            spec.p_min, spec.p_max, spec.nodes
        )));
    }
    let axis = Axis { start: spec.p_min, step: (spec.p_max - spec.p_min) / (spec.nodes - 1) as f64, len: spec.nodes };
    let res = meta.resonance;
    let u: Vec<f64> = axis
        .values()
        .iter()
        .map(|&p| (p * lorentzian(res.e0, res.eps, meta.energy_of(p))).sqrt())
        .collect();
    let norm: f64 = u.iter().zip(axis.weights()).map(|(a, q)| a * a * q).sum::<f64>() / meta.mass;
    let scale = 1.0 / norm.sqrt();
    let n = spec.nodes;
    let values = (0..n * n).map(|k| Complex64::new(u[k / n] * u[k % n] * scale * scale, 0.0)).collect();
    Ok(SpectralField { coords: Coordinates::Momentum, axis, values, t: 0.0, meta, captured_weight: norm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    pub(crate) fn meta(e0: f64, eps: f64, env: EnvironmentParams) -> FieldMeta {
        FieldMeta { resonance: ResonanceData::from_pole(e0, eps, 1.0, 1.0), env, mass: 1.0, u_inf: 0.0 }
    }

    #[test]
    fn false_vacuum_is_normalized_and_peaked() {
        let f = init_false_vacuum(meta(3.0, 0.1, EnvironmentParams::closed()), GridSpec::default()).unwrap();
        let d = f.diagnostics();
        assert_relative_eq!(d.n, 1.0, max_relative = 1e-13);
        assert_relative_eq!(f.persistence(&f).unwrap(), 1.0, max_relative = 1e-13);
        let c = f.len() / 2;
        assert_relative_eq!(f.axis.value(c), 3.0, max_relative = 1e-15);
        let peak = f.values.iter().map(|v| v.re).fold(f64::MIN, f64::max);
        assert_eq!(f.get(c, c).re, peak);
        assert_eq!(f.hermiticity_residual(), 0.0);
    }

    #[test]
    fn captured_lorentzian_mass() {
        let f = init_false_vacuum(meta(0.0, 1.0, EnvironmentParams::closed()), GridSpec { half_width: 20.0, nodes: 4001 })
            .unwrap();
        assert!((f.captured_weight - 2.0 / PI * 20f64.atan()).abs() < 1e-6);
        assert!((f.captured_weight - 0.9682).abs() < 1e-4);
    }

    #[test]
    fn mean_energy_of_symmetric_window() {
        let f = init_false_vacuum(meta(2.0, 0.05, EnvironmentParams::closed()), GridSpec::default()).unwrap();
        assert_relative_eq!(f.diagnostics().mean_e, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn grid_validation() {
        let m = meta(0.0, 1.0, EnvironmentParams::closed());
        assert!(matches!(init_false_vacuum(m, GridSpec { half_width: 4.0, nodes: 101 }), Err(Error::Config(_))));
        assert!(matches!(init_false_vacuum(m, GridSpec { half_width: 20.0, nodes: 100 }), Err(Error::Config(_))));
        let narrow = meta(0.5, 1e-20, EnvironmentParams::closed());
        assert!(matches!(init_false_vacuum(narrow, GridSpec::default()), Err(Error::Config(_))));
        assert!(EnvironmentParams::new(-1.0, 0.0).is_err());
    }

    #[test]
    fn persistence_rejects_mismatched_grids() {
        let m = meta(0.0, 1.0, EnvironmentParams::closed());
        let a = init_false_vacuum(m, GridSpec { half_width: 20.0, nodes: 101 }).unwrap();
        let b = init_false_vacuum(m, GridSpec { half_width: 20.0, nodes: 103 }).unwrap();
        assert!(matches!(a.persistence(&b), Err(Error::Argument(_))));
    }

    #[test]
    fn coefficient_conversion_round_trip() {
        let c = Complex64::new(0.3, -0.7);
        let p = momentum_coefficient(c, 2.0, 8.0);
        assert_relative_eq!(p.re, 1.2, max_relative = 1e-15);
        let back = energy_coefficient(p, 2.0, 8.0);
        assert!((back - c).norm() < 1e-15);
    }

    #[test]
    fn momentum_false_vacuum_normalization() {
        let mut m = meta(2.0, 0.2, EnvironmentParams::closed());
        m.u_inf = 0.5;
        let f = init_false_vacuum_momentum(m, MomentumGridSpec { p_min: 0.5, p_max: 4.0, nodes: 701 }).unwrap();
        let d = f.diagnostics();
        assert_relative_eq!(d.n, 1.0, max_relative = 1e-12);
        assert_relative_eq!(f.persistence(&f).unwrap(), 1.0, max_relative = 1e-12);
        // the Lorentzian mean is cut asymmetrically by the momentum window
        assert!((d.mean_e - 2.0).abs() < 0.2);
        assert!(init_false_vacuum_momentum(m, MomentumGridSpec { p_min: 0.0, p_max: 4.0, nodes: 11 }).is_err());
    }
}
