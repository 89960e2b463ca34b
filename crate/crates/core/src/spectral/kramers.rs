//! Finite-difference integrator for the local Kramers equation in momentum
//! coordinates:
//!
//! `∂C/∂t = −(i/2Mħ)(p₁² − p₂²)C + (γ/2)(∂₁ + ∂₂)[(p₁ + p₂)C]
//!          + γMσ²[(∂₁ + ∂₂)² − (δ′₁ − δ′₂)²]C`, with `δ′ = ∂δ/∂p`.
//!
//! `(∂₁ + ∂₂)` differentiates along the diagonals `j − i = const`, so each
//! diagonal is an independent one-dimensional drift–diffusion problem in
//! flux form. Each step is a Strang splitting: exact local factor for `dt/2`,
//! a Heun (RK2) step of the line operator, exact local factor for `dt/2`.
//! Drift faces use second-order upwind values (first order next to the
//! edges); edges let material out and nothing in.

use num_complex::Complex64;
use rayon::prelude::*;

use super::field::{Coordinates, SpectralField};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KramersOptions {
    /// Include the `−γMσ²(δ′₁ − δ′₂)²` decoherence term.
    pub decoherence_terms: bool,
    /// Include the `−(i/2Mħ)(p₁² − p₂²)` rotation.
    pub phase_term: bool,
    /// Courant factor `c` of the step bound, at most 0.25.
    pub courant: f64,
}

impl Default for KramersOptions {
    fn default() -> Self {
        Self { decoherence_terms: true, phase_term: true, courant: 0.25 }
    }
}

#[derive(Debug, Clone)]
pub struct KramersRun {
    pub field: SpectralField,
    /// `∫ (outgoing edge flux) dt`, in the units of [`SpectralField::plain_total`].
    pub boundary_outflow: Complex64,
    pub steps: usize,
}

/// `c·min(Δp²/(γMσ²), Δp/(γ·p_max), ħM/p_max²)`; terms with a zero
/// coefficient are skipped.
pub fn max_stable_dt(field: &SpectralField, courant: f64) -> f64 {
    let meta = &field.meta;
    let dp = field.axis.step;
    let p_max = field.axis.start.abs().max(field.axis.last().abs());
    let (g, m) = (meta.env.gamma, meta.mass);
    let mut bound = f64::INFINITY;
    if g * meta.env.sigma2 > 0.0 {
        bound = bound.min(dp * dp / (g * m * meta.env.sigma2));
    }
    if g > 0.0 {
        bound = bound.min(dp / (g * p_max));
    }
    bound = bound.min(meta.hbar() * m / (p_max * p_max));
    courant * bound
}

struct LineOp {
    /// `γ/2`.
    half_gamma: f64,
    /// `γMσ²`.
    kappa: f64,
    dp: f64,
}

impl LineOp {
    /// Face flux `F` of `∂C/∂t = ∂_s F` at the face between nodes `s` and
    /// `s + 1`, with `P` the momentum sum at that face.
    fn interior_flux(&self, c: &[Complex64], s: usize, p_face: f64) -> Complex64 {
        let a = self.half_gamma * p_face;
        let n = c.len();
        // transport velocity is −a
        let upwind = if a < 0.0 {
            if s >= 1 {
                c[s] + 0.5 * (c[s] - c[s - 1])
            } else {
                c[s]
            }
        } else if s + 2 < n {
            c[s + 1] + 0.5 * (c[s + 1] - c[s + 2])
        } else {
            c[s + 1]
        };
        a * upwind + self.kappa * (c[s + 1] - c[s]) / self.dp
    }

    /// Time derivative on a line plus the net outflow rate (per unit `Δp²`).
    fn rhs(&self, c: &[Complex64], p_first_face: f64, out: &mut [Complex64]) -> Complex64 {
        let n = c.len();
        let face_p = |f: usize| p_first_face + 2.0 * self.dp * f as f64;
        // left edge face index 0, interior faces 1..n-1, right edge face n
        let a_left = self.half_gamma * face_p(0);
        let left = if a_left > 0.0 { a_left * c[0] } else { Complex64::new(0.0, 0.0) };
        let a_right = self.half_gamma * face_p(n);
        let right = if a_right < 0.0 { a_right * c[n - 1] } else { Complex64::new(0.0, 0.0) };
        let mut prev = left;
        for (s, o) in out.iter_mut().enumerate().take(n) {
            let next = if s + 1 < n { self.interior_flux(c, s, face_p(s + 1)) } else { right };
            *o = (next - prev) / self.dp;
            prev = next;
        }
        // d/dt Σ C Δp² = Δp (F_right − F_left)
        -(right - left) * self.dp
    }

    /// Heun step; returns the outflow over the step.
    fn step(&self, c: &mut [Complex64], p_first_face: f64, dt: f64, k1: &mut [Complex64], k2: &mut [Complex64], tmp: &mut [Complex64]) -> Complex64 {
        let o1 = self.rhs(c, p_first_face, k1);
        for ((t, &ci), &ki) in tmp.iter_mut().zip(c.iter()).zip(k1.iter()) {
            *t = ci + dt * ki;
        }
        let o2 = self.rhs(tmp, p_first_face, k2);
        for ((ci, &a), &b) in c.iter_mut().zip(k1.iter()).zip(k2.iter()) {
            *ci += 0.5 * dt * (a + b);
        }
        0.5 * dt * (o1 + o2)
    }
}

/// Diagonal `k = j − i` as (first node `i₀`, length).
fn line_bounds(n: usize, k: isize) -> (usize, usize) {
    let i0 = if k < 0 { (-k) as usize } else { 0 };
    (i0, n - k.unsigned_abs())
}

/// Advances a momentum-coordinate field by `steps` steps of size `dt`.
pub fn evolve_kramers_local(field: &SpectralField, dt: f64, steps: usize, opts: KramersOptions) -> Result<KramersRun> {
    if field.coords != Coordinates::Momentum {
        return Err(Error::Config("the Kramers integrator runs on momentum grids".into()));
    }
    if !(opts.courant > 0.0 && opts.courant <= 0.25) {
        return Err(Error::Config(format!("Courant factor must lie in (0, 0.25], got {}", opts.courant)));
    }
    let bound = max_stable_dt(field, opts.courant);
    if !(dt > 0.0) || dt > bound * (1.0 + 1e-12) {
        return Err(Error::Config(format!("time step {dt:e} violates the stability bound {bound:e}")));
    }
    let n = field.axis.len;
    let meta = field.meta;
    let ps = field.axis.values();
    let dp = field.axis.step;
    let hbar = meta.hbar();
    let prof = meta.resonance.phase_profile();
    let dprime: Vec<f64> = ps.iter().map(|&p| p / meta.mass * prof.derivative(meta.energy_of(p))).collect();
    let kappa = meta.env.gamma * meta.mass * meta.env.sigma2;
    let half = 0.5 * dt;
    let local: Vec<Complex64> = (0..n * n)
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            let mut z = Complex64::new(0.0, 0.0);
            if opts.phase_term {
                z.im -= (ps[i] * ps[i] - ps[j] * ps[j]) / (2.0 * meta.mass * hbar);
            }
            if opts.decoherence_terms {
                let dd = dprime[i] - dprime[j];
                z.re -= kappa * dd * dd;
            }
            (z * half).exp()
        })
        .collect();
    let op = LineOp { half_gamma: 0.5 * meta.env.gamma, kappa, dp };
    let mut values = field.values.clone();
    let mut outflow = Complex64::new(0.0, 0.0);
    let lines: Vec<isize> = (-(n as isize - 1)..n as isize).collect();

    for step in 0..steps {
        values.par_iter_mut().zip(local.par_iter()).for_each(|(c, f)| *c *= f);
        let results: Vec<(isize, Vec<Complex64>, Complex64)> = lines
            .par_iter()
            .map(|&k| {
                let (i0, len) = line_bounds(n, k);
                let j0 = (i0 as isize + k) as usize;
                let mut c: Vec<Complex64> = (0..len).map(|s| values[(i0 + s) * n + j0 + s]).collect();
                // P at the face left of node s is p_{i0+s} + p_{j0+s} − Δp
                let p_first_face = ps[i0] + ps[j0] - dp;
                let mut k1 = vec![Complex64::new(0.0, 0.0); len];
                let mut k2 = k1.clone();
                let mut tmp = k1.clone();
                let o = op.step(&mut c, p_first_face, dt, &mut k1, &mut k2, &mut tmp);
                (k, c, o)
            })
            .collect();
        for (k, c, o) in results {
            let (i0, _) = line_bounds(n, k);
            let j0 = (i0 as isize + k) as usize;
            for (s, v) in c.into_iter().enumerate() {
                values[(i0 + s) * n + j0 + s] = v;
            }
            outflow += o;
        }
        values.par_iter_mut().zip(local.par_iter()).for_each(|(c, f)| *c *= f);
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Divergence { step });
        }
    }
    let mut out = field.clone();
    out.values = values;
    out.t = field.t + dt * steps as f64;
    Ok(KramersRun { field: out, boundary_outflow: outflow, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::field::{Axis, EnvironmentParams, FieldMeta};
    use crate::wkb::ResonanceData;

    fn meta(gamma: f64, sigma2: f64) -> FieldMeta {
        FieldMeta {
            resonance: ResonanceData::from_pole(2.0, 0.3, 1.0, 1.0),
            env: EnvironmentParams::new(gamma, sigma2).unwrap(),
            mass: 1.0,
            u_inf: 0.0,
        }
    }

    fn gaussian_field(meta: FieldMeta, n: usize, p_min: f64, p_max: f64, center: f64, width: f64) -> SpectralField {
        let axis = Axis { start: p_min, step: (p_max - p_min) / (n - 1) as f64, len: n };
        let u = |p: f64| (-(p - center).powi(2) / (2.0 * width * width)).exp();
        SpectralField::from_fn(Coordinates::Momentum, axis, meta, |a, b| {
            Complex64::from_polar(u(a) * u(b), 0.3 * (a - b))
        })
        .unwrap()
    }

    #[test]
    fn rejects_large_steps_and_energy_fields() {
        let f = gaussian_field(meta(1.0, 0.1), 41, 0.5, 4.5, 2.5, 0.4);
        let bound = max_stable_dt(&f, 0.25);
        assert!(matches!(evolve_kramers_local(&f, 2.0 * bound, 1, KramersOptions::default()), Err(Error::Config(_))));
        let bad = KramersOptions { courant: 0.5, ..Default::default() };
        assert!(matches!(evolve_kramers_local(&f, bound, 1, bad), Err(Error::Config(_))));
        let mut e = f.clone();
        e.coords = Coordinates::Energy;
        assert!(evolve_kramers_local(&e, bound, 1, KramersOptions::default()).is_err());
    }

    #[test]
    fn closed_limit_is_a_pure_rotation() {
        let f = gaussian_field(meta(0.0, 0.0), 41, 0.5, 4.5, 2.5, 0.4);
        let dt = max_stable_dt(&f, 0.25);
        let run = evolve_kramers_local(&f, dt, 1000, KramersOptions::default()).unwrap();
        for (a, b) in run.field.values.iter().zip(&f.values) {
            assert!((a.norm() - b.norm()).abs() < 1e-12);
        }
        let i = 17;
        let j = 25;
        let expected = f.get(i, j)
            * Complex64::new(0.0, -(f.axis.value(i).powi(2) - f.axis.value(j).powi(2)) / 2.0 * dt * 1000.0).exp();
        assert!((run.field.get(i, j) - expected).norm() < 1e-10);
    }

    #[test]
    fn drift_conserves_total_up_to_edge_flux() {
        let f = gaussian_field(meta(1.0, 0.0), 61, 0.2, 3.2, 1.0, 0.3);
        let opts = KramersOptions { decoherence_terms: false, phase_term: false, courant: 0.25 };
        let dt = max_stable_dt(&f, 0.25);
        let run = evolve_kramers_local(&f, dt, 400, opts).unwrap();
        // material reaches the low-momentum edge
        assert!(run.boundary_outflow.re > 1e-3);
        let balance = run.field.plain_total() + run.boundary_outflow - f.plain_total();
        assert!(balance.norm() < 1e-12);
    }

    #[test]
    fn decoherence_leaves_the_diagonal_alone() {
        let f = gaussian_field(meta(0.5, 0.2), 41, 0.5, 4.5, 2.0, 0.5);
        let dt = max_stable_dt(&f, 0.25);
        let on = evolve_kramers_local(&f, dt, 50, KramersOptions::default()).unwrap();
        let off = evolve_kramers_local(&f, dt, 50, KramersOptions { decoherence_terms: false, ..Default::default() }).unwrap();
        for i in 0..f.len() {
            assert_eq!(on.field.get(i, i), off.field.get(i, i));
        }
        assert!(on.field.get(10, 30).norm() < off.field.get(10, 30).norm());
    }

    #[test]
    fn hermiticity_is_preserved() {
        let f = gaussian_field(meta(0.5, 0.2), 41, 0.5, 4.5, 2.0, 0.5);
        assert!(f.hermiticity_residual() < 1e-15);
        let dt = max_stable_dt(&f, 0.25);
        let run = evolve_kramers_local(&f, dt, 100, KramersOptions::default()).unwrap();
        assert!(run.field.hermiticity_residual() < 1e-12);
    }

    #[test]
    fn worker_count_does_not_change_bits() {
        let f = gaussian_field(meta(0.5, 0.2), 31, 0.5, 4.5, 2.0, 0.5);
        let dt = max_stable_dt(&f, 0.25);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| evolve_kramers_local(&f, dt, 20, KramersOptions::default()).unwrap());
        let b = four.install(|| evolve_kramers_local(&f, dt, 20, KramersOptions::default()).unwrap());
        assert_eq!(a.field.values, b.field.values);
        assert_eq!(a.boundary_outflow, b.boundary_outflow);
    }

    #[test]
    fn divergence_is_reported() {
        let mut f = gaussian_field(meta(0.5, 0.2), 21, 0.5, 4.5, 2.0, 0.5);
        f.values[5] = Complex64::new(f64::NAN, 0.0);
        let dt = max_stable_dt(&f, 0.25);
        assert!(matches!(
            evolve_kramers_local(&f, dt, 3, KramersOptions::default()),
            Err(Error::Divergence { step: 0 })
        ));
    }
}
