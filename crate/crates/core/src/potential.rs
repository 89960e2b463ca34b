//! The cubic metastable well `U(x) = ½MΩ₀²x² − (λ/6)x³` and its plateau.
//!
//! Far beyond the exit point the potential is continued to the constant
//! `−U_∞` through a C¹ cubic Hermite blend on `[x_match, x_match + w]`.
//! Every WKB action used by the crate ends at the outer turning point
//! `x_out ≤ x_exit < x_match`, so the blend never enters a rate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::{newton_bisect, RootOptions};
use crate::units::Units;

/// Where the cubic is joined onto the plateau, in units of `x_exit`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlateauBlend {
    pub match_factor: f64,
    pub width_factor: f64,
}

impl Default for PlateauBlend {
    fn default() -> Self {
        Self { match_factor: 3.0, width_factor: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicPotential {
    pub mass: f64,
    pub omega0: f64,
    pub lambda: f64,
    /// Plateau depth; the potential tends to `−u_inf` far from the well.
    pub u_inf: f64,
    pub plateau: PlateauBlend,
    pub units: Units,
}

/// The three classical turning points at an energy `0 < E < ε_s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningPoints {
    pub left: f64,
    pub right: f64,
    pub outer: f64,
}

impl CubicPotential {
    pub fn new(mass: f64, omega0: f64, lambda: f64, u_inf: f64, units: Units) -> Result<Self> {
        for (name, v) in [("mass", mass), ("omega0", omega0), ("lambda", lambda)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !(u_inf >= 0.0 && u_inf.is_finite()) {
            return Err(Error::Domain(format!("u_inf must be >= 0, got {u_inf}")));
        }
        Ok(Self { mass, omega0, lambda, u_inf, plateau: PlateauBlend::default(), units })
    }

    /// Builds the potential from its barrier height instead of the cubic coupling.
    pub fn from_barrier(mass: f64, omega0: f64, eps_s: f64, u_inf: f64, units: Units) -> Result<Self> {
        if !(eps_s > 0.0) {
            return Err(Error::Domain(format!("barrier height must be positive, got {eps_s}")));
        }
        let lambda = (2.0 * mass.powi(3) * omega0.powi(6) / (3.0 * eps_s)).sqrt();
        Self::new(mass, omega0, lambda, u_inf, units)
    }

    /// `M = Ω₀ = ħ = 1`, cubic coupling `λ`.
    pub fn natural(lambda: f64) -> Result<Self> {
        Self::new(1.0, 1.0, lambda, 0.0, Units::natural())
    }

    pub fn with_plateau(mut self, plateau: PlateauBlend) -> Result<Self> {
        if !(plateau.match_factor > 1.0 && plateau.width_factor > 0.0) {
            return Err(Error::Config(format!(
                "plateau must start beyond x_exit with positive width, got {plateau:?}"
            )));
        }
        self.plateau = plateau;
        Ok(self)
    }

    pub fn with_u_inf(mut self, u_inf: f64) -> Result<Self> {
        if !(u_inf >= 0.0) {
            return Err(Error::Domain(format!("u_inf must be >= 0, got {u_inf}")));
        }
        self.u_inf = u_inf;
        Ok(self)
    }

    /// Position of the barrier top.
    pub fn x_s(&self) -> f64 {
        2.0 * self.mass * self.omega0 * self.omega0 / self.lambda
    }

    /// Barrier height `ε_s = U(x_s)`.
    pub fn eps_s(&self) -> f64 {
        2.0 * self.mass.powi(3) * self.omega0.powi(6) / (3.0 * self.lambda * self.lambda)
    }

    /// Second zero of the cubic, `3x_s/2`.
    pub fn x_exit(&self) -> f64 {
        1.5 * self.x_s()
    }

    /// Harmonic zero-point energy `ħΩ₀/2`.
    pub fn eps0(&self) -> f64 {
        0.5 * self.units.hbar * self.omega0
    }

    pub fn x_match(&self) -> f64 {
        self.plateau.match_factor * self.x_exit()
    }

    pub fn blend_width(&self) -> f64 {
        self.plateau.width_factor * self.x_exit()
    }

    fn cubic(&self, x: f64) -> f64 {
        0.5 * self.mass * self.omega0 * self.omega0 * x * x - self.lambda / 6.0 * x * x * x
    }

    fn cubic_slope(&self, x: f64) -> f64 {
        self.mass * self.omega0 * self.omega0 * x - 0.5 * self.lambda * x * x
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        let xm = self.x_match();
        if x <= xm {
            return self.cubic(x);
        }
        let w = self.blend_width();
        if x >= xm + w {
            return -self.u_inf;
        }
        let t = (x - xm) / w;
        let (h00, h10, h01) = (
            (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t),
            t * (1.0 - t) * (1.0 - t),
            t * t * (3.0 - 2.0 * t),
        );
        h00 * self.cubic(xm) + h10 * w * self.cubic_slope(xm) + h01 * (-self.u_inf)
    }

    /// Classical turning points of `U(x) = E` in the cubic region.
    ///
    /// In `y = x/x_s` the condition reads `3y² − 2y³ = E/ε_s`; the three
    /// roots are `½ + cos(θ/3 − 2πj/3)` with `cos θ = 1 − 2E/ε_s`, each then
    /// polished by a bracketed Newton step.
    pub fn turning_points(&self, energy: f64) -> Result<TurningPoints> {
        let eps_s = self.eps_s();
        if !(energy > 0.0) {
            return Err(Error::Domain(format!("energy {energy:e} must exceed the well bottom 0")));
        }
        if !(energy < eps_s) {
            return Err(Error::Domain(format!(
                "energy {energy:e} must lie below the barrier top eps_s = {eps_s:e}"
            )));
        }
        let e = energy / eps_s;
        let theta = (1.0 - 2.0 * e).clamp(-1.0, 1.0).acos() / 3.0;
        let two_pi_3 = 2.0 * std::f64::consts::PI / 3.0;
        let guess = |j: f64| 0.5 + (theta - two_pi_3 * j).cos();
        let h = |y: f64| y * y * (3.0 - 2.0 * y) - e;
        let dh = |y: f64| 6.0 * y * (1.0 - y);
        let opts = RootOptions { xtol: 1e-16, max_iter: 100 };
        let polish = |lo: f64, hi: f64, y0: f64| newton_bisect(h, dh, lo, hi, y0, opts);
        let left = polish(-0.5, 0.0, guess(2.0))?;
        let right = polish(0.0, 1.0, guess(1.0))?;
        let outer = polish(1.0, 1.5, guess(0.0))?;
        let xs = self.x_s();
        Ok(TurningPoints { left: left * xs, right: right * xs, outer: outer * xs })
    }
}
