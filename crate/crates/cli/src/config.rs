//! Strict JSON run configuration.

use serde::Deserialize;
use std::path::Path;

use tunnelkit::josephson::{self, DerivedJunction, JunctionParams, PredictOptions};
use tunnelkit::spectral::GridSpec;
use tunnelkit::wkb::EnergyConvention;
use tunnelkit::{CubicPotential, Units};

use crate::error::CliError;

/// The preset reproducing the zero-temperature junction experiment.
pub const PRESET_CONFIG: &str = include_str!("../configs/junction.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Closed,
    Suppression,
    Evolve,
    JunctionPredict,
    JunctionInvert,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnitMode {
    #[default]
    SiFrozen,
    SiCodata,
    Natural,
}

impl UnitMode {
    pub fn units(self) -> Units {
        match self {
            UnitMode::SiFrozen => Units::si_frozen(),
            UnitMode::SiCodata => Units::si_codata(),
            UnitMode::Natural => Units::natural(),
        }
    }
}

/// Cubic well given by either its barrier height or its cubic coupling.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialRecord {
    pub mass: f64,
    pub omega0: f64,
    pub eps_s: Option<f64>,
    pub lambda: Option<f64>,
    #[serde(default)]
    pub u_inf: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JunctionRecord {
    pub bias_current: f64,
    pub critical_current: Option<f64>,
    pub capacitance: f64,
    pub resistance: f64,
    /// Tabulated `ε_s/k_B` [K] replacing the derived value.
    pub eps_s_over_kb: Option<f64>,
    /// Tabulated `Ω₀` [1/s] replacing the derived value.
    pub omega0: Option<f64>,
}

impl JunctionRecord {
    pub fn params(&self) -> JunctionParams {
        JunctionParams {
            bias_current: self.bias_current,
            critical_current: self.critical_current,
            capacitance: self.capacitance,
            resistance: self.resistance,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentRecord {
    pub gamma: f64,
    pub sigma2: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuppressionRecord {
    pub dmin: f64,
    pub dmax: f64,
    pub points: usize,
}

impl Default for SuppressionRecord {
    fn default() -> Self {
        Self { dmin: 1e-4, dmax: 1e4, points: 81 }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveRecord {
    /// Final time in units of `ħ/ε`.
    pub t_max: f64,
    pub samples: usize,
    /// Also write the coefficient field at the final time.
    #[serde(default)]
    pub snapshot: bool,
}

impl Default for EvolveRecord {
    fn default() -> Self {
        Self { t_max: 6.0, samples: 24, snapshot: false }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PredictRecord {
    #[serde(default)]
    pub u_inf_over_e0: f64,
    #[serde(default)]
    pub energy: EnergyConvention,
}

impl Default for PredictRecord {
    fn default() -> Self {
        Self { u_inf_over_e0: 0.0, energy: EnergyConvention::Anharmonic }
    }
}

/// Measured decay, given either as a rate or as an escape temperature.
#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvertRecord {
    pub rate: Option<f64>,
    /// Escape temperature [K], converted with the junction's `ε_s` and `Ω₀`.
    pub t_esc: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Option<Mode>,
    #[serde(default)]
    pub units: UnitMode,
    pub potential: Option<PotentialRecord>,
    pub junction: Option<JunctionRecord>,
    pub environment: Option<EnvironmentRecord>,
    pub grid: Option<GridSpec>,
    pub suppression: Option<SuppressionRecord>,
    pub evolve: Option<EvolveRecord>,
    pub predict: Option<PredictRecord>,
    pub invert: Option<InvertRecord>,
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Validation(format!("{name} must be positive and finite, got {v}")))
    }
}

impl RunConfig {
    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Validation(format!("{origin}: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn preset() -> Self {
        Self::parse(PRESET_CONFIG, "bundled junction config").expect("bundled config parses")
    }

    pub fn check_mode(&self, mode: Mode) -> Result<(), CliError> {
        match self.mode {
            Some(m) if m != mode => Err(CliError::Validation(format!(
                "config is for mode {m:?} but the {mode:?} subcommand was run"
            ))),
            _ => Ok(()),
        }
    }

    /// Range checks that do not depend on the subcommand.
    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(p) = &self.potential {
            positive("potential.mass", p.mass)?;
            positive("potential.omega0", p.omega0)?;
            match (p.eps_s, p.lambda) {
                (Some(v), None) => positive("potential.eps_s", v)?,
                (None, Some(v)) => positive("potential.lambda", v)?,
                _ => return Err(CliError::Validation("potential needs exactly one of eps_s, lambda".into())),
            }
            if !(p.u_inf >= 0.0 && p.u_inf.is_finite()) {
                return Err(CliError::Validation(format!("potential.u_inf must be >= 0, got {}", p.u_inf)));
            }
        }
        if let Some(j) = &self.junction {
            positive("junction.bias_current", j.bias_current)?;
            positive("junction.capacitance", j.capacitance)?;
            positive("junction.resistance", j.resistance)?;
            if let Some(v) = j.critical_current {
                positive("junction.critical_current", v)?;
            }
            if let Some(v) = j.eps_s_over_kb {
                positive("junction.eps_s_over_kb", v)?;
            }
            if let Some(v) = j.omega0 {
                positive("junction.omega0", v)?;
            }
        }
        if let Some(e) = &self.environment {
            if !(e.gamma >= 0.0 && e.sigma2 >= 0.0 && e.gamma.is_finite() && e.sigma2.is_finite()) {
                return Err(CliError::Validation(format!(
                    "environment needs gamma, sigma2 >= 0, got {}, {}",
                    e.gamma, e.sigma2
                )));
            }
        }
        if let Some(g) = &self.grid {
            positive("grid.half_width", g.half_width)?;
        }
        if let Some(s) = &self.suppression {
            positive("suppression.dmin", s.dmin)?;
            positive("suppression.dmax", s.dmax)?;
        }
        if let Some(e) = &self.evolve {
            positive("evolve.t_max", e.t_max)?;
            if e.samples == 0 {
                return Err(CliError::Validation("evolve.samples must be >= 1".into()));
            }
        }
        if let Some(i) = &self.invert {
            match (i.rate, i.t_esc) {
                (Some(v), None) => positive("invert.rate", v)?,
                (None, Some(v)) => positive("invert.t_esc", v)?,
                (None, None) => {}
                _ => return Err(CliError::Validation("invert takes one of rate, t_esc".into())),
            }
        }
        Ok(())
    }

    pub fn units(&self) -> Units {
        self.units.units()
    }

    /// Junction with the tabulated overrides applied.
    pub fn derived_junction(&self) -> Result<DerivedJunction, CliError> {
        let j = self.junction.as_ref().ok_or_else(|| CliError::Validation("config has no junction record".into()))?;
        let mut dj = josephson::derive(&j.params(), self.units())?;
        if let Some(t) = j.eps_s_over_kb {
            dj.eps_s = t * dj.units.k_b;
        }
        if let Some(w) = j.omega0 {
            dj.omega0 = w;
        }
        dj.eps0 = 0.5 * dj.units.hbar * dj.omega0;
        Ok(dj)
    }

    /// The well from the potential record, or from the junction when there is none.
    pub fn potential(&self) -> Result<CubicPotential, CliError> {
        match (&self.potential, &self.junction) {
            (Some(p), _) => {
                let units = self.units();
                Ok(match (p.eps_s, p.lambda) {
                    (Some(eps_s), _) => CubicPotential::from_barrier(p.mass, p.omega0, eps_s, p.u_inf, units)?,
                    (None, Some(lambda)) => CubicPotential::new(p.mass, p.omega0, lambda, p.u_inf, units)?,
                    (None, None) => return Err(CliError::Validation("potential needs eps_s or lambda".into())),
                })
            }
            (None, Some(_)) => Ok(self.derived_junction()?.to_potential(0.0)?),
            (None, None) => Err(CliError::Validation("config needs a potential or junction record".into())),
        }
    }

    pub fn predict_options(&self) -> PredictOptions {
        let p = self.predict.unwrap_or_default();
        PredictOptions { u_inf_over_e0: p.u_inf_over_e0, energy: p.energy }
    }
}
