use serde::Serialize;
use std::path::Path;

use tunnelkit::closed::{closed_report, ClosedRateReport};
use tunnelkit::josephson::{self, Inversion, Prediction, EXPERIMENTAL_T_ESC};
use tunnelkit::saddle::{decoherence_d, suppression_table, log_grid, r_large_d, r_small_d};
use tunnelkit::spectral::{evolve_phase_shift, init_false_vacuum, FieldMeta};
use tunnelkit::wkb::{resonance, EnergyConvention};
use tunnelkit::EnvironmentParams;

use crate::config::{RunConfig, SuppressionRecord, UnitMode};
use crate::error::CliError;
use crate::output::{fmt_num, prepare_dir, to_json, write, Csv};

fn print_rows(rows: &[(&str, f64)]) {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in rows {
        println!("{k:<width$}  {}", fmt_num(*v));
    }
}

#[derive(Serialize)]
struct ClosedOutput {
    eps_s: f64,
    eps0: f64,
    omega0: f64,
    report: ClosedRateReport,
}

pub fn closed(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let pot = cfg.potential()?;
    let res = resonance(&pot)?;
    let report = closed_report(&pot, &res)?;
    let kelvin = if cfg.units == UnitMode::Natural { 1.0 } else { 1e3 };
    let t_unit = if cfg.units == UnitMode::Natural { "" } else { " [mK]" };
    print_rows(&[
        ("Lambda0", report.lambda0),
        ("a_q", report.a_q),
        ("Lambda0 - ln a_q", report.instanton_exponent()),
        ("Lambda", report.lambda),
        ("k_GS", report.k_gs),
        ("zeta(k_GS)", report.zeta_gs),
        ("f(k_GS)", report.f_gs),
        ("k_ref", report.k_ref),
        ("F(k_ref)", report.action_factor_ref),
        ("Gamma instanton", report.gamma_instanton),
        ("Gamma WKB", report.gamma_wkb),
        (&format!("T_esc instanton{t_unit}"), report.t_esc_instanton * kelvin),
        (&format!("T_esc WKB{t_unit}"), report.t_esc_wkb * kelvin),
        (&format!("T_esc WKB, harmonic numerator{t_unit}"), report.t_esc_wkb_mixed * kelvin),
    ]);
    prepare_dir(out)?;
    let doc = ClosedOutput { eps_s: pot.eps_s(), eps0: pot.eps0(), omega0: pot.omega0, report };
    write(out, "closed.json", &to_json(&doc)?)?;
    Ok(())
}

pub fn suppression(rec: SuppressionRecord, out: &Path) -> Result<(), CliError> {
    if rec.dmax < rec.dmin || rec.points < 2 {
        return Err(CliError::Validation(format!(
            "suppression sweep needs dmin <= dmax and >= 2 points, got {}, {}, {}",
            rec.dmin, rec.dmax, rec.points
        )));
    }
    let grid = log_grid(rec.dmin, rec.dmax, rec.points)?;
    let rows = suppression_table(&grid)?;
    let mut csv = Csv::new("all columns dimensionless; residual = max(|f1|, |f2|)", &["D", "R", "eta", "xi", "residual"]);
    for r in &rows {
        csv.row(&[r.d, r.r, r.eta, r.xi, r.residual]);
    }
    prepare_dir(out)?;
    let path = write(out, "suppression.csv", csv.as_str())?;
    let (first, last) = (rows[0], rows[rows.len() - 1]);
    print_rows(&[
        ("D min", first.d),
        ("R(D min)", first.r),
        ("small-D asymptote", r_small_d(first.d).r),
        ("D max", last.d),
        ("R(D max)", last.r),
        ("large-D asymptote", r_large_d(last.d).r),
    ]);
    println!("wrote {}", path.display());
    Ok(())
}

pub struct EvolveOverrides {
    pub t_max: Option<f64>,
    pub samples: Option<usize>,
    pub gamma: Option<f64>,
    pub sigma2: Option<f64>,
    pub snapshot: bool,
}

pub fn evolve(cfg: &RunConfig, ov: EvolveOverrides, out: &Path) -> Result<(), CliError> {
    let pot = cfg.potential()?;
    let res = resonance(&pot)?;
    let mut rec = cfg.evolve.unwrap_or_default();
    rec.t_max = ov.t_max.unwrap_or(rec.t_max);
    rec.samples = ov.samples.unwrap_or(rec.samples);
    rec.snapshot |= ov.snapshot;
    if !(rec.t_max > 0.0) || rec.samples == 0 {
        return Err(CliError::Validation(format!("evolve needs t_max > 0 and samples >= 1, got {}, {}", rec.t_max, rec.samples)));
    }
    // junction configs without an environment use the shunt friction and σ² = E₀
    let (gamma, sigma2) = match (cfg.environment, &cfg.junction) {
        (Some(e), _) => (e.gamma, e.sigma2),
        (None, Some(_)) => (cfg.derived_junction()?.gamma, res.e0),
        (None, None) => (0.0, 0.0),
    };
    let env = EnvironmentParams::new(ov.gamma.unwrap_or(gamma), ov.sigma2.unwrap_or(sigma2))?;
    let meta = FieldMeta { resonance: res, env, mass: pot.mass, u_inf: pot.u_inf };
    let f0 = init_false_vacuum(meta, cfg.grid.unwrap_or_default())?;
    let d = decoherence_d(env.gamma, env.sigma2, res.e0, pot.u_inf, res.eps, res.hbar)?;

    let (t_unit, e_unit) = match cfg.units {
        UnitMode::Natural => ("[natural]", "[natural]"),
        _ => ("[s]", "[J]"),
    };
    let mut csv = Csv::new(&format!("t {t_unit}, rho2 [1], N [1], meanE {e_unit}"), &["t", "rho2", "N", "meanE"]);
    let tunnel_time = res.hbar / res.eps;
    let mut last = f0.clone();
    for k in 0..=rec.samples {
        let t = rec.t_max * tunnel_time * k as f64 / rec.samples as f64;
        last = evolve_phase_shift(&f0, t)?;
        let diag = last.diagnostics();
        csv.row(&[t, last.persistence(&f0)?, diag.n, diag.mean_e]);
    }
    prepare_dir(out)?;
    let path = write(out, "evolve.csv", csv.as_str())?;
    if rec.snapshot {
        let mut snap = Csv::new(&format!("E1 {e_unit}, E2 {e_unit}, C re/im [1/energy]"), &["E1", "E2", "re", "im"]);
        for (e1, e2, c) in last.nodes() {
            snap.row(&[e1, e2, c.re, c.im]);
        }
        write(out, "field_final.csv", snap.as_str())?;
    }
    print_rows(&[("D", d), ("eps", res.eps), ("hbar/eps", tunnel_time), ("captured weight", f0.captured_weight)]);
    println!("wrote {}", path.display());
    Ok(())
}

#[derive(Serialize)]
struct PredictOutput {
    t_esc_mk: f64,
    experimental_t_esc_mk: f64,
    eps_s: f64,
    omega0: f64,
    gamma: f64,
    prediction: Prediction,
}

pub fn predict(cfg: &RunConfig, u_inf_over_e0: Option<f64>, harmonic: bool, out: &Path) -> Result<(), CliError> {
    let dj = cfg.derived_junction()?;
    let mut opts = cfg.predict_options();
    if let Some(u) = u_inf_over_e0 {
        opts.u_inf_over_e0 = u;
    }
    if harmonic {
        opts.energy = EnergyConvention::Harmonic;
    }
    let pred = josephson::predict_escape_temperature(&dj, opts)?;
    print_rows(&[
        ("Lambda", pred.lambda),
        ("D", pred.d),
        ("R", pred.r),
        ("exponent", pred.exponent),
        ("T_esc [mK]", pred.t_esc * 1e3),
        ("experiment [mK]", EXPERIMENTAL_T_ESC * 1e3),
    ]);
    prepare_dir(out)?;
    let doc = PredictOutput {
        t_esc_mk: pred.t_esc * 1e3,
        experimental_t_esc_mk: EXPERIMENTAL_T_ESC * 1e3,
        eps_s: dj.eps_s,
        omega0: dj.omega0,
        gamma: dj.gamma,
        prediction: pred,
    };
    write(out, "junction_predict.json", &to_json(&doc)?)?;
    Ok(())
}

#[derive(Serialize)]
struct InvertOutput {
    critical_current_ua: f64,
    rate: f64,
    /// The inferred critical current is a lower bound.
    lower_bound: bool,
    inversion: Inversion,
}

pub fn invert(cfg: &RunConfig, rate: Option<f64>, t_esc: Option<f64>, out: &Path) -> Result<(), CliError> {
    let j = cfg.junction.ok_or_else(|| CliError::Validation("junction invert needs a junction record".into()))?;
    let rec = cfg.invert.unwrap_or_default();
    let rate = match (rate, t_esc) {
        (Some(_), Some(_)) => return Err(CliError::Validation("give one of --rate, --t-esc".into())),
        (Some(r), None) => r,
        (None, Some(t)) => rate_of(cfg, t)?,
        (None, None) => match (rec.rate, rec.t_esc) {
            (Some(r), _) => r,
            (None, Some(t)) => rate_of(cfg, t)?,
            (None, None) => return Err(CliError::Validation("junction invert needs a rate or an escape temperature".into())),
        },
    };
    let inv = josephson::invert_critical_current(j.bias_current, j.capacitance, j.resistance, rate, cfg.units())?;
    print_rows(&[
        ("rate [1/s]", rate),
        ("s", inv.s),
        ("k_ref", inv.k_ref),
        ("rho_bar", inv.rho_bar),
        ("I_c [uA]", inv.critical_current * 1e6),
    ]);
    prepare_dir(out)?;
    let doc = InvertOutput { critical_current_ua: inv.critical_current * 1e6, rate, lower_bound: true, inversion: inv };
    write(out, "junction_invert.json", &to_json(&doc)?)?;
    Ok(())
}

/// Rate from an escape temperature using the junction's `ε_s` and `Ω₀`.
fn rate_of(cfg: &RunConfig, t_esc: f64) -> Result<f64, CliError> {
    let dj = cfg.derived_junction().map_err(|e| {
        CliError::Validation(format!("converting an escape temperature needs the junction's critical current: {e}"))
    })?;
    Ok(josephson::rate_from_experiment(t_esc, dj.eps_s, dj.omega0, dj.units.k_b)?)
}
