//! Acceptance suite: one PASS/FAIL line per criterion.

use num_complex::Complex64;
use std::process::ExitCode;

use tunnelkit::closed::closed_report;
use tunnelkit::josephson::{self, derive, predict_escape_temperature, DerivedJunction, JunctionParams, PredictOptions};
use tunnelkit::quadrature::Tolerance;
use tunnelkit::saddle::{self, suppression_table, solve_saddle, stationarity_residuals, xi_squared};
use tunnelkit::spectral::kramers::{evolve_kramers_local, max_stable_dt, KramersOptions};
use tunnelkit::spectral::{
    evolve_phase_shift, fit_log_slope, init_false_vacuum, persistence_quadrature, Axis, Coordinates, EnvironmentParams,
    FieldMeta, GridSpec, SpectralField,
};
use tunnelkit::wkb::{self, resonance};
use tunnelkit::{CubicPotential, ResonanceData, Units};

type Criterion = (&'static str, fn(&mut Check));

struct Check {
    ok: bool,
    notes: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Self { ok: true, notes: Vec::new() }
    }

    fn within(&mut self, name: &str, got: f64, want: f64, abs_tol: f64) {
        let pass = (got - want).abs() <= abs_tol;
        self.ok &= pass;
        self.notes.push(format!("{name}={got:.6} (want {want} ± {abs_tol}){}", if pass { "" } else { " !" }));
    }

    fn rel(&mut self, name: &str, got: f64, want: f64, rel_tol: f64) {
        let pass = ((got - want) / want).abs() <= rel_tol;
        self.ok &= pass;
        self.notes.push(format!("{name}={got:.6e} (want {want:e} ± {}%){}", rel_tol * 100.0, if pass { "" } else { " !" }));
    }

    fn holds(&mut self, name: &str, pass: bool, detail: String) {
        self.ok &= pass;
        self.notes.push(format!("{name}: {detail}{}", if pass { "" } else { " !" }));
    }
}

fn tight() -> Tolerance {
    Tolerance { abs: 1e-14, rel: 1e-12, ..Tolerance::default() }
}

fn reference_potential() -> CubicPotential {
    DerivedJunction::reference_tabulated().to_potential(0.0).unwrap()
}

fn criterion_1(c: &mut Check) {
    let pot = reference_potential();
    let rep = closed_report(&pot, &resonance(&pot).unwrap()).unwrap();
    c.within("Lambda0", rep.lambda0, 12.376, 0.005);
    c.within("a_q", rep.a_q, 68.306, 0.05);
    c.within("T_inst[mK]", rep.t_esc_instanton * 1e3, 72.345, 0.1);
    c.within("T_wkb[mK]", rep.t_esc_wkb_mixed * 1e3, 70.869, 0.2);
}

fn criterion_2(c: &mut Check) {
    let pot = reference_potential();
    let res = resonance(&pot).unwrap();
    let rep = closed_report(&pot, &res).unwrap();
    c.within("k_GS", rep.k_gs, 0.1152, 0.0005);
    c.within("zeta", rep.zeta_gs, 0.1423, 0.0005);
    c.within("f", rep.f_gs, 0.9550, 0.0005);
    c.within("k_ref", rep.k_ref, 0.2433, 0.001);
    c.within("F(k_ref)", rep.action_factor_ref, 2.4073, 0.002);
    c.within("Lambda", rep.lambda, 8.459, 0.01);
    c.within("Lambda0-ln(a_q)", rep.instanton_exponent(), 8.152, 0.01);
}

fn criterion_3(c: &mut Check) {
    let dj = derive(&JunctionParams::reference(), Units::si_frozen()).unwrap();
    let kb = dj.units.k_b;
    c.rel("eps_s/kB[mK]", dj.eps_s / kb * 1e3, 589.74, 1e-3);
    c.rel("Omega0", dj.omega0, 44.918e9, 1e-3);
    c.rel("eps0/kB[mK]", dj.eps0 / kb * 1e3, 171.55, 1e-3);
    c.rel("gamma", dj.gamma, 25.123e9, 1e-3);
    c.rel("omega_p0", dj.omega_p0, 132.88e9, 1e-3);
    c.rel("E_J/kB[K]", dj.e_j / kb, 592.9, 1e-3);
}

fn criterion_4(c: &mut Check) {
    let pred = predict_escape_temperature(&DerivedJunction::reference_tabulated(), PredictOptions::default()).unwrap();
    c.rel("T_esc[mK]", pred.t_esc * 1e3, 14.255, 0.01);
}

fn criterion_5(c: &mut Check) {
    let inv = josephson::invert_reference().unwrap();
    c.rel("I_c[uA]", inv.critical_current * 1e6, 24.789, 1e-3);
    c.within("s", inv.s, 0.9968, 0.0005);
    c.within("k_ref", inv.k_ref, 0.1162, 0.001);
    c.rel("rho_bar", inv.rho_bar, 1.288e-3, 1e-3);
}

fn criterion_6(c: &mut Check) {
    let grid = saddle::default_d_grid();
    let rows = suppression_table(&grid).unwrap();
    c.holds("points", rows.len() == 81, format!("{}", rows.len()));
    let decreasing = rows.windows(2).all(|w| w[1].r < w[0].r);
    c.holds("R strictly decreasing", decreasing, format!("{decreasing}"));
    let below = rows.iter().all(|r| r.r < 1.0);
    c.holds("R < 1", below, format!("{below}"));
    let small = rows.iter().filter(|r| r.d <= 1e-4 * (1.0 + 1e-12)).map(|r| (r.r - (1.0 - 1.5 * (r.d / 2.0).cbrt())).abs());
    let small = small.fold(0.0f64, f64::max);
    c.holds("small-D asymptote", small < 0.01, format!("max dev {small:.2e}"));
    let large = rows.iter().filter(|r| r.d >= 1e3 * (1.0 - 1e-12)).map(|r| (r.r * 27.0 * r.d / 4.0 - 1.0).abs());
    let large = large.fold(0.0f64, f64::max);
    c.holds("large-D asymptote", large < 0.01, format!("max dev {large:.2e}"));
    let worst = rows.iter().map(|r| r.residual).fold(0.0f64, f64::max);
    c.holds("|f1| < 1e-9", worst < 1e-9, format!("max {worst:.2e}"));
}

/// Dense uniform scan of `Im f₁(ξ(η), η)` followed by plain bisection.
fn saddle_oracle(d: f64) -> f64 {
    let im_f1 = |eta: f64| stationarity_residuals(d, xi_squared(eta).unwrap().sqrt(), eta).0.im;
    let n = 200_000;
    let mut prev = (1e-9, im_f1(1e-9));
    for i in 1..n {
        let eta = i as f64 / n as f64;
        let v = im_f1(eta);
        if v.signum() != prev.1.signum() {
            let (mut lo, mut hi) = (prev.0, eta);
            let s_lo = prev.1.signum();
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if im_f1(mid).signum() == s_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        prev = (eta, v);
    }
    f64::NAN
}

fn criterion_7(c: &mut Check) {
    let oracle = saddle_oracle(1.0);
    let sol = solve_saddle(1.0).unwrap();
    c.within("eta", sol.eta, 0.246, 0.005);
    c.within("R", sol.r, 0.134, 0.005);
    c.holds("oracle", (oracle - sol.eta).abs() < 1e-9, format!("oracle eta={oracle:.9}"));
}

fn criterion_8(c: &mut Check) {
    let (half_width, step) = (100.0, 0.1);
    let ts: Vec<f64> = (0..=16).map(|i| 2.0 + 0.25 * i as f64).collect();
    for d in [0.1, 1.0] {
        let rho: Vec<f64> = ts.iter().map(|&t| persistence_quadrature(d, t, half_width, step).unwrap()).collect();
        let slope = fit_log_slope(&ts, &rho).unwrap();
        let want = 2.0 * solve_saddle(d).unwrap().r;
        let dev = (slope / want - 1.0).abs();
        c.holds(&format!("slope D={d}"), dev <= 0.25, format!("{slope:.4} vs 2R={want:.4} ({:.1}%)", dev * 100.0));
    }
    let worst = (0..=12)
        .map(|i| 1.0 + 0.25 * i as f64)
        .map(|t| (persistence_quadrature(0.0, t, half_width, step).unwrap() / (-2.0 * t).exp() - 1.0).abs())
        .fold(0.0f64, f64::max);
    c.holds("closed decay", worst <= 0.05, format!("max dev {:.2}%", worst * 100.0));
}

fn kramers_meta(gamma: f64, sigma2: f64) -> FieldMeta {
    FieldMeta {
        resonance: ResonanceData::from_pole(2.0, 0.3, 1.0, 1.0),
        env: EnvironmentParams::new(gamma, sigma2).unwrap(),
        mass: 1.0,
        u_inf: 0.0,
    }
}

fn gaussian(meta: FieldMeta, n: usize, p_min: f64, p_max: f64, center: f64, width: f64) -> SpectralField {
    let axis = Axis { start: p_min, step: (p_max - p_min) / (n - 1) as f64, len: n };
    let u = |p: f64| (-(p - center).powi(2) / (2.0 * width * width)).exp();
    SpectralField::from_fn(Coordinates::Momentum, axis, meta, |a, b| Complex64::from_polar(u(a) * u(b), 0.3 * (a - b))).unwrap()
}

fn max_diff_on_common_nodes(coarse: &SpectralField, fine: &SpectralField) -> f64 {
    let stride = (fine.len() - 1) / (coarse.len() - 1);
    let mut worst = 0.0f64;
    for i in 0..coarse.len() {
        for j in 0..coarse.len() {
            worst = worst.max((coarse.get(i, j) - fine.get(i * stride, j * stride)).norm());
        }
    }
    worst
}

fn criterion_9(c: &mut Check) {
    let pot = CubicPotential::natural(0.3).unwrap();
    let worst = [0.1, 0.3, 0.5, 0.7, 0.9]
        .iter()
        .map(|&k| {
            let e = 2.0 * pot.eps_s() * wkb::zeta(k).unwrap();
            let s = wkb::well_action(&pot, e, tight()).unwrap();
            ((pot.eps_s() / pot.omega0 * wkb::action_factor(k).unwrap() - s) / s).abs()
        })
        .fold(0.0f64, f64::max);
    c.holds("elliptic action", worst < 1e-6, format!("{worst:.1e}"));

    let worst = [0.2, 0.5, 0.8]
        .iter()
        .map(|&frac| {
            let e = frac * pot.eps_s();
            let under = wkb::barrier_action(&pot, e, tight()).unwrap();
            let inside = wkb::well_action(&pot, pot.eps_s() - e, tight()).unwrap();
            ((under - inside) / inside).abs()
        })
        .fold(0.0f64, f64::max);
    c.holds("reflection", worst < 1e-6, format!("{worst:.1e}"));

    let meta = FieldMeta {
        resonance: ResonanceData::from_pole(1.0, 0.01, 1.0, 1.0),
        env: EnvironmentParams::new(1e-6, 1.0).unwrap(),
        mass: 1.0,
        u_inf: 0.5,
    };
    let f0 = init_false_vacuum(meta, GridSpec { half_width: 20.0, nodes: 121 }).unwrap();
    let ab = evolve_phase_shift(&evolve_phase_shift(&f0, 70.0).unwrap(), 130.0).unwrap();
    let direct = evolve_phase_shift(&f0, 200.0).unwrap();
    let semigroup = ab.values.iter().zip(&direct.values).map(|(x, y)| (x - y).norm()).fold(0.0f64, f64::max);
    let kf = gaussian(kramers_meta(0.5, 0.2), 41, 0.5, 4.5, 2.0, 0.5);
    let krun = evolve_kramers_local(&kf, max_stable_dt(&kf, 0.25), 100, KramersOptions::default()).unwrap();
    let herm = direct.hermiticity_residual().max(krun.field.hermiticity_residual());
    c.holds("semigroup+hermiticity", semigroup < 1e-12 && herm < 1e-12, format!("{semigroup:.1e}, {herm:.1e}"));

    let f = gaussian(kramers_meta(1.0, 0.0), 61, 0.2, 3.2, 1.0, 0.3);
    let drift = KramersOptions { decoherence_terms: false, phase_term: false, courant: 0.25 };
    let run = evolve_kramers_local(&f, max_stable_dt(&f, 0.25), 400, drift).unwrap();
    let balance = (run.field.plain_total() + run.boundary_outflow - f.plain_total()).norm();
    c.holds("drift conservation", balance < 1e-6, format!("{balance:.1e}"));

    // same dt on every grid so only the spatial error changes
    let n = 41;
    let grids: Vec<SpectralField> =
        [n, 2 * n - 1, 4 * n - 3].iter().map(|&m| gaussian(kramers_meta(0.5, 0.1), m, 0.5, 4.5, 2.5, 0.4)).collect();
    let dt = max_stable_dt(&grids[2], 0.25);
    let steps = (0.5 / dt).ceil() as usize;
    let opts = KramersOptions { decoherence_terms: false, phase_term: false, courant: 0.25 };
    let out: Vec<SpectralField> = grids.iter().map(|g| evolve_kramers_local(g, dt, steps, opts).unwrap().field).collect();
    let e_coarse = max_diff_on_common_nodes(&out[0], &out[1]);
    let e_fine = max_diff_on_common_nodes(&out[1], &out[2]);
    let factor = e_coarse / e_fine;
    c.holds("refinement factor", factor >= 3.0, format!("{factor:.2}"));
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("closed-system reference numbers", criterion_1),
        ("ground-state parametrization", criterion_2),
        ("junction derivation", criterion_3),
        ("open-system prediction", criterion_4),
        ("critical-current inversion", criterion_5),
        ("suppression curve", criterion_6),
        ("saddle at D = 1", criterion_7),
        ("persistence oracle", criterion_8),
        ("structural invariants", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let mut c = Check::new();
        run(&mut c);
        println!("{} criterion {}: {name} [{}]", if c.ok { "PASS" } else { "FAIL" }, i + 1, c.notes.join("; "));
        failed += usize::from(!c.ok);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    }
}
