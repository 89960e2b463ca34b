//! Adaptive Gauss–Kronrod quadrature.
//!
//! A 7-point Gauss rule embedded in a 15-point Kronrod rule gives the local
//! estimate and its error; the interval with the largest error is bisected
//! until the summed error meets the tolerance. Integrable endpoint
//! singularities of the turning-point type are handled by the callers through
//! a change of variables (see [`integrate_sqrt_endpoints`]).

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5] and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs: 0.0, rel: 1e-10, max_intervals: 2000 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrates `f` over `[a, b]` (requires `a <= b`).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate> {
    if !(a <= b) {
        return Err(Error::Argument(format!("integration limits reversed: a = {a}, b = {b}")));
    }
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0, intervals: 0 });
    }
    let (v, e) = kronrod15(&f, a, b);
    let mut pieces = vec![(a, b, v, e)];
    loop {
        let total: f64 = pieces.iter().map(|p| p.2).sum();
        let err: f64 = pieces.iter().map(|p| p.3).sum();
        let target = tol.abs.max(tol.rel * total.abs());
        if !total.is_finite() {
            return Err(Error::Solver("non-finite integrand".into()));
        }
        if err <= target || err <= 50.0 * f64::EPSILON * total.abs() {
            return Ok(Estimate { value: total, error: err, intervals: pieces.len() });
        }
        if pieces.len() >= tol.max_intervals {
            return Err(Error::Solver(format!(
                "quadrature did not converge: error {err:e} > target {target:e} after {} intervals",
                pieces.len()
            )));
        }
        let (worst, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (lo, hi, _, _) = pieces.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = kronrod15(&f, lo, mid);
        let (v2, e2) = kronrod15(&f, mid, hi);
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
}

/// Which ends of an interval carry a square-root branch point of the integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    None,
    Lower,
    Upper,
    Both,
}

/// Integrates `f` on `[a, b]` where `f` behaves like `(x - a)^(±1/2)` and/or
/// `(b - x)^(±1/2)` at the flagged ends.
///
/// Near a flagged end `x_t` the substitution `x = x_t ± u²` turns the
/// integrand into the smooth `2u·f(x_t ± u²)`. With both ends flagged the
/// interval is split at its midpoint.
pub fn integrate_sqrt_endpoints<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    branch: Branch,
    tol: Tolerance,
) -> Result<f64> {
    if !(a <= b) {
        return Err(Error::Argument(format!("integration limits reversed: a = {a}, b = {b}")));
    }
    if a == b {
        return Ok(0.0);
    }
    let from_lower = |lo: f64, hi: f64| {
        let umax = (hi - lo).sqrt();
        integrate(|u| 2.0 * u * f(lo + u * u), 0.0, umax, tol).map(|e| e.value)
    };
    let from_upper = |lo: f64, hi: f64| {
        let umax = (hi - lo).sqrt();
        integrate(|u| 2.0 * u * f(hi - u * u), 0.0, umax, tol).map(|e| e.value)
    };
    match branch {
        Branch::None => integrate(&f, a, b, tol).map(|e| e.value),
        Branch::Lower => from_lower(a, b),
        Branch::Upper => from_upper(a, b),
        Branch::Both => {
            let mid = 0.5 * (a + b);
            Ok(from_lower(a, mid)? + from_upper(mid, b)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn kronrod_is_exact_for_low_degree_polynomials() {
        let est = integrate(|x| 3.0 * x.powi(5) - x * x + 2.0, -1.0, 2.0, Tolerance::default()).unwrap();
        let exact = 0.5 * (64.0 - 1.0) - (8.0 + 1.0) / 3.0 + 6.0;
        assert_relative_eq!(est.value, exact, max_relative = 1e-14);
        assert_eq!(est.intervals, 1);
    }

    #[test]
    fn reversed_limits_are_rejected() {
        assert!(matches!(integrate(|x| x, 1.0, 0.0, Tolerance::default()), Err(Error::Argument(_))));
    }

    #[test]
    fn empty_interval_is_zero() {
        assert_eq!(integrate(|x| x.exp(), 0.3, 0.3, Tolerance::default()).unwrap().value, 0.0);
    }

    #[test]
    fn inverse_sqrt_singularity_at_both_ends() {
        // ∫_0^1 dx / sqrt(x(1-x)) = π
        let v = integrate_sqrt_endpoints(
            |x| 1.0 / (x * (1.0 - x)).sqrt(),
            0.0,
            1.0,
            Branch::Both,
            Tolerance { rel: 1e-13, ..Tolerance::default() },
        )
        .unwrap();
        assert_relative_eq!(v, std::f64::consts::PI, max_relative = 1e-12);
    }

    #[test]
    fn sqrt_zero_at_lower_end() {
        // ∫_0^1 sqrt(x) e^x dx, reference from series to 1e-15
        let v = integrate_sqrt_endpoints(|x| x.sqrt() * x.exp(), 0.0, 1.0, Branch::Lower, Tolerance::default())
            .unwrap();
        let reference: f64 = (0..40)
            .map(|n| {
                let fact: f64 = (1..=n).map(|k| k as f64).product();
                1.0 / (fact * (n as f64 + 1.5))
            })
            .sum();
        assert_relative_eq!(v, reference, max_relative = 1e-12);
    }
}
