//! Complete elliptic integrals by the arithmetic-geometric mean.
//!
//! Arguments are the modulus `k` (parameter `m = k²`), matching the
//! `K[k²]`, `E[k²]` notation used by the action parametrization in
//! [`crate::wkb`]. The complementary modulus is formed as
//! `sqrt((1 - k)(1 + k))` so that `k → 1` keeps full relative accuracy.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

const MAX_AGM_STEPS: usize = 64;

fn check_modulus(k: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::Domain(format!("elliptic modulus k = {k} outside [0, 1]")));
    }
    Ok(())
}

/// Runs the AGM on `(1, k')` and returns `(agm, Σ 2^(n-1) c_n²)`.
fn agm_with_sum(k: f64) -> (f64, f64) {
    let mut a = 1.0;
    let mut b = ((1.0 - k) * (1.0 + k)).sqrt();
    let mut c = k;
    let mut pow = 0.5;
    let mut sum = pow * c * c;
    for _ in 0..MAX_AGM_STEPS {
        if c.abs() <= f64::EPSILON * a {
            break;
        }
        let an = 0.5 * (a + b);
        c = 0.5 * (a - b);
        b = (a * b).sqrt();
        a = an;
        pow *= 2.0;
        sum += pow * c * c;
    }
    (a, sum)
}

/// Complete elliptic integral of the first kind `K(k)`; infinite at `k = 1`.
pub fn complete_k(k: f64) -> Result<f64> {
    check_modulus(k)?;
    if k == 1.0 {
        return Ok(f64::INFINITY);
    }
    let (a, _) = agm_with_sum(k);
    Ok(FRAC_PI_2 / a)
}

/// Complete elliptic integral of the second kind `E(k)`.
pub fn complete_e(k: f64) -> Result<f64> {
    check_modulus(k)?;
    if k == 1.0 {
        return Ok(1.0);
    }
    let (a, sum) = agm_with_sum(k);
    Ok(FRAC_PI_2 / a * (1.0 - sum))
}

/// Both integrals from one AGM pass.
pub fn complete_ke(k: f64) -> Result<(f64, f64)> {
    check_modulus(k)?;
    if k == 1.0 {
        return Ok((f64::INFINITY, 1.0));
    }
    let (a, sum) = agm_with_sum(k);
    let kk = FRAC_PI_2 / a;
    Ok((kk, kk * (1.0 - sum)))
}
