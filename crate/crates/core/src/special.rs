//! Dilogarithm and log-gamma support for the separability functions.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Real dilogarithm `Li2(z)` for `z <= 1`.
///
/// Power series on `|z| <= 1/2`; the reflection `Li2(z) + Li2(1-z)` and
/// Landen `Li2(z) + Li2(z/(z-1))` identities map `(1/2, 1)` and
/// `[-1, -1/2)` back into the series disk, and the inversion identity
/// covers `z < -1`.
pub fn li2<T: Real>(z: T) -> Result<T> {
    let one = T::one();
    if z > one {
        return Err(Error::Domain(format!("li2 requires z <= 1, got {z:?}")));
    }
    let pi2_6 = T::PI() * T::PI() / T::of(6.0);
    if z == one {
        return Ok(pi2_6);
    }
    let half = T::of(0.5);
    Ok(if z < -one {
        // Li2(z) = -Li2(1/z) - pi^2/6 - ln^2(-z)/2; 1/z lands in (-1, 0),
        // which may still need the Landen step, so recurse once.
        let l = (-z).ln();
        -li2(one / z)? - pi2_6 - half * l * l
    } else if z < -half {
        // Landen: Li2(z) = -Li2(z/(z-1)) - ln^2(1-z)/2
        let l = (one - z).ln();
        -li2_series(z / (z - one)) - half * l * l
    } else if z <= half {
        li2_series(z)
    } else {
        // Li2(z) = pi^2/6 - ln(z) ln(1-z) - Li2(1-z)
        pi2_6 - z.ln() * (one - z).ln() - li2_series(one - z)
    })
}

fn li2_series<T: Real>(z: T) -> T {
    let mut term = z;
    let mut sum = z;
    let mut k = 1u32;
    while term.abs() > T::epsilon() * sum.abs().max(T::of(1e-30)) && k < 200 {
        k += 1;
        term = term * z;
        sum = sum + term / T::of((k * k) as f64);
    }
    sum
}

/// Natural log of the gamma function for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    const COEF: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    debug_assert!(x > 0.0);
    if x < 0.5 {
        // reflection
        return (std::f64::consts::PI / (std::f64::consts::PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = COEF[0];
    for (i, c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn approx(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() < tol, "{a} vs {b}");
    }

    #[test]
    fn li2_reference_points() {
        approx(li2(1.0f64).unwrap(), PI * PI / 6.0, 1e-15);
        approx(li2(0.0f64).unwrap(), 0.0, 1e-16);
        approx(li2(-1.0f64).unwrap(), -PI * PI / 12.0, 1e-14);
        // Li2(1/2) = pi^2/12 - ln^2(2)/2
        approx(
            li2(0.5f64).unwrap(),
            PI * PI / 12.0 - 0.5 * (2.0f64).ln().powi(2),
            1e-15,
        );
        assert!(li2(1.5f64).is_err());
    }

    #[test]
    fn li2_matches_raw_series_inside_disk() {
        for z in [-0.45f64, -0.2, 0.1, 0.3, 0.49] {
            let direct: f64 = (1..500).map(|k| z.powi(k) / (k * k) as f64).sum();
            approx(li2(z).unwrap(), direct, 1e-15);
        }
    }

    #[test]
    fn li2_branches_join_smoothly() {
        for z in [-1.0 - 1e-9, -0.5, 0.5, 1.0 - 1e-9] {
            let lo = li2(z - 1e-9).unwrap();
            let hi = li2(z + 1e-9f64.min(1.0 - z)).unwrap();
            assert!((hi - lo).abs() < 1e-7);
        }
    }

    #[test]
    fn li2_f32_works() {
        let v: f32 = li2(0.5f32).unwrap();
        assert!((v - 0.5822405).abs() < 1e-5);
    }

    #[test]
    fn ln_gamma_reference_points() {
        approx(ln_gamma(1.0), 0.0, 1e-13);
        approx(ln_gamma(2.0), 0.0, 1e-13);
        approx(ln_gamma(5.0), 24.0f64.ln(), 1e-12);
        approx(ln_gamma(0.5), PI.sqrt().ln(), 1e-13);
        approx(ln_gamma(7.5), 1871.254305797788346f64.ln(), 1e-10);
    }
}
