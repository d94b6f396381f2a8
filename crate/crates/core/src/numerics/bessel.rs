//! Modified Bessel function of the first kind, order zero.

use crate::error::{Error, Result};

/// Series/asymptotic crossover.
pub const ASYMPTOTIC_SWITCH: f64 = 15.0;

/// `I₀(x)` for `x ≥ 0`. Overflows to `+∞` beyond `x ≈ 713`; use
/// [`ln_bessel_i0`] there.
pub fn bessel_i0(x: f64) -> Result<f64> {
    check(x)?;
    Ok(if x < ASYMPTOTIC_SWITCH {
        bessel_i0_series(x)
    } else {
        ln_asymptotic(x).exp()
    })
}

/// `ln I₀(x)` for `x ≥ 0`, finite for every finite `x`.
pub fn ln_bessel_i0(x: f64) -> Result<f64> {
    check(x)?;
    Ok(if x < ASYMPTOTIC_SWITCH {
        bessel_i0_series(x).ln()
    } else {
        ln_asymptotic(x)
    })
}

fn check(x: f64) -> Result<()> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!("I0 requires x >= 0, got {x}")));
    }
    Ok(())
}

/// Power series `Σ (x²/4)^k / (k!)²`. All terms are positive, so there is
/// no cancellation; summation stops once terms drop below one ulp.
pub fn bessel_i0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    while term > 1e-17 * sum {
        term *= q / (k * k);
        sum += term;
        k += 1.0;
    }
    sum
}

/// Large-argument expansion `e^x / √(2πx) · Σ aₖ x^{−k}` with
/// `aₖ = ((2k−1)!!)² / (k! 8^k)`, truncated at its smallest term.
pub fn bessel_i0_asymptotic(x: f64) -> f64 {
    ln_asymptotic(x).exp()
}

fn ln_asymptotic(x: f64) -> f64 {
    x - 0.5 * (2.0 * std::f64::consts::PI * x).ln() + asymptotic_correction(x).ln()
}

fn asymptotic_correction(x: f64) -> f64 {
    let mut term = 1.0_f64;
    let mut sum = 1.0;
    for k in 0..200 {
        let kf = k as f64;
        let next = term * (2.0 * kf + 1.0).powi(2) / (8.0 * (kf + 1.0) * x);
        if next >= term || next < 1e-17 * sum {
            break;
        }
        term = next;
        sum += term;
    }
    sum
}
