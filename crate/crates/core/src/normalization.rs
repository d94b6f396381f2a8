//! Total-probability checks for Wigner evaluators by 4-D tensor quadrature.
//!
//! Two charts are used. Gaussian-like states separate in the rotated
//! coordinates `u = (x₁+x₃)/√2`, `v = (x₁−x₃)/√2`, `w = (x₂+x₄)/√2`,
//! `z = (x₂−x₄)/√2`, where the pair term becomes `u² − v² − w² + z²`.
//! Phase-averaged states are integrated in polar coordinates per mode.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::quadrature::integrate_4d;
use crate::numerics::QuadratureRule;
use crate::phase_space::{GaussianForm, TwoModePoint};
use crate::states::WignerState;

/// Gauss–Legendre nodes per panel in the adapted rules.
pub const NODES_PER_PANEL: usize = 6;
/// Integration reaches this many standard deviations of the widest feature.
pub const TAIL_SIGMAS: f64 = 8.0;

/// Breakpoints `σ_min/2 · 2^k` out to `TAIL_SIGMAS·σ_max`, so every length
/// scale in `[σ_min, σ_max]` is resolved by a few panels.
fn half_line_breaks(sigma_min: f64, sigma_max: f64) -> Result<Vec<f64>> {
    if !(sigma_min > 0.0 && sigma_max >= sigma_min && sigma_max.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "length scales must satisfy 0 < {sigma_min} <= {sigma_max} < inf"
        )));
    }
    let end = TAIL_SIGMAS * sigma_max;
    let mut breaks = vec![0.0];
    let mut b = 0.5 * sigma_min;
    while b < end {
        breaks.push(b);
        b *= 2.0;
    }
    breaks.push(end);
    Ok(breaks)
}

/// Composite rule on `[−L, L]` adapted to scales in `[σ_min, σ_max]`.
pub fn symmetric_axis_rule(sigma_min: f64, sigma_max: f64) -> Result<QuadratureRule> {
    let half = half_line_breaks(sigma_min, sigma_max)?;
    let mut breaks: Vec<f64> = half.iter().rev().map(|b| -b).collect();
    breaks.extend_from_slice(&half[1..]);
    QuadratureRule::composite_gauss_legendre(&breaks, NODES_PER_PANEL)
}

/// Composite rule on `[0, TAIL_SIGMAS·σ_max]` with uniform panels no wider
/// than `σ_min`. Uniform panels are needed in polar charts: the pure state
/// forms a ridge along `ρ₁ = ρ₂` whose cross-width does not grow with `ρ`.
pub fn radial_rule(sigma_min: f64, sigma_max: f64) -> Result<QuadratureRule> {
    if !(sigma_min > 0.0 && sigma_max >= sigma_min && sigma_max.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "length scales must satisfy 0 < {sigma_min} <= {sigma_max} < inf"
        )));
    }
    let end = TAIL_SIGMAS * sigma_max;
    let panels = (end / sigma_min).ceil() as usize;
    QuadratureRule::uniform_composite(0.0, end, panels, NODES_PER_PANEL)
}

/// `∫ W d⁴x` in the rotated chart; `rules` are for `(u, v, w, z)`.
pub fn integrate_rotated<S: WignerState + ?Sized>(state: &S, rules: [&QuadratureRule; 4]) -> f64 {
    integrate_4d(rules, |[u, v, w, z]| {
        let x1 = FRAC_1_SQRT_2 * (u + v);
        let x3 = FRAC_1_SQRT_2 * (u - v);
        let x2 = FRAC_1_SQRT_2 * (w + z);
        let x4 = FRAC_1_SQRT_2 * (w - z);
        state.density(&TwoModePoint::from_real([x1, x2, x3, x4]))
    })
}

/// `∫ W ρ₁ρ₂ dρ₁ dφ₁ dρ₂ dφ₂` with a periodic trapezoid in each phase.
pub fn integrate_polar<S: WignerState + ?Sized>(
    state: &S,
    radial: &QuadratureRule,
    angle_nodes: usize,
) -> Result<f64> {
    let angular = QuadratureRule::periodic_trapezoid(angle_nodes, 0.0, TAU)?;
    Ok(integrate_4d([radial, &angular, radial, &angular], |[r1, p1, r2, p2]| {
        let pt = TwoModePoint::new(Complex64::from_polar(r1, p1), Complex64::from_polar(r2, p2));
        r1 * r2 * state.density(&pt)
    }))
}

/// Standard deviations of a Gaussian form along `(u, v, w, z)`.
pub fn rotated_scales(form: &GaussianForm) -> [f64; 4] {
    let wide = (form.h() / form.c_plus()).sqrt();
    let narrow = (form.h() / form.c_minus()).sqrt();
    [wide, narrow, narrow, wide]
}

/// Rotated-chart rules covering a Gaussian form plus an optional isotropic
/// component of standard deviation `extra` per coordinate.
pub fn rotated_rules(form: &GaussianForm, extra: Option<f64>) -> Result<[QuadratureRule; 4]> {
    let s = rotated_scales(form);
    let rule = |sigma: f64| {
        let (lo, hi) = match extra {
            Some(e) => (sigma.min(e), sigma.max(e)),
            None => (sigma, sigma),
        };
        symmetric_axis_rule(lo, hi)
    };
    Ok([rule(s[0])?, rule(s[1])?, rule(s[2])?, rule(s[3])?])
}
