//! Convex mixtures of the pure squeezed state with two classical partners:
//! the product of its thermal marginals (a continuous-variable Werner state)
//! and its phase-averaged version (phase diffusion).

use std::f64::consts::{FRAC_2_PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::bell::{bell_combination, geometric_grid, BellEvaluation, LOCAL_BOUND};
use crate::error::{Error, Result};
use crate::numerics::quadrature::integrate_2d;
use crate::numerics::{bessel_i0, ln_bessel_i0, QuadratureRule};
use crate::phase_space::{
    ln_wigner_pure_2mss, wigner_pure_2mss, SqueezedStateParams, TwoModePoint, LN_VACUUM_PEAK,
    VACUUM_PEAK,
};
use crate::states::{PhaseAveraged, PureSqueezed, ThermalProduct, WignerState};
use crate::tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MixtureKind {
    WernerThermal,
    PhaseDiffused,
}

impl MixtureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MixtureKind::WernerThermal => "werner-thermal",
            MixtureKind::PhaseDiffused => "phase-diffused",
        }
    }
}

/// `p·W_pure + (1 − p)·W_partner`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MixtureSpec {
    p: f64,
    r: f64,
    kind: MixtureKind,
}

impl MixtureSpec {
    pub fn new(p: f64, r: f64, kind: MixtureKind) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!(
                "mixing weight p must lie in [0, 1], got {p}"
            )));
        }
        let r = SqueezedStateParams::new(r, 0.0, 0.0)?.r();
        Ok(Self { p, r, kind })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn kind(&self) -> MixtureKind {
        self.kind
    }

    /// The classical partner weighted by `1 − p`.
    pub fn partner(&self) -> Box<dyn WignerState> {
        match self.kind {
            MixtureKind::WernerThermal => Box::new(ThermalProduct { r: self.r }),
            MixtureKind::PhaseDiffused => Box::new(PhaseAveraged { r: self.r }),
        }
    }

    fn partner_density(&self, pt: &TwoModePoint) -> f64 {
        match self.kind {
            MixtureKind::WernerThermal => {
                thermal_marginal(pt.alpha1, self.r) * thermal_marginal(pt.alpha2, self.r)
            }
            MixtureKind::PhaseDiffused => phase_averaged_wigner(pt, self.r),
        }
    }
}

impl WignerState for MixtureSpec {
    fn density(&self, pt: &TwoModePoint) -> f64 {
        self.p * wigner_pure_2mss(pt, self.r) + (1.0 - self.p) * self.partner_density(pt)
    }

    fn label(&self) -> String {
        format!("{}(p={}, r={})", self.kind.as_str(), self.p, self.r)
    }
}

/// Single-mode marginal of the pure state: `(2/π)·exp(−2|α|²/cosh 2r)/cosh 2r`.
pub fn thermal_marginal(alpha: Complex64, r: f64) -> f64 {
    let c = (2.0 * r).cosh();
    FRAC_2_PI * (-2.0 * alpha.norm_sqr() / c).exp() / c
}

fn expect_kind(spec: &MixtureSpec, kind: MixtureKind) -> Result<()> {
    if spec.kind != kind {
        return Err(Error::InvalidParameter(format!(
            "expected a {} mixture, got {}",
            kind.as_str(),
            spec.kind.as_str()
        )));
    }
    Ok(())
}

pub fn werner_wigner(pt: &TwoModePoint, spec: &MixtureSpec) -> Result<f64> {
    expect_kind(spec, MixtureKind::WernerThermal)?;
    Ok(spec.density(pt))
}

pub fn phase_diffused_wigner(pt: &TwoModePoint, spec: &MixtureSpec) -> Result<f64> {
    expect_kind(spec, MixtureKind::PhaseDiffused)?;
    Ok(spec.density(pt))
}

/// Above this Bessel argument the density is assembled in log space.
const LOG_SPACE_SWITCH: f64 = 700.0;

/// `(4/π²)·exp(−2cosh 2r·(|α₁|²+|α₂|²))·I₀(4|α₁||α₂|sinh 2r)`.
pub fn phase_averaged_wigner(pt: &TwoModePoint, r: f64) -> f64 {
    let z = 4.0 * pt.alpha1.norm() * pt.alpha2.norm() * (2.0 * r).sinh();
    let decay = -2.0 * (2.0 * r).cosh() * pt.intensity();
    if z > LOG_SPACE_SWITCH {
        ln_bessel_i0(z).map_or(f64::NAN, |l| (LN_VACUUM_PEAK + decay + l).exp())
    } else {
        bessel_i0(z).map_or(f64::NAN, |i0| VACUUM_PEAK * decay.exp() * i0)
    }
}

/// Minimum nodes per phase for the quadrature oracle.
pub const MIN_PHASE_NODES: usize = 64;

fn phase_average_trapezoid(pt: &TwoModePoint, r: f64, nodes: usize) -> Result<f64> {
    let rule = QuadratureRule::periodic_trapezoid(nodes, 0.0, TAU)?;
    let rotate = |phi: f64| Complex64::from_polar(1.0, phi);
    let mut total = 0.0;
    for (&p1, &w1) in rule.nodes().iter().zip(rule.weights()) {
        let mut inner = 0.0;
        for (&p2, &w2) in rule.nodes().iter().zip(rule.weights()) {
            let q = TwoModePoint::new(pt.alpha1 * rotate(p1), pt.alpha2 * rotate(p2));
            inner += w2 * ln_wigner_pure_2mss(&q, r).exp();
        }
        total += w1 * inner;
    }
    Ok(total / (TAU * TAU))
}

/// Double phase average `∫∫ W_pure(α₁e^{iφ₁}, α₂e^{iφ₂}) dφ₁dφ₂/4π²` by the
/// periodic trapezoidal rule. The result is rejected unless doubling `nodes`
/// changes it by at most [`tolerances::PHASE_AVERAGE`].
pub fn phase_average_quadrature_oracle(pt: &TwoModePoint, r: f64, nodes: usize) -> Result<f64> {
    if nodes < MIN_PHASE_NODES {
        return Err(Error::InvalidParameter(format!(
            "at least {MIN_PHASE_NODES} nodes per phase required, got {nodes}"
        )));
    }
    let coarse = phase_average_trapezoid(pt, r, nodes)?;
    let fine = phase_average_trapezoid(pt, r, 2 * nodes)?;
    if !((fine - coarse).abs() <= tolerances::PHASE_AVERAGE) {
        return Err(Error::Convergence(format!(
            "phase average moved by {:e} when doubling {nodes} nodes",
            (fine - coarse).abs()
        )));
    }
    Ok(coarse)
}

/// Marginal of the pure state at `alpha` by 2-D Gauss–Legendre quadrature
/// over the second mode. The integrand is a Gaussian of width
/// `1/(2√cosh 2r)` centred at `tanh 2r·α*`; panels of that width cover
/// twelve widths on each side. Rejected unless doubling the panel count
/// changes the result by at most [`tolerances::PHASE_AVERAGE`].
pub fn marginal_quadrature_oracle(alpha: Complex64, r: f64) -> Result<f64> {
    let r = SqueezedStateParams::new(r, 0.0, 0.0)?.r();
    let c = (2.0 * r).cosh();
    let sigma = 0.5 / c.sqrt();
    let centre = alpha.conj() * (2.0 * r).tanh();
    let integrate = |panels: usize| -> Result<f64> {
        let half = 12.0 * sigma;
        let rx = QuadratureRule::uniform_composite(centre.re - half, centre.re + half, panels, 8)?;
        let ry = QuadratureRule::uniform_composite(centre.im - half, centre.im + half, panels, 8)?;
        Ok(integrate_2d(&rx, &ry, |x, y| {
            wigner_pure_2mss(&TwoModePoint::new(alpha, Complex64::new(x, y)), r)
        }))
    };
    let coarse = integrate(24)?;
    let fine = integrate(48)?;
    if !((fine - coarse).abs() <= tolerances::PHASE_AVERAGE) {
        return Err(Error::Convergence(format!(
            "marginal quadrature moved by {:e} when doubling panels",
            (fine - coarse).abs()
        )));
    }
    Ok(fine)
}

/// `B` of the mixture, with the affine split `p·B_pure + (1 − p)·B_partner`
/// checked against the direct evaluation.
pub fn mixture_bell(spec: &MixtureSpec, j: f64) -> Result<BellEvaluation> {
    let mixed = bell_combination(spec, j)?;
    let pure = bell_combination(&PureSqueezed { r: spec.r }, j)?.b;
    let partner = bell_combination(&spec.partner(), j)?.b;
    let split = spec.p * pure + (1.0 - spec.p) * partner;
    if (mixed.b - split).abs() > tolerances::BELL_ASSEMBLY {
        return Err(Error::Inconsistent(format!(
            "mixture B = {} but p·B_pure + (1−p)·B_partner = {split}",
            mixed.b
        )));
    }
    Ok(mixed)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum ViolationThreshold {
    /// `max_J B > 2` for every `p` above `p_star` (up to the bracket width).
    Threshold { p_star: f64, lower: f64, upper: f64 },
    /// Even the pure state never exceeds 2 on the grid.
    NoViolation,
}

/// Points in [`default_threshold_grid`].
pub const THRESHOLD_GRID_POINTS: usize = 200;

/// Geometric `J` grid on `[1e−4, 1]`.
pub fn default_threshold_grid() -> Vec<f64> {
    geometric_grid(1e-4, 1.0, THRESHOLD_GRID_POINTS)
}

/// Bisects on `p` for the onset of `max_J B(p, J) > 2`. Since `B` is affine in
/// `p`, its maximum over `J` is convex in `p`, and with `B ≤ 2` at `p = 0` the
/// violating set is an interval ending at 1.
pub fn violation_threshold(
    kind: MixtureKind,
    r: f64,
    j_grid: &[f64],
) -> Result<ViolationThreshold> {
    if j_grid.is_empty() {
        return Err(Error::InvalidParameter("J grid is empty".into()));
    }
    let base = MixtureSpec::new(1.0, r, kind)?;
    let pure: Vec<f64> = j_grid
        .iter()
        .map(|&j| mixture_bell(&base, j).map(|e| e.b))
        .collect::<Result<_>>()?;
    let partner: Vec<f64> = j_grid
        .iter()
        .map(|&j| mixture_bell(&MixtureSpec::new(0.0, r, kind)?, j).map(|e| e.b))
        .collect::<Result<_>>()?;
    let violates = |p: f64| {
        pure.iter()
            .zip(&partner)
            .any(|(bp, bo)| p * bp + (1.0 - p) * bo > LOCAL_BOUND)
    };
    if !violates(1.0) {
        return Ok(ViolationThreshold::NoViolation);
    }
    if violates(0.0) {
        return Err(Error::Inconsistent(format!(
            "the classical partner of {} violates the local bound",
            kind.as_str()
        )));
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > tolerances::THRESHOLD_BISECTION {
        let mid = 0.5 * (lo + hi);
        if violates(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(ViolationThreshold::Threshold {
        p_star: 0.5 * (lo + hi),
        lower: lo,
        upper: hi,
    })
}

pub fn werner_violation_threshold(r: f64, j_grid: &[f64]) -> Result<ViolationThreshold> {
    violation_threshold(MixtureKind::WernerThermal, r, j_grid)
}

/// Separability threshold `1/(1 + dim)` of the finite-dimensional Werner state.
pub fn finite_dim_werner_threshold(dim: u32) -> Result<f64> {
    if dim < 2 {
        return Err(Error::InvalidParameter(format!(
            "dimension must be >= 2, got {dim}"
        )));
    }
    Ok(1.0 / (1.0 + dim as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn pt(a1: f64, a2: f64) -> TwoModePoint {
        TwoModePoint::real(a1, a2)
    }

    #[test]
    fn marginal_values() {
        let zero = Complex64::new(0.0, 0.0);
        assert!((thermal_marginal(zero, 1.5) - 0.063_234_122_5).abs() < 1e-10);
        let a = Complex64::new(0.3, -0.4);
        assert!((thermal_marginal(a, 0.0) - FRAC_2_PI * (-0.5_f64).exp()).abs() < 1e-16);
    }

    #[test]
    fn marginal_oracle_matches_closed_form() {
        for &(a, r) in &[((0.0, 0.0), 1.5), ((0.3, -0.2), 1.0), ((0.8, 0.5), 2.0), ((0.1, 0.0), 0.0)] {
            let alpha = Complex64::new(a.0, a.1);
            let q = marginal_quadrature_oracle(alpha, r).unwrap();
            assert!((q - thermal_marginal(alpha, r)).abs() < 1e-12, "{a:?}, r = {r}");
        }
    }

    #[test]
    fn werner_limits() {
        let x = pt(0.1, -0.2);
        let w1 = werner_wigner(
            &x,
            &MixtureSpec::new(1.0, 1.5, MixtureKind::WernerThermal).unwrap(),
        )
        .unwrap();
        assert_eq!(w1, wigner_pure_2mss(&x, 1.5));
        let c = (3.0_f64).cosh();
        let w0 = werner_wigner(
            &TwoModePoint::origin(),
            &MixtureSpec::new(0.0, 1.5, MixtureKind::WernerThermal).unwrap(),
        )
        .unwrap();
        assert!((w0 - 4.0 / (PI * PI) / (c * c)).abs() < 1e-16);
        let wh = werner_wigner(
            &TwoModePoint::origin(),
            &MixtureSpec::new(0.5, 1.5, MixtureKind::WernerThermal).unwrap(),
        )
        .unwrap();
        assert!((wh - 4.0 / (PI * PI) * (0.5 + 0.5 / (c * c))).abs() < 1e-15);
    }

    #[test]
    fn wrong_kind_is_rejected() {
        let s = MixtureSpec::new(0.5, 1.0, MixtureKind::PhaseDiffused).unwrap();
        assert!(werner_wigner(&TwoModePoint::origin(), &s).is_err());
        assert!(phase_diffused_wigner(&TwoModePoint::origin(), &s).is_ok());
        assert!(MixtureSpec::new(1.2, 1.0, MixtureKind::PhaseDiffused).is_err());
        assert!(MixtureSpec::new(f64::NAN, 1.0, MixtureKind::PhaseDiffused).is_err());
    }

    #[test]
    fn phase_average_values() {
        let w = phase_averaged_wigner(&pt(0.1, 0.1), 1.5);
        assert!((w - 0.281_922_07).abs() < 1e-8, "{w}");
        let q = phase_average_quadrature_oracle(&pt(0.1, 0.1), 1.5, 128).unwrap();
        assert!((q - w).abs() < 1e-12);
        // α₁ = 0: Bessel factor is 1.
        let w = phase_averaged_wigner(&pt(0.0, 0.3), 1.0);
        assert!((w - VACUUM_PEAK * (-2.0 * (2.0_f64).cosh() * 0.09).exp()).abs() < 1e-16);
        // r = 0: vacuum product.
        let x = TwoModePoint::new(Complex64::new(0.2, 0.1), Complex64::new(-0.3, 0.4));
        let vac = VACUUM_PEAK * (-2.0 * x.intensity()).exp();
        assert!((phase_averaged_wigner(&x, 0.0) - vac).abs() < 1e-16);
        assert!((phase_average_quadrature_oracle(&x, 0.0, 64).unwrap() - vac).abs() < 1e-14);
    }

    #[test]
    fn phase_average_log_space_matches_direct_form_at_the_switch() {
        // z just above and below 700 should give continuous values.
        let r: f64 = 3.0;
        let s = (2.0 * r).sinh();
        let a = (700.0 / (4.0 * s)).sqrt();
        let below = phase_averaged_wigner(&pt(a * (1.0 - 1e-9), a), r);
        let above = phase_averaged_wigner(&pt(a * (1.0 + 1e-9), a), r);
        assert!(below > 0.0 && above > 0.0);
        assert!((below / above - 1.0).abs() < 1e-6);
    }

    #[test]
    fn oracle_rejects_too_few_nodes() {
        assert!(phase_average_quadrature_oracle(&pt(0.1, 0.1), 1.0, 32).is_err());
    }

    #[test]
    fn mixture_bell_anchors() {
        let s = MixtureSpec::new(1.0, 1.5, MixtureKind::WernerThermal).unwrap();
        assert!((mixture_bell(&s, 0.01).unwrap().b - 2.187_452_904).abs() < 1e-8);
        let s0 = MixtureSpec::new(0.0, 1.5, MixtureKind::WernerThermal).unwrap();
        assert!(default_threshold_grid()
            .iter()
            .all(|&j| mixture_bell(&s0, j).unwrap().b <= 2.0));
    }

    #[test]
    fn werner_threshold_near_point_nine() {
        match werner_violation_threshold(1.5, &default_threshold_grid()).unwrap() {
            ViolationThreshold::Threshold {
                p_star,
                lower,
                upper,
            } => {
                assert!((p_star - 0.912_63).abs() < 2e-4, "{p_star}");
                assert!(upper - lower <= 1e-4);
            }
            ViolationThreshold::NoViolation => panic!("expected a threshold"),
        }
        assert_eq!(
            werner_violation_threshold(0.0, &default_threshold_grid()).unwrap(),
            ViolationThreshold::NoViolation
        );
    }

    #[test]
    fn phase_diffused_threshold_vanishes_with_the_grid_floor() {
        // Onset scales with the smallest J scanned: p* ≈ J_min·|B̄''|/(2·4sinh 2r).
        let p_star = |floor: f64| {
            match violation_threshold(MixtureKind::PhaseDiffused, 1.5, &geometric_grid(floor, 1.0, 200))
                .unwrap()
            {
                ViolationThreshold::Threshold { p_star, .. } => p_star,
                ViolationThreshold::NoViolation => panic!("expected a threshold"),
            }
        };
        let coarse = p_star(1e-4);
        let fine = p_star(1e-6);
        assert!(coarse < 5e-3, "{coarse}");
        assert!(fine < 1e-4, "{fine}");
    }

    #[test]
    fn finite_dimensional_thresholds() {
        assert!((finite_dim_werner_threshold(2).unwrap() - 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(finite_dim_werner_threshold(3).unwrap(), 0.25);
        assert!(finite_dim_werner_threshold(1).is_err());
        assert!(finite_dim_werner_threshold(1_000_000).unwrap() < 1e-5);
    }
}
