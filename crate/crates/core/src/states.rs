//! Wigner-function evaluators behind a common trait, plus a by-name registry.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::dynamics::{evolve_coefficients, steady_state};
use crate::error::{Error, Result};
use crate::mixtures::{phase_averaged_wigner, thermal_marginal, MixtureKind, MixtureSpec};
use crate::phase_space::{wigner_pure_2mss, GaussianForm, SqueezedStateParams, TwoModePoint};

/// A normalized two-mode Wigner function. Implementations are pure and may be
/// evaluated concurrently.
pub trait WignerState: Send + Sync {
    fn density(&self, pt: &TwoModePoint) -> f64;
    /// Short human-readable descriptor, e.g. `diffused(r=1.5, d=1, nbar=0)`.
    fn label(&self) -> String;
}

impl<S: WignerState + ?Sized> WignerState for &S {
    fn density(&self, pt: &TwoModePoint) -> f64 {
        (**self).density(pt)
    }

    fn label(&self) -> String {
        (**self).label()
    }
}

impl<S: WignerState + ?Sized> WignerState for Box<S> {
    fn density(&self, pt: &TwoModePoint) -> f64 {
        (**self).density(pt)
    }

    fn label(&self) -> String {
        (**self).label()
    }
}

/// The pure two-mode squeezed vacuum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureSqueezed {
    pub r: f64,
}

impl WignerState for PureSqueezed {
    fn density(&self, pt: &TwoModePoint) -> f64 {
        wigner_pure_2mss(pt, self.r)
    }

    fn label(&self) -> String {
        format!("pure(r={})", self.r)
    }
}

/// Any state of the Gaussian family, tagged with where it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianState {
    pub form: GaussianForm,
    pub label: String,
}

impl GaussianState {
    pub fn diffused(params: &SqueezedStateParams) -> Self {
        Self {
            form: evolve_coefficients(params),
            label: format!(
                "diffused(r={}, d={}, nbar={})",
                params.r(),
                params.d(),
                params.nbar()
            ),
        }
    }
}

impl WignerState for GaussianState {
    fn density(&self, pt: &TwoModePoint) -> f64 {
        self.form.density(pt)
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

/// Product of the two single-mode marginals of the pure state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalProduct {
    pub r: f64,
}

impl WignerState for ThermalProduct {
    fn density(&self, pt: &TwoModePoint) -> f64 {
        thermal_marginal(pt.alpha1, self.r) * thermal_marginal(pt.alpha2, self.r)
    }

    fn label(&self) -> String {
        format!("thermal-product(r={})", self.r)
    }
}

/// The pure state with both phases uniformly averaged.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseAveraged {
    pub r: f64,
}

impl WignerState for PhaseAveraged {
    fn density(&self, pt: &TwoModePoint) -> f64 {
        phase_averaged_wigner(pt, self.r)
    }

    fn label(&self) -> String {
        format!("phase-averaged(r={})", self.r)
    }
}

/// Wraps a closure as a state; handy for tests and ad-hoc evaluators.
pub struct FnState<F> {
    name: String,
    f: F,
}

impl<F: Fn(&TwoModePoint) -> f64 + Send + Sync> FnState<F> {
    pub fn new(name: impl Into<String>, f: F) -> Self {
        Self {
            name: name.into(),
            f,
        }
    }
}

impl<F: Fn(&TwoModePoint) -> f64 + Send + Sync> WignerState for FnState<F> {
    fn density(&self, pt: &TwoModePoint) -> f64 {
        (self.f)(pt)
    }

    fn label(&self) -> String {
        self.name.clone()
    }
}

/// Parameters a registry builder may draw on; each builder reads only the
/// fields it needs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StateConfig {
    pub r: f64,
    pub d: f64,
    pub nbar: f64,
    pub p: f64,
    pub kappa: f64,
    pub gamma: f64,
}

impl Default for StateConfig {
    fn default() -> Self {
        Self {
            r: 0.0,
            d: 0.0,
            nbar: 0.0,
            p: 1.0,
            kappa: 0.0,
            gamma: 0.0,
        }
    }
}

pub type StateBuilder = fn(&StateConfig) -> Result<Box<dyn WignerState>>;

struct Entry {
    description: &'static str,
    build: StateBuilder,
}

/// Wigner evaluators selectable by name.
pub struct StateRegistry {
    entries: BTreeMap<&'static str, Entry>,
}

fn squeezing(cfg: &StateConfig) -> Result<f64> {
    Ok(SqueezedStateParams::new(cfg.r, 0.0, 0.0)?.r())
}

fn build_pure(cfg: &StateConfig) -> Result<Box<dyn WignerState>> {
    Ok(Box::new(PureSqueezed { r: squeezing(cfg)? }))
}

fn build_diffused(cfg: &StateConfig) -> Result<Box<dyn WignerState>> {
    let params = SqueezedStateParams::new(cfg.r, cfg.d, cfg.nbar)?;
    Ok(Box::new(GaussianState::diffused(&params)))
}

fn build_steady(cfg: &StateConfig) -> Result<Box<dyn WignerState>> {
    let report = steady_state(cfg.gamma, cfg.kappa, cfg.nbar)?;
    let form = report.limit_form.ok_or_else(|| {
        Error::Domain(format!(
            "no stationary state for gamma = {}, kappa = {} ({})",
            cfg.gamma,
            cfg.kappa,
            report.classification.as_str()
        ))
    })?;
    Ok(Box::new(GaussianState {
        form,
        label: format!(
            "steady(gamma={}, kappa={}, nbar={})",
            cfg.gamma, cfg.kappa, cfg.nbar
        ),
    }))
}

fn build_thermal_product(cfg: &StateConfig) -> Result<Box<dyn WignerState>> {
    Ok(Box::new(ThermalProduct { r: squeezing(cfg)? }))
}

fn build_phase_averaged(cfg: &StateConfig) -> Result<Box<dyn WignerState>> {
    Ok(Box::new(PhaseAveraged { r: squeezing(cfg)? }))
}

fn build_werner(cfg: &StateConfig) -> Result<Box<dyn WignerState>> {
    Ok(Box::new(MixtureSpec::new(
        cfg.p,
        cfg.r,
        MixtureKind::WernerThermal,
    )?))
}

fn build_phase_diffused(cfg: &StateConfig) -> Result<Box<dyn WignerState>> {
    Ok(Box::new(MixtureSpec::new(
        cfg.p,
        cfg.r,
        MixtureKind::PhaseDiffused,
    )?))
}

impl StateRegistry {
    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut reg = Self::empty();
        reg.register("pure", "two-mode squeezed vacuum (r)", build_pure);
        reg.register(
            "diffused",
            "squeezed state after internal diffusion (r, d, nbar)",
            build_diffused,
        );
        reg.register(
            "steady",
            "long-time squeezed thermal state (gamma, kappa, nbar)",
            build_steady,
        );
        reg.register(
            "thermal-product",
            "product of the single-mode marginals (r)",
            build_thermal_product,
        );
        reg.register(
            "phase-averaged",
            "pure state with both phases averaged (r)",
            build_phase_averaged,
        );
        reg.register(
            "werner",
            "p·pure + (1−p)·thermal product (p, r)",
            build_werner,
        );
        reg.register(
            "phase-diffused",
            "p·pure + (1−p)·phase-averaged (p, r)",
            build_phase_diffused,
        );
        reg
    }

    pub fn register(&mut self, name: &'static str, description: &'static str, build: StateBuilder) {
        self.entries.insert(name, Entry { description, build });
    }

    pub fn build(&self, name: &str, cfg: &StateConfig) -> Result<Box<dyn WignerState>> {
        let entry = self
            .entries
            .get(name)
            .ok_or_else(|| Error::UnknownState(name.to_string()))?;
        (entry.build)(cfg)
    }

    /// `(name, description)` pairs in name order.
    pub fn list(&self) -> impl Iterator<Item = (&'static str, &'static str)> + '_ {
        self.entries.iter().map(|(k, e)| (*k, e.description))
    }
}

impl Default for StateRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

impl fmt::Debug for StateRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.keys()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn builtins_are_listed_in_order() {
        let names: Vec<_> = StateRegistry::with_builtins()
            .list()
            .map(|(n, _)| n)
            .collect();
        assert_eq!(
            names,
            [
                "diffused",
                "phase-averaged",
                "phase-diffused",
                "pure",
                "steady",
                "thermal-product",
                "werner"
            ]
        );
    }

    #[test]
    fn unknown_name_is_an_error() {
        let reg = StateRegistry::with_builtins();
        assert!(matches!(
            reg.build("squashed", &StateConfig::default()),
            Err(Error::UnknownState(_))
        ));
    }

    #[test]
    fn steady_without_limit_is_a_domain_error() {
        let reg = StateRegistry::with_builtins();
        let cfg = StateConfig {
            gamma: 2.0,
            kappa: 1.0,
            ..Default::default()
        };
        assert!(matches!(reg.build("steady", &cfg), Err(Error::Domain(_))));
    }

    #[test]
    fn every_builtin_peaks_at_vacuum_value_for_r0() {
        let reg = StateRegistry::with_builtins();
        let cfg = StateConfig {
            gamma: 1.0,
            p: 0.3,
            ..Default::default()
        };
        for (name, _) in reg.list() {
            let s = reg.build(name, &cfg).unwrap();
            let w = s.density(&TwoModePoint::origin());
            assert!((w - 4.0 / (PI * PI)).abs() < 1e-15, "{name}: {w}");
        }
    }

    #[test]
    fn closures_wrap_as_states() {
        let s = FnState::new("flat", |_: &TwoModePoint| 0.5);
        assert_eq!(s.density(&TwoModePoint::origin()), 0.5);
        assert_eq!(s.label(), "flat");
    }
}
