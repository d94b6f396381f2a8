//! Phase-space dynamics of two-mode squeezed light with internal noise:
//! Gaussian Wigner coefficients under diffusion, purity and separability,
//! displaced-parity Bell tests, and Werner-type and phase-diffused mixtures.
//!
//! Evaluators share the [`WignerState`] trait and can be built by name from a
//! [`StateRegistry`]; coefficient routes are likewise registered in a
//! [`SolverRegistry`].

pub mod analysis;
pub mod bell;
pub mod dynamics;
pub mod error;
pub mod mixtures;
pub mod normalization;
pub mod numerics;
pub mod phase_space;
pub mod states;
pub mod tolerances;

pub use analysis::{
    is_pure, separability_eigenvalues, separability_map, PurityCheck, SeparabilityMap,
    SeparabilityReport,
};
pub use bell::{
    bell_combination, bell_surface, maximize_bell, parity_correlation, small_j_slope,
    BellEvaluation, BellMaximum, BellParam, BellPoint, BellSettings, MaximizeRequest, ParamBounds,
};
pub use dynamics::{
    evolve_coefficients, steady_state, CoefficientSolver, SolverRegistry, SteadyStateClass,
    SteadyStateReport,
};
pub use error::{Error, Result};
pub use mixtures::{
    finite_dim_werner_threshold, mixture_bell, phase_averaged_wigner, thermal_marginal,
    werner_violation_threshold, werner_wigner, MixtureKind, MixtureSpec, ViolationThreshold,
};
pub use phase_space::{GaussianForm, SqueezedStateParams, TwoModePoint};
pub use states::{StateConfig, StateRegistry, WignerState};
