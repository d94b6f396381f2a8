//! Exact time evolution of the diffused two-mode squeezed state.
//!
//! The Wigner function obeys a linear Fokker–Planck equation with constant
//! drift `A` and diffusion `D` (a quantum Ornstein–Uhlenbeck process). Three
//! independent routes produce the state at time `t`:
//!
//! * [`evolve_coefficients`]: the closed-form `(c1, c2, h)`;
//! * [`propagate_green`]: Green-function propagation `Σ(t) = e^{At}Σ(0)e^{Aᵀt} + Q(t)`
//!   with `Q` integrated analytically in the drift eigenbasis;
//! * [`covariance_ode_oracle`]: RK4 integration of the moment equation
//!   `dΣ/dt = AΣ + ΣAᵀ + D`.
//!
//! All three are available by name through [`SolverRegistry`].

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::linalg::{sym4_eigenvalues, Mat4};
use crate::numerics::{one_minus_exp_over, rk4_lyapunov};
use crate::phase_space::{GaussianForm, SqueezedStateParams};
use crate::tolerances;

/// Vacuum covariance of the Wigner distribution in real coordinates.
pub const VACUUM_COVARIANCE: Mat4 = Mat4::diag([0.25; 4]);

/// Mode-coupling pattern: `+1` at (x1,x3), `−1` at (x2,x4). Squares to the
/// identity, so `A = −γ/2·I + κ·S`.
const COUPLING: Mat4 = Mat4([
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, -1.0],
    [1.0, 0.0, 0.0, 0.0],
    [0.0, -1.0, 0.0, 0.0],
]);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriftDiffusionPair {
    pub drift: Mat4,
    pub diffusion: Mat4,
}

impl DriftDiffusionPair {
    pub fn new(kappa: f64, gamma: f64, nbar: f64) -> Self {
        Self {
            drift: Mat4::scaled_identity(-0.5 * gamma) + COUPLING * kappa,
            diffusion: Mat4::scaled_identity(0.25 * gamma * (2.0 * nbar + 1.0)),
        }
    }
}

fn check_rates(kappa: f64, gamma: f64, nbar: f64) -> Result<()> {
    for (name, v) in [("kappa", kappa), ("gamma", gamma), ("nbar", nbar)] {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "{name} must be finite and >= 0, got {v}"
            )));
        }
    }
    Ok(())
}

/// Closed-form coefficients of the diffused state started from the vacuum.
pub fn evolve_coefficients(params: &SqueezedStateParams) -> GaussianForm {
    try_evolve_coefficients(params).expect("coefficients are finite for validated parameters")
}

/// Fallible form of [`evolve_coefficients`] for callers that build
/// parameters without validation.
///
/// With `p₁ = d + 2r`, `p₂ = d − 2r`, `k = 2n̄ + 1` and `f(p) = (1 − e^{−p})/p`:
///
/// ```text
/// c1 = 2(e^{−p₂} + e^{−p₁}) + k(p₁+p₂)(f(p₁) + f(p₂))
/// c2 = −2(e^{−p₂} − e^{−p₁}) + k(p₁+p₂)(f(p₁) − f(p₂))
/// h  = [e^{−p₁} + k(p₁+p₂)/2·f(p₁)]·[e^{−p₂} + k(p₁+p₂)/2·f(p₂)]
/// ```
///
/// evaluated through the exact recombinations `c1 + c2 = 4·e^{−p₁} + 2k(p₁+p₂)f(p₁)`
/// and `c1 − c2 = 4·e^{−p₂} + 2k(p₁+p₂)f(p₂)`, so that `h = (c1+c2)(c1−c2)/16`.
pub fn try_evolve_coefficients(params: &SqueezedStateParams) -> Result<GaussianForm> {
    let (p1, p2) = (params.p1(), params.p2());
    let k = 2.0 * params.nbar() + 1.0;
    let half_sum = 0.5 * (p1 + p2);
    let factor1 = (-p1).exp() + k * half_sum * one_minus_exp_over(p1);
    let factor2 = (-p2).exp() + k * half_sum * one_minus_exp_over(p2);
    GaussianForm::from_principal(4.0 * factor1, 4.0 * factor2, factor1 * factor2)
}

/// Drift eigenvalues `−(γ+2κ)/2` (twice) and `−(γ−2κ)/2` (twice), ascending.
pub fn drift_eigenvalues(gamma: f64, kappa: f64) -> [f64; 4] {
    let fast = -0.5 * (gamma + 2.0 * kappa);
    let slow = -0.5 * (gamma - 2.0 * kappa);
    [fast, fast, slow, slow]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SteadyStateClass {
    SqueezedThermal,
    Thermal,
    None,
    BoundaryUndefined,
}

impl SteadyStateClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            SteadyStateClass::SqueezedThermal => "squeezed-thermal",
            SteadyStateClass::Thermal => "thermal",
            SteadyStateClass::None => "none",
            SteadyStateClass::BoundaryUndefined => "boundary-undefined",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SteadyStateReport {
    pub exists: bool,
    pub classification: SteadyStateClass,
    pub limit_form: Option<GaussianForm>,
}

/// Long-time behaviour. A stationary state exists iff every drift eigenvalue
/// is negative, i.e. `γ > 2κ`; it is then the squeezed thermal state
/// `exp[−(2/(2n̄+1))(|α₁|²+|α₂|² − (2κ/γ)(α₁α₂ + c.c.))]` with normalization
/// `(π/2)⁻²(2n̄+1)⁻²(1 − (2κ/γ)²)`.
pub fn steady_state(gamma: f64, kappa: f64, nbar: f64) -> Result<SteadyStateReport> {
    check_rates(kappa, gamma, nbar)?;
    let gap = gamma - 2.0 * kappa;
    let scale = gamma.max(2.0 * kappa);
    if gap.abs() <= 1e-12 * scale || scale == 0.0 {
        return Ok(SteadyStateReport {
            exists: false,
            classification: SteadyStateClass::BoundaryUndefined,
            limit_form: None,
        });
    }
    if gap < 0.0 {
        return Ok(SteadyStateReport {
            exists: false,
            classification: SteadyStateClass::None,
            limit_form: None,
        });
    }
    let k = 2.0 * nbar + 1.0;
    let q = 2.0 * kappa / gamma;
    // Matching −(c1 I + c2 pair)/(2h) = −(2/k)(I − q·pair) and 1/h = (1 − q²)/k²
    // gives c1 = 4k/(1−q²), c2 = −4kq/(1−q²), hence c1 ± c2 = 4k/(1 ± q).
    let form = GaussianForm::from_principal(
        4.0 * k / (1.0 + q),
        4.0 * k / (1.0 - q),
        k * k / ((1.0 - q) * (1.0 + q)),
    )?;
    Ok(SteadyStateReport {
        exists: true,
        classification: if kappa == 0.0 {
            SteadyStateClass::Thermal
        } else {
            SteadyStateClass::SqueezedThermal
        },
        limit_form: Some(form),
    })
}

/// Minimum RK4 step count accepted by [`covariance_ode_oracle`].
pub const MIN_ODE_STEPS: usize = 1000;

/// Integrates the moment equation from the vacuum `Σ(0) = I/4` and returns
/// `Σ(t)`. The step-halving error estimate must fall below
/// [`tolerances::ODE_ORACLE`] or the run is reported as a convergence
/// failure.
pub fn covariance_ode_oracle(
    kappa: f64,
    gamma: f64,
    nbar: f64,
    t: f64,
    steps: usize,
) -> Result<Mat4> {
    check_rates(kappa, gamma, nbar)?;
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "t must be finite and >= 0, got {t}"
        )));
    }
    if steps < MIN_ODE_STEPS {
        return Err(Error::Convergence(format!(
            "{steps} steps requested, at least {MIN_ODE_STEPS} required"
        )));
    }
    let DriftDiffusionPair { drift, diffusion } = DriftDiffusionPair::new(kappa, gamma, nbar);
    let fine = rk4_lyapunov(&drift, &diffusion, &VACUUM_COVARIANCE, t, steps);
    let coarse = rk4_lyapunov(&drift, &diffusion, &VACUUM_COVARIANCE, t, steps / 2);
    // Richardson estimate of the fine-grid error for a fourth-order scheme.
    let finite = |m: &Mat4| m.0.iter().flatten().all(|v| v.is_finite());
    let err = fine.max_abs_diff(&coarse) / 15.0;
    if !finite(&fine)
        || !finite(&coarse)
        || !err.is_finite()
        || err > tolerances::ODE_ORACLE * fine.max_abs().max(1.0)
    {
        return Err(Error::Convergence(format!(
            "estimated RK4 error {err:e} with {steps} steps exceeds {:e}",
            tolerances::ODE_ORACLE
        )));
    }
    Ok(fine)
}

/// `e^{At}` for the model drift, using `S² = I`:
/// `e^{At} = e^{−γt/2}(cosh(κt)·I + sinh(κt)·S)`.
pub fn drift_propagator(kappa: f64, gamma: f64, t: f64) -> Mat4 {
    let decay = (-0.5 * gamma * t).exp();
    (Mat4::scaled_identity((kappa * t).cosh()) + COUPLING * (kappa * t).sinh()) * decay
}

/// `Q(t) = ∫₀ᵗ e^{As} D e^{Aᵀs} ds`, integrated on the projectors `(I ± S)/2`
/// onto the two doubly degenerate drift eigenspaces.
pub fn accumulated_diffusion(kappa: f64, gamma: f64, nbar: f64, t: f64) -> Mat4 {
    let d0t = 0.25 * gamma * (2.0 * nbar + 1.0) * t;
    let slow = one_minus_exp_over((gamma - 2.0 * kappa) * t);
    let fast = one_minus_exp_over((gamma + 2.0 * kappa) * t);
    let plus = Mat4::identity() + COUPLING;
    let minus = Mat4::identity() - COUPLING;
    (plus * slow + minus * fast) * (0.5 * d0t)
}

/// Green-function propagation of a Gaussian covariance.
pub fn propagate_covariance(
    initial: &Mat4,
    kappa: f64,
    gamma: f64,
    nbar: f64,
    t: f64,
) -> Result<Mat4> {
    check_rates(kappa, gamma, nbar)?;
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "t must be finite and >= 0, got {t}"
        )));
    }
    if sym4_eigenvalues(initial)?[0] <= 0.0 {
        return Err(Error::NotPositiveDefinite);
    }
    let e = drift_propagator(kappa, gamma, t);
    Ok((e.congruence(initial) + accumulated_diffusion(kappa, gamma, nbar, t)).symmetrized())
}

/// Green-function propagation, returned as coefficients. The initial
/// covariance must have the model's coupling pattern (vacuum and thermal
/// states do).
pub fn propagate_green(
    initial: &Mat4,
    kappa: f64,
    gamma: f64,
    nbar: f64,
    t: f64,
) -> Result<GaussianForm> {
    GaussianForm::from_covariance(&propagate_covariance(initial, kappa, gamma, nbar, t)?)
}

/// A route from state parameters to the Gaussian coefficients.
pub trait CoefficientSolver: Send + Sync {
    fn name(&self) -> &'static str;
    fn solve(&self, params: &SqueezedStateParams) -> Result<GaussianForm>;
}

/// The literal closed-form coefficients.
pub struct ClosedForm;

impl CoefficientSolver for ClosedForm {
    fn name(&self) -> &'static str {
        "closed-form"
    }

    fn solve(&self, params: &SqueezedStateParams) -> Result<GaussianForm> {
        try_evolve_coefficients(params)
    }
}

/// Green-function propagation from the vacuum at unit time (`κ = r`, `γ = d`).
pub struct GreenFunction;

impl CoefficientSolver for GreenFunction {
    fn name(&self) -> &'static str {
        "green"
    }

    fn solve(&self, params: &SqueezedStateParams) -> Result<GaussianForm> {
        propagate_green(
            &VACUUM_COVARIANCE,
            params.r(),
            params.d(),
            params.nbar(),
            1.0,
        )
    }
}

/// RK4 moment integration from the vacuum at unit time.
pub struct MomentOde {
    pub steps: usize,
}

impl Default for MomentOde {
    fn default() -> Self {
        Self { steps: 10_000 }
    }
}

impl CoefficientSolver for MomentOde {
    fn name(&self) -> &'static str {
        "ode"
    }

    fn solve(&self, params: &SqueezedStateParams) -> Result<GaussianForm> {
        let sigma = covariance_ode_oracle(params.r(), params.d(), params.nbar(), 1.0, self.steps)?;
        GaussianForm::from_covariance(&sigma)
    }
}

/// Coefficient solvers selectable by name.
pub struct SolverRegistry {
    solvers: BTreeMap<&'static str, Box<dyn CoefficientSolver>>,
}

impl SolverRegistry {
    pub fn empty() -> Self {
        Self {
            solvers: BTreeMap::new(),
        }
    }

    pub fn with_builtins() -> Self {
        let mut reg = Self::empty();
        reg.register(Box::new(ClosedForm));
        reg.register(Box::new(GreenFunction));
        reg.register(Box::new(MomentOde::default()));
        reg
    }

    pub fn register(&mut self, solver: Box<dyn CoefficientSolver>) {
        self.solvers.insert(solver.name(), solver);
    }

    pub fn get(&self, name: &str) -> Result<&dyn CoefficientSolver> {
        self.solvers
            .get(name)
            .map(|s| s.as_ref())
            .ok_or_else(|| Error::UnknownState(format!("coefficient solver '{name}'")))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.solvers.keys().copied()
    }
}

impl Default for SolverRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}
