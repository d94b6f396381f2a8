//! Named tolerances. Tests and reports refer to these by name rather than
//! repeating literals.

use serde::Serialize;

/// Pattern check for characteristic-function covariance matrices.
pub const PATTERN: f64 = 1e-9;
/// Relative residual below which a Gaussian form counts as pure.
pub const PURITY: f64 = 1e-10;
/// Agreement between the closed-form and numeric separability eigenvalues,
/// relative to `max(1, |e|)`.
pub const EIGEN_ROUTES: f64 = 1e-9;
/// Separability margins with magnitude below this (relative to the matrix
/// scale) are rounding noise on the boundary and count as zero.
pub const SEPARABILITY_MARGIN: f64 = 1e-12;
/// Moment-ODE oracle versus closed-form covariance.
pub const ODE_ORACLE: f64 = 1e-6;
/// Green-function propagation versus closed-form coefficients.
pub const GREEN_PROPAGATION: f64 = 1e-10;
/// Four-point Bell assembly versus closed form, and mixture linearity.
pub const BELL_ASSEMBLY: f64 = 1e-12;
/// Simplex diameter at which the Bell maximizer stops.
pub const SIMPLEX_DIAMETER: f64 = 1e-6;
/// Phase-average quadrature versus the Bessel closed form.
pub const PHASE_AVERAGE: f64 = 1e-8;
/// Bisection width for the Werner violation threshold.
pub const THRESHOLD_BISECTION: f64 = 1e-4;
/// Quadrature normalization of Wigner functions.
pub const NORMALIZATION: f64 = 1e-6;
/// Symmetry check for 4×4 input matrices.
pub const SYMMETRY: f64 = 1e-12;

/// All tolerances in one record, embedded in every report.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub pattern: f64,
    pub purity: f64,
    pub eigen_routes: f64,
    pub separability_margin: f64,
    pub ode_oracle: f64,
    pub green_propagation: f64,
    pub bell_assembly: f64,
    pub simplex_diameter: f64,
    pub phase_average: f64,
    pub threshold_bisection: f64,
    pub normalization: f64,
    pub symmetry: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        pattern: PATTERN,
        purity: PURITY,
        eigen_routes: EIGEN_ROUTES,
        separability_margin: SEPARABILITY_MARGIN,
        ode_oracle: ODE_ORACLE,
        green_propagation: GREEN_PROPAGATION,
        bell_assembly: BELL_ASSEMBLY,
        simplex_diameter: SIMPLEX_DIAMETER,
        phase_average: PHASE_AVERAGE,
        threshold_bisection: THRESHOLD_BISECTION,
        normalization: NORMALIZATION,
        symmetry: SYMMETRY,
    };

    pub fn entries(&self) -> [(&'static str, f64); 12] {
        [
            ("pattern", self.pattern),
            ("purity", self.purity),
            ("eigen_routes", self.eigen_routes),
            ("separability_margin", self.separability_margin),
            ("ode_oracle", self.ode_oracle),
            ("green_propagation", self.green_propagation),
            ("bell_assembly", self.bell_assembly),
            ("simplex_diameter", self.simplex_diameter),
            ("phase_average", self.phase_average),
            ("threshold_bisection", self.threshold_bisection),
            ("normalization", self.normalization),
            ("symmetry", self.symmetry),
        ]
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
