//! Self-contained numeric kernel: special functions, ODE integration,
//! quadrature and 4×4 linear algebra.

pub mod bessel;
pub mod linalg;
pub mod ode;
pub mod quadrature;
pub mod series;

pub use bessel::{bessel_i0, bessel_i0_asymptotic, bessel_i0_series, ln_bessel_i0};
pub use linalg::{matrix_exp4, sym4_eigenvalues, Mat4};
pub use ode::rk4_lyapunov;
pub use quadrature::{Domain, QuadratureRule};
pub use series::one_minus_exp_over;
