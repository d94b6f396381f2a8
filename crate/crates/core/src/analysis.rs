//! Purity and separability of the diffused Gaussian states.
//!
//! A two-mode Gaussian state is separable iff `V − I/2 ≥ 0`, where `V` is the
//! characteristic-function covariance. For this model `V − I/2` has two
//! doubly degenerate eigenvalues
//!
//! ```text
//! e₁,₂ = (1 − e^{−p₂})(d·n̄ + r)/p₂,    e₃,₄ = (1 − e^{−p₁})(d·n̄ − r)/p₁
//! ```
//!
//! so the state is entangled iff `r > d·n̄`. Verdicts come from the numeric
//! eigensolve; the closed forms are checked against it on every call.

use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::evolve_coefficients;
use crate::error::{Error, Result};
use crate::numerics::linalg::{sym4_eigenvalues, Mat4};
use crate::numerics::one_minus_exp_over;
use crate::phase_space::{v_from_w, w_matrix_from_form, GaussianForm, SqueezedStateParams};
use crate::tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PurityCheck {
    pub pure: bool,
    /// `|c1² − c2² − 16h²| / 16h²`
    pub residual: f64,
}

/// Projector test `c1² − c2² = 16h²`, equivalently `√det W = 4`.
pub fn is_pure(form: &GaussianForm) -> PurityCheck {
    let h2 = 16.0 * form.h() * form.h();
    let residual = (form.c_plus() * form.c_minus() - h2).abs() / h2;
    PurityCheck {
        pure: residual < tolerances::PURITY,
        residual,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeparabilityReport {
    /// Numeric eigenvalues of `V − I/2`, ascending.
    pub eigenvalues: [f64; 4],
    /// Closed-form `(e₁,₂, e₃,₄)`.
    pub closed_form: (f64, f64),
    /// Smallest eigenvalue of `V − I/2`.
    pub margin: f64,
    pub separable: bool,
}

/// Closed-form eigenvalues `(e₁,₂, e₃,₄)` of `V − I/2`.
pub fn closed_form_eigenvalues(params: &SqueezedStateParams) -> (f64, f64) {
    let dn = params.d() * params.nbar();
    (
        one_minus_exp_over(params.p2()) * (dn + params.r()),
        one_minus_exp_over(params.p1()) * (dn - params.r()),
    )
}

/// `V − I/2` for the state at `params`, through the W → V pipeline.
pub fn shifted_v_matrix(params: &SqueezedStateParams) -> Result<Mat4> {
    let form = evolve_coefficients(params);
    let v = v_from_w(&w_matrix_from_form(&form))?;
    Ok(*v.entries() - Mat4::scaled_identity(0.5))
}

pub fn separability_eigenvalues(params: &SqueezedStateParams) -> Result<SeparabilityReport> {
    let shifted = shifted_v_matrix(params)?;
    let eigenvalues = sym4_eigenvalues(&shifted)?;
    let (e12, e34) = closed_form_eigenvalues(params);

    let mut closed = [e12, e12, e34, e34];
    closed.sort_by(f64::total_cmp);
    for (num, cf) in eigenvalues.iter().zip(closed) {
        if (num - cf).abs() > tolerances::EIGEN_ROUTES * cf.abs().max(1.0) {
            return Err(Error::Inconsistent(format!(
                "numeric eigenvalue {num} disagrees with closed form {cf} at r = {}, d = {}, nbar = {}",
                params.r(),
                params.d(),
                params.nbar()
            )));
        }
    }

    let margin = eigenvalues[0];
    let noise = tolerances::SEPARABILITY_MARGIN * shifted.max_abs().max(1.0);
    Ok(SeparabilityReport {
        eigenvalues,
        closed_form: (e12, e34),
        margin,
        separable: margin >= -noise,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparabilityMap {
    pub r: f64,
    pub d_grid: Vec<f64>,
    pub nbar_grid: Vec<f64>,
    /// `separable[i][j]` for `d_grid[i]`, `nbar_grid[j]`.
    pub separable: Vec<Vec<bool>>,
    pub margins: Vec<Vec<f64>>,
    /// Per `d`, the interpolated `n̄` where the row turns separable, if the
    /// row changes verdict inside the grid.
    pub boundary: Vec<Option<f64>>,
}

fn check_grid(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter(format!("{name} grid is empty")));
    }
    if grid.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::InvalidParameter(format!(
            "{name} grid must be finite and >= 0"
        )));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(format!(
            "{name} grid must be ascending"
        )));
    }
    Ok(())
}

/// Separability verdicts on a `(d, n̄)` grid at fixed squeezing.
pub fn separability_map(r: f64, d_grid: &[f64], nbar_grid: &[f64]) -> Result<SeparabilityMap> {
    check_grid("d", d_grid)?;
    check_grid("nbar", nbar_grid)?;
    let rows: Vec<Vec<SeparabilityReport>> = d_grid
        .par_iter()
        .map(|&d| {
            nbar_grid
                .iter()
                .map(|&n| separability_eigenvalues(&SqueezedStateParams::new(r, d, n)?))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let boundary = rows
        .iter()
        .map(|row| {
            row.windows(2)
                .zip(nbar_grid.windows(2))
                .find_map(|(cells, n)| {
                    if cells[0].separable || !cells[1].separable {
                        return None;
                    }
                    let (m0, m1) = (cells[0].margin, cells[1].margin);
                    Some(if m1 > m0 {
                        n[0] + (n[1] - n[0]) * (-m0) / (m1 - m0)
                    } else {
                        n[1]
                    })
                })
        })
        .collect();

    Ok(SeparabilityMap {
        r,
        d_grid: d_grid.to_vec(),
        nbar_grid: nbar_grid.to_vec(),
        separable: rows
            .iter()
            .map(|row| row.iter().map(|c| c.separable).collect())
            .collect(),
        margins: rows
            .iter()
            .map(|row| row.iter().map(|c| c.margin).collect())
            .collect(),
        boundary,
    })
}
