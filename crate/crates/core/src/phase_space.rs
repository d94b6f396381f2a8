//! Phase-space points, state parameters, Gaussian Wigner functions and the
//! two covariance-matrix conventions.
//!
//! Real coordinates are ordered `(x1, x2, x3, x4)` with `α₁ = x1 + i x2` and
//! `α₂ = x3 + i x4`. The W and V matrices act on the complex four-vector
//! `(α₁, α₁*, α₂, α₂*)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::linalg::{sym4_eigenvalues, Mat4};
use crate::tolerances;

/// `ln(4/π²)`, the log of the two-mode vacuum peak.
pub const LN_VACUUM_PEAK: f64 = -0.903_165_410_578_909_6;

/// `4/π²`
pub const VACUUM_PEAK: f64 = 4.0 / (PI * PI);

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct TwoModePoint {
    pub alpha1: Complex64,
    pub alpha2: Complex64,
}

impl TwoModePoint {
    pub fn new(alpha1: Complex64, alpha2: Complex64) -> Self {
        Self { alpha1, alpha2 }
    }

    /// Both amplitudes real.
    pub fn real(a1: f64, a2: f64) -> Self {
        Self::new(Complex64::new(a1, 0.0), Complex64::new(a2, 0.0))
    }

    pub fn origin() -> Self {
        Self::default()
    }

    pub fn from_real(x: [f64; 4]) -> Self {
        Self::new(Complex64::new(x[0], x[1]), Complex64::new(x[2], x[3]))
    }

    pub fn to_real(&self) -> [f64; 4] {
        [
            self.alpha1.re,
            self.alpha1.im,
            self.alpha2.re,
            self.alpha2.im,
        ]
    }

    /// `|α₁|² + |α₂|²`
    pub fn intensity(&self) -> f64 {
        self.alpha1.norm_sqr() + self.alpha2.norm_sqr()
    }

    /// `α₁α₂ + α₁*α₂*`
    pub fn pair_term(&self) -> f64 {
        2.0 * (self.alpha1 * self.alpha2).re
    }

    pub fn conj(&self) -> Self {
        Self::new(self.alpha1.conj(), self.alpha2.conj())
    }

    pub fn swapped(&self) -> Self {
        Self::new(self.alpha2, self.alpha1)
    }
}

/// Largest accepted squeezing; keeps `e^{2r}` factors well inside `f64`.
pub const MAX_SQUEEZING: f64 = 300.0;

/// Squeezing `r = κt`, diffusion `d = γt` and reservoir photon number `n̄`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SqueezedStateParams {
    r: f64,
    d: f64,
    nbar: f64,
}

impl SqueezedStateParams {
    pub fn new(r: f64, d: f64, nbar: f64) -> Result<Self> {
        for (name, v) in [("r", r), ("d", d), ("nbar", nbar)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        if r > MAX_SQUEEZING {
            return Err(Error::InvalidParameter(format!(
                "r must be <= {MAX_SQUEEZING}, got {r}"
            )));
        }
        Ok(Self { r, d, nbar })
    }

    /// Builds the reduced parameters from rates and an interaction time.
    pub fn from_rates(kappa: f64, gamma: f64, nbar: f64, t: f64) -> Result<Self> {
        for (name, v) in [("kappa", kappa), ("gamma", gamma), ("t", t)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        Self::new(kappa * t, gamma * t, nbar)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn nbar(&self) -> f64 {
        self.nbar
    }

    /// `d + 2r`
    pub fn p1(&self) -> f64 {
        self.d + 2.0 * self.r
    }

    /// `d − 2r`
    pub fn p2(&self) -> f64 {
        self.d - 2.0 * self.r
    }
}

/// Coefficients `(c1, c2, h)` of
/// `W = (2/π)² h⁻¹ exp[−(c1(|α₁|²+|α₂|²) + c2(α₁α₂ + c.c.)) / 2h]`.
///
/// Stored as the principal combinations `c1 + c2` and `c1 − c2`, the
/// exponent weights along `α₁ + α₂*` and `α₁ − α₂*`. Under strong squeezing
/// `c1 ≈ −c2` and the sum would not survive being formed from rounded `c1`
/// and `c2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianForm {
    c_plus: f64,
    c_minus: f64,
    h: f64,
}

impl GaussianForm {
    pub fn new(c1: f64, c2: f64, h: f64) -> Result<Self> {
        if !(c1 > c2.abs()) {
            return Err(Error::NonNormalizable { c1, c2, h });
        }
        Self::from_principal(c1 + c2, c1 - c2, h)
    }

    /// Builds the form from `c1 + c2`, `c1 − c2` and `h`.
    pub fn from_principal(c_plus: f64, c_minus: f64, h: f64) -> Result<Self> {
        let ok = [c_plus, c_minus, h]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0);
        if !ok {
            return Err(Error::NonNormalizable {
                c1: 0.5 * (c_plus + c_minus),
                c2: 0.5 * (c_plus - c_minus),
                h,
            });
        }
        Ok(Self { c_plus, c_minus, h })
    }

    pub fn vacuum() -> Self {
        Self {
            c_plus: 4.0,
            c_minus: 4.0,
            h: 1.0,
        }
    }

    pub fn c1(&self) -> f64 {
        0.5 * (self.c_plus + self.c_minus)
    }

    pub fn c2(&self) -> f64 {
        0.5 * (self.c_plus - self.c_minus)
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// `c1 + c2`
    pub fn c_plus(&self) -> f64 {
        self.c_plus
    }

    /// `c1 − c2`
    pub fn c_minus(&self) -> f64 {
        self.c_minus
    }

    /// Natural log of the Wigner density at `pt`.
    pub fn ln_density(&self, pt: &TwoModePoint) -> f64 {
        // c1·I + c2·(α₁α₂ + c.c.) = ½[(c1+c2)|α₁+α₂*|² + (c1−c2)|α₁−α₂*|²]
        let plus = (pt.alpha1 + pt.alpha2.conj()).norm_sqr();
        let minus = (pt.alpha1 - pt.alpha2.conj()).norm_sqr();
        let f = 0.5 * (self.c_plus * plus + self.c_minus * minus);
        LN_VACUUM_PEAK - self.h.ln() - f / (2.0 * self.h)
    }

    pub fn density(&self, pt: &TwoModePoint) -> f64 {
        self.ln_density(pt).exp()
    }

    /// Precision (inverse covariance) matrix in real coordinates:
    /// `c1/h` on the diagonal, `c2/h` at (x1,x3) and `−c2/h` at (x2,x4).
    pub fn precision(&self) -> Mat4 {
        let a = self.c1() / self.h;
        let b = self.c2() / self.h;
        Mat4([
            [a, 0.0, b, 0.0],
            [0.0, a, 0.0, -b],
            [b, 0.0, a, 0.0],
            [0.0, -b, 0.0, a],
        ])
    }

    /// Covariance of the Wigner distribution in real coordinates.
    pub fn covariance(&self) -> Mat4 {
        let (along_plus, along_minus) = (self.h / self.c_plus, self.h / self.c_minus);
        let a = 0.5 * (along_plus + along_minus);
        let b = 0.5 * (along_plus - along_minus);
        Mat4([
            [a, 0.0, b, 0.0],
            [0.0, a, 0.0, -b],
            [b, 0.0, a, 0.0],
            [0.0, -b, 0.0, a],
        ])
    }

    /// Recovers the form from a normalized real-coordinate covariance with
    /// the model's pattern `Σ = a·I + b·(x1x3 − x2x4 coupling)`.
    pub fn from_covariance(sigma: &Mat4) -> Result<Self> {
        let a = sigma[(0, 0)];
        let b = sigma[(0, 2)];
        let mut want = Mat4::scaled_identity(a);
        want[(0, 2)] = b;
        want[(2, 0)] = b;
        want[(1, 3)] = -b;
        want[(3, 1)] = -b;
        let deviation = sigma.max_abs_diff(&want);
        if deviation > tolerances::PATTERN * sigma.max_abs().max(1.0) {
            return Err(Error::PatternMismatch { deviation });
        }
        // Σ = h/(c1²−c2²)·[c1, −c2] and c1² − c2² = 16h for a normalized
        // density, so c1 = 16a, c2 = −16b and h = 16(a² − b²).
        Self::from_principal(16.0 * (a - b), 16.0 * (a + b), 16.0 * (a - b) * (a + b))
    }

    /// `c1² − c2² − 16h`, zero for every normalized form.
    pub fn normalization_defect(&self) -> f64 {
        self.c_plus * self.c_minus - 16.0 * self.h
    }
}

/// Wigner function of the ideal two-mode squeezed vacuum.
pub fn wigner_pure_2mss(pt: &TwoModePoint, r: f64) -> f64 {
    ln_wigner_pure_2mss(pt, r).exp()
}

pub fn ln_wigner_pure_2mss(pt: &TwoModePoint, r: f64) -> f64 {
    let (s, c) = ((2.0 * r).sinh(), (2.0 * r).cosh());
    LN_VACUUM_PEAK - 2.0 * c * pt.intensity() + 2.0 * s * pt.pair_term()
}

pub fn wigner_gaussian_eval(pt: &TwoModePoint, form: &GaussianForm) -> f64 {
    form.density(pt)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Convention {
    /// Quadratic form of the Wigner function.
    Wigner,
    /// Quadratic form of the symmetric characteristic function.
    Characteristic,
}

/// A symmetric 4×4 matrix acting on `(α₁, α₁*, α₂, α₂*)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovarianceMatrix {
    entries: Mat4,
    convention: Convention,
}

impl CovarianceMatrix {
    pub fn new(entries: Mat4, convention: Convention) -> Result<Self> {
        if !entries.is_symmetric(tolerances::SYMMETRY) {
            return Err(Error::Asymmetric);
        }
        Ok(Self {
            entries,
            convention,
        })
    }

    pub fn entries(&self) -> &Mat4 {
        &self.entries
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }
}

/// Parity-sign conjugation `diag(1, −1, 1, −1)`.
pub const PARITY_SIGNS: Mat4 = Mat4::diag([1.0, -1.0, 1.0, -1.0]);

fn anti_diagonal_matrix(diag: f64, anti: f64) -> Mat4 {
    let mut m = Mat4::scaled_identity(diag);
    for i in 0..4 {
        m[(i, 3 - i)] = anti;
    }
    m
}

pub fn w_matrix_from_form(form: &GaussianForm) -> CovarianceMatrix {
    let s = 0.5 / form.h;
    CovarianceMatrix {
        entries: anti_diagonal_matrix(s * form.c1(), s * form.c2()),
        convention: Convention::Wigner,
    }
}

fn require(m: &CovarianceMatrix, convention: Convention) -> Result<()> {
    if m.convention != convention {
        return Err(Error::InvalidParameter(format!(
            "expected a {convention:?}-convention matrix, got {:?}",
            m.convention
        )));
    }
    Ok(())
}

/// `V = W / √det W`, checked against `W = E V⁻¹ E`.
pub fn v_from_w(w: &CovarianceMatrix) -> Result<CovarianceMatrix> {
    require(w, Convention::Wigner)?;
    let ev = sym4_eigenvalues(&w.entries)?;
    if ev[0] <= 0.0 {
        return Err(Error::NotPositiveDefinite);
    }
    let v = w.entries * (1.0 / w.entries.det().sqrt());
    let back = PARITY_SIGNS * v.inverse()? * PARITY_SIGNS;
    let deviation = back.max_abs_diff(&w.entries);
    if deviation > 1e-10 * w.entries.max_abs() {
        return Err(Error::PatternMismatch { deviation });
    }
    CovarianceMatrix::new(v, Convention::Characteristic)
}

/// `W = E V⁻¹ E`
pub fn w_from_v(v: &CovarianceMatrix) -> Result<CovarianceMatrix> {
    require(v, Convention::Characteristic)?;
    let w = PARITY_SIGNS * v.entries.inverse()? * PARITY_SIGNS;
    CovarianceMatrix::new(w.symmetrized(), Convention::Wigner)
}

/// Mode occupation `N` and squeezing correlation `M` of a V matrix with the
/// pattern `[[N+½,0,0,M],[0,N+½,M,0],[0,M,N+½,0],[M,0,0,N+½]]`.
pub fn nm_from_v(v: &CovarianceMatrix) -> Result<(f64, f64)> {
    require(v, Convention::Characteristic)?;
    let m = &v.entries;
    let want = anti_diagonal_matrix(m[(0, 0)], m[(0, 3)]);
    let deviation = m.max_abs_diff(&want);
    if deviation > tolerances::PATTERN {
        return Err(Error::PatternMismatch { deviation });
    }
    let n = m[(0, 0)] - 0.5;
    if n < -tolerances::PATTERN {
        return Err(Error::Domain(format!("negative mode occupation N = {n}")));
    }
    Ok((n.max(0.0), m[(0, 3)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::evolve_coefficients;

    fn pure_form(r: f64) -> GaussianForm {
        evolve_coefficients(&SqueezedStateParams::new(r, 0.0, 0.0).unwrap())
    }

    #[test]
    fn ln_peak_constant() {
        assert!((LN_VACUUM_PEAK - VACUUM_PEAK.ln()).abs() < 1e-16);
    }

    #[test]
    fn real_round_trip() {
        let x = [0.3, -1.2, 2.5e-7, 9.0];
        assert_eq!(TwoModePoint::from_real(x).to_real(), x);
    }

    #[test]
    fn params_reject_negatives() {
        assert!(SqueezedStateParams::new(-0.1, 0.0, 0.0).is_err());
        assert!(SqueezedStateParams::new(0.0, -1.0, 0.0).is_err());
        assert!(SqueezedStateParams::new(0.0, 0.0, -1.0).is_err());
        assert!(SqueezedStateParams::new(f64::NAN, 0.0, 0.0).is_err());
        let p = SqueezedStateParams::from_rates(1.5, 2.0, 0.5, 2.0).unwrap();
        assert_eq!((p.r(), p.d(), p.nbar()), (3.0, 4.0, 0.5));
        assert!(p.p1() >= p.p2() && p.p1() >= 0.0);
    }

    #[test]
    fn pure_wigner_values() {
        assert!(
            (wigner_pure_2mss(&TwoModePoint::origin(), 0.0) - 0.405_284_734_569_351).abs() < 1e-15
        );
        assert!((wigner_pure_2mss(&TwoModePoint::origin(), 1.5) - VACUUM_PEAK).abs() < 1e-15);
        let a = 0.01_f64.sqrt();
        let v = wigner_pure_2mss(&TwoModePoint::real(a, -a), 1.5);
        let want = VACUUM_PEAK * (-0.04 * 3.0_f64.exp()).exp();
        assert!((v - want).abs() < 1e-14);
        assert!((v - 0.18148).abs() < 1e-4);
    }

    #[test]
    fn gaussian_eval_examples() {
        let form = GaussianForm::new(21.0, -20.0, 2.5).unwrap();
        assert!((form.density(&TwoModePoint::origin()) - VACUUM_PEAK / 2.5).abs() < 1e-15);

        let vac = GaussianForm::vacuum();
        let pt = TwoModePoint::new(Complex64::new(0.3, -0.2), Complex64::new(-0.1, 0.7));
        let want = VACUUM_PEAK * (-2.0 * pt.intensity()).exp();
        assert!((vac.density(&pt) - want).abs() < 1e-15);

        let pt = TwoModePoint::real(0.5, 0.5);
        let pure = wigner_pure_2mss(&pt, 1.5);
        assert!((wigner_gaussian_eval(&pt, &pure_form(1.5)) / pure - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_normalizable_forms_rejected() {
        assert!(GaussianForm::new(1.0, 1.0, 1.0).is_err());
        assert!(GaussianForm::new(1.0, -2.0, 1.0).is_err());
        assert!(GaussianForm::new(4.0, 0.0, 0.0).is_err());
        assert!(GaussianForm::new(4.0, 0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn w_matrix_examples() {
        let w = w_matrix_from_form(&GaussianForm::vacuum());
        assert_eq!(*w.entries(), Mat4::scaled_identity(2.0));

        let w = w_matrix_from_form(&pure_form(1.5));
        let e = w.entries();
        assert!((e[(0, 0)] - 2.0 * 3.0_f64.cosh()).abs() < 1e-12);
        assert!((e[(0, 3)] + 2.0 * 3.0_f64.sinh()).abs() < 1e-12);
        assert!((e.det() - 16.0).abs() < 1e-9);
    }

    #[test]
    fn v_matrix_examples() {
        let v = v_from_w(&w_matrix_from_form(&GaussianForm::vacuum())).unwrap();
        assert!(v.entries().max_abs_diff(&Mat4::scaled_identity(0.5)) < 1e-15);
        assert_eq!(nm_from_v(&v).unwrap(), (0.0, 0.0));

        let form = pure_form(1.5);
        let v = v_from_w(&w_matrix_from_form(&form)).unwrap();
        let (n, m) = nm_from_v(&v).unwrap();
        // N + 1/2 = 2h c1/(c1² − c2²), M = 2h c2/(c1² − c2²)
        let denom = form.c1() * form.c1() - form.c2() * form.c2();
        assert!((n + 0.5 - 2.0 * form.h() * form.c1() / denom).abs() < 1e-9);
        assert!((m - 2.0 * form.h() * form.c2() / denom).abs() < 1e-9);
        assert!((n - (3.0_f64.cosh() - 1.0) / 2.0).abs() < 1e-10);
        assert!((m + 3.0_f64.sinh() / 2.0).abs() < 1e-10);

        let w = w_from_v(&v).unwrap();
        assert!(
            w.entries()
                .max_abs_diff(w_matrix_from_form(&form).entries())
                < 1e-10
        );
    }

    #[test]
    fn v_from_w_rejects_bad_input() {
        let w =
            CovarianceMatrix::new(Mat4::diag([1.0, -1.0, 1.0, 1.0]), Convention::Wigner).unwrap();
        assert!(matches!(v_from_w(&w), Err(Error::NotPositiveDefinite)));
        let v = CovarianceMatrix::new(Mat4::identity(), Convention::Characteristic).unwrap();
        assert!(v_from_w(&v).is_err());
        let mut m = Mat4::scaled_identity(0.5);
        m[(0, 1)] = 0.1;
        m[(1, 0)] = 0.1;
        let v = CovarianceMatrix::new(m, Convention::Characteristic).unwrap();
        assert!(matches!(nm_from_v(&v), Err(Error::PatternMismatch { .. })));
    }

    #[test]
    fn covariance_round_trip() {
        let form = GaussianForm::new(
            21.694_641_755_125_055,
            -20.639_694_838_458_85,
            2.791_279_866_156_907_4,
        )
        .unwrap();
        let back = GaussianForm::from_covariance(&form.covariance()).unwrap();
        assert!((back.c1() / form.c1() - 1.0).abs() < 1e-12);
        assert!((back.c2() / form.c2() - 1.0).abs() < 1e-12);
        assert!((back.h() / form.h() - 1.0).abs() < 1e-12);
        assert!((form.precision() * form.covariance()).max_abs_diff(&Mat4::identity()) < 1e-12);
    }
}
