//! Fixed-size 4×4 real matrices.
//!
//! Everything in this crate lives in a four-dimensional phase space, so a
//! stack-allocated `[[f64; 4]; 4]` newtype is all the linear algebra needed.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat4(pub [[f64; 4]; 4]);

impl Mat4 {
    pub const fn zeros() -> Self {
        Mat4([[0.0; 4]; 4])
    }

    pub const fn identity() -> Self {
        Self::diag([1.0; 4])
    }

    pub const fn diag(d: [f64; 4]) -> Self {
        Mat4([
            [d[0], 0.0, 0.0, 0.0],
            [0.0, d[1], 0.0, 0.0],
            [0.0, 0.0, d[2], 0.0],
            [0.0, 0.0, 0.0, d[3]],
        ])
    }

    pub fn scaled_identity(s: f64) -> Self {
        Self::diag([s; 4])
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] = self.0[j][i];
            }
        }
        out
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &Mat4) -> f64 {
        (*self - *other).max_abs()
    }

    /// Maximum row-sum norm.
    pub fn norm_inf(&self) -> f64 {
        self.0
            .iter()
            .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let scale = self.max_abs().max(1.0);
        (0..4).all(|i| (0..i).all(|j| (self.0[i][j] - self.0[j][i]).abs() <= tol * scale))
    }

    pub fn symmetrized(&self) -> Self {
        (*self + self.transpose()) * 0.5
    }

    /// Determinant by partial-pivot LU elimination.
    pub fn det(&self) -> f64 {
        let mut a = self.0;
        let mut det = 1.0;
        for col in 0..4 {
            let pivot = (col..4)
                .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
                .unwrap_or(col);
            if a[pivot][col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                a.swap(pivot, col);
                det = -det;
            }
            det *= a[col][col];
            for row in col + 1..4 {
                let factor = a[row][col] / a[col][col];
                for k in col..4 {
                    a[row][k] -= factor * a[col][k];
                }
            }
        }
        det
    }

    /// Gauss–Jordan inverse with partial pivoting.
    pub fn inverse(&self) -> Result<Mat4> {
        let mut a = self.0;
        let mut inv = Mat4::identity().0;
        let scale = self.max_abs();
        for col in 0..4 {
            let pivot = (col..4)
                .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
                .unwrap_or(col);
            if a[pivot][col].abs() <= f64::EPSILON * scale * 1e-3 || !a[pivot][col].is_finite() {
                return Err(Error::Singular);
            }
            a.swap(pivot, col);
            inv.swap(pivot, col);
            let p = a[col][col];
            for k in 0..4 {
                a[col][k] /= p;
                inv[col][k] /= p;
            }
            for row in 0..4 {
                if row == col {
                    continue;
                }
                let factor = a[row][col];
                if factor == 0.0 {
                    continue;
                }
                for k in 0..4 {
                    a[row][k] -= factor * a[col][k];
                    inv[row][k] -= factor * inv[col][k];
                }
            }
        }
        Ok(Mat4(inv))
    }

    /// `self · other · selfᵀ`
    pub fn congruence(&self, other: &Mat4) -> Mat4 {
        *self * *other * self.transpose()
    }
}

impl Default for Mat4 {
    fn default() -> Self {
        Self::zeros()
    }
}

impl Index<(usize, usize)> for Mat4 {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Mat4 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.0[i][j]
    }
}

impl Add for Mat4 {
    type Output = Mat4;
    fn add(mut self, rhs: Mat4) -> Mat4 {
        for i in 0..4 {
            for j in 0..4 {
                self.0[i][j] += rhs.0[i][j];
            }
        }
        self
    }
}

impl Sub for Mat4 {
    type Output = Mat4;
    fn sub(mut self, rhs: Mat4) -> Mat4 {
        for i in 0..4 {
            for j in 0..4 {
                self.0[i][j] -= rhs.0[i][j];
            }
        }
        self
    }
}

impl Neg for Mat4 {
    type Output = Mat4;
    fn neg(self) -> Mat4 {
        self * -1.0
    }
}

impl Mul for Mat4 {
    type Output = Mat4;
    fn mul(self, rhs: Mat4) -> Mat4 {
        let mut out = Mat4::zeros();
        for i in 0..4 {
            for k in 0..4 {
                let a = self.0[i][k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..4 {
                    out.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        out
    }
}

impl Mul<f64> for Mat4 {
    type Output = Mat4;
    fn mul(mut self, s: f64) -> Mat4 {
        for v in self.0.iter_mut().flatten() {
            *v *= s;
        }
        self
    }
}

impl Mul<[f64; 4]> for Mat4 {
    type Output = [f64; 4];
    fn mul(self, x: [f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|j| self.0[i][j] * x[j]).sum();
        }
        out
    }
}

/// Eigenvalues of a symmetric 4×4 matrix, ascending.
///
/// Matrices with the two-mode squeezing pattern (equal diagonal `a`, equal
/// entries `b` on the anti-diagonal, zeros elsewhere) split into two identical
/// 2×2 blocks and have eigenvalues `a ± b`, each twice. Anything else goes
/// through cyclic Jacobi rotations.
pub fn sym4_eigenvalues(m: &Mat4) -> Result<[f64; 4]> {
    if !m.is_symmetric(1e-12) {
        return Err(Error::Asymmetric);
    }
    let mut ev = match anti_diagonal_pattern(m) {
        Some((a, b)) => [a - b.abs(), a - b.abs(), a + b.abs(), a + b.abs()],
        None => jacobi_eigenvalues(m),
    };
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Returns `(a, b)` if `m` has exactly the anti-diagonal block pattern.
pub fn anti_diagonal_pattern(m: &Mat4) -> Option<(f64, f64)> {
    let a = m[(0, 0)];
    let b = m[(0, 3)];
    for i in 0..4 {
        for j in 0..4 {
            let want = if i == j {
                a
            } else if i + j == 3 {
                b
            } else {
                0.0
            };
            if m[(i, j)] != want {
                return None;
            }
        }
    }
    Some((a, b))
}

/// Cyclic Jacobi diagonalization; returns the (unsorted) diagonal.
pub fn jacobi_eigenvalues(m: &Mat4) -> [f64; 4] {
    let mut a = m.symmetrized();
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    for _sweep in 0..64 {
        let off: f64 = (0..4)
            .flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..3 {
            for q in p + 1..4 {
                let apq = a[(p, q)];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..4 {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..4 {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    [a[(0, 0)], a[(1, 1)], a[(2, 2)], a[(3, 3)]]
}

/// `exp(A·t)` by scaling and squaring a truncated Taylor series.
pub fn matrix_exp4(a: &Mat4, t: f64) -> Mat4 {
    let at = *a * t;
    let norm = at.norm_inf();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let x = at * 0.5_f64.powi(squarings);
    let mut term = Mat4::identity();
    let mut sum = Mat4::identity();
    for k in 1..=30 {
        term = term * x * (1.0 / k as f64);
        sum = sum + term;
        if term.max_abs() <= 1e-18 * sum.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}
