use super::linalg::Mat4;

/// Right-hand side of the Lyapunov differential equation `AΣ + ΣAᵀ + D`.
fn lyapunov_rhs(a: &Mat4, d: &Mat4, sigma: &Mat4) -> Mat4 {
    *a * *sigma + *sigma * a.transpose() + *d
}

/// Integrates `dΣ/dt = AΣ + ΣAᵀ + D` from `Σ(0) = sigma0` to time `t` with
/// `steps` classical fourth-order Runge–Kutta steps. The iterate is
/// re-symmetrized after every step.
pub fn rk4_lyapunov(a: &Mat4, d: &Mat4, sigma0: &Mat4, t: f64, steps: usize) -> Mat4 {
    let steps = steps.max(1);
    let dt = t / steps as f64;
    let mut sigma = *sigma0;
    for _ in 0..steps {
        let k1 = lyapunov_rhs(a, d, &sigma);
        let k2 = lyapunov_rhs(a, d, &(sigma + k1 * (0.5 * dt)));
        let k3 = lyapunov_rhs(a, d, &(sigma + k2 * (0.5 * dt)));
        let k4 = lyapunov_rhs(a, d, &(sigma + k3 * dt));
        sigma = sigma + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
        sigma = sigma.symmetrized();
    }
    sigma
}
