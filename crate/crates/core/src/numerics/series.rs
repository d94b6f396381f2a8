/// Below this magnitude `(1 − e^{−p})/p` is evaluated by its Taylor series.
pub const SERIES_SWITCH: f64 = 1e-4;

/// `(1 − e^{−p}) / p`, finite through the removable singularity at `p = 0`.
pub fn one_minus_exp_over(p: f64) -> f64 {
    if p.abs() < SERIES_SWITCH {
        // 1 − p/2 + p²/6 − p³/24 + p⁴/120 − p⁵/720
        1.0 + p
            * (-1.0 / 2.0
                + p * (1.0 / 6.0 + p * (-1.0 / 24.0 + p * (1.0 / 120.0 + p * (-1.0 / 720.0)))))
    } else {
        -(-p).exp_m1() / p
    }
}
