//! Quadrature rules: Gauss–Legendre on intervals (plain and composite) and
//! the trapezoidal rule on a periodic domain.

use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Domain {
    Interval { a: f64, b: f64 },
    Periodic { start: f64, period: f64 },
}

impl Domain {
    pub fn measure(&self) -> f64 {
        match *self {
            Domain::Interval { a, b } => b - a,
            Domain::Periodic { period, .. } => period,
        }
    }
}

#[derive(Clone, Debug)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    domain: Domain,
}

impl QuadratureRule {
    /// `n`-point Gauss–Legendre rule on `[a, b]`, exact for polynomials of
    /// degree `2n − 1`.
    pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<Self> {
        if n == 0 || !(b > a) || !a.is_finite() || !b.is_finite() {
            return Err(Error::Domain(format!(
                "Gauss-Legendre needs n >= 1 and a finite interval, got n = {n}, [{a}, {b}]"
            )));
        }
        let (x, w) = legendre_nodes(n);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        Ok(Self {
            nodes: x.iter().map(|t| mid + half * t).collect(),
            weights: w.iter().map(|v| half * v).collect(),
            domain: Domain::Interval { a, b },
        })
    }

    /// Concatenated Gauss–Legendre panels between consecutive `breaks`.
    pub fn composite_gauss_legendre(breaks: &[f64], n_per_panel: usize) -> Result<Self> {
        if breaks.len() < 2 {
            return Err(Error::Domain(
                "composite rule needs at least two breakpoints".into(),
            ));
        }
        let mut nodes = Vec::with_capacity((breaks.len() - 1) * n_per_panel);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for pair in breaks.windows(2) {
            let panel = Self::gauss_legendre(n_per_panel, pair[0], pair[1])?;
            nodes.extend(panel.nodes);
            weights.extend(panel.weights);
        }
        Ok(Self {
            nodes,
            weights,
            domain: Domain::Interval {
                a: breaks[0],
                b: breaks[breaks.len() - 1],
            },
        })
    }

    /// Evenly divides `[a, b]` into `panels` Gauss–Legendre panels.
    pub fn uniform_composite(a: f64, b: f64, panels: usize, n_per_panel: usize) -> Result<Self> {
        let panels = panels.max(1);
        let breaks: Vec<f64> = (0..=panels)
            .map(|i| a + (b - a) * i as f64 / panels as f64)
            .collect();
        Self::composite_gauss_legendre(&breaks, n_per_panel)
    }

    /// Trapezoidal rule with `n` equally weighted nodes on one period.
    pub fn periodic_trapezoid(n: usize, start: f64, period: f64) -> Result<Self> {
        if n == 0 || !(period > 0.0) {
            return Err(Error::Domain(format!(
                "periodic rule needs n >= 1 and a positive period, got n = {n}, period {period}"
            )));
        }
        let h = period / n as f64;
        Ok(Self {
            nodes: (0..n).map(|i| start + h * i as f64).collect(),
            weights: vec![h; n],
            domain: Domain::Periodic { start, period },
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Tensor-product rule over two axes.
pub fn integrate_2d<F>(rx: &QuadratureRule, ry: &QuadratureRule, f: F) -> f64
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    rx.nodes
        .par_iter()
        .zip(rx.weights.par_iter())
        .map(|(&x, &wx)| wx * ry.integrate(|y| f(x, y)))
        .sum()
}

/// Tensor-product rule over four axes; the outer two axes are scanned in
/// parallel and partial sums are combined in a fixed order.
pub fn integrate_4d<F>(rules: [&QuadratureRule; 4], f: F) -> f64
where
    F: Fn([f64; 4]) -> f64 + Sync,
{
    let [r0, r1, r2, r3] = rules;
    let outer: Vec<(usize, usize)> = (0..r0.len())
        .flat_map(|i| (0..r1.len()).map(move |j| (i, j)))
        .collect();
    let partial: Vec<f64> = outer
        .par_iter()
        .map(|&(i, j)| {
            let (x0, x1) = (r0.nodes[i], r1.nodes[j]);
            let mut acc = 0.0;
            for (&x2, &w2) in r2.nodes.iter().zip(&r2.weights) {
                let mut inner = 0.0;
                for (&x3, &w3) in r3.nodes.iter().zip(&r3.weights) {
                    inner += w3 * f([x0, x1, x2, x3]);
                }
                acc += w2 * inner;
            }
            r0.weights[i] * r1.weights[j] * acc
        })
        .collect();
    partial.iter().sum()
}

/// Nodes and weights on `[−1, 1]` by Newton iteration on `Pₙ`.
fn legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}
