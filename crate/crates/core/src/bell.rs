//! Displaced-parity correlations and the four-point Bell combination
//!
//! ```text
//! B = Π(0,0) + Π(√J,0) + Π(0,−√J) − Π(√J,−√J),    Π(α₁,α₂) = (π/2)² W(α₁,α₂)
//! ```
//!
//! Local realism bounds `|B| ≤ 2`.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::evolve_coefficients;
use crate::error::{Error, Result};
use crate::phase_space::{GaussianForm, SqueezedStateParams, TwoModePoint, MAX_SQUEEZING};
use crate::states::WignerState;
use crate::tolerances;

/// `(π/2)²`
const PARITY_SCALE: f64 = FRAC_PI_2 * FRAC_PI_2;

/// Local-realist bound on `|B|`.
pub const LOCAL_BOUND: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BellSettings {
    j: f64,
}

impl BellSettings {
    pub fn new(j: f64) -> Result<Self> {
        if !j.is_finite() || j < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "J must be finite and >= 0, got {j}"
            )));
        }
        Ok(Self { j })
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    /// `(0,0), (√J,0), (0,−√J), (√J,−√J)`; the last enters `B` with a minus sign.
    pub fn points(&self) -> [TwoModePoint; 4] {
        let s = self.j.sqrt();
        [
            TwoModePoint::real(0.0, 0.0),
            TwoModePoint::real(s, 0.0),
            TwoModePoint::real(0.0, -s),
            TwoModePoint::real(s, -s),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BellEvaluation {
    pub b: f64,
    pub correlations: [f64; 4],
    pub settings: BellSettings,
    pub state: String,
}

impl BellEvaluation {
    pub fn violates(&self) -> bool {
        self.b > LOCAL_BOUND
    }
}

pub fn parity_correlation<S: WignerState + ?Sized>(state: &S, pt: &TwoModePoint) -> f64 {
    PARITY_SCALE * state.density(pt)
}

fn assemble<S: WignerState + ?Sized>(state: &S, settings: &BellSettings) -> (f64, [f64; 4]) {
    let pts = settings.points();
    let pi = pts.map(|pt| parity_correlation(state, &pt));
    (pi[0] + pi[1] + pi[2] - pi[3], pi)
}

/// `B` for `state` at displacement intensity `j`.
pub fn bell_combination<S: WignerState + ?Sized>(state: &S, j: f64) -> Result<BellEvaluation> {
    let settings = BellSettings::new(j)?;
    let (b, correlations) = assemble(state, &settings);
    Ok(BellEvaluation {
        b,
        correlations,
        settings,
        state: state.label(),
    })
}

/// Closed form for the Gaussian family,
/// `(1/h)[1 + 2e^{−J·c1/2h} − e^{−J(c1−c2)/h}]`.
pub fn bell_closed_form(form: &GaussianForm, j: f64) -> f64 {
    let h = form.h();
    (1.0 + 2.0 * (-j * form.c1() / (2.0 * h)).exp() - (-j * (form.c1() - form.c2()) / h).exp()) / h
}

/// The same expression with `c1 + c2` in the last exponent. This is *not* the
/// Bell combination of the four settings; it is kept to show the difference
/// (≈ 1.637 instead of ≈ 2.187 at `r = 1.5`, `d = 0`, `J = 0.01`).
pub fn bell_closed_form_sum_sign(form: &GaussianForm, j: f64) -> f64 {
    let h = form.h();
    (1.0 + 2.0 * (-j * form.c1() / (2.0 * h)).exp() - (-j * (form.c1() + form.c2()) / h).exp()) / h
}

/// Evaluates only the density; avoids building labels in hot loops.
struct FormState<'a>(&'a GaussianForm);

impl WignerState for FormState<'_> {
    fn density(&self, pt: &TwoModePoint) -> f64 {
        self.0.density(pt)
    }

    fn label(&self) -> String {
        String::from("gaussian")
    }
}

fn gaussian_b(form: &GaussianForm, j: f64) -> Result<f64> {
    Ok(assemble(&FormState(form), &BellSettings::new(j)?).0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BellSurface {
    pub r: f64,
    pub nbar: f64,
    pub j_grid: Vec<f64>,
    pub d_grid: Vec<f64>,
    /// `values[i][k]` is `B` at `d_grid[i]`, `j_grid[k]`.
    pub values: Vec<Vec<f64>>,
}

fn check_ascending(name: &str, grid: &[f64]) -> Result<()> {
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

pub fn bell_surface(r: f64, nbar: f64, j_grid: &[f64], d_grid: &[f64]) -> Result<BellSurface> {
    check_ascending("J", j_grid)?;
    check_ascending("d", d_grid)?;
    let values = d_grid
        .par_iter()
        .map(|&d| {
            let form = evolve_coefficients(&SqueezedStateParams::new(r, d, nbar)?);
            j_grid.iter().map(|&j| gaussian_b(&form, j)).collect()
        })
        .collect::<Result<_>>()?;
    Ok(BellSurface {
        r,
        nbar,
        j_grid: j_grid.to_vec(),
        d_grid: d_grid.to_vec(),
        values,
    })
}

/// `n` geometrically spaced points from `lo` to `hi` inclusive.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let ratio = (hi / lo).ln() / (n - 1) as f64;
            (0..n)
                .map(|i| match i {
                    0 => lo,
                    i if i == n - 1 => hi,
                    i => lo * (ratio * i as f64).exp(),
                })
                .collect()
        }
    }
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| match i {
                i if i == n - 1 => hi,
                i => lo + (hi - lo) * i as f64 / (n - 1) as f64,
            })
            .collect(),
    }
}

// ---------------------------------------------------------------------------
// Maximization

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BellParam {
    J,
    R,
    D,
    Nbar,
}

impl BellParam {
    pub const ALL: [BellParam; 4] = [BellParam::J, BellParam::R, BellParam::D, BellParam::Nbar];

    fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BellParam::J => "J",
            BellParam::R => "r",
            BellParam::D => "d",
            BellParam::Nbar => "nbar",
        }
    }
}

impl std::str::FromStr for BellParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "J" | "j" => Ok(BellParam::J),
            "r" => Ok(BellParam::R),
            "d" => Ok(BellParam::D),
            "nbar" | "n" => Ok(BellParam::Nbar),
            _ => Err(Error::InvalidParameter(format!(
                "unknown Bell parameter '{s}'"
            ))),
        }
    }
}

/// A point in `(J, r, d, n̄)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BellPoint {
    pub j: f64,
    pub r: f64,
    pub d: f64,
    pub nbar: f64,
}

impl BellPoint {
    pub fn to_array(self) -> [f64; 4] {
        [self.j, self.r, self.d, self.nbar]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self {
            j: a[0],
            r: a[1],
            d: a[2],
            nbar: a[3],
        }
    }
}

/// `B` of the diffused state at `point`, from the four-point assembly.
pub fn bell_at(point: &BellPoint) -> Result<f64> {
    let form = evolve_coefficients(&SqueezedStateParams::new(point.r, point.d, point.nbar)?);
    gaussian_b(&form, point.j)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ParamBounds {
    pub j: (f64, f64),
    pub r: (f64, f64),
    pub d: (f64, f64),
    pub nbar: (f64, f64),
}

impl ParamBounds {
    fn get(&self, p: BellParam) -> (f64, f64) {
        match p {
            BellParam::J => self.j,
            BellParam::R => self.r,
            BellParam::D => self.d,
            BellParam::Nbar => self.nbar,
        }
    }
}

impl Default for ParamBounds {
    fn default() -> Self {
        Self {
            j: (1e-4, 1.0),
            r: (0.0, 3.0),
            d: (0.0, 5.0),
            nbar: (0.0, 2.0),
        }
    }
}

/// Which coordinates to optimize; the rest stay at `fixed`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaximizeRequest {
    pub free: Vec<BellParam>,
    pub fixed: BellPoint,
    pub bounds: ParamBounds,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BellMaximum {
    pub argmax: BellPoint,
    pub b_max: f64,
    pub grid_argmax: BellPoint,
    pub grid_b_max: f64,
    pub evaluations: usize,
    pub simplex_iterations: usize,
    pub converged: bool,
}

/// Grid points per free dimension in the coarse scan.
pub const SCAN_POINTS: usize = 32;
const MAX_SIMPLEX_ITERATIONS: usize = 20_000;

/// Search coordinates: `ln J` for `J`, the raw value otherwise.
struct Space {
    free: Vec<BellParam>,
    fixed: [f64; 4],
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl Space {
    fn to_point(&self, x: &[f64]) -> BellPoint {
        let mut a = self.fixed;
        for (k, p) in self.free.iter().enumerate() {
            let v = x[k].clamp(self.lo[k], self.hi[k]);
            a[p.index()] = if *p == BellParam::J { v.exp() } else { v };
        }
        BellPoint::from_array(a)
    }

    fn clamp(&self, x: &mut [f64]) {
        for (k, v) in x.iter_mut().enumerate() {
            *v = v.clamp(self.lo[k], self.hi[k]);
        }
    }
}

/// Higher `B` wins; ties go to the lexicographically smallest `(J, r, d, n̄)`.
fn better(a: (f64, &BellPoint), b: (f64, &BellPoint)) -> bool {
    match a.0.total_cmp(&b.0) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => {
            let (pa, pb) = (a.1.to_array(), b.1.to_array());
            pa.iter()
                .zip(pb.iter())
                .find_map(|(x, y)| match x.total_cmp(y) {
                    std::cmp::Ordering::Equal => None,
                    o => Some(o == std::cmp::Ordering::Less),
                })
                == Some(true)
        }
    }
}

fn validate(req: &MaximizeRequest) -> Result<Space> {
    let mut free = req.free.clone();
    free.sort();
    free.dedup();
    if free.is_empty() {
        return Err(Error::InvalidParameter("no free parameters".into()));
    }
    let fixed = req.fixed.to_array();
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for p in &free {
        let (a, b) = req.bounds.get(*p);
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "bounds for {} must be finite",
                p.as_str()
            )));
        }
        let (a, b) = (
            a.max(0.0),
            b.min(if *p == BellParam::R {
                MAX_SQUEEZING
            } else {
                f64::MAX
            }),
        );
        if a > b {
            return Err(Error::EmptyFeasibleRegion(format!(
                "{} has no admissible values in [{a}, {b}]",
                p.as_str()
            )));
        }
        if *p == BellParam::J {
            if a <= 0.0 {
                return Err(Error::InvalidParameter(
                    "J lower bound must be > 0 for the geometric scan".into(),
                ));
            }
            lo.push(a.ln());
            hi.push(b.ln());
        } else {
            lo.push(a);
            hi.push(b);
        }
    }
    for p in BellParam::ALL {
        if !free.contains(&p) && (!fixed[p.index()].is_finite() || fixed[p.index()] < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "fixed {} must be finite and >= 0",
                p.as_str()
            )));
        }
    }
    Ok(Space {
        free,
        fixed,
        lo,
        hi,
    })
}

/// Coarse grid scan followed by a bounded Nelder–Mead refinement. Fully
/// deterministic: the grid is fixed and the simplex has no random moves.
pub fn maximize_bell(req: &MaximizeRequest) -> Result<BellMaximum> {
    let space = validate(req)?;
    let n = space.free.len();
    let axes: Vec<Vec<f64>> = (0..n)
        .map(|k| linear_grid(space.lo[k], space.hi[k], SCAN_POINTS))
        .collect();
    let total = SCAN_POINTS.pow(n as u32);

    let scanned: Vec<(f64, BellPoint)> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mut x = vec![0.0; n];
            let mut rest = flat;
            for k in (0..n).rev() {
                x[k] = axes[k][rest % SCAN_POINTS];
                rest /= SCAN_POINTS;
            }
            let pt = space.to_point(&x);
            bell_at(&pt).map(|b| (b, pt))
        })
        .collect::<Result<_>>()?;
    let (grid_b, grid_pt) = scanned
        .iter()
        .fold(None::<(f64, BellPoint)>, |best, &(b, pt)| match best {
            Some((bb, bp)) if !better((b, &pt), (bb, &bp)) => Some((bb, bp)),
            _ => Some((b, pt)),
        })
        .expect("scan is nonempty");
    let mut evaluations = total;

    let mut eval = |x: &[f64]| -> Result<(f64, BellPoint)> {
        evaluations += 1;
        let pt = space.to_point(x);
        Ok((bell_at(&pt)?, pt))
    };

    // Initial simplex: best grid point plus one grid step along each axis.
    let x0: Vec<f64> = space
        .free
        .iter()
        .map(|p| {
            let v = grid_pt.to_array()[p.index()];
            if *p == BellParam::J {
                v.ln()
            } else {
                v
            }
        })
        .collect();
    let mut simplex: Vec<(Vec<f64>, f64, BellPoint)> = vec![(x0.clone(), grid_b, grid_pt)];
    for k in 0..n {
        let step = (space.hi[k] - space.lo[k]) / (SCAN_POINTS - 1) as f64;
        let mut x = x0.clone();
        x[k] = if x[k] + step <= space.hi[k] {
            x[k] + step
        } else {
            x[k] - step
        };
        space.clamp(&mut x);
        let (b, pt) = eval(&x)?;
        simplex.push((x, b, pt));
    }

    let mut iterations = 0;
    let mut converged = false;
    while iterations < MAX_SIMPLEX_ITERATIONS {
        simplex.sort_by(|a, b| {
            if better((a.1, &a.2), (b.1, &b.2)) {
                std::cmp::Ordering::Less
            } else if better((b.1, &b.2), (a.1, &a.2)) {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Equal
            }
        });
        let diameter = simplex
            .iter()
            .flat_map(|a| simplex.iter().map(move |b| dist(&a.0, &b.0)))
            .fold(0.0, f64::max);
        if diameter < tolerances::SIMPLEX_DIAMETER {
            converged = true;
            break;
        }
        iterations += 1;

        let worst = simplex[n].clone();
        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|v| v.0[k]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            let mut x: Vec<f64> = (0..n)
                .map(|k| centroid[k] + t * (worst.0[k] - centroid[k]))
                .collect();
            space.clamp(&mut x);
            x
        };

        let xr = along(-1.0);
        let (br, pr) = eval(&xr)?;
        if better((br, &pr), (simplex[0].1, &simplex[0].2)) {
            let xe = along(-2.0);
            let (be, pe) = eval(&xe)?;
            simplex[n] = if better((be, &pe), (br, &pr)) {
                (xe, be, pe)
            } else {
                (xr, br, pr)
            };
            continue;
        }
        if better((br, &pr), (simplex[n - 1].1, &simplex[n - 1].2)) {
            simplex[n] = (xr, br, pr);
            continue;
        }
        let outside = better((br, &pr), (worst.1, &worst.2));
        let xc = along(if outside { -0.5 } else { 0.5 });
        let (bc, pc) = eval(&xc)?;
        let reference = if outside {
            (br, pr)
        } else {
            (worst.1, worst.2)
        };
        if better((bc, &pc), (reference.0, &reference.1)) {
            simplex[n] = (xc, bc, pc);
            continue;
        }
        let best = simplex[0].0.clone();
        for v in simplex.iter_mut().skip(1) {
            let mut x: Vec<f64> = (0..n).map(|k| best[k] + 0.5 * (v.0[k] - best[k])).collect();
            space.clamp(&mut x);
            let (b, pt) = eval(&x)?;
            *v = (x, b, pt);
        }
    }

    let (mut best_x, mut best_b, mut best_pt) = simplex
        .into_iter()
        .fold(None::<(Vec<f64>, f64, BellPoint)>, |acc, v| match acc {
            Some(a) if !better((v.1, &v.2), (a.1, &a.2)) => Some(a),
            _ => Some(v),
        })
        .expect("simplex is nonempty");
    if better((grid_b, &grid_pt), (best_b, &best_pt)) {
        best_b = grid_b;
        best_pt = grid_pt;
        best_x = x0;
    }

    // Directions along which B is flat resolve to their lower bound.
    for k in 0..n {
        if best_x[k] == space.lo[k] {
            continue;
        }
        let mut x = best_x.clone();
        x[k] = space.lo[k];
        let (b, pt) = eval(&x)?;
        if b >= best_b {
            best_x = x;
            best_b = b;
            best_pt = pt;
        }
    }

    Ok(BellMaximum {
        argmax: best_pt,
        b_max: best_b,
        grid_argmax: grid_pt,
        grid_b_max: grid_b,
        evaluations,
        simplex_iterations: iterations,
        converged,
    })
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

// ---------------------------------------------------------------------------
// Small-J behaviour

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SlopeEstimate {
    pub slope: f64,
    pub b0: f64,
    /// `B(0) = 2`, so `B ≈ 2 + slope·J` near the origin.
    pub anchored: bool,
}

/// Step used for the one-sided difference quotient.
pub const SLOPE_STEP: f64 = 1e-6;

/// `dB/dJ` at `J = 0` by Richardson extrapolation of difference quotients at
/// `J = 1e−6` and `5e−7`.
pub fn small_j_slope<S: WignerState + ?Sized>(state: &S) -> SlopeEstimate {
    let b = |j: f64| assemble(state, &BellSettings { j }).0;
    let b0 = b(0.0);
    let q1 = (b(SLOPE_STEP) - b0) / SLOPE_STEP;
    let q2 = (b(0.5 * SLOPE_STEP) - b0) / (0.5 * SLOPE_STEP);
    SlopeEstimate {
        slope: 2.0 * q2 - q1,
        b0,
        anchored: (b0 - LOCAL_BOUND).abs() <= tolerances::BELL_ASSEMBLY,
    }
}
