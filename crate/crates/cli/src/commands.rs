//! One function per subcommand, each returning a finished report.

use rayon::prelude::*;

use cvbell::analysis::closed_form_eigenvalues;
use cvbell::bell::{bell_closed_form, geometric_grid, linear_grid};
use cvbell::dynamics::drift_eigenvalues;
use cvbell::mixtures::{default_threshold_grid, violation_threshold};
use cvbell::phase_space::{nm_from_v, v_from_w, w_matrix_from_form};
use cvbell::{
    bell_combination, bell_surface, is_pure, maximize_bell, mixture_bell, separability_eigenvalues,
    separability_map, small_j_slope, steady_state, BellParam, BellPoint, GaussianForm,
    MaximizeRequest, MixtureKind, MixtureSpec, ParamBounds, Result, SolverRegistry,
    SqueezedStateParams, StateConfig, StateRegistry, ViolationThreshold,
};

use crate::report::{Cell, ReportRecord};

/// Squeezing used by every figure.
pub const FIGURE_R: f64 = 1.5;
/// Displacement intensity of the Fig. 3 cross-section.
pub const FIGURE_J: f64 = 0.01;

fn occupation(form: &GaussianForm) -> Result<(f64, f64)> {
    nm_from_v(&v_from_w(&w_matrix_from_form(form))?)
}

// ---------------------------------------------------------------------------
// coeffs

pub struct CoeffsScan {
    pub kappa: f64,
    pub gamma: f64,
    pub t_max: f64,
    pub steps: usize,
}

fn coeff_cells(solver: &str, params: &SqueezedStateParams) -> Result<Vec<Cell>> {
    let registry = SolverRegistry::with_builtins();
    let form = registry.get(solver)?.solve(params)?;
    let (n, m) = occupation(&form)?;
    let purity = is_pure(&form);
    let sep = separability_eigenvalues(params)?;
    Ok(vec![
        params.r().into(),
        params.d().into(),
        params.nbar().into(),
        form.c1().into(),
        form.c2().into(),
        form.h().into(),
        n.into(),
        m.into(),
        purity.pure.into(),
        purity.residual.into(),
        sep.margin.into(),
        sep.separable.into(),
    ])
}

const COEFF_COLUMNS: [&str; 12] = [
    "r",
    "d",
    "nbar",
    "c1",
    "c2",
    "h",
    "N",
    "M",
    "pure",
    "purity_residual",
    "separability_margin",
    "separable",
];

pub fn coeffs(r: f64, d: f64, nbar: f64, solver: &str, scan: Option<CoeffsScan>) -> Result<ReportRecord> {
    SolverRegistry::with_builtins().get(solver)?;
    match scan {
        None => {
            let params = SqueezedStateParams::new(r, d, nbar)?;
            let mut rep = ReportRecord::new("coeffs", &COEFF_COLUMNS);
            rep.param("r", r).param("d", d).param("nbar", nbar).param("solver", solver);
            rep.push_row(coeff_cells(solver, &params)?);
            Ok(rep)
        }
        Some(s) => {
            let times = linear_grid(0.0, s.t_max, s.steps + 1);
            let rows: Vec<Vec<Cell>> = times
                .par_iter()
                .map(|&t| {
                    let params = SqueezedStateParams::from_rates(s.kappa, s.gamma, nbar, t)?;
                    let mut row = vec![Cell::Num(t)];
                    row.extend(coeff_cells(solver, &params)?);
                    Ok(row)
                })
                .collect::<Result<_>>()?;
            let mut columns = vec!["t"];
            columns.extend(COEFF_COLUMNS);
            let mut rep = ReportRecord::new("coeffs", &columns);
            rep.param("kappa", s.kappa)
                .param("gamma", s.gamma)
                .param("nbar", nbar)
                .param("t_max", s.t_max)
                .param("steps", s.steps)
                .param("solver", solver);
            rows.into_iter().for_each(|row| rep.push_row(row));
            Ok(rep)
        }
    }
}

// ---------------------------------------------------------------------------
// separability / steady

pub fn separability(r: f64, d: f64, nbar: f64) -> Result<ReportRecord> {
    let params = SqueezedStateParams::new(r, d, nbar)?;
    let rep_data = separability_eigenvalues(&params)?;
    let mut rep = ReportRecord::new(
        "separability",
        &[
            "r", "d", "nbar", "e12", "e34", "eig1", "eig2", "eig3", "eig4", "margin", "separable",
        ],
    );
    rep.param("r", r).param("d", d).param("nbar", nbar);
    let (e12, e34) = rep_data.closed_form;
    let mut row: Vec<Cell> = vec![r.into(), d.into(), nbar.into(), e12.into(), e34.into()];
    row.extend(rep_data.eigenvalues.iter().map(|&e| Cell::Num(e)));
    row.push(rep_data.margin.into());
    row.push(rep_data.separable.into());
    rep.push_row(row);
    Ok(rep)
}

pub fn steady(gamma: f64, kappa: f64, nbar: f64) -> Result<ReportRecord> {
    let report = steady_state(gamma, kappa, nbar)?;
    let mut rep = ReportRecord::new(
        "steady",
        &[
            "gamma",
            "kappa",
            "nbar",
            "exists",
            "classification",
            "lambda1",
            "lambda2",
            "lambda3",
            "lambda4",
            "c1",
            "c2",
            "h",
            "N",
            "M",
        ],
    );
    rep.param("gamma", gamma).param("kappa", kappa).param("nbar", nbar);
    let mut row: Vec<Cell> = vec![
        gamma.into(),
        kappa.into(),
        nbar.into(),
        report.exists.into(),
        report.classification.as_str().into(),
    ];
    row.extend(drift_eigenvalues(gamma, kappa).iter().map(|&l| Cell::Num(l)));
    match &report.limit_form {
        Some(form) => {
            let (n, m) = occupation(form)?;
            row.extend([form.c1(), form.c2(), form.h(), n, m].map(Cell::Num));
        }
        None => row.extend(std::iter::repeat_n(Cell::Empty, 5)),
    }
    rep.push_row(row);
    Ok(rep)
}

// ---------------------------------------------------------------------------
// bell / maximize

pub fn bell(state: &str, cfg: &StateConfig, js: &[f64]) -> Result<ReportRecord> {
    let wigner = StateRegistry::with_builtins().build(state, cfg)?;
    let evals = js
        .par_iter()
        .map(|&j| bell_combination(&wigner, j))
        .collect::<Result<Vec<_>>>()?;
    let slope = small_j_slope(&wigner);

    let mut rep = ReportRecord::new(
        "bell",
        &["J", "B", "pi_00", "pi_10", "pi_0m", "pi_11", "violates"],
    );
    rep.param("state", state)
        .param("r", cfg.r)
        .param("d", cfg.d)
        .param("nbar", cfg.nbar)
        .param("p", cfg.p)
        .param("kappa", cfg.kappa)
        .param("gamma", cfg.gamma);
    rep.result("label", wigner.label())
        .result("B_at_0", slope.b0)
        .result("slope_at_0", slope.slope);
    for e in evals {
        let mut row: Vec<Cell> = vec![e.settings.j().into(), e.b.into()];
        row.extend(e.correlations.iter().map(|&c| Cell::Num(c)));
        row.push(e.violates().into());
        rep.push_row(row);
    }
    Ok(rep)
}

pub fn maximize(free: &[BellParam], fixed: BellPoint, bounds: ParamBounds) -> Result<ReportRecord> {
    let req = MaximizeRequest {
        free: free.to_vec(),
        fixed,
        bounds,
    };
    let max = maximize_bell(&req)?;
    let mut rep = ReportRecord::new(
        "maximize",
        &[
            "J",
            "r",
            "d",
            "nbar",
            "B_max",
            "grid_J",
            "grid_r",
            "grid_d",
            "grid_nbar",
            "grid_B_max",
            "evaluations",
            "simplex_iterations",
            "converged",
        ],
    );
    let names: Vec<&str> = free.iter().map(|p| p.as_str()).collect();
    rep.param("free", names.join(","))
        .param("J", fixed.j)
        .param("r", fixed.r)
        .param("d", fixed.d)
        .param("nbar", fixed.nbar);
    for (name, (lo, hi)) in [
        ("J", bounds.j),
        ("r", bounds.r),
        ("d", bounds.d),
        ("nbar", bounds.nbar),
    ] {
        rep.param(&format!("{name}_min"), lo).param(&format!("{name}_max"), hi);
    }
    let mut row: Vec<Cell> = max.argmax.to_array().map(Cell::Num).to_vec();
    row.push(max.b_max.into());
    row.extend(max.grid_argmax.to_array().map(Cell::Num));
    row.push(max.grid_b_max.into());
    row.push(max.evaluations.into());
    row.push(max.simplex_iterations.into());
    row.push(max.converged.into());
    rep.push_row(row);
    Ok(rep)
}

// ---------------------------------------------------------------------------
// mixtures

fn threshold_meta(rep: &mut ReportRecord, key: &str, t: ViolationThreshold) {
    match t {
        ViolationThreshold::Threshold { p_star, lower, upper } => {
            rep.result(&format!("{key}p_star"), p_star)
                .result(&format!("{key}p_star_lower"), lower)
                .result(&format!("{key}p_star_upper"), upper);
        }
        ViolationThreshold::NoViolation => {
            rep.result(&format!("{key}p_star"), "no-violation");
        }
    }
}

/// `B(J)` curves for each mixing probability, plus the violation threshold
/// over `threshold_grid`.
pub fn mixture_curves(
    command: &str,
    kind: MixtureKind,
    r: f64,
    ps: &[f64],
    js: &[f64],
    threshold_grid: &[f64],
) -> Result<ReportRecord> {
    let specs = ps
        .iter()
        .map(|&p| MixtureSpec::new(p, r, kind))
        .collect::<Result<Vec<_>>>()?;
    let cells: Vec<(usize, f64)> = (0..specs.len())
        .flat_map(|i| js.iter().map(move |&j| (i, j)))
        .collect();
    let values = cells
        .par_iter()
        .map(|&(i, j)| mixture_bell(&specs[i], j).map(|e| e.b))
        .collect::<Result<Vec<_>>>()?;
    let threshold = violation_threshold(kind, r, threshold_grid)?;

    let mut rep = ReportRecord::new(command, &["p", "J", "B", "violates"]);
    rep.param("kind", kind.as_str()).param("r", r);
    let p_list: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
    rep.param("p", p_list.join(","));
    rep.param("J_points", js.len());
    if let (Some(lo), Some(hi)) = (js.first(), js.last()) {
        rep.param("J_first", *lo).param("J_last", *hi);
    }
    rep.param("threshold_J_min", threshold_grid[0])
        .param("threshold_J_max", threshold_grid[threshold_grid.len() - 1])
        .param("threshold_J_points", threshold_grid.len());
    threshold_meta(&mut rep, "", threshold);
    for spec in &specs {
        let s = small_j_slope(spec);
        rep.result(&format!("slope_at_0[p={}]", spec.p()), s.slope);
    }
    for (&(i, j), b) in cells.iter().zip(values) {
        rep.push_row(vec![specs[i].p().into(), j.into(), b.into(), (b > 2.0).into()]);
    }
    Ok(rep)
}

/// `J` grid from `[lo, hi]`, geometric unless `linear`.
pub fn j_grid(lo: f64, hi: f64, points: usize, linear: bool) -> Result<Vec<f64>> {
    if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && hi >= lo && points >= 1) {
        return Err(cvbell::Error::InvalidParameter(format!(
            "J grid needs 0 <= lo <= hi and at least one point, got [{lo}, {hi}] with {points}"
        )));
    }
    if points == 1 {
        return Ok(vec![lo]);
    }
    if linear {
        Ok(linear_grid(lo, hi, points))
    } else if lo == 0.0 {
        Err(cvbell::Error::InvalidParameter(
            "a geometric J grid needs a positive lower end".into(),
        ))
    } else {
        Ok(geometric_grid(lo, hi, points))
    }
}

// ---------------------------------------------------------------------------
// figures

pub fn figure(index: u8) -> Result<ReportRecord> {
    match index {
        1 => figure_separability(),
        2 => figure_surface(),
        3 => figure_cross_section(),
        4 => figure_mixture(4, MixtureKind::WernerThermal, &[1.0, 0.95, 0.9, 0.5, 0.0]),
        5 => figure_mixture(5, MixtureKind::PhaseDiffused, &[1.0, 0.5, 0.2, 0.0]),
        _ => Err(cvbell::Error::InvalidParameter(format!(
            "figure index must be 1..=5, got {index}"
        ))),
    }
}

fn figure_separability() -> Result<ReportRecord> {
    let ds = [2.5, 5.0];
    let nbars = linear_grid(0.0, 10.0, 101);
    let map = separability_map(FIGURE_R, &ds, &nbars)?;
    let mut rep = ReportRecord::new(
        "figure",
        &["d", "nbar", "e12", "e34", "margin", "separable"],
    );
    rep.param("index", 1usize).param("r", FIGURE_R).param("nbar_points", nbars.len());
    for (i, &d) in ds.iter().enumerate() {
        rep.result(&format!("boundary_nbar[d={d}]"), map.boundary[i]);
    }
    for (i, &d) in ds.iter().enumerate() {
        for (k, &n) in nbars.iter().enumerate() {
            let (e12, e34) = closed_form_eigenvalues(&SqueezedStateParams::new(FIGURE_R, d, n)?);
            rep.push_row(vec![
                d.into(),
                n.into(),
                e12.into(),
                e34.into(),
                map.margins[i][k].into(),
                map.separable[i][k].into(),
            ]);
        }
    }
    Ok(rep)
}

fn figure_surface() -> Result<ReportRecord> {
    let js = linear_grid(0.0, 0.1, 101);
    let ds = linear_grid(0.0, 2.0, 41);
    let surface = bell_surface(FIGURE_R, 0.0, &js, &ds)?;
    let mut rep = ReportRecord::new("figure", &["d", "J", "B"]);
    rep.param("index", 2usize)
        .param("r", FIGURE_R)
        .param("nbar", 0.0)
        .param("J_points", js.len())
        .param("d_points", ds.len());
    for (i, &d) in ds.iter().enumerate() {
        for (k, &j) in js.iter().enumerate() {
            rep.push_row(vec![d.into(), j.into(), surface.values[i][k].into()]);
        }
    }
    Ok(rep)
}

fn figure_cross_section() -> Result<ReportRecord> {
    let ds = linear_grid(0.0, 50.0, 501);
    let values = ds
        .par_iter()
        .map(|&d| {
            let form = cvbell::evolve_coefficients(&SqueezedStateParams::new(FIGURE_R, d, 0.0)?);
            Ok(bell_closed_form(&form, FIGURE_J))
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut rep = ReportRecord::new("figure", &["d", "B"]);
    rep.param("index", 3usize)
        .param("r", FIGURE_R)
        .param("nbar", 0.0)
        .param("J", FIGURE_J)
        .param("d_points", ds.len());
    for (d, b) in ds.into_iter().zip(values) {
        rep.push_row(vec![d.into(), b.into()]);
    }
    Ok(rep)
}

fn figure_mixture(index: usize, kind: MixtureKind, ps: &[f64]) -> Result<ReportRecord> {
    let js = linear_grid(0.0, 0.1, 201);
    let mut rep = mixture_curves("figure", kind, FIGURE_R, ps, &js, &default_threshold_grid())?;
    rep.param("index", index);
    Ok(rep)
}

// ---------------------------------------------------------------------------
// states

pub fn states() -> ReportRecord {
    let mut rep = ReportRecord::new("states", &["kind", "name", "description"]);
    for (name, description) in StateRegistry::with_builtins().list() {
        rep.push_row(vec!["state".into(), name.into(), description.into()]);
    }
    for name in SolverRegistry::with_builtins().names() {
        rep.push_row(vec![
            "solver".into(),
            name.into(),
            "coefficient route for coeffs --solver".into(),
        ]);
    }
    rep
}
