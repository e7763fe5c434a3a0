//! Temporal → Coulomb gauge transformation of the rectangular configuration.
//!
//! The divergence of the temporal-gauge potential, `∇·A = 4πC`, is removed by
//! `A′ = A − ∇Λ`, `φ′ = φ − ∂_tΛ` with `∇²Λ = 4πC`. In the singular limit
//! `Λ = W(t) F(x, y)`; here `Λ` is also obtained numerically from one spatial
//! Poisson solve scaled by the time window.

mod interp;
mod poisson;

use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;

pub use interp::catmull_rom;
pub use poisson::{
    solve_poisson, Grid2, GridSolution, Method, PoissonProblem, SolveReport, SolverOptions,
};

use crate::error::{FieldError, GaugeError};
use crate::gauges::{eval_f, Side};
use crate::kernels::{delta, delta_prime, Window, SUPPORT_CUTOFF};
use crate::model::{
    Breakpoints, Exclusion, GaugeLabel, Num, Potential, PotentialField, Setup, SpacetimePoint,
};

/// `C = (1/4π)∇·A = ¼ W(t) S(x) δ′(y)`.
pub fn divergence_source(setup: &Setup, p: SpacetimePoint) -> f64 {
    let reg = setup.reg();
    let w = Window::new(0.0, setup.duration(), reg.eps_t).value(p.t);
    w * spatial_source(setup, p.x, p.y)
}

/// Time-independent factor `¼ S(x) δ′(y)` of [`divergence_source`].
pub fn spatial_source(setup: &Setup, x: f64, y: f64) -> f64 {
    let reg = setup.reg();
    0.25 * Window::new(0.0, setup.length(), reg.eps_x).value(x) * delta_prime(y, reg.eps_y)
}

/// Two-dimensional logarithmic Green's function `−2 ln|p − p0|`.
pub fn greens_log(p: (f64, f64), p0: (f64, f64)) -> Result<f64, GaugeError> {
    let r = (p.0 - p0.0).hypot(p.1 - p0.1);
    if r == 0.0 {
        return Err(GaugeError::CoincidentPoints);
    }
    Ok(-2.0 * r.ln())
}

/// `Λ = W(t) F(x, y)`; `side` selects a one-sided limit on the cut.
pub fn lambda_analytic(
    setup: &Setup,
    p: SpacetimePoint,
    side: Option<Side>,
) -> Result<f64, FieldError> {
    let w = Window::new(0.0, setup.duration(), setup.reg().eps_t).value(p.t);
    if w == 0.0 {
        return Ok(0.0);
    }
    Ok(w * eval_f(p.x, p.y, setup.length(), side)?)
}

const GL8: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_2, 0.101_228_536_290_376_26),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_48),
    (-0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_48),
    (0.960_289_856_497_536_2, 0.101_228_536_290_376_26),
];

fn gauss_legendre_nodes(lo: f64, hi: f64, panels: usize) -> Vec<(f64, f64)> {
    let h = (hi - lo) / panels as f64;
    let mut out = Vec::with_capacity(8 * panels);
    for k in 0..panels {
        let mid = lo + (k as f64 + 0.5) * h;
        for &(u, w) in &GL8 {
            out.push((mid + 0.5 * h * u, 0.5 * h * w));
        }
    }
    out
}

/// Spatial gauge function from the Green's-function integral
/// `∫ C_s(x′, y′) ln[(x−x′)² + (y−y′)²] dx′dy′`, by composite
/// Gauss–Legendre quadrature over the support of the regularized source.
/// Accurate for field points at least a few widths away from the sheet.
pub fn lambda_greens(setup: &Setup, x: f64, y: f64) -> f64 {
    let reg = setup.reg();
    let l = setup.length();
    let (wx, wy) = (SUPPORT_CUTOFF * reg.eps_x, SUPPORT_CUTOFF * reg.eps_y);
    let xs = {
        let mut v = gauss_legendre_nodes(-wx, wx, 16);
        v.extend(gauss_legendre_nodes(wx, l - wx, 32));
        v.extend(gauss_legendre_nodes(l - wx, l + wx, 16));
        v
    };
    let ys = gauss_legendre_nodes(-wy, wy, 16);
    let space = Window::new(0.0, l, reg.eps_x);
    // After integrating by parts in y′: ∫δ′(y′) ln r² dy′ = ∫δ(y′) 2(y−y′)/r² dy′.
    let mut total = 0.0;
    for &(yp, wyp) in &ys {
        let dy = delta(yp, reg.eps_y);
        if dy == 0.0 {
            continue;
        }
        let mut row = 0.0;
        for &(xp, wxp) in &xs {
            let (rx, ry) = (x - xp, y - yp);
            row += wxp * space.value(xp) * 2.0 * ry / (rx * rx + ry * ry);
        }
        total += wyp * dy * row;
    }
    0.25 * total
}

/// Time dependence of a gauge function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeProfile {
    /// Scaled by a smoothed window and its derivative.
    Window(Window),
    /// No time dependence.
    Static,
}

impl TimeProfile {
    pub fn value(&self, t: f64) -> f64 {
        match self {
            TimeProfile::Window(w) => w.value(t),
            TimeProfile::Static => 1.0,
        }
    }

    pub fn d1(&self, t: f64) -> f64 {
        match self {
            TimeProfile::Window(w) => w.d1(t),
            TimeProfile::Static => 0.0,
        }
    }
}

/// Gauge function `Λ(t, x, y) = τ(t) Λ_s(x, y)` with `Λ_s` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeFunction {
    pub grid: Grid2,
    pub values: Vec<f64>,
    pub time: TimeProfile,
}

impl GaugeFunction {
    pub fn new(solution: GridSolution, time: TimeProfile) -> Self {
        Self {
            grid: solution.grid,
            values: solution.values,
            time,
        }
    }

    /// Spatial factor and its gradient at `(x, y)`.
    pub fn spatial(&self, x: f64, y: f64) -> Result<(f64, f64, f64), FieldError> {
        catmull_rom(&self.grid, &self.values, x, y).ok_or(FieldError::OutsideDomain { x, y })
    }

    pub fn value(&self, p: SpacetimePoint) -> Result<f64, FieldError> {
        Ok(self.time.value(p.t) * self.spatial(p.x, p.y)?.0)
    }

    pub const CSV_HEADER: &'static str = "x,y,lambda";

    /// Grid values as CSV, rows of constant `y` from bottom to top.
    pub fn to_csv(&self) -> String {
        let g = &self.grid;
        let mut s = String::with_capacity(g.len() * 40);
        let _ = writeln!(s, "{}", Self::CSV_HEADER);
        for j in 0..g.ny {
            for i in 0..g.nx {
                let _ = writeln!(
                    s,
                    "{},{},{}",
                    Num(g.x(i)),
                    Num(g.y(j)),
                    Num(self.values[g.idx(i, j)])
                );
            }
        }
        s
    }
}

/// Source of Dirichlet data for the gauge-function solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundarySource {
    /// Closed form `F(x, y)`.
    Analytic,
    /// Green's-function quadrature of the regularized source.
    Greens,
}

/// Domain and resolution of the spatial gauge-function solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaGridSpec {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub nx: usize,
    pub ny: usize,
    pub boundary: BoundarySource,
}

impl LambdaGridSpec {
    /// `[−L/4, 5L/4] × [−3L/4, 3L/4]` with `n × n` nodes.
    pub fn standard(setup: &Setup, n: usize) -> Self {
        let l = setup.length();
        Self {
            x: (-0.25 * l, 1.25 * l),
            y: (-0.75 * l, 0.75 * l),
            nx: n,
            ny: n,
            boundary: BoundarySource::Analytic,
        }
    }
}

/// Poisson problem `∇²Λ_s = 4π C_s` for the spatial gauge function.
pub fn lambda_problem(setup: &Setup, spec: &LambdaGridSpec) -> Result<PoissonProblem, GaugeError> {
    let grid = Grid2::spanning(spec.x, spec.y, spec.nx, spec.ny)?;
    let s = *setup;
    let rhs = move |x: f64, y: f64| 4.0 * std::f64::consts::PI * spatial_source(&s, x, y);
    match spec.boundary {
        BoundarySource::Analytic => PoissonProblem::from_fns(grid, rhs, move |x, y| {
            eval_f(x, y, s.length(), Some(Side::Above)).unwrap_or(0.0)
        }),
        BoundarySource::Greens => {
            PoissonProblem::from_fns(grid, rhs, move |x, y| lambda_greens(&s, x, y))
        }
    }
}

/// Solve for the gauge function of the rectangular configuration.
pub fn solve_lambda(
    setup: &Setup,
    spec: &LambdaGridSpec,
    opts: &SolverOptions,
) -> Result<(GaugeFunction, SolveReport), GaugeError> {
    let problem = lambda_problem(setup, spec)?;
    let (sol, report) = solve_poisson(&problem, opts)?;
    let window = Window::new(0.0, setup.duration(), setup.reg().eps_t);
    Ok((GaugeFunction::new(sol, TimeProfile::Window(window)), report))
}

/// Relative L2 difference between a solved spatial gauge function and
/// `F(x, y)` over grid nodes with `|y| ≥ exclude_y`.
pub fn lambda_error_vs_analytic(setup: &Setup, lambda: &GaugeFunction, exclude_y: f64) -> f64 {
    let g = &lambda.grid;
    let rows: Vec<(f64, f64)> = (0..g.ny)
        .into_par_iter()
        .map(|j| {
            let y = g.y(j);
            if y.abs() < exclude_y {
                return (0.0, 0.0);
            }
            let (mut num, mut den) = (0.0, 0.0);
            for i in 0..g.nx {
                let f = eval_f(g.x(i), y, setup.length(), Some(Side::Above)).unwrap_or(0.0);
                let d = lambda.values[g.idx(i, j)] - f;
                num += d * d;
                den += f * f;
            }
            (num, den)
        })
        .collect();
    let (num, den) = rows
        .into_iter()
        .fold((0.0, 0.0), |(a, b), (c, d)| (a + c, b + d));
    (num / den).sqrt()
}

/// `A′ = A − ∇Λ`, `φ′ = φ − ∂_tΛ` for a gridded gauge function applied to a
/// base field.
#[derive(Clone)]
pub struct NumericCoulombGauge {
    base: Arc<dyn PotentialField>,
    lambda: GaugeFunction,
    exclusions: Vec<Exclusion>,
}

impl std::fmt::Debug for NumericCoulombGauge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NumericCoulombGauge")
            .field("base", &self.base.gauge())
            .field("grid", &self.lambda.grid)
            .field("time", &self.lambda.time)
            .finish()
    }
}

impl NumericCoulombGauge {
    pub fn lambda(&self) -> &GaugeFunction {
        &self.lambda
    }
}

/// Apply a solved gauge function to `field`. Loops around the numeric field
/// keep the same core exclusions as the closed-form Coulomb field.
pub fn numeric_coulomb_transform(
    field: Arc<dyn PotentialField>,
    lambda: GaugeFunction,
    exclusions: Vec<Exclusion>,
) -> NumericCoulombGauge {
    NumericCoulombGauge {
        base: field,
        lambda,
        exclusions,
    }
}

impl PotentialField for NumericCoulombGauge {
    fn gauge(&self) -> GaugeLabel {
        GaugeLabel::NumericCoulomb
    }

    fn potential(&self, p: SpacetimePoint) -> Result<Potential, FieldError> {
        let a = self.base.potential(p)?;
        let (w, wd) = (self.lambda.time.value(p.t), self.lambda.time.d1(p.t));
        let (l, lx, ly) = self.lambda.spatial(p.x, p.y)?;
        Ok(Potential {
            phi: a.phi - wd * l,
            ax: a.ax - w * lx,
            ay: a.ay - w * ly,
        })
    }

    fn breakpoints(&self) -> Breakpoints {
        self.base.breakpoints()
    }

    fn exclusions(&self) -> Vec<Exclusion> {
        self.exclusions.clone()
    }
}
