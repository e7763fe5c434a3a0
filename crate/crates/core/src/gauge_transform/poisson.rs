//! Dirichlet problem `∇²u = f` on a rectangle, discretized with the 5-point
//! stencil and solved by red-black SOR or multigrid V-cycles.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::GaugeError;

/// Uniform node-centred grid; node `(i, j)` sits at `(x0 + i·hx, y0 + j·hy)`
/// and is stored at `j·nx + i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2 {
    pub x0: f64,
    pub y0: f64,
    pub hx: f64,
    pub hy: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Grid2 {
    /// Grid with `nx × ny` nodes spanning `[x_lo, x_hi] × [y_lo, y_hi]`.
    pub fn spanning(
        x: (f64, f64),
        y: (f64, f64),
        nx: usize,
        ny: usize,
    ) -> Result<Self, GaugeError> {
        if nx < 3 || ny < 3 {
            return Err(GaugeError::InvalidProblem(format!(
                "grid needs at least 3x3 nodes, got {nx}x{ny}"
            )));
        }
        if !(x.1 > x.0 && y.1 > y.0) || ![x.0, x.1, y.0, y.1].iter().all(|v| v.is_finite()) {
            return Err(GaugeError::InvalidProblem(
                "empty or non-finite domain".into(),
            ));
        }
        Ok(Self {
            x0: x.0,
            y0: y.0,
            hx: (x.1 - x.0) / (nx - 1) as f64,
            hy: (y.1 - y.0) / (ny - 1) as f64,
            nx,
            ny,
        })
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.hx
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y0 + j as f64 * self.hy
    }

    pub fn x_max(&self) -> f64 {
        self.x(self.nx - 1)
    }

    pub fn y_max(&self) -> f64 {
        self.y(self.ny - 1)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i == self.nx - 1 || j == self.ny - 1
    }

    /// Boundary nodes in the order bottom row, top row, left column, right
    /// column (corners belong to the rows).
    pub fn perimeter(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(2 * self.nx + 2 * (self.ny - 2));
        out.extend((0..self.nx).map(|i| (i, 0)));
        out.extend((0..self.nx).map(|i| (i, self.ny - 1)));
        out.extend((1..self.ny - 1).map(|j| (0, j)));
        out.extend((1..self.ny - 1).map(|j| (self.nx - 1, j)));
        out
    }

    fn coarsened(&self) -> Option<Self> {
        let ok = |n: usize| n > 3 && (n - 1).is_multiple_of(2);
        if !ok(self.nx) || !ok(self.ny) {
            return None;
        }
        Some(Self {
            hx: 2.0 * self.hx,
            hy: 2.0 * self.hy,
            nx: (self.nx - 1) / 2 + 1,
            ny: (self.ny - 1) / 2 + 1,
            ..*self
        })
    }
}

/// `∇²u = rhs` with Dirichlet data on the perimeter (ordered as
/// [`Grid2::perimeter`]).
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonProblem {
    grid: Grid2,
    rhs: Vec<f64>,
    boundary: Vec<f64>,
}

impl PoissonProblem {
    pub fn new(grid: Grid2, rhs: Vec<f64>, boundary: Vec<f64>) -> Result<Self, GaugeError> {
        if rhs.len() != grid.len() {
            return Err(GaugeError::InvalidProblem(format!(
                "rhs has {} values for {} nodes",
                rhs.len(),
                grid.len()
            )));
        }
        let np = 2 * grid.nx + 2 * (grid.ny - 2);
        if boundary.len() != np {
            return Err(GaugeError::InvalidProblem(format!(
                "boundary has {} values for {np} perimeter nodes",
                boundary.len()
            )));
        }
        if rhs.iter().chain(&boundary).any(|v| !v.is_finite()) {
            return Err(GaugeError::InvalidProblem("non-finite data".into()));
        }
        Ok(Self {
            grid,
            rhs,
            boundary,
        })
    }

    /// Sample the right-hand side and boundary data from closures.
    pub fn from_fns(
        grid: Grid2,
        rhs: impl Fn(f64, f64) -> f64 + Sync,
        boundary: impl Fn(f64, f64) -> f64 + Sync,
    ) -> Result<Self, GaugeError> {
        let mut f = vec![0.0; grid.len()];
        f.par_chunks_mut(grid.nx).enumerate().for_each(|(j, row)| {
            let y = grid.y(j);
            for (i, v) in row.iter_mut().enumerate() {
                *v = rhs(grid.x(i), y);
            }
        });
        let b = grid
            .perimeter()
            .par_iter()
            .map(|&(i, j)| boundary(grid.x(i), grid.y(j)))
            .collect();
        Self::new(grid, f, b)
    }

    pub fn grid(&self) -> &Grid2 {
        &self.grid
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn boundary(&self) -> &[f64] {
        &self.boundary
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Red-black successive over-relaxation with the optimal factor.
    Sor,
    /// V(2,2) cycles with red-black Gauss–Seidel smoothing; needs
    /// `2^k + 1` nodes per side.
    Multigrid,
    /// Multigrid when the grid allows it, SOR otherwise.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub method: Method,
    /// Stopping tolerance on the max residual, relative to
    /// `max(|f|, |boundary|/h²)`.
    pub tol: f64,
    /// Cap on relaxation sweeps on the finest grid.
    pub max_sweeps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            method: Method::Auto,
            tol: 1e-10,
            max_sweeps: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub nx: usize,
    pub ny: usize,
    pub method: Method,
    /// SOR sweeps or multigrid cycles.
    pub iterations: usize,
    /// Final max residual relative to the problem scale.
    pub residual: f64,
    /// Relative residual after every cycle (multigrid) or every batch of
    /// sweeps (SOR).
    pub history: Vec<f64>,
    pub wall_time: Duration,
}

impl SolveReport {
    pub fn to_text(&self, with_time: bool) -> String {
        let mut s = String::new();
        let method = match self.method {
            Method::Sor => "red-black SOR",
            _ => "multigrid V(2,2)",
        };
        let unit = if self.method == Method::Sor {
            "sweeps"
        } else {
            "cycles"
        };
        let _ = writeln!(s, "grid: {} x {}", self.nx, self.ny);
        let _ = writeln!(s, "method: {method}");
        let _ = writeln!(s, "iterations: {} {unit}", self.iterations);
        let _ = writeln!(s, "final residual: {:e}", self.residual);
        if with_time {
            let _ = writeln!(s, "wall time: {:.3} s", self.wall_time.as_secs_f64());
        }
        let hist: Vec<String> = self.history.iter().map(|r| format!("{r:e}")).collect();
        let _ = writeln!(s, "residual history: {}", hist.join(" "));
        s
    }
}

/// Solution values on the problem grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSolution {
    pub grid: Grid2,
    pub values: Vec<f64>,
}

struct Level {
    grid: Grid2,
    u: Vec<f64>,
    f: Vec<f64>,
    scratch: Vec<f64>,
}

impl Level {
    fn new(grid: Grid2) -> Self {
        Self {
            grid,
            u: vec![0.0; grid.len()],
            f: vec![0.0; grid.len()],
            scratch: vec![0.0; grid.len()],
        }
    }
}

/// One red-black relaxation sweep. Each colour reads only the other colour,
/// so new values for a colour are computed row-parallel from the current
/// state and then written back.
fn rb_sweep(g: &Grid2, u: &mut [f64], f: &[f64], scratch: &mut [f64], omega: f64) {
    let (cx, cy) = (1.0 / (g.hx * g.hx), 1.0 / (g.hy * g.hy));
    let diag = 2.0 * (cx + cy);
    let nx = g.nx;
    for colour in 0..2 {
        {
            let u: &[f64] = u;
            scratch
                .par_chunks_mut(nx)
                .enumerate()
                .skip(1)
                .take(g.ny - 2)
                .for_each(|(j, row)| {
                    let start = 1 + (j + 1 + colour) % 2;
                    for i in (start..nx - 1).step_by(2) {
                        let k = j * nx + i;
                        let gs = (cx * (u[k - 1] + u[k + 1]) + cy * (u[k - nx] + u[k + nx]) - f[k])
                            / diag;
                        row[i] = u[k] + omega * (gs - u[k]);
                    }
                });
        }
        for j in 1..g.ny - 1 {
            let start = 1 + (j + 1 + colour) % 2;
            for i in (start..nx - 1).step_by(2) {
                let k = j * nx + i;
                u[k] = scratch[k];
            }
        }
    }
}

/// `f − ∇²_h u` on interior nodes, zero on the boundary.
fn residual_into(g: &Grid2, u: &[f64], f: &[f64], r: &mut [f64]) {
    let (cx, cy) = (1.0 / (g.hx * g.hx), 1.0 / (g.hy * g.hy));
    let nx = g.nx;
    r.par_chunks_mut(nx).enumerate().for_each(|(j, row)| {
        if j == 0 || j == g.ny - 1 {
            row.fill(0.0);
            return;
        }
        row[0] = 0.0;
        row[nx - 1] = 0.0;
        for i in 1..nx - 1 {
            let k = j * nx + i;
            let lap =
                cx * (u[k - 1] - 2.0 * u[k] + u[k + 1]) + cy * (u[k - nx] - 2.0 * u[k] + u[k + nx]);
            row[i] = f[k] - lap;
        }
    });
}

fn max_abs_residual(g: &Grid2, u: &[f64], f: &[f64]) -> f64 {
    let (cx, cy) = (1.0 / (g.hx * g.hx), 1.0 / (g.hy * g.hy));
    let nx = g.nx;
    let rows: Vec<f64> = (1..g.ny - 1)
        .into_par_iter()
        .map(|j| {
            let mut m: f64 = 0.0;
            for i in 1..nx - 1 {
                let k = j * nx + i;
                let lap = cx * (u[k - 1] - 2.0 * u[k] + u[k + 1])
                    + cy * (u[k - nx] - 2.0 * u[k] + u[k + nx]);
                m = m.max((f[k] - lap).abs());
            }
            m
        })
        .collect();
    rows.into_iter().fold(0.0, f64::max)
}

fn restrict_full_weighting(fine: &Grid2, r: &[f64], coarse: &Grid2, out: &mut [f64]) {
    let nxf = fine.nx;
    out.par_chunks_mut(coarse.nx)
        .enumerate()
        .for_each(|(jc, row)| {
            if jc == 0 || jc == coarse.ny - 1 {
                row.fill(0.0);
                return;
            }
            row[0] = 0.0;
            row[coarse.nx - 1] = 0.0;
            for ic in 1..coarse.nx - 1 {
                let k = 2 * jc * nxf + 2 * ic;
                row[ic] = (4.0 * r[k]
                    + 2.0 * (r[k - 1] + r[k + 1] + r[k - nxf] + r[k + nxf])
                    + r[k - nxf - 1]
                    + r[k - nxf + 1]
                    + r[k + nxf - 1]
                    + r[k + nxf + 1])
                    / 16.0;
            }
        });
}

fn prolong_add(coarse: &Grid2, e: &[f64], fine: &Grid2, u: &mut [f64]) {
    let ncx = coarse.nx;
    u.par_chunks_mut(fine.nx).enumerate().for_each(|(j, row)| {
        if j == 0 || j == fine.ny - 1 {
            return;
        }
        let (jc, oddj) = (j / 2, j % 2 == 1);
        for i in 1..fine.nx - 1 {
            let (ic, oddi) = (i / 2, i % 2 == 1);
            let at = |a: usize, b: usize| e[b * ncx + a];
            let v = match (oddi, oddj) {
                (false, false) => at(ic, jc),
                (true, false) => 0.5 * (at(ic, jc) + at(ic + 1, jc)),
                (false, true) => 0.5 * (at(ic, jc) + at(ic, jc + 1)),
                (true, true) => {
                    0.25 * (at(ic, jc) + at(ic + 1, jc) + at(ic, jc + 1) + at(ic + 1, jc + 1))
                }
            };
            row[i] += v;
        }
    });
}

fn v_cycle(levels: &mut [Level], sweeps: &mut usize) {
    let (head, tail) = levels.split_first_mut().expect("at least one level");
    let g = head.grid;
    if tail.is_empty() {
        // Coarsest level: relax to convergence.
        let n = 4 * (g.nx + g.ny) + 20;
        for _ in 0..n {
            rb_sweep(&g, &mut head.u, &head.f, &mut head.scratch, 1.0);
        }
        return;
    }
    for _ in 0..2 {
        rb_sweep(&g, &mut head.u, &head.f, &mut head.scratch, 1.0);
    }
    *sweeps += 2;
    residual_into(&g, &head.u, &head.f, &mut head.scratch);
    let next = &mut tail[0];
    restrict_full_weighting(&g, &head.scratch, &next.grid, &mut next.f);
    next.u.fill(0.0);
    let mut inner = 0;
    v_cycle(tail, &mut inner);
    prolong_add(&tail[0].grid, &tail[0].u, &g, &mut head.u);
    for _ in 0..2 {
        rb_sweep(&g, &mut head.u, &head.f, &mut head.scratch, 1.0);
    }
    *sweeps += 2;
}

fn multigrid_levels(grid: &Grid2) -> Option<Vec<Grid2>> {
    let mut out = vec![*grid];
    while let Some(c) = out.last().and_then(Grid2::coarsened) {
        out.push(c);
    }
    let last = out.last()?;
    // Coarsening must reach a small grid in both directions.
    if out.len() < 2 || last.nx.min(last.ny) > 5 || last.nx.max(last.ny) > 65 {
        return None;
    }
    Some(out)
}

/// Solve the Dirichlet problem; fails with the last residual if the sweep
/// budget runs out before the tolerance is met.
pub fn solve_poisson(
    problem: &PoissonProblem,
    opts: &SolverOptions,
) -> Result<(GridSolution, SolveReport), GaugeError> {
    let start = Instant::now();
    if !(opts.tol > 0.0) {
        return Err(GaugeError::InvalidProblem(
            "tolerance must be positive".into(),
        ));
    }
    let g = problem.grid;
    let mut u = vec![0.0; g.len()];
    for (&(i, j), &b) in g.perimeter().iter().zip(&problem.boundary) {
        u[g.idx(i, j)] = b;
    }
    let h2 = g.hx.min(g.hy).powi(2);
    let bmax = problem.boundary.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let fmax = problem.rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut scale = fmax.max(bmax / h2);
    if scale == 0.0 {
        scale = 1.0;
    }
    let levels = match opts.method {
        Method::Sor => None,
        Method::Multigrid => Some(multigrid_levels(&g).ok_or_else(|| {
            GaugeError::InvalidProblem(format!(
                "multigrid needs 2^k+1 nodes per side with matching depth, got {}x{}",
                g.nx, g.ny
            ))
        })?),
        Method::Auto => multigrid_levels(&g),
    };
    let mut history = Vec::new();
    let mut residual = max_abs_residual(&g, &u, &problem.rhs) / scale;
    let mut iterations = 0;
    let mut sweeps = 0;
    let method;
    if let Some(grids) = levels {
        method = Method::Multigrid;
        let mut lv: Vec<Level> = grids.into_iter().map(Level::new).collect();
        lv[0].u = u;
        lv[0].f = problem.rhs.clone();
        while residual > opts.tol {
            if sweeps >= opts.max_sweeps {
                return Err(GaugeError::NotConverged {
                    iterations,
                    residual,
                });
            }
            v_cycle(&mut lv, &mut sweeps);
            iterations += 1;
            residual = max_abs_residual(&g, &lv[0].u, &lv[0].f) / scale;
            history.push(residual);
        }
        u = std::mem::take(&mut lv[0].u);
    } else {
        method = Method::Sor;
        let (cx, cy) = (1.0 / (g.hx * g.hx), 1.0 / (g.hy * g.hy));
        let rho = (cx * (std::f64::consts::PI / (g.nx - 1) as f64).cos()
            + cy * (std::f64::consts::PI / (g.ny - 1) as f64).cos())
            / (cx + cy);
        let omega = 2.0 / (1.0 + (1.0 - rho * rho).sqrt());
        let batch = 20;
        let mut scratch = vec![0.0; g.len()];
        while residual > opts.tol {
            if iterations >= opts.max_sweeps {
                return Err(GaugeError::NotConverged {
                    iterations,
                    residual,
                });
            }
            for _ in 0..batch {
                rb_sweep(&g, &mut u, &problem.rhs, &mut scratch, omega);
            }
            iterations += batch;
            residual = max_abs_residual(&g, &u, &problem.rhs) / scale;
            history.push(residual);
        }
    }
    let report = SolveReport {
        nx: g.nx,
        ny: g.ny,
        method,
        iterations,
        residual,
        history,
        wall_time: start.elapsed(),
    };
    Ok((GridSolution { grid: g, values: u }, report))
}
