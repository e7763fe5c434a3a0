//! Fields, charge and current densities, and finite-difference checks of
//! Gauss's law, the Ampère–Maxwell law and charge continuity.
//!
//! Both planar configurations have the form `A_y = π R(t, x) δ_ε(y)` for a
//! smooth profile `R`, so that
//!
//! ```text
//! E_y = −π R_t δ(y)          B_z = π R_x δ(y)
//! ρ   = −¼ R_t δ′(y)
//! j_c = ¼ R_tt δ(y) ŷ        j_s = ¼ (R_x δ′(y), −R_xx δ(y))
//! ```
//!
//! `j_s = ¼ curl{R_x δ(y) ẑ}` is the solenoid current, with the planar curl
//! `curl{M ẑ} = (∂_y M, −∂_x M)`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::FieldError;
use crate::gauges::{Jet2, RectTemporalGauge, RhombusTemporalGauge, ToroidalTemporalGauge};
use crate::kernels::{delta, delta_prime, step, Window, SUPPORT_CUTOFF};
use crate::model::{CylPoint, Num, PotentialField, Setup, SpacetimePoint};

/// Electric field and out-of-plane magnetic field. For the toroidal
/// configuration the slots hold `(E_r, E_z, B_φ)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldSample {
    pub ex: f64,
    pub ey: f64,
    pub bz: f64,
}

impl FieldSample {
    pub fn max_abs(&self) -> f64 {
        self.ex.abs().max(self.ey.abs()).max(self.bz.abs())
    }
}

/// Charge density and the two parts of the current density. For the
/// toroidal configuration the current slots hold `(j_r, j_z)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SourceSample {
    pub rho: f64,
    /// Capacitor (conduction) current.
    pub jc: [f64; 2],
    /// Solenoid current.
    pub js: [f64; 2],
}

impl SourceSample {
    pub fn j(&self) -> [f64; 2] {
        [self.jc[0] + self.js[0], self.jc[1] + self.js[1]]
    }
}

fn sheet_fields(r: &Jet2, y: f64, eps_y: f64) -> FieldSample {
    let d = delta(y, eps_y);
    FieldSample {
        ex: 0.0,
        ey: -PI * r.dt * d,
        bz: PI * r.dx * d,
    }
}

fn sheet_sources(r: &Jet2, y: f64, eps_y: f64) -> SourceSample {
    let d = delta(y, eps_y);
    let dp = delta_prime(y, eps_y);
    SourceSample {
        rho: -0.25 * r.dt * dp,
        jc: [0.0, 0.25 * r.dtt * d],
        js: [0.25 * r.dx * dp, -0.25 * r.dxx * d],
    }
}

/// Profile `R = W(t) S(x)` of the rectangular sheet.
fn rect_jet(setup: &Setup, t: f64, x: f64) -> Jet2 {
    let reg = setup.reg();
    let w = Window::new(0.0, setup.duration(), reg.eps_t);
    let s = Window::new(0.0, setup.length(), reg.eps_x);
    let (w0, w1, w2) = (w.value(t), w.d1(t), w.d2(t));
    let (s0, s1, s2) = (s.value(x), s.d1(x), s.d2(x));
    Jet2 {
        value: w0 * s0,
        dt: w1 * s0,
        dx: w0 * s1,
        dtt: w2 * s0,
        dtx: w1 * s1,
        dxx: w0 * s2,
    }
}

/// Closed-form `E` and `B` of the rectangular configuration.
pub fn fields_analytic(setup: &Setup, p: SpacetimePoint) -> FieldSample {
    sheet_fields(&rect_jet(setup, p.t, p.x), p.y, setup.reg().eps_y)
}

/// Charge density of the rectangular configuration.
pub fn charge_density(setup: &Setup, p: SpacetimePoint) -> f64 {
    let reg = setup.reg();
    let wd = Window::new(0.0, setup.duration(), reg.eps_t).d1(p.t);
    let s = Window::new(0.0, setup.length(), reg.eps_x).value(p.x);
    -0.25 * wd * s * delta_prime(p.y, reg.eps_y)
}

/// Capacitor and solenoid currents `(j_c, j_s)` of the rectangular
/// configuration.
pub fn current_density(setup: &Setup, p: SpacetimePoint) -> ([f64; 2], [f64; 2]) {
    let s = sheet_sources(&rect_jet(setup, p.t, p.x), p.y, setup.reg().eps_y);
    (s.jc, s.js)
}

/// Densities of the boosted configuration. Written with the dipole
/// trajectory terms `f±` (electric dipoles, carried by the `vt ∓ x` steps)
/// and `g±` (magnetic dipoles) as `ρ = −(v/4)(f₊ − f₋)δ′(y)` and
/// `j_s = ¼ curl{(g₋ − g₊)δ(y) ẑ}`.
pub fn dipole_densities(gauge: &RhombusTemporalGauge, p: SpacetimePoint) -> SourceSample {
    let v = gauge.setup().cfg().boost;
    let eps_y = gauge.setup().reg().eps_y;
    let f = gauge.profile().factor_jets(p.t, p.x);
    let (s1, s2, s3, s4) = (f[0].s, f[1].s, f[2].s, f[3].s);
    let (d1, d2, d3, d4) = (f[0].d, f[1].d, f[2].d, f[3].d);
    let f_plus = (d1 * s2 + s1 * d2) * s3 * s4;
    let f_minus = (d3 * s4 + s3 * d4) * s1 * s2;
    let g_plus = d1 * s2 * s3 * s4 + s1 * s2 * s3 * d4;
    let g_minus = s1 * d2 * s3 * s4 + s1 * s2 * d3 * s4;
    let jet = gauge.profile().jet(p.t, p.x);
    let dp = delta_prime(p.y, eps_y);
    let d = delta(p.y, eps_y);
    SourceSample {
        rho: -0.25 * v * (f_plus - f_minus) * dp,
        jc: [0.0, 0.25 * jet.dtt * d],
        js: [0.25 * (g_minus - g_plus) * dp, -0.25 * jet.dxx * d],
    }
}

/// Densities of the toroidal configuration, components `(r, z)`.
pub fn toroidal_densities(gauge: &ToroidalTemporalGauge, p: CylPoint) -> SourceSample {
    let setup = gauge.setup();
    let reg = setup.reg();
    let w = Window::new(0.0, setup.duration(), reg.eps_t);
    let u = gauge.radius() - p.r();
    let theta = step(u, reg.eps_x);
    let dr = delta(u, reg.eps_x);
    let dz = delta(p.z, reg.eps_y);
    let dzp = delta_prime(p.z, reg.eps_y);
    let ring = if dr == 0.0 {
        0.0
    } else {
        dz * (dr / p.r() - delta_prime(u, reg.eps_x))
    };
    let w0 = w.value(p.t);
    SourceSample {
        rho: -0.25 * w.d1(p.t) * theta * dzp,
        jc: [0.0, 0.25 * w.d2(p.t) * theta * dz],
        js: [-0.25 * w0 * dr * dzp, 0.25 * w0 * ring],
    }
}

/// Fields of the toroidal configuration `(E_r, E_z, B_φ)`.
pub fn toroidal_fields(gauge: &ToroidalTemporalGauge, p: CylPoint) -> FieldSample {
    let setup = gauge.setup();
    let reg = setup.reg();
    let w = Window::new(0.0, setup.duration(), reg.eps_t);
    let u = gauge.radius() - p.r();
    let dz = delta(p.z, reg.eps_y);
    FieldSample {
        ex: 0.0,
        ey: -PI * w.d1(p.t) * step(u, reg.eps_x) * dz,
        bz: PI * w.value(p.t) * delta(u, reg.eps_x) * dz,
    }
}

/// `E = ∇φ − ∂_t A` and `B = ∂_x A_y − ∂_y A_x` by central differences of an
/// arbitrary potential.
pub fn fields_numeric(
    field: &dyn PotentialField,
    p: SpacetimePoint,
    h: f64,
) -> Result<FieldSample, FieldError> {
    let at = |dt: f64, dx: f64, dy: f64| {
        field.potential(SpacetimePoint::new(p.t + dt, p.x + dx, p.y + dy))
    };
    let (tp, tm) = (at(h, 0.0, 0.0)?, at(-h, 0.0, 0.0)?);
    let (xp, xm) = (at(0.0, h, 0.0)?, at(0.0, -h, 0.0)?);
    let (yp, ym) = (at(0.0, 0.0, h)?, at(0.0, 0.0, -h)?);
    let inv = 0.5 / h;
    Ok(FieldSample {
        ex: ((xp.phi - xm.phi) - (tp.ax - tm.ax)) * inv,
        ey: ((yp.phi - ym.phi) - (tp.ay - tm.ay)) * inv,
        bz: ((xp.ay - xm.ay) - (yp.ax - ym.ax)) * inv,
    })
}

/// Coordinate system of a [`SourceModel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    /// `(t, x, y)`, magnetic field along `z`.
    Planar,
    /// `(t, r, z)`, magnetic field along `φ`.
    Cylindrical,
}

/// Ordered set of sampling points `(t, a, b)`. Tensor-product lattices are
/// traversed row-major (`t` outermost).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Lattice {
    points: Vec<[f64; 3]>,
}

/// `n` evenly spaced values over `[lo, hi]` (just `lo` when `n <= 1`).
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

impl Lattice {
    pub fn from_points(points: Vec<[f64; 3]>) -> Self {
        Self { points }
    }

    pub fn tensor(t: &[f64], a: &[f64], b: &[f64]) -> Self {
        let mut points = Vec::with_capacity(t.len() * a.len() * b.len());
        for &t in t {
            for &a in a {
                for &b in b {
                    points.push([t, a, b]);
                }
            }
        }
        Self { points }
    }

    pub fn uniform(range: [(f64, f64); 3], n: [usize; 3]) -> Self {
        Self::tensor(
            &linspace(range[0].0, range[0].1, n[0]),
            &linspace(range[1].0, range[1].1, n[1]),
            &linspace(range[2].0, range[2].1, n[2]),
        )
    }

    /// Axis with `coarse` uniform points over `range` plus points every
    /// `spacing` within `reach` of each feature.
    pub fn clustered_axis(
        range: (f64, f64),
        coarse: usize,
        features: &[f64],
        spacing: f64,
        reach: f64,
    ) -> Vec<f64> {
        let (lo, hi) = range;
        let mut v = linspace(lo, hi, coarse.max(2));
        let k = (reach / spacing).round() as i64;
        for &f in features {
            for i in -k..=k {
                let u = f + i as f64 * spacing;
                if (lo..=hi).contains(&u) {
                    v.push(u);
                }
            }
        }
        v.sort_by(f64::total_cmp);
        v.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * spacing);
        v
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }
}

/// A configuration with closed-form fields and sources, as consumed by the
/// residual checks.
pub trait SourceModel: Sync {
    fn geometry(&self) -> Geometry;

    fn fields(&self, t: f64, a: f64, b: f64) -> FieldSample;

    fn sources(&self, t: f64, a: f64, b: f64) -> SourceSample;

    /// Whether `(t, a, b)` lies beyond the support inflated by the kernel
    /// cutoff.
    fn outside_support(&self, t: f64, a: f64, b: f64) -> bool;

    /// Lattice clustered around the features of the configuration.
    fn default_lattice(&self) -> Lattice;

    /// Smallest regularization width, which sets the differencing scale.
    fn min_width(&self) -> f64;
}

/// Rectangular configuration. With `include_solenoids = false` the solenoid
/// current is dropped from the sources (negative control).
#[derive(Debug, Clone, Copy)]
pub struct RectSources {
    pub setup: Setup,
    pub include_solenoids: bool,
}

impl RectSources {
    pub fn new(setup: Setup) -> Self {
        Self {
            setup,
            include_solenoids: true,
        }
    }

    pub fn without_solenoids(setup: Setup) -> Self {
        Self {
            setup,
            include_solenoids: false,
        }
    }

    pub fn gauge(&self) -> RectTemporalGauge {
        RectTemporalGauge::new(self.setup)
    }
}

impl SourceModel for RectSources {
    fn geometry(&self) -> Geometry {
        Geometry::Planar
    }

    fn fields(&self, t: f64, a: f64, b: f64) -> FieldSample {
        fields_analytic(&self.setup, SpacetimePoint::new(t, a, b))
    }

    fn sources(&self, t: f64, a: f64, b: f64) -> SourceSample {
        let mut s = sheet_sources(&rect_jet(&self.setup, t, a), b, self.setup.reg().eps_y);
        if !self.include_solenoids {
            s.js = [0.0, 0.0];
        }
        s
    }

    fn outside_support(&self, t: f64, a: f64, b: f64) -> bool {
        let reg = self.setup.reg();
        let (wt, wx, wy) = (
            SUPPORT_CUTOFF * reg.eps_t,
            SUPPORT_CUTOFF * reg.eps_x,
            SUPPORT_CUTOFF * reg.eps_y,
        );
        b.abs() > wy
            || a < -wx
            || a > self.setup.length() + wx
            || t < -wt
            || t > self.setup.duration() + wt
    }

    fn default_lattice(&self) -> Lattice {
        let (l, tt) = (self.setup.length(), self.setup.duration());
        let reg = self.setup.reg();
        Lattice::tensor(
            &Lattice::clustered_axis(
                (-0.25 * tt, 1.25 * tt),
                7,
                &[0.0, tt],
                0.5 * reg.eps_t,
                4.0 * reg.eps_t,
            ),
            &Lattice::clustered_axis(
                (-0.25 * l, 1.25 * l),
                13,
                &[0.0, l],
                0.5 * reg.eps_x,
                4.0 * reg.eps_x,
            ),
            &Lattice::clustered_axis(
                (-0.25 * l, 0.25 * l),
                5,
                &[0.0],
                0.5 * reg.eps_y,
                4.0 * reg.eps_y,
            ),
        )
    }

    fn min_width(&self) -> f64 {
        let reg = self.setup.reg();
        reg.eps_t.min(reg.eps_x).min(reg.eps_y)
    }
}

/// Boosted configuration.
#[derive(Debug, Clone)]
pub struct RhombusSources {
    pub gauge: RhombusTemporalGauge,
    pub include_solenoids: bool,
}

impl RhombusSources {
    pub fn new(gauge: RhombusTemporalGauge) -> Self {
        Self {
            gauge,
            include_solenoids: true,
        }
    }
}

impl SourceModel for RhombusSources {
    fn geometry(&self) -> Geometry {
        Geometry::Planar
    }

    fn fields(&self, t: f64, a: f64, b: f64) -> FieldSample {
        let jet = self.gauge.profile().jet(t, a);
        sheet_fields(&jet, b, self.gauge.setup().reg().eps_y)
    }

    fn sources(&self, t: f64, a: f64, b: f64) -> SourceSample {
        let mut s = dipole_densities(&self.gauge, SpacetimePoint::new(t, a, b));
        if !self.include_solenoids {
            s.js = [0.0, 0.0];
        }
        s
    }

    fn outside_support(&self, t: f64, a: f64, b: f64) -> bool {
        let setup = self.gauge.setup();
        let v = setup.cfg().boost;
        let reg = setup.reg();
        if b.abs() > SUPPORT_CUTOFF * reg.eps_y {
            return true;
        }
        let tt = setup.duration();
        let w = SUPPORT_CUTOFF * reg.eps_x;
        [v * t - a, v * t + a, v * (tt - t) + a, v * (tt - t) - a]
            .iter()
            .any(|&u| u < -w)
    }

    fn default_lattice(&self) -> Lattice {
        let setup = self.gauge.setup();
        let (v, tt) = (setup.cfg().boost, setup.duration());
        let eps = setup.reg().eps_x;
        let eps_y = setup.reg().eps_y;
        let half = 0.5 * v * tt;
        let margin = 0.1 * tt.max(half);
        // The edges x = ±v·min(t, T − t) are diagonal: sample x densely
        // around them at every time level.
        let nt = ((tt + 2.0 * margin) * v.max(1.0) / (0.5 * eps)).ceil() as usize;
        let ts = linspace(-margin, tt + margin, nt + 1);
        let ys = Lattice::clustered_axis(
            (-4.0 * eps_y, 4.0 * eps_y),
            2,
            &[0.0],
            0.5 * eps_y,
            4.0 * eps_y,
        );
        let mut points = Vec::new();
        for &t in &ts {
            let edge = v * t.min(tt - t).max(0.0);
            let xs = Lattice::clustered_axis(
                (-half - margin, half + margin),
                9,
                &[-edge, edge],
                0.5 * eps,
                4.0 * eps,
            );
            for &x in &xs {
                for &y in &ys {
                    points.push([t, x, y]);
                }
            }
        }
        Lattice::from_points(points)
    }

    fn min_width(&self) -> f64 {
        let reg = self.gauge.setup().reg();
        let v = self.gauge.setup().cfg().boost;
        (reg.eps_x / v.max(1.0)).min(reg.eps_y)
    }
}

/// Toroidal configuration on the `(t, r, z)` half-plane.
#[derive(Debug, Clone, Copy)]
pub struct ToroidalSources {
    pub gauge: ToroidalTemporalGauge,
    pub include_solenoids: bool,
}

impl ToroidalSources {
    pub fn new(gauge: ToroidalTemporalGauge) -> Self {
        Self {
            gauge,
            include_solenoids: true,
        }
    }

    fn point(t: f64, r: f64, z: f64) -> CylPoint {
        CylPoint::new(t, r.max(0.0), z).expect("radius clamped to be non-negative")
    }
}

impl SourceModel for ToroidalSources {
    fn geometry(&self) -> Geometry {
        Geometry::Cylindrical
    }

    fn fields(&self, t: f64, a: f64, b: f64) -> FieldSample {
        toroidal_fields(&self.gauge, Self::point(t, a, b))
    }

    fn sources(&self, t: f64, a: f64, b: f64) -> SourceSample {
        let mut s = toroidal_densities(&self.gauge, Self::point(t, a, b));
        if !self.include_solenoids {
            s.js = [0.0, 0.0];
        }
        s
    }

    fn outside_support(&self, t: f64, a: f64, b: f64) -> bool {
        let setup = self.gauge.setup();
        let reg = setup.reg();
        b.abs() > SUPPORT_CUTOFF * reg.eps_y
            || a > self.gauge.radius() + SUPPORT_CUTOFF * reg.eps_x
            || t < -SUPPORT_CUTOFF * reg.eps_t
            || t > setup.duration() + SUPPORT_CUTOFF * reg.eps_t
    }

    fn default_lattice(&self) -> Lattice {
        let setup = self.gauge.setup();
        let (rr, tt) = (self.gauge.radius(), setup.duration());
        let reg = setup.reg();
        Lattice::tensor(
            &Lattice::clustered_axis(
                (-0.25 * tt, 1.25 * tt),
                7,
                &[0.0, tt],
                0.5 * reg.eps_t,
                4.0 * reg.eps_t,
            ),
            &Lattice::clustered_axis(
                (0.25 * rr, 1.25 * rr),
                6,
                &[rr],
                0.5 * reg.eps_x,
                4.0 * reg.eps_x,
            ),
            &Lattice::clustered_axis(
                (-0.25 * rr, 0.25 * rr),
                5,
                &[0.0],
                0.5 * reg.eps_y,
                4.0 * reg.eps_y,
            ),
        )
    }

    fn min_width(&self) -> f64 {
        let reg = self.gauge.setup().reg();
        reg.eps_t.min(reg.eps_x).min(reg.eps_y)
    }
}

/// Maximum of a residual over a lattice, with the matching maximum of a
/// reference magnitude for normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub max_abs: f64,
    pub scale: f64,
    /// Lattice point where `max_abs` is attained.
    pub at: [f64; 3],
}

impl Residual {
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            self.max_abs
        } else {
            self.max_abs / self.scale
        }
    }
}

fn reduce(points: &[[f64; 3]], f: impl Fn(f64, f64, f64) -> (f64, f64) + Sync) -> Residual {
    let vals: Vec<(f64, f64)> = points.par_iter().map(|&[t, a, b]| f(t, a, b)).collect();
    let mut out = Residual {
        max_abs: 0.0,
        scale: 0.0,
        at: points.first().copied().unwrap_or_default(),
    };
    for (p, (r, s)) in points.iter().zip(vals) {
        if r > out.max_abs {
            out.max_abs = r;
            out.at = *p;
        }
        out.scale = out.scale.max(s);
    }
    out
}

/// Planar or cylindrical divergence of a 2-vector field by central
/// differences.
fn divergence(
    geom: Geometry,
    t: f64,
    a: f64,
    b: f64,
    h: f64,
    f: &impl Fn(f64, f64, f64) -> [f64; 2],
) -> f64 {
    let inv = 0.5 / h;
    match geom {
        Geometry::Planar => {
            (f(t, a + h, b)[0] - f(t, a - h, b)[0] + f(t, a, b + h)[1] - f(t, a, b - h)[1]) * inv
        }
        Geometry::Cylindrical => {
            let radial = ((a + h) * f(t, a + h, b)[0] - (a - h) * f(t, a - h, b)[0]) * inv / a;
            radial + (f(t, a, b + h)[1] - f(t, a, b - h)[1]) * inv
        }
    }
}

/// Max-norm of `∇·j + ∂ρ/∂t` by central differences with step `h`. The
/// scale is the max-norm of `∂ρ/∂t`.
pub fn continuity_residual(model: &dyn SourceModel, lattice: &Lattice, h: f64) -> Residual {
    let geom = model.geometry();
    reduce(lattice.points(), |t, a, b| {
        let drho = (model.sources(t + h, a, b).rho - model.sources(t - h, a, b).rho) / (2.0 * h);
        let div = divergence(geom, t, a, b, h, &|t, a, b| model.sources(t, a, b).j());
        ((div + drho).abs(), drho.abs())
    })
}

/// Max-norm of `∇·E − 4πρ`; scale is the max-norm of `4πρ`.
pub fn gauss_residual(model: &dyn SourceModel, lattice: &Lattice, h: f64) -> Residual {
    let geom = model.geometry();
    reduce(lattice.points(), |t, a, b| {
        let div = divergence(geom, t, a, b, h, &|t, a, b| {
            let f = model.fields(t, a, b);
            [f.ex, f.ey]
        });
        let src = 4.0 * PI * model.sources(t, a, b).rho;
        ((div - src).abs(), src.abs())
    })
}

/// Max-norm over both components of `curl B − ∂E/∂t − 4πj`; scale is the
/// max-norm of `4πj`.
pub fn ampere_residual(model: &dyn SourceModel, lattice: &Lattice, h: f64) -> Residual {
    let geom = model.geometry();
    let inv = 0.5 / h;
    reduce(lattice.points(), |t, a, b| {
        let bf = |t, a, b| model.fields(t, a, b).bz;
        let curl = match geom {
            Geometry::Planar => [
                (bf(t, a, b + h) - bf(t, a, b - h)) * inv,
                -(bf(t, a + h, b) - bf(t, a - h, b)) * inv,
            ],
            Geometry::Cylindrical => [
                -(bf(t, a, b + h) - bf(t, a, b - h)) * inv,
                ((a + h) * bf(t, a + h, b) - (a - h) * bf(t, a - h, b)) * inv / a,
            ],
        };
        let (ep, em) = (model.fields(t + h, a, b), model.fields(t - h, a, b));
        let de = [(ep.ex - em.ex) * inv, (ep.ey - em.ey) * inv];
        let j = model.sources(t, a, b).j();
        let r0 = curl[0] - de[0] - 4.0 * PI * j[0];
        let r1 = curl[1] - de[1] - 4.0 * PI * j[1];
        (
            r0.abs().max(r1.abs()),
            4.0 * PI * j[0].abs().max(j[1].abs()),
        )
    })
}

/// Largest `|E|, |B|` component at lattice points outside the inflated
/// support, and the number of such points.
pub fn max_field_outside(model: &dyn SourceModel, lattice: &Lattice) -> (f64, usize) {
    let pts: Vec<[f64; 3]> = lattice
        .points()
        .iter()
        .copied()
        .filter(|&[t, a, b]| model.outside_support(t, a, b))
        .collect();
    let vals: Vec<f64> = pts
        .par_iter()
        .map(|&[t, a, b]| model.fields(t, a, b).max_abs())
        .collect();
    (vals.iter().copied().fold(0.0, f64::max), pts.len())
}

/// Column header of the grid CSV.
pub const GRID_CSV_HEADER: &str = "t,x,y,Ex,Ey,Bz,rho,jx,jy";

/// Fields and sources of `model` over `lattice`, one CSV row per point.
pub fn grid_csv(model: &dyn SourceModel, lattice: &Lattice) -> String {
    let rows: Vec<String> = lattice
        .points()
        .par_iter()
        .map(|&[t, a, b]| {
            let f = model.fields(t, a, b);
            let s = model.sources(t, a, b);
            let j = s.j();
            format!(
                "{},{},{},{},{},{},{},{},{}",
                Num(t),
                Num(a),
                Num(b),
                Num(f.ex),
                Num(f.ey),
                Num(f.bz),
                Num(s.rho),
                Num(j[0]),
                Num(j[1])
            )
        })
        .collect();
    let mut out = String::with_capacity(rows.iter().map(|r| r.len() + 1).sum::<usize>() + 32);
    let _ = writeln!(out, "{GRID_CSV_HEADER}");
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    out
}

/// Column header of the source CSV.
pub const SOURCES_CSV_HEADER: &str = "t,x,y,rho,jcx,jcy,jsx,jsy";

/// Charge density and both current parts of `model` over `lattice`.
pub fn sources_csv(model: &dyn SourceModel, lattice: &Lattice) -> String {
    let rows: Vec<String> = lattice
        .points()
        .par_iter()
        .map(|&[t, a, b]| {
            let s = model.sources(t, a, b);
            format!(
                "{},{},{},{},{},{},{},{}",
                Num(t),
                Num(a),
                Num(b),
                Num(s.rho),
                Num(s.jc[0]),
                Num(s.jc[1]),
                Num(s.js[0]),
                Num(s.js[1])
            )
        })
        .collect();
    let mut out = String::with_capacity(rows.iter().map(|r| r.len() + 1).sum::<usize>() + 32);
    let _ = writeln!(out, "{SOURCES_CSV_HEADER}");
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    out
}
