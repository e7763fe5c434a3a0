//! Central-difference residuals of the field equations, evaluated over a
//! model's lattice.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::fields::{Geometry, SourceModel};

/// Max of `|residual|` and of `|reference|` over the lattice.
fn max_pair(model: &dyn SourceModel, f: impl Fn(f64, f64, f64) -> (f64, f64) + Sync) -> (f64, f64) {
    let lattice = model.default_lattice();
    let vals: Vec<(f64, f64)> = lattice
        .points()
        .par_iter()
        .map(|&[t, a, b]| f(t, a, b))
        .collect();
    vals.into_iter()
        .fold((0.0, 0.0), |(r, s), (x, y)| (r.max(x), s.max(y)))
}

fn d_dt(g: impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    (g(t + h) - g(t - h)) / (2.0 * h)
}

fn div(
    model: &dyn SourceModel,
    v: &impl Fn(f64, f64, f64) -> [f64; 2],
    t: f64,
    a: f64,
    b: f64,
    h: f64,
) -> f64 {
    let dz = (v(t, a, b + h)[1] - v(t, a, b - h)[1]) / (2.0 * h);
    match model.geometry() {
        Geometry::Planar => (v(t, a + h, b)[0] - v(t, a - h, b)[0]) / (2.0 * h) + dz,
        Geometry::Cylindrical => {
            ((a + h) * v(t, a + h, b)[0] - (a - h) * v(t, a - h, b)[0]) / (2.0 * h * a) + dz
        }
    }
}

/// `(max |∇·j + ∂ρ/∂t|, max |∂ρ/∂t|)`.
pub fn continuity(model: &dyn SourceModel, h: f64) -> (f64, f64) {
    let j = |t, a, b| model.sources(t, a, b).j();
    max_pair(model, |t, a, b| {
        let rho_t = d_dt(|t| model.sources(t, a, b).rho, t, h);
        ((div(model, &j, t, a, b, h) + rho_t).abs(), rho_t.abs())
    })
}

/// `(max |∇·E − 4πρ|, max |4πρ|)`.
pub fn gauss(model: &dyn SourceModel, h: f64) -> (f64, f64) {
    let e = |t, a, b| {
        let f = model.fields(t, a, b);
        [f.ex, f.ey]
    };
    max_pair(model, |t, a, b| {
        let q = 4.0 * PI * model.sources(t, a, b).rho;
        ((div(model, &e, t, a, b, h) - q).abs(), q.abs())
    })
}

/// `(max |curl B − ∂E/∂t − 4πj|, max |4πj|)` over both components.
pub fn ampere(model: &dyn SourceModel, h: f64) -> (f64, f64) {
    max_pair(model, |t, a, b| {
        let bz = |a: f64, b: f64| model.fields(t, a, b).bz;
        let d_a = (bz(a + h, b) - bz(a - h, b)) / (2.0 * h);
        let d_b = (bz(a, b + h) - bz(a, b - h)) / (2.0 * h);
        let curl = match model.geometry() {
            Geometry::Planar => [d_b, -d_a],
            Geometry::Cylindrical => [-d_b, d_a + bz(a, b) / a],
        };
        let ex_t = d_dt(|t| model.fields(t, a, b).ex, t, h);
        let ey_t = d_dt(|t| model.fields(t, a, b).ey, t, h);
        let j = model.sources(t, a, b).j();
        let r0 = curl[0] - ex_t - 4.0 * PI * j[0];
        let r1 = curl[1] - ey_t - 4.0 * PI * j[1];
        (
            r0.abs().max(r1.abs()),
            4.0 * PI * j[0].abs().max(j[1].abs()),
        )
    })
}

/// Largest field component at lattice points beyond the inflated support,
/// with the number of such points.
pub fn max_field_outside(model: &dyn SourceModel) -> (f64, usize) {
    let lattice = model.default_lattice();
    let outside: Vec<[f64; 3]> = lattice
        .points()
        .iter()
        .copied()
        .filter(|&[t, a, b]| model.outside_support(t, a, b))
        .collect();
    let max = outside
        .par_iter()
        .map(|&[t, a, b]| model.fields(t, a, b).max_abs())
        .collect::<Vec<_>>()
        .into_iter()
        .fold(0.0, f64::max);
    (max, outside.len())
}
