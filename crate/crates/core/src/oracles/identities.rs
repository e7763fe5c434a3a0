//! Pairings of the kernels `x/(x² + y²)` and `∂_y arctan(x/y)` with smooth
//! test functions as the limit parameter shrinks.
//!
//! ```text
//! (a) ∫ (1/π) x/(x²+y²) g(y) dy            → sign(x) g(0)
//! (b) ∫ ∂_y arctan(x/y) g(y) dy             → −π sign(x) g(0)
//! (c) ⟨∂_x[x/(x²+y²)], f(x/s) g(y)⟩         → 2π f(0) g(0)
//! (d) ⟨∂_y[x/(x²+y²)], f(x/s) g(y)⟩         → 0
//! ```
//!
//! In (a) and (b) the limit parameter is `x`; in (c) and (d) it is the
//! `x`-scale `s` of the test function. Derivatives are moved onto the test
//! functions by parts.

use std::f64::consts::PI;

use super::simpson::{geometric_splits, simpson};

/// Half-width of the `y` range; the test functions are below 1e-60 beyond.
const Y_MAX: f64 = 12.0;
/// Half-width of the `u = x/s` range.
const U_MAX: f64 = 12.0;

fn g(y: f64) -> f64 {
    (-(y - 0.2) * (y - 0.2)).exp()
}

fn g_prime(y: f64) -> f64 {
    -2.0 * (y - 0.2) * g(y)
}

fn f(u: f64) -> f64 {
    (-(u - 0.3) * (u - 0.3)).exp()
}

fn f_prime(u: f64) -> f64 {
    -2.0 * (u - 0.3) * f(u)
}

/// `∫ x/(x²+y²) h(y) dy`, written as `sign(x) ∫ h(|x| tan φ) dφ`.
fn kernel_pairing(x: f64, h: impl Fn(f64) -> f64, tol: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let a = x.abs();
    let lim = (Y_MAX / a).atan();
    x.signum() * simpson(|phi| h(a * phi.tan()), -lim, lim, &[0.0], tol)
}

/// Identity (a): `∫_{-Y}^{Y} (1/π) x/(x²+y²) g(y) dy`.
pub fn pairing_a(x: f64, tol: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let splits = geometric_splits(0.0, x.abs(), 5);
    simpson(
        |y| x / (x * x + y * y) * g(y) / PI,
        -Y_MAX,
        Y_MAX,
        &splits,
        tol,
    )
}

/// Identity (b), integrated by parts against the continuous antiderivative
/// `−sign(x) arctan(y/|x|)` of `∂_y arctan(x/y)`.
pub fn pairing_b(x: f64, tol: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let a = x.abs();
    let u = |y: f64| -x.signum() * (y / a).atan();
    let boundary = u(Y_MAX) * g(Y_MAX) - u(-Y_MAX) * g(-Y_MAX);
    let splits = geometric_splits(0.0, a, 5);
    boundary - simpson(|y| u(y) * g_prime(y), -Y_MAX, Y_MAX, &splits, tol)
}

/// Identity (c) with test function `f(x/s) g(y)`.
pub fn pairing_c(s: f64, tol: f64) -> f64 {
    -simpson(
        |u| kernel_pairing(s * u, g, tol) * f_prime(u),
        -U_MAX,
        U_MAX,
        &[0.0],
        tol,
    )
}

/// Identity (d) with test function `f(x/s) g(y)`.
pub fn pairing_d(s: f64, tol: f64) -> f64 {
    -s * simpson(
        |u| kernel_pairing(s * u, g_prime, tol) * f(u),
        -U_MAX,
        U_MAX,
        &[0.0],
        tol,
    )
}

/// Limit values of the four pairings.
pub fn targets() -> [f64; 4] {
    [g(0.0), -PI * g(0.0), 2.0 * PI * f(0.0) * g(0.0), 0.0]
}

/// Pairings of one identity along a sequence of limit parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentitySeries {
    pub label: char,
    pub target: f64,
    pub limits: Vec<f64>,
    pub values: Vec<f64>,
}

impl IdentitySeries {
    pub fn errors(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|v| (v - self.target).abs())
            .collect()
    }
}

/// All four identity pairings at each limit parameter.
pub fn identity_series(limits: &[f64], tol: f64) -> Vec<IdentitySeries> {
    let t = targets();
    let pairings: [(char, fn(f64, f64) -> f64); 4] = [
        ('a', pairing_a),
        ('b', pairing_b),
        ('c', pairing_c),
        ('d', pairing_d),
    ];
    pairings
        .iter()
        .zip(t)
        .map(|(&(label, p), target)| IdentitySeries {
            label,
            target,
            limits: limits.to_vec(),
            values: limits.iter().map(|&l| p(l, tol)).collect(),
        })
        .collect()
}

/// `∫_{-y_max}^{y_max} (1/π) x/(x²+y²) dy` by quadrature.
pub fn lorentz_mass(x: f64, y_max: f64, tol: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let splits = geometric_splits(0.0, x.abs(), 3);
    simpson(|y| x / (x * x + y * y) / PI, -y_max, y_max, &splits, tol)
}
