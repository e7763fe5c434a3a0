//! Gaussian regularization of the Heaviside step and Dirac delta.
//!
//! `delta` is the analytic derivative of `step` and `delta_prime` the analytic
//! derivative of `delta`. All three are cut off exactly beyond
//! `SUPPORT_CUTOFF` widths, where the Gaussian tail is below `1e-14` of its
//! peak.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Kernel support half-width in units of the regularization width.
pub const SUPPORT_CUTOFF: f64 = 8.0;

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Smooth Heaviside step `½(1 + erf(u / (ε√2)))`.
///
/// `step(0) = ½` and `step(u) + step(−u) = 1` hold exactly.
pub fn step(u: f64, eps: f64) -> f64 {
    let z = u / eps;
    if z > SUPPORT_CUTOFF {
        1.0
    } else if z < -SUPPORT_CUTOFF {
        0.0
    } else if z >= 0.0 {
        1.0 - 0.5 * libm::erfc(z * FRAC_1_SQRT_2)
    } else {
        0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
    }
}

/// Gaussian delta `exp(−u²/2ε²) / (ε√(2π))`.
pub fn delta(u: f64, eps: f64) -> f64 {
    let z = u / eps;
    if z.abs() > SUPPORT_CUTOFF {
        return 0.0;
    }
    (-0.5 * z * z).exp() * INV_SQRT_2PI / eps
}

/// Derivative of [`delta`]: `−(u/ε²)·δ_ε(u)`.
pub fn delta_prime(u: f64, eps: f64) -> f64 {
    -(u / (eps * eps)) * delta(u, eps)
}

/// Second derivative of [`delta`]: `(u²/ε⁴ − 1/ε²)·δ_ε(u)`.
pub fn delta_second(u: f64, eps: f64) -> f64 {
    let e2 = eps * eps;
    (u * u / (e2 * e2) - 1.0 / e2) * delta(u, eps)
}

/// Exact Heaviside step with the value ½ at the origin.
pub fn heaviside(u: f64) -> f64 {
    if u > 0.0 {
        1.0
    } else if u < 0.0 {
        0.0
    } else {
        0.5
    }
}

/// Smoothed indicator of `[a, b]`: `Θ_ε(u − a) − Θ_ε(u − b)` with its first
/// two derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub a: f64,
    pub b: f64,
    pub eps: f64,
}

impl Window {
    pub const fn new(a: f64, b: f64, eps: f64) -> Self {
        Self { a, b, eps }
    }

    pub fn value(&self, u: f64) -> f64 {
        step(u - self.a, self.eps) - step(u - self.b, self.eps)
    }

    pub fn d1(&self, u: f64) -> f64 {
        delta(u - self.a, self.eps) - delta(u - self.b, self.eps)
    }

    pub fn d2(&self, u: f64) -> f64 {
        delta_prime(u - self.a, self.eps) - delta_prime(u - self.b, self.eps)
    }

    pub fn d3(&self, u: f64) -> f64 {
        delta_second(u - self.a, self.eps) - delta_second(u - self.b, self.eps)
    }

    /// Lower and upper edge of the inflated support.
    pub fn support(&self) -> (f64, f64) {
        let w = SUPPORT_CUTOFF * self.eps;
        (self.a - w, self.b + w)
    }
}

/// Peak value `δ_ε(0)`.
pub fn delta_peak(eps: f64) -> f64 {
    1.0 / (eps * (2.0 * PI).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn step_values() {
        assert_eq!(step(0.0, 0.3), 0.5);
        assert!((step(10.0 * 0.01, 0.01) - 1.0).abs() < 1e-12);
        assert_eq!(step(-10.0, 0.01), 0.0);
    }

    #[test]
    fn delta_normalization_and_peak() {
        let eps = 0.01;
        let total = simpson(|u| delta(u, eps), -8.0 * eps, 8.0 * eps, 4000);
        assert!((total - 1.0).abs() < 1e-12, "{total}");
        assert_relative_eq!(
            delta(0.0, eps),
            1.0 / (eps * (2.0 * PI).sqrt()),
            max_relative = 1e-15
        );
        assert_relative_eq!(delta_peak(eps), delta(0.0, eps), max_relative = 1e-15);
    }

    #[test]
    fn delta_prime_moment() {
        let eps = 0.02;
        assert_eq!(delta_prime(0.0, eps), 0.0);
        let m = simpson(|u| u * delta_prime(u, eps), -8.0 * eps, 8.0 * eps, 4000);
        assert!((m + 1.0).abs() < 1e-10, "{m}");
    }

    #[test]
    fn smoothing_converges_second_order() {
        // ∫cos(u)δ_ε(u)du = exp(−ε²/2); error ~ ε²/2.
        let err = |eps: f64| {
            (simpson(|u| u.cos() * delta(u, eps), -8.0 * eps, 8.0 * eps, 2000) - 1.0).abs()
        };
        let order = (err(0.1) / err(0.05)).log2();
        assert!(order >= 1.95, "order {order}");
    }

    #[test]
    fn window_derivatives() {
        let w = Window::new(0.0, 1.0, 0.05);
        assert_eq!(w.value(0.5), 1.0);
        assert_eq!(w.value(2.0), 0.0);
        assert_eq!(w.value(0.0), 0.5);
        let h = 1e-5;
        for u in [-0.03, 0.01, 0.97, 1.04] {
            let fd = (w.value(u + h) - w.value(u - h)) / (2.0 * h);
            assert_relative_eq!(fd, w.d1(u), max_relative = 1e-6);
            let fd2 = (w.d1(u + h) - w.d1(u - h)) / (2.0 * h);
            assert_relative_eq!(fd2, w.d2(u), max_relative = 1e-6);
            let fd3 = (w.d2(u + h) - w.d2(u - h)) / (2.0 * h);
            assert_relative_eq!(fd3, w.d3(u), max_relative = 1e-5);
        }
    }

    proptest! {
        #[test]
        fn step_is_symmetric(u in -1.0f64..1.0, eps in 0.001f64..0.3) {
            prop_assert_eq!(step(u, eps) + step(-u, eps), 1.0);
        }

        #[test]
        fn step_monotone(u in -1.0f64..1.0, du in 0.0f64..0.1, eps in 0.001f64..0.3) {
            prop_assert!(step(u + du, eps) >= step(u, eps));
            let s = step(u, eps);
            prop_assert!((0.0..=1.0).contains(&s));
        }

        #[test]
        fn delta_is_derivative_of_step(z in -4.0f64..4.0, eps in 0.005f64..0.2) {
            let u = z * eps;
            let h = 1e-4 * eps;
            let fd = (step(u + h, eps) - step(u - h, eps)) / (2.0 * h);
            let exact = delta(u, eps);
            prop_assert!(((fd - exact) / exact).abs() < 1e-6);
        }

        #[test]
        fn delta_prime_is_derivative_of_delta(z in -4.0f64..4.0, eps in 0.005f64..0.2) {
            prop_assume!(z.abs() > 0.05);
            let u = z * eps;
            let h = 1e-4 * eps;
            let fd = (delta(u + h, eps) - delta(u - h, eps)) / (2.0 * h);
            let exact = delta_prime(u, eps);
            prop_assert!(((fd - exact) / exact).abs() < 1e-6);
        }

        #[test]
        fn delta_even_delta_prime_odd(u in -0.2f64..0.2, eps in 0.005f64..0.2) {
            prop_assert_eq!(delta(u, eps), delta(-u, eps));
            prop_assert_eq!(delta_prime(u, eps), -delta_prime(-u, eps));
            prop_assert!(delta(u, eps) >= 0.0);
        }
    }
}
