//! Bicubic Catmull-Rom interpolation of grid data.
//!
//! The interpolant is C¹, passes through the nodes, and its gradient at a node
//! equals the central difference of the node values. Ghost values beyond the
//! grid edge are extrapolated linearly.

use super::poisson::Grid2;

/// Catmull-Rom weights for value and `d/ds` at local coordinate `s ∈ [0, 1]`.
fn weights(s: f64) -> ([f64; 4], [f64; 4]) {
    let s2 = s * s;
    let s3 = s2 * s;
    (
        [
            0.5 * (-s3 + 2.0 * s2 - s),
            0.5 * (3.0 * s3 - 5.0 * s2 + 2.0),
            0.5 * (-3.0 * s3 + 4.0 * s2 + s),
            0.5 * (s3 - s2),
        ],
        [
            0.5 * (-3.0 * s2 + 4.0 * s - 1.0),
            0.5 * (9.0 * s2 - 10.0 * s),
            0.5 * (-9.0 * s2 + 8.0 * s + 1.0),
            0.5 * (3.0 * s2 - 2.0 * s),
        ],
    )
}

/// Cell index and local coordinate along one axis; `None` outside.
fn locate(u: f64, u0: f64, h: f64, n: usize) -> Option<(usize, f64)> {
    let r = (u - u0) / h;
    let last = (n - 1) as f64;
    if !(r >= 0.0 && r <= last) {
        return None;
    }
    let c = (r.floor() as usize).min(n - 2);
    Some((c, r - c as f64))
}

/// Value and gradient `(f, ∂f/∂x, ∂f/∂y)` at `(x, y)`, or `None` outside the
/// grid.
pub fn catmull_rom(grid: &Grid2, values: &[f64], x: f64, y: f64) -> Option<(f64, f64, f64)> {
    let (ci, sx) = locate(x, grid.x0, grid.hx, grid.nx)?;
    let (cj, sy) = locate(y, grid.y0, grid.hy, grid.ny)?;
    let (nx, ny) = (grid.nx as isize, grid.ny as isize);
    let node = |i: isize, j: isize| -> f64 {
        let at = |i: isize, j: isize| values[(j * nx + i) as usize];
        let (ic, jc) = (i.clamp(0, nx - 1), j.clamp(0, ny - 1));
        // Linear extrapolation for one ghost layer in each direction.
        let mut v = at(ic, jc);
        if i != ic {
            let inward = if i < 0 { 1 } else { -1 };
            v = 2.0 * v - at(ic + inward, jc);
        }
        if j != jc {
            let inward = if j < 0 { 1 } else { -1 };
            let other = if i != ic {
                let inward_i = if i < 0 { 1 } else { -1 };
                2.0 * at(ic, jc + inward) - at(ic + inward_i, jc + inward)
            } else {
                at(ic, jc + inward)
            };
            v = 2.0 * v - other;
        }
        v
    };
    let (wx, dwx) = weights(sx);
    let (wy, dwy) = weights(sy);
    let (mut f, mut fx, mut fy) = (0.0, 0.0, 0.0);
    for (b, (&wyb, &dwyb)) in wy.iter().zip(&dwy).enumerate() {
        let j = cj as isize + b as isize - 1;
        let (mut row, mut drow) = (0.0, 0.0);
        for (a, (&wxa, &dwxa)) in wx.iter().zip(&dwx).enumerate() {
            let v = node(ci as isize + a as isize - 1, j);
            row += wxa * v;
            drow += dwxa * v;
        }
        f += wyb * row;
        fx += wyb * drow;
        fy += dwyb * row;
    }
    Some((f, fx / grid.hx, fy / grid.hy))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn sample(g: &Grid2, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        let mut v = vec![0.0; g.len()];
        for j in 0..g.ny {
            for i in 0..g.nx {
                v[g.idx(i, j)] = f(g.x(i), g.y(j));
            }
        }
        v
    }

    #[test]
    fn interpolates_nodes_with_central_difference_gradient() {
        let g = Grid2::spanning((0.0, 2.0), (-1.0, 1.0), 21, 11).unwrap();
        let v = sample(&g, |x, y| (x * y).sin() + x * x);
        for (i, j) in [(3, 4), (10, 5), (19, 9)] {
            let (f, fx, fy) = catmull_rom(&g, &v, g.x(i), g.y(j)).unwrap();
            assert_relative_eq!(f, v[g.idx(i, j)], max_relative = 1e-14);
            let cx = (v[g.idx(i + 1, j)] - v[g.idx(i - 1, j)]) / (2.0 * g.hx);
            let cy = (v[g.idx(i, j + 1)] - v[g.idx(i, j - 1)]) / (2.0 * g.hy);
            assert_relative_eq!(fx, cx, max_relative = 1e-12, epsilon = 1e-13);
            assert_relative_eq!(fy, cy, max_relative = 1e-12, epsilon = 1e-13);
        }
        assert!(catmull_rom(&g, &v, 2.1, 0.0).is_none());
    }

    #[test]
    fn reproduces_bilinear_plus_quadratic_along_axes() {
        let g = Grid2::spanning((0.0, 1.0), (0.0, 1.0), 11, 11).unwrap();
        let f = |x: f64, y: f64| 1.0 + 2.0 * x - y + 0.5 * x * y;
        let v = sample(&g, f);
        for &(x, y) in &[(0.0, 0.0), (0.33, 0.71), (0.999, 0.02), (1.0, 1.0)] {
            let (val, fx, fy) = catmull_rom(&g, &v, x, y).unwrap();
            assert_relative_eq!(val, f(x, y), epsilon = 1e-13);
            assert_relative_eq!(fx, 2.0 + 0.5 * y, epsilon = 1e-12);
            assert_relative_eq!(fy, -1.0 + 0.5 * x, epsilon = 1e-12);
        }
    }

    proptest! {
        #[test]
        fn continuous_across_cell_edges(i in 1usize..19, y in 0.0f64..1.0) {
            let g = Grid2::spanning((0.0, 1.0), (0.0, 1.0), 21, 21).unwrap();
            let v = sample(&g, |x, y| (7.0 * x).cos() * (3.0 * y).sin());
            let x = g.x(i);
            let a = catmull_rom(&g, &v, x - 1e-12, y).unwrap();
            let b = catmull_rom(&g, &v, x + 1e-12, y).unwrap();
            prop_assert!((a.0 - b.0).abs() < 1e-9);
            prop_assert!((a.1 - b.1).abs() < 1e-8);
            prop_assert!((a.2 - b.2).abs() < 1e-8);
        }
    }
}
