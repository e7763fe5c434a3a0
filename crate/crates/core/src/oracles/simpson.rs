//! Adaptive Simpson quadrature with Richardson correction.

const MAX_DEPTH: u32 = 48;

fn recurse(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= 15.0 * tol || !(lm > a && rm < b) {
        return left + right + diff / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// `∫_a^b f` to absolute tolerance `tol`, with the interval first cut at
/// `splits` (points outside `(a, b)` are ignored).
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, splits: &[f64], tol: f64) -> f64 {
    let mut edges: Vec<f64> = splits.iter().copied().filter(|&s| s > a && s < b).collect();
    edges.push(a);
    edges.push(b);
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    let piece_tol = tol / (edges.len() - 1) as f64;
    edges
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let m = 0.5 * (a + b);
            let (fa, fm, fb) = (f(a), f(m), f(b));
            let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
            recurse(&f, a, b, fa, fm, fb, whole, piece_tol, MAX_DEPTH)
        })
        .sum()
}

/// Points `±c·10^k` for `k = 0..n` clustered geometrically about `c0`.
pub fn geometric_splits(c0: f64, scale: f64, decades: i32) -> Vec<f64> {
    let mut out = vec![c0];
    for k in 0..=decades {
        let d = scale * 10f64.powi(k);
        out.push(c0 - d);
        out.push(c0 + d);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn smooth_and_peaked_integrands() {
        assert!((simpson(f64::sin, 0.0, PI, &[], 1e-12) - 2.0).abs() < 1e-11);
        let x = 1e-4;
        let lorentz = |y: f64| x / (x * x + y * y) / PI;
        let v = simpson(lorentz, -1.0, 1.0, &geometric_splits(0.0, x, 4), 1e-12);
        let exact = 2.0 * (1.0 / x).atan() / PI;
        assert!((v - exact).abs() < 1e-10, "{v} {exact}");
    }
}
