//! Globally adaptive Gauss–Kronrod (G7/K15) quadrature of a two-component
//! integrand on an interval.

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// Gauss weights for the Kronrod nodes with odd index.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances and budget of the adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of subintervals per segment.
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_subdivisions: 200,
        }
    }
}

impl QuadratureSpec {
    pub fn is_valid(&self) -> bool {
        self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.max_subdivisions > 0
    }
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    value: [f64; 2],
    error: f64,
}

fn gk15<E>(f: &impl Fn(f64) -> Result<[f64; 2], E>, a: f64, b: f64) -> Result<Piece, E> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kron = [0.0; 2];
    let mut gauss = [0.0; 2];
    let fc = f(c)?;
    for k in 0..2 {
        kron[k] = WGK[7] * fc[k];
        gauss[k] = WG[3] * fc[k];
    }
    for i in 0..7 {
        let dx = h * XGK[i];
        let (f1, f2) = (f(c - dx)?, f(c + dx)?);
        for k in 0..2 {
            let s = f1[k] + f2[k];
            kron[k] += WGK[i] * s;
            if i % 2 == 1 {
                gauss[k] += WG[i / 2] * s;
            }
        }
    }
    let value = [kron[0] * h, kron[1] * h];
    let error = ((kron[0] - gauss[0]) * h).abs() + ((kron[1] - gauss[1]) * h).abs();
    Ok(Piece { a, b, value, error })
}

/// Integrate `f` over `[a, b]`, pre-split at `splits` (points outside the
/// open interval are ignored). Returns the integral and the summed error
/// estimate `|K15 − G7|`.
pub fn integrate<E>(
    f: impl Fn(f64) -> Result<[f64; 2], E>,
    a: f64,
    b: f64,
    splits: &[f64],
    spec: &QuadratureSpec,
) -> Result<([f64; 2], f64), E> {
    let mut cuts: Vec<f64> = splits.iter().copied().filter(|&s| s > a && s < b).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(a);
    edges.extend(cuts);
    edges.push(b);
    let mut pieces = Vec::with_capacity(spec.max_subdivisions.max(edges.len()));
    for w in edges.windows(2) {
        pieces.push(gk15(&f, w[0], w[1])?);
    }
    loop {
        let total = sum(&pieces);
        let err: f64 = pieces.iter().map(|p| p.error).sum();
        let tol = spec
            .abs_tol
            .max(spec.rel_tol * (total[0].abs() + total[1].abs()));
        if err <= tol || pieces.len() >= spec.max_subdivisions {
            return Ok((total, err));
        }
        let (worst, _) = pieces
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, p)| {
                if p.error > acc.1 {
                    (i, p.error)
                } else {
                    acc
                }
            });
        let p = pieces.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if !(mid > p.a && mid < p.b) {
            // Interval exhausted at machine precision.
            return Ok((total, err));
        }
        pieces.push(gk15(&f, p.a, mid)?);
        pieces.push(gk15(&f, mid, p.b)?);
    }
}

fn sum(pieces: &[Piece]) -> [f64; 2] {
    // Summed in position order so the result does not depend on the
    // refinement history's storage order.
    let mut sorted: Vec<&Piece> = pieces.iter().collect();
    sorted.sort_by(|x, y| x.a.total_cmp(&y.a));
    sorted.iter().fold([0.0, 0.0], |acc, p| {
        [acc[0] + p.value[0], acc[1] + p.value[1]]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    fn ok(f: impl Fn(f64) -> [f64; 2]) -> impl Fn(f64) -> Result<[f64; 2], Infallible> {
        move |x| Ok(f(x))
    }

    #[test]
    fn polynomials_are_exact() {
        let (v, e) = integrate(
            ok(|x| [x.powi(10), 1.0]),
            -1.0,
            2.0,
            &[],
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!((v[0] - (2f64.powi(11) + 1.0) / 11.0).abs() < 1e-12);
        assert!((v[1] - 3.0).abs() < 1e-14);
        assert!(e < 1e-9);
    }

    #[test]
    fn narrow_gaussian_with_splits() {
        let eps = 1e-3;
        let g =
            |x: f64| (-0.5 * (x / eps).powi(2)).exp() / (eps * (2.0 * std::f64::consts::PI).sqrt());
        let spec = QuadratureSpec::default();
        let (v, err) = integrate(ok(|x| [g(x - 0.3), 0.0]), 0.0, 1.0, &[0.3], &spec).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-10, "{}", v[0]);
        assert!(err < 1e-9);
    }

    #[test]
    fn errors_propagate() {
        let r: Result<_, &str> = integrate(
            |x| if x > 0.5 { Err("boom") } else { Ok([x, x]) },
            0.0,
            1.0,
            &[],
            &QuadratureSpec::default(),
        );
        assert_eq!(r.unwrap_err(), "boom");
    }
}
