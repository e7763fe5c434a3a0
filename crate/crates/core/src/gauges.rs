//! Closed-form potentials of the three configurations.
//!
//! The rectangular sheet `y = 0, 0 < x < L, 0 < t < T` is available in the
//! temporal gauge and in the Coulomb gauge; the boosted rhombus and the
//! toroidal variant only in the temporal gauge.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{ConfigError, FieldError};
use crate::kernels::{delta, delta_prime, step, Window, SUPPORT_CUTOFF};
use crate::model::{
    Breakpoints, CylPoint, Exclusion, GaugeLabel, Num, Potential, PotentialField, Setup,
    SpacetimePoint,
};

/// Side of the branch cut `y = 0` from which a one-sided limit is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Above,
    Below,
}

fn half_angle(u: f64) -> f64 {
    if u > 0.0 {
        FRAC_PI_2
    } else if u < 0.0 {
        -FRAC_PI_2
    } else {
        0.0
    }
}

/// `F(x, y) = ½[atan(x/y) − atan((x−L)/y)]`.
///
/// On `y = 0` the one-sided limit selected by `side` is returned. Without a
/// side, `y = 0` is an error for `0 ≤ x ≤ L`; elsewhere on the axis `F`
/// is continuous and equal to zero.
pub fn eval_f(x: f64, y: f64, length: f64, side: Option<Side>) -> Result<f64, FieldError> {
    if y != 0.0 {
        return Ok(0.5 * ((x / y).atan() - ((x - length) / y).atan()));
    }
    let above = 0.5 * (half_angle(x) - half_angle(x - length));
    match side {
        Some(Side::Above) => Ok(above),
        Some(Side::Below) => Ok(-above),
        None if (0.0..=length).contains(&x) => Err(FieldError::OnBranchCut { x }),
        None => Ok(0.0),
    }
}

/// Classical (off-cut) gradient of `F`.
pub fn grad_f(x: f64, y: f64, length: f64) -> (f64, f64) {
    let r1 = x * x + y * y;
    let xl = x - length;
    let r2 = xl * xl + y * y;
    (0.5 * (y / r1 - y / r2), 0.5 * (-x / r1 + xl / r2))
}

/// Column header of the `F(x, y)` figure data.
pub const FIGURE_F_CSV_HEADER: &str = "x,y,F";

/// Samples `(x, y, F)` for each `x` in `xs` over `n` evenly spaced `y` in
/// `y_range`. A sample at `y = 0` on the cut `0 ≤ x ≤ L` is emitted as two
/// rows, the limit from below at `y = −0` followed by the limit from above.
pub fn figure_f_rows(
    length: f64,
    xs: &[f64],
    y_range: (f64, f64),
    n: usize,
) -> Result<Vec<[f64; 3]>, ConfigError> {
    let (lo, hi) = y_range;
    if n < 2 {
        return Err(ConfigError::InvalidArgument(format!(
            "need at least 2 samples, got {n}"
        )));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(ConfigError::InvalidArgument(format!(
            "bad y range {lo}..{hi}"
        )));
    }
    if let Some(x) = xs.iter().find(|x| !x.is_finite()) {
        return Err(ConfigError::InvalidArgument(format!("bad x value {x}")));
    }
    let mut rows = Vec::with_capacity(xs.len() * (n + 1));
    for &x in xs {
        for k in 0..n {
            let y = lo + (hi - lo) * k as f64 / (n - 1) as f64;
            match eval_f(x, y, length, None) {
                Ok(f) => rows.push([x, y, f]),
                Err(_) => {
                    rows.push([
                        x,
                        -0.0,
                        eval_f(x, 0.0, length, Some(Side::Below)).unwrap_or(0.0),
                    ]);
                    rows.push([
                        x,
                        0.0,
                        eval_f(x, 0.0, length, Some(Side::Above)).unwrap_or(0.0),
                    ]);
                }
            }
        }
    }
    Ok(rows)
}

pub fn figure_f_csv(rows: &[[f64; 3]]) -> String {
    let mut out = String::with_capacity(rows.len() * 48 + 8);
    out.push_str(FIGURE_F_CSV_HEADER);
    out.push('\n');
    for [x, y, f] in rows {
        out.push_str(&format!("{},{},{}\n", Num(*x), Num(*y), Num(*f)));
    }
    out
}

fn rect_breakpoints(s: &Setup) -> Breakpoints {
    let (l, t) = (s.length(), s.duration());
    let r = s.reg();
    let (wt, wx, wy) = (
        SUPPORT_CUTOFF * r.eps_t,
        SUPPORT_CUTOFF * r.eps_x,
        SUPPORT_CUTOFF * r.eps_y,
    );
    Breakpoints {
        t: vec![-wt, 0.0, wt, t - wt, t, t + wt],
        x: vec![-wx, 0.0, wx, l - wx, l, l + wx],
        y: vec![-wy, 0.0, wy],
    }
}

/// Temporal-gauge potential of the rectangular sheet:
/// `A_y = π W(t) S(x) δ_ε(y)`, `φ = 0`.
#[derive(Debug, Clone, Copy)]
pub struct RectTemporalGauge {
    setup: Setup,
}

impl RectTemporalGauge {
    pub fn new(setup: Setup) -> Self {
        Self { setup }
    }

    pub fn setup(&self) -> &Setup {
        &self.setup
    }

    pub fn time_window(&self) -> Window {
        Window::new(0.0, self.setup.duration(), self.setup.reg().eps_t)
    }

    pub fn space_window(&self) -> Window {
        Window::new(0.0, self.setup.length(), self.setup.reg().eps_x)
    }

    pub fn eval(&self, p: SpacetimePoint) -> Potential {
        let w = self.time_window().value(p.t);
        let s = self.space_window().value(p.x);
        Potential {
            phi: 0.0,
            ax: 0.0,
            ay: PI * w * s * delta(p.y, self.setup.reg().eps_y),
        }
    }
}

impl PotentialField for RectTemporalGauge {
    fn gauge(&self) -> GaugeLabel {
        GaugeLabel::Temporal
    }

    fn potential(&self, p: SpacetimePoint) -> Result<Potential, FieldError> {
        Ok(self.eval(p))
    }

    fn breakpoints(&self) -> Breakpoints {
        rect_breakpoints(&self.setup)
    }
}

/// Coulomb-gauge potential of the rectangular sheet.
///
/// Only the time dependence is regularized; the spatial factors are the exact
/// closed forms, singular at the two fluxon cores `(0, 0)` and `(L, 0)`.
#[derive(Debug, Clone, Copy)]
pub struct RectCoulombGauge {
    setup: Setup,
}

impl RectCoulombGauge {
    pub fn new(setup: Setup) -> Self {
        Self { setup }
    }

    pub fn setup(&self) -> &Setup {
        &self.setup
    }

    /// `Λ = W(t) F(x, y)`, the gauge function connecting this field to
    /// [`RectTemporalGauge`].
    pub fn lambda(&self, p: SpacetimePoint, side: Option<Side>) -> Result<f64, FieldError> {
        let w = self.time_window().value(p.t);
        if w == 0.0 {
            return Ok(0.0);
        }
        Ok(w * eval_f(p.x, p.y, self.setup.length(), side)?)
    }

    fn time_window(&self) -> Window {
        Window::new(0.0, self.setup.duration(), self.setup.reg().eps_t)
    }

    pub fn eval(&self, p: SpacetimePoint) -> Result<Potential, FieldError> {
        let l = self.setup.length();
        let threshold = 1e-12 * l;
        if p.x.hypot(p.y) <= threshold || (p.x - l).hypot(p.y) <= threshold {
            return Err(FieldError::FluxonCore { x: p.x, y: p.y });
        }
        let win = self.time_window();
        let w = win.value(p.t);
        let wd = win.d1(p.t);
        let phi = if wd == 0.0 {
            0.0
        } else {
            -wd * eval_f(p.x, p.y, l, None)?
        };
        if w == 0.0 {
            return Ok(Potential {
                phi,
                ax: 0.0,
                ay: 0.0,
            });
        }
        let (fx, fy) = grad_f(p.x, p.y, l);
        Ok(Potential {
            phi,
            ax: -w * fx,
            ay: -w * fy,
        })
    }
}

impl PotentialField for RectCoulombGauge {
    fn gauge(&self) -> GaugeLabel {
        GaugeLabel::Coulomb
    }

    fn potential(&self, p: SpacetimePoint) -> Result<Potential, FieldError> {
        self.eval(p)
    }

    fn breakpoints(&self) -> Breakpoints {
        let wt = SUPPORT_CUTOFF * self.setup.reg().eps_t;
        let t = self.setup.duration();
        Breakpoints {
            t: vec![-wt, 0.0, wt, t - wt, t, t + wt],
            x: vec![0.0, self.setup.length()],
            y: vec![0.0],
        }
    }

    fn exclusions(&self) -> Vec<Exclusion> {
        let radius = self.setup.reg().core_radius;
        vec![
            Exclusion {
                x: 0.0,
                y: 0.0,
                radius,
            },
            Exclusion {
                x: self.setup.length(),
                y: 0.0,
                radius,
            },
        ]
    }
}

/// Product of smoothed steps `Π Θ_ε(α_i t + β_i x + γ_i)` with analytic
/// derivatives in `(t, x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepProduct {
    factors: Vec<[f64; 3]>,
    eps: f64,
}

/// Value, gradient `(∂_t, ∂_x)` and Hessian `[[tt, tx], [tx, xx]]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet2 {
    pub value: f64,
    pub dt: f64,
    pub dx: f64,
    pub dtt: f64,
    pub dtx: f64,
    pub dxx: f64,
}

/// Step value `s`, first derivative `d` and second derivative `dd` of one
/// factor with respect to its own argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorJet {
    pub s: f64,
    pub d: f64,
    pub dd: f64,
}

impl StepProduct {
    pub fn new(factors: Vec<[f64; 3]>, eps: f64) -> Self {
        Self { factors, eps }
    }

    pub fn factor_jets(&self, t: f64, x: f64) -> Vec<FactorJet> {
        self.factors
            .iter()
            .map(|&[a, b, c]| {
                let u = a * t + b * x + c;
                FactorJet {
                    s: step(u, self.eps),
                    d: delta(u, self.eps),
                    dd: delta_prime(u, self.eps),
                }
            })
            .collect()
    }

    pub fn jet(&self, t: f64, x: f64) -> Jet2 {
        let jets = self.factor_jets(t, x);
        let n = jets.len();
        let others = |skip: &[usize]| -> f64 {
            (0..n)
                .filter(|k| !skip.contains(k))
                .map(|k| jets[k].s)
                .product()
        };
        let mut out = Jet2 {
            value: others(&[]),
            ..Default::default()
        };
        for i in 0..n {
            let [ai, bi, _] = self.factors[i];
            let rest = others(&[i]);
            out.dt += ai * jets[i].d * rest;
            out.dx += bi * jets[i].d * rest;
            out.dtt += ai * ai * jets[i].dd * rest;
            out.dtx += ai * bi * jets[i].dd * rest;
            out.dxx += bi * bi * jets[i].dd * rest;
            for j in 0..n {
                if j == i {
                    continue;
                }
                let [aj, bj, _] = self.factors[j];
                let rest2 = jets[i].d * jets[j].d * others(&[i, j]);
                out.dtt += ai * aj * rest2;
                out.dtx += ai * bj * rest2;
                out.dxx += bi * bj * rest2;
            }
        }
        out
    }
}

/// Temporal-gauge potential of the boosted configuration:
/// `A_y = π Θ(vt−x) Θ(vt+x) Θ(v(T−t)+x) Θ(v(T−t)−x) δ_ε(y)`, each step
/// smoothed with `eps_x`.
#[derive(Debug, Clone)]
pub struct RhombusTemporalGauge {
    setup: Setup,
    profile: StepProduct,
}

impl RhombusTemporalGauge {
    pub fn new(setup: Setup) -> Result<Self, ConfigError> {
        let v = setup.cfg().boost;
        if v <= 0.0 {
            return Err(ConfigError::NotPositive("v"));
        }
        let vt = v * setup.duration();
        let profile = StepProduct::new(
            vec![[v, -1.0, 0.0], [v, 1.0, 0.0], [-v, 1.0, vt], [-v, -1.0, vt]],
            setup.reg().eps_x,
        );
        Ok(Self { setup, profile })
    }

    pub fn setup(&self) -> &Setup {
        &self.setup
    }

    pub fn profile(&self) -> &StepProduct {
        &self.profile
    }

    pub fn eval(&self, p: SpacetimePoint) -> Potential {
        let r = self.profile.jet(p.t, p.x).value;
        Potential {
            phi: 0.0,
            ax: 0.0,
            ay: PI * r * delta(p.y, self.setup.reg().eps_y),
        }
    }
}

impl PotentialField for RhombusTemporalGauge {
    fn gauge(&self) -> GaugeLabel {
        GaugeLabel::Temporal
    }

    fn potential(&self, p: SpacetimePoint) -> Result<Potential, FieldError> {
        Ok(self.eval(p))
    }

    fn breakpoints(&self) -> Breakpoints {
        let t = self.setup.duration();
        let half = 0.5 * self.setup.cfg().boost * t;
        let wy = SUPPORT_CUTOFF * self.setup.reg().eps_y;
        Breakpoints {
            t: vec![0.0, 0.5 * t, t],
            x: vec![-half, 0.0, half],
            y: vec![-wy, 0.0, wy],
        }
    }
}

/// Potential of the toroidal configuration in cylindrical components.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CylPotential {
    pub phi: f64,
    pub ar: f64,
    pub az: f64,
}

/// Temporal-gauge potential of the toroidal variant:
/// `A_z = π W(t) Θ_ε(R − r) δ_ε(z)`.
#[derive(Debug, Clone, Copy)]
pub struct ToroidalTemporalGauge {
    setup: Setup,
}

impl ToroidalTemporalGauge {
    pub fn new(setup: Setup) -> Self {
        Self { setup }
    }

    pub fn setup(&self) -> &Setup {
        &self.setup
    }

    pub fn radius(&self) -> f64 {
        self.setup.cfg().torus_radius
    }

    pub fn eval(&self, p: CylPoint) -> CylPotential {
        let reg = self.setup.reg();
        let w = Window::new(0.0, self.setup.duration(), reg.eps_t).value(p.t);
        CylPotential {
            phi: 0.0,
            ar: 0.0,
            az: PI * w * step(self.radius() - p.r(), reg.eps_x) * delta(p.z, reg.eps_y),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::delta_peak;
    use crate::model::{RegularizationParams, SetupConfig};
    use crate::validate_config;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_4;

    fn lab() -> Setup {
        Setup::default()
    }

    fn p(t: f64, x: f64, y: f64) -> SpacetimePoint {
        SpacetimePoint::new(t, x, y)
    }

    #[test]
    fn figure_rows_split_the_cut() {
        let rows = figure_f_rows(1.0, &[0.5, -0.5], (-1.0, 1.0), 3).unwrap();
        assert_eq!(rows.len(), 7);
        assert_eq!(rows[1][1].to_bits(), (-0.0f64).to_bits());
        assert_relative_eq!(rows[2][2] - rows[1][2], PI, max_relative = 1e-15);
        assert_eq!(rows[5], [-0.5, 0.0, 0.0]);
        let csv = figure_f_csv(&rows[..2]);
        assert!(csv.starts_with("x,y,F\n0.5,-1,"));
        assert!(csv.contains("\n0.5,-0,"));
        assert!(figure_f_rows(1.0, &[0.5], (-1.0, 1.0), 1).is_err());
        assert!(figure_f_rows(1.0, &[0.5], (1.0, -1.0), 5).is_err());
        assert!(figure_f_rows(1.0, &[f64::NAN], (-1.0, 1.0), 5).is_err());
    }

    #[test]
    fn rect_temporal_examples() {
        let g = RectTemporalGauge::new(lab());
        let peak = delta_peak(0.01);
        let a = g.eval(p(0.5, 0.5, 0.0));
        assert_eq!(a.phi, 0.0);
        assert_eq!(a.ax, 0.0);
        assert_relative_eq!(a.ay, PI * peak, max_relative = 1e-14);
        assert_eq!(g.eval(p(2.0, 0.5, 0.0)), Potential::default());
        assert_relative_eq!(
            g.eval(p(0.5, 0.0, 0.0)).ay,
            0.5 * PI * peak,
            max_relative = 1e-14
        );
    }

    #[test]
    fn f_examples() {
        assert_eq!(eval_f(0.5, 0.0, 1.0, Some(Side::Above)).unwrap(), FRAC_PI_2);
        assert_eq!(
            eval_f(0.5, 0.0, 1.0, Some(Side::Below)).unwrap(),
            -FRAC_PI_2
        );
        assert!((eval_f(0.5, 1e-14, 1.0, None).unwrap() - FRAC_PI_2).abs() < 1e-12);
        assert_relative_eq!(
            eval_f(0.5, 0.5, 1.0, None).unwrap(),
            FRAC_PI_4,
            max_relative = 1e-15
        );
        assert_eq!(
            eval_f(0.5, 0.0, 1.0, None),
            Err(FieldError::OnBranchCut { x: 0.5 })
        );
        assert_eq!(eval_f(-0.5, 0.0, 1.0, None).unwrap(), 0.0);
    }

    #[test]
    fn coulomb_symmetric_point() {
        let g = RectCoulombGauge::new(lab());
        let a = g.eval(p(0.5, 0.5, 1.0)).unwrap();
        assert!(a.ax.abs() < 1e-15);
        assert_eq!(g.eval(p(2.0, 0.3, 0.7)).unwrap(), Potential::default());
        assert!(matches!(
            g.eval(p(0.5, 1.0, 0.0)),
            Err(FieldError::FluxonCore { .. })
        ));
    }

    #[test]
    fn coulomb_divergence_free() {
        let g = RectCoulombGauge::new(lab());
        let h = 1e-6;
        let mut state = 12345u64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut count = 0;
        while count < 50 {
            let (x, y) = (-1.0 + 3.0 * next(), -1.5 + 3.0 * next());
            if x.hypot(y) < 0.1 || (x - 1.0).hypot(y) < 0.1 {
                continue;
            }
            count += 1;
            let a = |x, y| g.eval(p(0.5, x, y)).unwrap();
            let div =
                (a(x + h, y).ax - a(x - h, y).ax + a(x, y + h).ay - a(x, y - h).ay) / (2.0 * h);
            assert!(div.abs() < 1e-8, "div {div} at ({x}, {y})");
        }
    }

    #[test]
    fn coulomb_far_field_decays() {
        let g = RectCoulombGauge::new(lab());
        for x in [0.0, 0.3, 0.5, 1.0] {
            let near = g.eval(p(0.5, x, 1.0)).unwrap();
            let far = g.eval(p(0.5, x, 10.0)).unwrap();
            assert!(far.ax.hypot(far.ay) < near.ax.hypot(near.ay) / 50.0);
        }
    }

    #[test]
    fn gauge_relation() {
        // A − A′ = ∇Λ and φ′ = −∂_tΛ away from the sheet and the cores.
        let setup = validate_config(
            SetupConfig::default(),
            RegularizationParams {
                eps_t: 0.05,
                ..Default::default()
            },
        )
        .unwrap();
        let tg = RectTemporalGauge::new(setup);
        let cg = RectCoulombGauge::new(setup);
        let lam = |t, x, y| cg.lambda(p(t, x, y), None).unwrap();
        let h = 1e-5;
        for &(t, x, y) in &[
            (0.02, 0.3, 0.4),
            (0.5, -0.4, 0.2),
            (0.99, 1.3, -0.6),
            (0.03, 0.7, -0.3),
        ] {
            let a = tg.eval(p(t, x, y));
            let b = cg.eval(p(t, x, y)).unwrap();
            let gx = (lam(t, x + h, y) - lam(t, x - h, y)) / (2.0 * h);
            let gy = (lam(t, x, y + h) - lam(t, x, y - h)) / (2.0 * h);
            let gt = (lam(t + h, x, y) - lam(t - h, x, y)) / (2.0 * h);
            assert_relative_eq!(a.ax - b.ax, gx, max_relative = 1e-6);
            assert_relative_eq!(a.ay - b.ay, gy, max_relative = 1e-6);
            assert_relative_eq!(b.phi, -gt, max_relative = 1e-6);
        }
    }

    #[test]
    fn rhombus_examples() {
        let s = lab();
        let g = RhombusTemporalGauge::new(s).unwrap();
        let peak = delta_peak(0.01);
        assert_relative_eq!(g.eval(p(0.5, 0.0, 0.0)).ay, PI * peak, max_relative = 1e-14);
        assert!(g.eval(p(0.5, 2.0 * 0.5, 0.0)).ay.abs() < 1e-12);
        assert!(RhombusTemporalGauge::new(s.with_boost(0.0).unwrap()).is_err());
    }

    #[test]
    fn rhombus_static_limit() {
        // v → 0: two opposite dipoles at rest at x = 0; each step sits at ½.
        let g = RhombusTemporalGauge::new(lab().with_boost(1e-9).unwrap()).unwrap();
        let peak = delta_peak(0.01);
        assert_relative_eq!(
            g.eval(p(0.5, 0.0, 0.0)).ay,
            PI * peak / 16.0,
            max_relative = 1e-6
        );
        assert_eq!(g.eval(p(0.5, 0.1, 0.0)).ay, 0.0);
    }

    #[test]
    fn step_product_jet_matches_finite_differences() {
        let g = RhombusTemporalGauge::new(lab().with_boost(0.7).unwrap()).unwrap();
        let pr = g.profile();
        let h = 1e-6;
        for &(t, x) in &[(0.01, 0.005), (0.5, 0.345), (0.98, -0.01), (0.3, -0.21)] {
            let j = pr.jet(t, x);
            let fdt = |t, x| pr.jet(t, x).value;
            let dt = (fdt(t + h, x) - fdt(t - h, x)) / (2.0 * h);
            let dx = (fdt(t, x + h) - fdt(t, x - h)) / (2.0 * h);
            let scale = j.dt.abs().max(j.dx.abs()).max(1.0);
            assert!((dt - j.dt).abs() < 1e-6 * scale);
            assert!((dx - j.dx).abs() < 1e-6 * scale);
            let dtt = (pr.jet(t + h, x).dt - pr.jet(t - h, x).dt) / (2.0 * h);
            let dxx = (pr.jet(t, x + h).dx - pr.jet(t, x - h).dx) / (2.0 * h);
            let dtx = (pr.jet(t, x + h).dt - pr.jet(t, x - h).dt) / (2.0 * h);
            let s2 = j.dtt.abs().max(j.dxx.abs()).max(j.dtx.abs()).max(1.0);
            assert!((dtt - j.dtt).abs() < 1e-5 * s2);
            assert!((dxx - j.dxx).abs() < 1e-5 * s2);
            assert!((dtx - j.dtx).abs() < 1e-5 * s2);
        }
    }

    #[test]
    fn toroidal_examples() {
        let g = ToroidalTemporalGauge::new(lab());
        let peak = delta_peak(0.01);
        let at = |r| g.eval(CylPoint::new(0.5, r, 0.0).unwrap());
        assert_relative_eq!(at(0.5).az, PI * peak, max_relative = 1e-14);
        assert_eq!(at(2.0).az, 0.0);
        assert_relative_eq!(at(1.0).az, 0.5 * PI * peak, max_relative = 1e-14);
        assert_eq!(at(0.5).phi, 0.0);
        assert_eq!(at(0.5).ar, 0.0);
    }

    proptest! {
        #[test]
        fn f_odd_in_y(x in -2.0f64..3.0, y in 0.001f64..5.0) {
            let a = eval_f(x, y, 1.0, None).unwrap();
            let b = eval_f(x, -y, 1.0, None).unwrap();
            prop_assert_eq!(a, -b);
        }

        #[test]
        fn rect_mirror_symmetry(t in -0.1f64..1.1, x in -0.2f64..1.2, y in -0.05f64..0.05) {
            let g = RectTemporalGauge::new(lab());
            let a = g.eval(p(t, x, y)).ay;
            let b = g.eval(p(t, 1.0 - x, y)).ay;
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
            let fa = eval_f(x, y + 0.1, 1.0, None).unwrap();
            let fb = eval_f(1.0 - x, y + 0.1, 1.0, None).unwrap();
            prop_assert!((fa - fb).abs() < 1e-14);
        }

        #[test]
        fn temporal_phi_vanishes(t in -1.0f64..2.0, x in -1.0f64..2.0, y in -1.0f64..1.0) {
            let g = RectTemporalGauge::new(lab());
            let a = g.eval(p(t, x, y));
            prop_assert_eq!(a.phi, 0.0);
            prop_assert_eq!(a.ax, 0.0);
            prop_assert_eq!(a, g.eval(p(t, x, y)));
        }
    }
}
