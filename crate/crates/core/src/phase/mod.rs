//! Loop phases `θ = ∮A·dl + ∮φ dt`, split into the magnetic part
//! `θ_m = ∮A·dl` and the electric part `θ_e = ∮φ dt`.

mod classify;
mod quadrature;

use std::f64::consts::PI;

use rayon::prelude::*;

pub use classify::{classify_path, point_segment_distance, PathClassification};
pub use quadrature::{integrate, QuadratureSpec};

use crate::error::{FieldError, PhaseError};
use crate::kernels::{heaviside, SUPPORT_CUTOFF};
use crate::model::{PhaseBreakdown, PolyPath, PotentialField, Setup, SpacetimePoint};

/// Parameters `s ∈ (0, 1)` at which the segment `a → b` crosses one of the
/// given coordinate values.
fn crossing_params(a: f64, b: f64, values: &[f64], out: &mut Vec<f64>) {
    if a == b {
        return;
    }
    for &v in values {
        let s = (v - a) / (b - a);
        if s > 0.0 && s < 1.0 {
            out.push(s);
        }
    }
}

fn segment_phase(
    field: &dyn PotentialField,
    a: SpacetimePoint,
    b: SpacetimePoint,
    spec: &QuadratureSpec,
) -> Result<([f64; 2], f64), FieldError> {
    let bp = field.breakpoints();
    let mut splits = Vec::new();
    crossing_params(a.t, b.t, &bp.t, &mut splits);
    crossing_params(a.x, b.x, &bp.x, &mut splits);
    crossing_params(a.y, b.y, &bp.y, &mut splits);
    let (dt, dx, dy) = (b.t - a.t, b.x - a.x, b.y - a.y);
    let integrand = |s: f64| -> Result<[f64; 2], FieldError> {
        let p = a.lerp(&b, s);
        let pot = field.potential(p)?;
        let m = pot.ax * dx + pot.ay * dy;
        // Purely spatial segments carry no electric phase.
        let e = if dt == 0.0 { 0.0 } else { pot.phi * dt };
        Ok([m, e])
    };
    integrate(integrand, 0.0, 1.0, &splits, spec)
}

/// Phases of a closed loop. Loops must keep the `(x, y)` projection outside
/// the field's core exclusion disks.
pub fn loop_phase(
    field: &dyn PotentialField,
    path: &PolyPath,
    spec: &QuadratureSpec,
) -> Result<PhaseBreakdown, PhaseError> {
    if !path.is_closed() {
        return Err(PhaseError::NotClosed);
    }
    if !spec.is_valid() {
        return Err(PhaseError::Geometry(
            "quadrature tolerances must be positive".into(),
        ));
    }
    for ex in field.exclusions() {
        for (a, b) in path.segments() {
            if point_segment_distance((a.x, a.y), (b.x, b.y), (ex.x, ex.y)) < ex.radius {
                return Err(PhaseError::CoreExclusion { x: ex.x, y: ex.y });
            }
        }
    }
    let segments: Vec<_> = path.segments().collect();
    let parts: Vec<Result<([f64; 2], f64), FieldError>> = segments
        .par_iter()
        .map(|&(a, b)| segment_phase(field, a, b, spec))
        .collect();
    let (mut theta_m, mut theta_e, mut quad_error) = (0.0, 0.0, 0.0);
    for part in parts {
        let (v, err) = part?;
        theta_m += v[0];
        theta_e += v[1];
        quad_error += err;
    }
    Ok(PhaseBreakdown {
        theta_e,
        theta_m,
        theta_total: theta_e + theta_m,
        quad_error,
    })
}

/// Closed-form electric and magnetic phases of the electric path for a
/// packet pair at `(x, ±d)`: `θ_e = atan(x/d) − atan((x−L)/d)`,
/// `θ_m = −θ_e + π[Θ(x) − Θ(x−L)]` with `Θ(0) = ½`.
pub fn closed_form_phases(x: f64, d: f64, setup: &Setup) -> Result<(f64, f64), PhaseError> {
    if !(d > 0.0) {
        return Err(PhaseError::Geometry(format!(
            "packet separation d = {d} must be positive"
        )));
    }
    let l = setup.length();
    let theta_e = (x / d).atan() - ((x - l) / d).atan();
    let theta_m = -theta_e + PI * (heaviside(x) - heaviside(x - l));
    Ok((theta_e, theta_m))
}

/// Interference loop of two packets at `(x, y_lo)` and `(x, y_hi)`.
///
/// The packets split from `(x, y_mid)` well before the active window,
/// travel at fixed `y` and rejoin at `(t_interfere, x, y_mid)`. The loop runs
/// forward in time along the lower packet and backward along the upper one.
pub fn path1_loop(
    setup: &Setup,
    x: f64,
    y_lo: f64,
    y_hi: f64,
    t_interfere: f64,
) -> Result<PolyPath, PhaseError> {
    if !(y_lo < y_hi) {
        return Err(PhaseError::Geometry("y_lo must be below y_hi".into()));
    }
    let tt = setup.duration();
    let t_split = -0.5 * tt;
    let t0 = -0.25 * tt;
    if t0 >= -SUPPORT_CUTOFF * setup.reg().eps_t || t_interfere <= t0 {
        return Err(PhaseError::Geometry(
            "packets must separate before the active window opens".into(),
        ));
    }
    let y_mid = 0.5 * (y_lo + y_hi);
    let p = SpacetimePoint::new;
    Ok(PolyPath::closed_loop(vec![
        p(t_split, x, y_mid),
        p(t0, x, y_lo),
        p(t_interfere, x, y_lo),
        p(t_interfere, x, y_mid),
        p(t_interfere, x, y_hi),
        p(t0, x, y_hi),
    ])?)
}

/// Phases of the electric path with packets at `(x, ±d)`.
pub fn electric_path_phase(
    field: &dyn PotentialField,
    setup: &Setup,
    x: f64,
    d: f64,
    t_interfere: f64,
    spec: &QuadratureSpec,
) -> Result<PhaseBreakdown, PhaseError> {
    if !(d > 0.0) {
        return Err(PhaseError::Geometry(format!(
            "packet separation d = {d} must be positive"
        )));
    }
    loop_phase(field, &path1_loop(setup, x, -d, d, t_interfere)?, spec)
}

/// Which fluxon cores a magnetic-path circle encloses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fluxon {
    Left,
    Right,
    Both,
    Neither,
}

/// Number of polygon vertices used for circles.
pub const CIRCLE_VERTICES: usize = 64;

/// Counter-clockwise regular polygon of radius `radius` about `(cx, cy)` at
/// fixed time `t`, vertices offset by half a step from the `x` axis.
pub fn circle_loop(t: f64, cx: f64, cy: f64, radius: f64) -> Result<PolyPath, PhaseError> {
    if !(radius > 0.0) {
        return Err(PhaseError::Geometry(format!(
            "radius {radius} must be positive"
        )));
    }
    let n = CIRCLE_VERTICES;
    let vertices = (0..n)
        .map(|k| {
            let a = 2.0 * PI * (k as f64 + 0.5) / n as f64;
            SpacetimePoint::new(t, cx + radius * a.cos(), cy + radius * a.sin())
        })
        .collect();
    Ok(PolyPath::closed_loop(vertices)?)
}

/// Spatial loop at `t_mid` around the chosen fluxon(s).
///
/// `margin` (default `8·eps_t`) is the minimum distance of `t_mid` from
/// both window edges.
pub fn magnetic_path_loop(
    setup: &Setup,
    which: Fluxon,
    radius: f64,
    t_mid: f64,
    margin: Option<f64>,
) -> Result<PolyPath, PhaseError> {
    let reg = setup.reg();
    let (l, tt) = (setup.length(), setup.duration());
    let margin = margin.unwrap_or(SUPPORT_CUTOFF * reg.eps_t);
    if t_mid < margin || t_mid > tt - margin {
        return Err(PhaseError::OutsideActiveWindow { t: t_mid, margin });
    }
    let rc = reg.core_radius;
    if radius <= rc {
        return Err(PhaseError::Geometry(format!(
            "radius {radius} must exceed core_radius {rc}"
        )));
    }
    let cx = match which {
        Fluxon::Left | Fluxon::Right => {
            if radius >= l - rc {
                return Err(PhaseError::Geometry(format!(
                    "radius {radius} would reach the other fluxon"
                )));
            }
            if which == Fluxon::Left {
                0.0
            } else {
                l
            }
        }
        Fluxon::Both => {
            if radius <= 0.5 * l + rc {
                return Err(PhaseError::Geometry(format!(
                    "radius {radius} does not enclose both fluxons"
                )));
            }
            0.5 * l
        }
        Fluxon::Neither => -(l + 1.5 * radius),
    };
    circle_loop(t_mid, cx, 0.0, radius)
}

/// Phases of a magnetic-path circle.
pub fn magnetic_path_phase(
    field: &dyn PotentialField,
    setup: &Setup,
    which: Fluxon,
    radius: f64,
    t_mid: f64,
    margin: Option<f64>,
    spec: &QuadratureSpec,
) -> Result<PhaseBreakdown, PhaseError> {
    loop_phase(
        field,
        &magnetic_path_loop(setup, which, radius, t_mid, margin)?,
        spec,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauges::{RectCoulombGauge, RectTemporalGauge};
    use crate::model::Setup;
    use std::f64::consts::FRAC_PI_2;

    fn lab() -> Setup {
        Setup::default()
    }

    #[test]
    fn closed_form_examples() {
        let s = lab();
        let (e, m) = closed_form_phases(0.5, 1e-9, &s).unwrap();
        assert!((e - PI).abs() < 1e-8 && m.abs() < 1e-8);
        let (e, m) = closed_form_phases(0.5, 0.5, &s).unwrap();
        assert!((e - FRAC_PI_2).abs() < 1e-15 && (m - FRAC_PI_2).abs() < 1e-15);
        let (e, m) = closed_form_phases(-1.0, 0.01, &s).unwrap();
        assert!((e - ((-100f64).atan() - (-200f64).atan())).abs() < 1e-15);
        assert!((e + m).abs() < 1e-15);
        let (e, m) = closed_form_phases(0.0, 0.1, &s).unwrap();
        assert!((e + m - FRAC_PI_2).abs() < 1e-15);
        assert!(closed_form_phases(0.5, 0.0, &s).is_err());
    }

    #[test]
    fn temporal_loop_through_sheet_gives_pi() {
        let s = lab();
        let g = RectTemporalGauge::new(s);
        let r = electric_path_phase(&g, &s, 0.5, 0.25, 0.5, &QuadratureSpec::default()).unwrap();
        assert_eq!(r.theta_e, 0.0);
        assert!((r.theta_total - PI).abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn loop_after_window_gives_zero() {
        let s = lab();
        let g = RectTemporalGauge::new(s);
        let path = PolyPath::closed_loop(vec![
            SpacetimePoint::new(1.5, 0.5, -0.2),
            SpacetimePoint::new(2.0, 0.5, -0.2),
            SpacetimePoint::new(2.0, 0.5, 0.2),
            SpacetimePoint::new(1.5, 0.5, 0.2),
        ])
        .unwrap();
        let r = loop_phase(&g, &path, &QuadratureSpec::default()).unwrap();
        assert!(r.theta_total.abs() < 1e-12);
    }

    #[test]
    fn coulomb_split_matches_closed_form() {
        let s = lab();
        let g = RectCoulombGauge::new(s);
        let r = electric_path_phase(&g, &s, 0.5, 0.25, 0.5, &QuadratureSpec::default()).unwrap();
        let (e, m) = closed_form_phases(0.5, 0.25, &s).unwrap();
        assert!((r.theta_e - e).abs() < 1e-5, "{r:?}");
        assert!((r.theta_m - m).abs() < 1e-5, "{r:?}");
        assert!((r.theta_total - PI).abs() < 1e-6);
    }

    #[test]
    fn rejoin_after_window_and_same_side() {
        let s = lab();
        let g = RectCoulombGauge::new(s);
        let spec = QuadratureSpec::default();
        let r = electric_path_phase(&g, &s, 0.5, 0.25, 1.5, &spec).unwrap();
        assert!(r.theta_total.abs() < 1e-6);
        let same = path1_loop(&s, 0.5, 0.1, 0.4, 0.5).unwrap();
        assert!(loop_phase(&g, &same, &spec).unwrap().theta_total.abs() < 1e-6);
    }

    #[test]
    fn magnetic_paths() {
        let s = lab();
        let spec = QuadratureSpec::default();
        let tg = RectTemporalGauge::new(s);
        let cg = RectCoulombGauge::new(s);
        let left = magnetic_path_phase(&cg, &s, Fluxon::Left, 0.25, 0.5, None, &spec).unwrap();
        assert!((left.theta_m - PI).abs() < 1e-6 && left.theta_e == 0.0);
        let right = magnetic_path_phase(&tg, &s, Fluxon::Right, 0.25, 0.5, None, &spec).unwrap();
        assert!((right.theta_total + PI).abs() < 1e-6);
        let both = magnetic_path_phase(&cg, &s, Fluxon::Both, 0.65, 0.5, None, &spec).unwrap();
        assert!(both.theta_total.abs() < 1e-6);
        let none = magnetic_path_phase(&tg, &s, Fluxon::Neither, 0.25, 0.5, None, &spec).unwrap();
        assert!(none.theta_total.abs() < 1e-12);
        assert!(matches!(
            magnetic_path_loop(&s, Fluxon::Left, 0.25, 0.05, None),
            Err(PhaseError::OutsideActiveWindow { .. })
        ));
        assert!(magnetic_path_loop(&s, Fluxon::Both, 0.4, 0.5, None).is_err());
    }

    #[test]
    fn core_exclusion_and_open_loops() {
        let s = lab();
        let cg = RectCoulombGauge::new(s);
        let spec = QuadratureSpec::default();
        let tight = circle_loop(0.5, 0.0, 0.0, 0.02).unwrap();
        assert!(matches!(
            loop_phase(&cg, &tight, &spec),
            Err(PhaseError::CoreExclusion { .. })
        ));
        let open = PolyPath::new(
            vec![
                SpacetimePoint::new(0.0, 0.0, 0.0),
                SpacetimePoint::new(1.0, 0.0, 0.0),
            ],
            false,
        )
        .unwrap();
        assert_eq!(loop_phase(&cg, &open, &spec), Err(PhaseError::NotClosed));
    }

    #[test]
    fn classification_examples() {
        let s = lab();
        let p1 = path1_loop(&s, 0.5, -0.25, 0.25, 0.5).unwrap();
        let c = classify_path(&p1, &s).unwrap();
        assert_eq!(c.crossings, 1);
        assert_eq!(c.winding, [0, 0]);
        assert_eq!(c.predicted_phase, PI);
        let left = magnetic_path_loop(&s, Fluxon::Left, 0.25, 0.5, None).unwrap();
        assert_eq!(classify_path(&left, &s).unwrap().winding, [1, 0]);
        let both = magnetic_path_loop(&s, Fluxon::Both, 0.65, 0.5, None).unwrap();
        let c = classify_path(&both, &s).unwrap();
        assert_eq!(c.winding, [1, 1]);
        assert_eq!(c.predicted_phase, 0.0);
        let near = circle_loop(0.5, 0.0, 0.0, 0.005).unwrap();
        assert!(matches!(
            classify_path(&near, &s),
            Err(PhaseError::NearCore { .. })
        ));
    }

    #[test]
    fn reversal_negates_phases() {
        let s = lab();
        let cg = RectCoulombGauge::new(s);
        let spec = QuadratureSpec::default();
        let p = path1_loop(&s, 0.3, -0.2, 0.35, 0.6).unwrap();
        let f = loop_phase(&cg, &p, &spec).unwrap();
        let r = loop_phase(&cg, &p.reversed(), &spec).unwrap();
        assert!((f.theta_e + r.theta_e).abs() < 1e-10);
        assert!((f.theta_m + r.theta_m).abs() < 1e-10);
    }
}
