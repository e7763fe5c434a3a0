//! Topological classification of closed loops: signed crossings of the
//! active sheet and winding numbers about the two fluxon cores.

use std::f64::consts::PI;

use crate::error::PhaseError;
use crate::model::{PolyPath, Setup};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathClassification {
    /// Upward minus downward crossings of `y = 0, 0 < x < L, 0 < t < T`.
    pub crossings: i32,
    /// Winding numbers about `(0, 0)` and `(L, 0)` of the `(x, y)` projection.
    pub winding: [i32; 2],
    /// `π × crossings`, the total phase the loop acquires.
    pub predicted_phase: f64,
}

/// Distance from `c` to the segment `a → b` in the plane.
pub fn point_segment_distance(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let s = if len2 == 0.0 {
        0.0
    } else {
        (((c.0 - a.0) * dx + (c.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    (a.0 + s * dx - c.0).hypot(a.1 + s * dy - c.1)
}

fn winding_number(path: &PolyPath, c: (f64, f64)) -> i32 {
    let mut total = 0.0;
    for (a, b) in path.segments() {
        if a.x == b.x && a.y == b.y {
            continue;
        }
        let (ux, uy) = (a.x - c.0, a.y - c.1);
        let (vx, vy) = (b.x - c.0, b.y - c.1);
        total += (ux * vy - uy * vx).atan2(ux * vx + uy * vy);
    }
    (total / (2.0 * PI)).round() as i32
}

/// Classify a closed loop. Fails if the loop is open or if its projection
/// passes within `max(eps_x, eps_y)` of a core.
pub fn classify_path(path: &PolyPath, setup: &Setup) -> Result<PathClassification, PhaseError> {
    if !path.is_closed() {
        return Err(PhaseError::NotClosed);
    }
    let (l, tt) = (setup.length(), setup.duration());
    let reg = setup.reg();
    let guard = reg.eps_x.max(reg.eps_y);
    for (a, b) in path.segments() {
        for core in [(0.0, 0.0), (l, 0.0)] {
            let d = point_segment_distance((a.x, a.y), (b.x, b.y), core);
            if d < guard {
                return Err(PhaseError::NearCore { distance: d });
            }
        }
    }
    let mut crossings = 0;
    for (a, b) in path.segments() {
        let dir = if a.y < 0.0 && b.y >= 0.0 {
            1
        } else if b.y < 0.0 && a.y >= 0.0 {
            -1
        } else {
            continue;
        };
        let s = -a.y / (b.y - a.y);
        let p = a.lerp(&b, s);
        if p.x > 0.0 && p.x < l && p.t > 0.0 && p.t < tt {
            crossings += dir;
        }
    }
    Ok(PathClassification {
        crossings,
        winding: [
            winding_number(path, (0.0, 0.0)),
            winding_number(path, (l, 0.0)),
        ],
        predicted_phase: PI * crossings as f64,
    })
}
