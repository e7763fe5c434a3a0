//! Domain types shared by every other module.
//!
//! Planar configurations live in the reduced `(t, x, y)` spacetime (the
//! setups are invariant along `z`); the toroidal configuration uses
//! cylindrical `(t, r, z)`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, FieldError, PathError};

/// An event in the reduced 2+1 dimensional spacetime.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SpacetimePoint {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

impl SpacetimePoint {
    pub const fn new(t: f64, x: f64, y: f64) -> Self {
        Self { t, x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.is_finite() && self.y.is_finite()
    }

    /// Euclidean distance in `(t, x, y)`.
    pub fn distance(&self, other: &Self) -> f64 {
        let (dt, dx, dy) = (other.t - self.t, other.x - self.x, other.y - self.y);
        (dt * dt + dx * dx + dy * dy).sqrt()
    }

    /// Point at parameter `s` on the straight segment `self -> other`.
    pub fn lerp(&self, other: &Self, s: f64) -> Self {
        Self {
            t: self.t + s * (other.t - self.t),
            x: self.x + s * (other.x - self.x),
            y: self.y + s * (other.y - self.y),
        }
    }
}

/// An event in cylindrical coordinates, used by the toroidal configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylPoint {
    pub t: f64,
    r: f64,
    pub z: f64,
}

impl CylPoint {
    pub fn new(t: f64, r: f64, z: f64) -> Result<Self, PathError> {
        if r < 0.0 || r.is_nan() {
            return Err(PathError::NegativeRadius(r));
        }
        Ok(Self { t, r, z })
    }

    pub fn r(&self) -> f64 {
        self.r
    }
}

/// Geometry and timing of the configurations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SetupConfig {
    /// Capacitor length along `x`.
    #[serde(rename = "L")]
    pub length: f64,
    /// Active interval `[0, T]`.
    #[serde(rename = "T")]
    pub duration: f64,
    /// Boost speed of the rhombus variant (`v < 1` time-like, `v > 1` space-like).
    #[serde(rename = "v")]
    pub boost: f64,
    /// Radius of the toroidal solenoid.
    #[serde(rename = "R_tor")]
    pub torus_radius: f64,
}

impl Default for SetupConfig {
    fn default() -> Self {
        Self {
            length: 1.0,
            duration: 1.0,
            boost: 0.5,
            torus_radius: 1.0,
        }
    }
}

/// Smoothing widths replacing the step and delta distributions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularizationParams {
    pub eps_x: f64,
    pub eps_y: f64,
    pub eps_t: f64,
    /// Exclusion radius around the fluxon cores for Coulomb-gauge loops.
    pub core_radius: f64,
}

impl Default for RegularizationParams {
    fn default() -> Self {
        Self {
            eps_x: 0.01,
            eps_y: 0.01,
            eps_t: 0.01,
            core_radius: 0.03,
        }
    }
}

/// A validated configuration. Only obtainable through [`validate_config`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Setup {
    cfg: SetupConfig,
    reg: RegularizationParams,
}

impl Setup {
    pub fn cfg(&self) -> &SetupConfig {
        &self.cfg
    }

    pub fn reg(&self) -> &RegularizationParams {
        &self.reg
    }

    pub fn length(&self) -> f64 {
        self.cfg.length
    }

    pub fn duration(&self) -> f64 {
        self.cfg.duration
    }

    /// Copy with a different boost speed.
    pub fn with_boost(&self, v: f64) -> Result<Self, ConfigError> {
        validate_config(
            SetupConfig {
                boost: v,
                ..self.cfg
            },
            self.reg,
        )
    }

    /// Copy with every regularization length scaled by `factor`.
    pub fn with_scaled_widths(&self, factor: f64) -> Result<Self, ConfigError> {
        let reg = RegularizationParams {
            eps_x: self.reg.eps_x * factor,
            eps_y: self.reg.eps_y * factor,
            eps_t: self.reg.eps_t * factor,
            core_radius: self.reg.core_radius * factor,
        };
        validate_config(self.cfg, reg)
    }
}

impl Default for Setup {
    fn default() -> Self {
        Self {
            cfg: SetupConfig::default(),
            reg: RegularizationParams::default(),
        }
    }
}

/// Check every configuration invariant, reporting the first violation.
pub fn validate_config(cfg: SetupConfig, reg: RegularizationParams) -> Result<Setup, ConfigError> {
    let values = [
        ("L", cfg.length),
        ("T", cfg.duration),
        ("v", cfg.boost),
        ("R_tor", cfg.torus_radius),
        ("eps_x", reg.eps_x),
        ("eps_y", reg.eps_y),
        ("eps_t", reg.eps_t),
        ("core_radius", reg.core_radius),
    ];
    for (name, value) in values {
        if !value.is_finite() {
            return Err(ConfigError::NotFinite(name));
        }
    }
    for (name, value) in values {
        if name == "v" {
            if value < 0.0 {
                return Err(ConfigError::Negative(name));
            }
        } else if value <= 0.0 {
            return Err(ConfigError::NotPositive(name));
        }
    }
    if reg.eps_x > cfg.length / 10.0 {
        return Err(ConfigError::ExceedsBound {
            name: "eps_x",
            bound: "L/10",
        });
    }
    if reg.eps_y > cfg.length / 10.0 {
        return Err(ConfigError::ExceedsBound {
            name: "eps_y",
            bound: "L/10",
        });
    }
    if reg.eps_t > cfg.duration / 10.0 {
        return Err(ConfigError::ExceedsBound {
            name: "eps_t",
            bound: "T/10",
        });
    }
    if reg.core_radius < 3.0 * reg.eps_x.max(reg.eps_y) {
        return Err(ConfigError::CoreRadiusTooSmall);
    }
    Ok(Setup { cfg, reg })
}

/// On-disk configuration: a flat JSON object with keys
/// `L, T, v, R_tor, eps_x, eps_y, eps_t, core_radius`. Missing keys take
/// the defaults of [`SetupConfig`] and [`RegularizationParams`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(rename = "L", default = "defaults::length")]
    pub length: f64,
    #[serde(rename = "T", default = "defaults::duration")]
    pub duration: f64,
    #[serde(rename = "v", default = "defaults::boost")]
    pub boost: f64,
    #[serde(rename = "R_tor", default = "defaults::torus_radius")]
    pub torus_radius: f64,
    #[serde(default = "defaults::eps")]
    pub eps_x: f64,
    #[serde(default = "defaults::eps")]
    pub eps_y: f64,
    #[serde(default = "defaults::eps")]
    pub eps_t: f64,
    #[serde(default = "defaults::core_radius")]
    pub core_radius: f64,
}

mod defaults {
    pub fn length() -> f64 {
        1.0
    }
    pub fn duration() -> f64 {
        1.0
    }
    pub fn boost() -> f64 {
        0.5
    }
    pub fn torus_radius() -> f64 {
        1.0
    }
    pub fn eps() -> f64 {
        0.01
    }
    pub fn core_radius() -> f64 {
        0.03
    }
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn into_setup(self) -> Result<Setup, ConfigError> {
        validate_config(
            SetupConfig {
                length: self.length,
                duration: self.duration,
                boost: self.boost,
                torus_radius: self.torus_radius,
            },
            RegularizationParams {
                eps_x: self.eps_x,
                eps_y: self.eps_y,
                eps_t: self.eps_t,
                core_radius: self.core_radius,
            },
        )
    }
}

impl From<&Setup> for ConfigFile {
    fn from(s: &Setup) -> Self {
        Self {
            length: s.cfg.length,
            duration: s.cfg.duration,
            boost: s.cfg.boost,
            torus_radius: s.cfg.torus_radius,
            eps_x: s.reg.eps_x,
            eps_y: s.reg.eps_y,
            eps_t: s.reg.eps_t,
            core_radius: s.reg.core_radius,
        }
    }
}

/// Parse and validate a JSON configuration.
pub fn parse_config(text: &str) -> Result<Setup, ConfigError> {
    ConfigFile::parse(text)?.into_setup()
}

/// A polygonal path in spacetime; closed paths repeat their first vertex at
/// the end.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyPath {
    vertices: Vec<SpacetimePoint>,
    closed: bool,
}

impl PolyPath {
    pub fn new(vertices: Vec<SpacetimePoint>, closed: bool) -> Result<Self, PathError> {
        if vertices.len() < 2 {
            return Err(PathError::TooFewVertices(vertices.len()));
        }
        if let Some(i) = vertices.iter().position(|v| !v.is_finite()) {
            return Err(PathError::NonFinite(i));
        }
        if let Some(i) = vertices.windows(2).position(|w| w[0] == w[1]) {
            return Err(PathError::RepeatedVertex(i));
        }
        if closed && vertices.first() != vertices.last() {
            return Err(PathError::OpenEnds);
        }
        Ok(Self { vertices, closed })
    }

    /// Closed loop through `vertices`, appending the first vertex if needed.
    pub fn closed_loop(mut vertices: Vec<SpacetimePoint>) -> Result<Self, PathError> {
        if let (Some(first), Some(last)) = (vertices.first().copied(), vertices.last()) {
            if first != *last {
                vertices.push(first);
            }
        }
        Self::new(vertices, true)
    }

    pub fn vertices(&self) -> &[SpacetimePoint] {
        &self.vertices
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn segments(&self) -> impl Iterator<Item = (SpacetimePoint, SpacetimePoint)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    /// The same path traversed backwards.
    pub fn reversed(&self) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Self {
            vertices,
            closed: self.closed,
        }
    }

    /// Parse the plain-text path format: one `t x y` vertex per line, an
    /// optional trailing `closed` line. Blank lines and `#` comments are
    /// ignored.
    pub fn parse(text: &str) -> Result<Self, PathError> {
        let mut vertices = Vec::new();
        let mut closed = false;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if closed {
                return Err(PathError::Parse {
                    line: line_no,
                    msg: "content after `closed`".into(),
                });
            }
            if line == "closed" {
                closed = true;
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(PathError::Parse {
                    line: line_no,
                    msg: format!("expected `t x y`, found {} fields", fields.len()),
                });
            }
            let mut coords = [0.0; 3];
            for (c, f) in coords.iter_mut().zip(&fields) {
                *c = f.parse().map_err(|e| PathError::Parse {
                    line: line_no,
                    msg: format!("bad number `{f}`: {e}"),
                })?;
            }
            vertices.push(SpacetimePoint::new(coords[0], coords[1], coords[2]));
        }
        if closed {
            Self::closed_loop(vertices)
        } else {
            Self::new(vertices, false)
        }
    }

    /// Inverse of [`PolyPath::parse`]; closed paths omit the repeated vertex.
    pub fn to_path_file(&self) -> String {
        let n = if self.closed {
            self.vertices.len() - 1
        } else {
            self.vertices.len()
        };
        let mut out = String::new();
        for v in &self.vertices[..n] {
            let _ = writeln!(out, "{} {} {}", v.t, v.x, v.y);
        }
        if self.closed {
            out.push_str("closed\n");
        }
        out
    }
}

/// Sum of Euclidean segment lengths in `(t, x, y)`.
pub fn path_length(path: &PolyPath) -> f64 {
    path.segments().map(|(a, b)| a.distance(&b)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GaugeLabel {
    Temporal,
    Coulomb,
    NumericCoulomb,
}

impl std::fmt::Display for GaugeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GaugeLabel::Temporal => "temporal",
            GaugeLabel::Coulomb => "coulomb",
            GaugeLabel::NumericCoulomb => "numeric-coulomb",
        })
    }
}

/// Value of the planar potential one-form at an event.
///
/// The phase along a path is `∫(A·dl + φ dt)`; gauge transformations act as
/// `A → A − ∇Λ`, `φ → φ − ∂Λ/∂t`, and the gauge-invariant electric field
/// is `E = ∇φ − ∂A/∂t`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Potential {
    pub phi: f64,
    pub ax: f64,
    pub ay: f64,
}

/// Coordinates at which a field varies on the regularization scale; the
/// phase quadrature splits segments there.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Breakpoints {
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

/// Disk in the `(x, y)` plane that admissible loops must avoid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exclusion {
    pub x: f64,
    pub y: f64,
    pub radius: f64,
}

/// Deterministic, side-effect-free evaluator of a planar four-potential.
pub trait PotentialField: Send + Sync {
    fn gauge(&self) -> GaugeLabel;

    fn potential(&self, p: SpacetimePoint) -> Result<Potential, FieldError>;

    fn breakpoints(&self) -> Breakpoints {
        Breakpoints::default()
    }

    fn exclusions(&self) -> Vec<Exclusion> {
        Vec::new()
    }
}

impl<F: PotentialField + ?Sized> PotentialField for &F {
    fn gauge(&self) -> GaugeLabel {
        (**self).gauge()
    }
    fn potential(&self, p: SpacetimePoint) -> Result<Potential, FieldError> {
        (**self).potential(p)
    }
    fn breakpoints(&self) -> Breakpoints {
        (**self).breakpoints()
    }
    fn exclusions(&self) -> Vec<Exclusion> {
        (**self).exclusions()
    }
}

/// Shortest round-trip decimal form of a float, switching to exponent
/// notation for magnitudes outside `[1e-5, 1e16)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl std::fmt::Display for Num {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let a = self.0.abs();
        if a == 0.0 || !a.is_finite() || (1e-5..1e16).contains(&a) {
            write!(f, "{}", self.0)
        } else {
            write!(f, "{:e}", self.0)
        }
    }
}

/// Electric, magnetic and total loop phase (radians, not reduced mod 2π).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhaseBreakdown {
    pub theta_e: f64,
    pub theta_m: f64,
    pub theta_total: f64,
    pub quad_error: f64,
}

impl PhaseBreakdown {
    pub const CSV_HEADER: &'static str = "theta_e,theta_m,theta_total,quad_error";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{}",
            Num(self.theta_e),
            Num(self.theta_m),
            Num(self.theta_total),
            Num(self.quad_error)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn num_round_trips(bits in any::<u64>()) {
            let x = f64::from_bits(bits);
            prop_assume!(x.is_finite());
            let back: f64 = Num(x).to_string().parse().unwrap();
            prop_assert_eq!(back.to_bits(), x.to_bits());
        }
    }

    #[test]
    fn num_switches_to_exponent() {
        assert_eq!(Num(2.5e-12).to_string(), "2.5e-12");
        assert_eq!(Num(0.25).to_string(), "0.25");
        assert_eq!(Num(-0.0).to_string(), "-0");
        assert_eq!(Num(3e20).to_string(), "3e20");
    }

    fn cfg() -> SetupConfig {
        SetupConfig::default()
    }

    #[test]
    fn default_config_validates() {
        let reg = RegularizationParams {
            eps_x: 0.01,
            eps_y: 0.01,
            eps_t: 0.01,
            core_radius: 0.03,
        };
        assert!(validate_config(cfg(), reg).is_ok());
    }

    #[test]
    fn eps_bound_violation_is_named() {
        let reg = RegularizationParams {
            eps_y: 0.5,
            core_radius: 2.0,
            ..Default::default()
        };
        let err = validate_config(cfg(), reg).unwrap_err();
        assert_eq!(err.to_string(), "eps_y exceeds L/10");
    }

    #[test]
    fn negative_length_rejected() {
        let c = SetupConfig {
            length: -1.0,
            ..cfg()
        };
        let err = validate_config(c, RegularizationParams::default()).unwrap_err();
        assert_eq!(err.to_string(), "L must be positive");
    }

    #[test]
    fn core_radius_and_boost_checks() {
        let reg = RegularizationParams {
            core_radius: 0.02,
            ..Default::default()
        };
        assert_eq!(
            validate_config(cfg(), reg).unwrap_err(),
            ConfigError::CoreRadiusTooSmall
        );
        let c = SetupConfig {
            boost: -0.1,
            ..cfg()
        };
        assert_eq!(
            validate_config(c, RegularizationParams::default()).unwrap_err(),
            ConfigError::Negative("v")
        );
        let c = SetupConfig {
            duration: f64::NAN,
            ..cfg()
        };
        assert_eq!(
            validate_config(c, RegularizationParams::default()).unwrap_err(),
            ConfigError::NotFinite("T")
        );
    }

    #[test]
    fn config_file_roundtrip_and_defaults() {
        let s =
            parse_config(r#"{"L": 2.0, "T": 3.0, "eps_x": 0.02, "core_radius": 0.06}"#).unwrap();
        assert_eq!(s.length(), 2.0);
        assert_eq!(s.duration(), 3.0);
        assert_eq!(s.reg().eps_y, 0.01);
        let text = serde_json::to_string(&ConfigFile::from(&s)).unwrap();
        assert_eq!(parse_config(&text).unwrap(), s);
        assert!(matches!(
            parse_config(r#"{"L": 1.0, "bogus": 1}"#),
            Err(ConfigError::Parse(_))
        ));
    }

    fn square() -> PolyPath {
        PolyPath::closed_loop(vec![
            SpacetimePoint::new(0.0, 0.0, 0.0),
            SpacetimePoint::new(0.0, 1.0, 0.0),
            SpacetimePoint::new(0.0, 1.0, 1.0),
            SpacetimePoint::new(0.0, 0.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn path_lengths() {
        assert_eq!(path_length(&square()), 4.0);
        let seg = PolyPath::new(
            vec![
                SpacetimePoint::new(0.0, 0.0, 0.0),
                SpacetimePoint::new(0.0, 0.0, 2.0),
            ],
            false,
        )
        .unwrap();
        assert_eq!(path_length(&seg), 2.0);
    }

    #[test]
    fn path_invariants() {
        let p = SpacetimePoint::new(0.0, 1.0, 2.0);
        assert_eq!(
            PolyPath::new(vec![p, p, SpacetimePoint::default()], false),
            Err(PathError::RepeatedVertex(0))
        );
        assert_eq!(
            PolyPath::new(vec![p], false),
            Err(PathError::TooFewVertices(1))
        );
        assert_eq!(
            PolyPath::new(vec![p, SpacetimePoint::default()], true),
            Err(PathError::OpenEnds)
        );
    }

    #[test]
    fn path_file_roundtrip() {
        let sq = square();
        let text = sq.to_path_file();
        assert!(text.ends_with("closed\n"));
        assert_eq!(PolyPath::parse(&text).unwrap(), sq);
        let open = PolyPath::parse("# comment\n0 0 0\n1 2 3.5\n").unwrap();
        assert!(!open.is_closed());
        assert!(matches!(
            PolyPath::parse("0 0\n"),
            Err(PathError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            PolyPath::parse("0 0 0\n1 x 0\n"),
            Err(PathError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn reversal_keeps_closure() {
        let r = square().reversed();
        assert!(r.is_closed());
        assert_eq!(r.vertices()[1], SpacetimePoint::new(0.0, 0.0, 1.0));
    }

    #[test]
    fn cyl_point_rejects_negative_radius() {
        assert!(CylPoint::new(0.0, -1.0, 0.0).is_err());
        assert_eq!(CylPoint::new(0.0, 2.0, 0.0).unwrap().r(), 2.0);
    }
}
