//! Numerical laboratory for the combined electric and magnetic
//! Aharonov–Bohm effects.
//!
//! The crate evaluates a family of non-radiating, time-dependent
//! configurations (a finite capacitor flanked by two fluxons, its boosted
//! "rhombus" variant and a toroidal variant) in regularized form, transforms
//! the planar configuration from the temporal to the Coulomb gauge both in
//! closed form and by solving a 2D Poisson problem, and integrates loop phases
//! `θ = ∮A·dl + ∮φ dt` split into electric and magnetic parts.
//!
//! Natural units `ħ = c = e = 1` are used throughout.
//!
//! Module map:
//! - [`model`]: domain types, configuration, paths and the [`PotentialField`] abstraction
//! - [`kernels`]: smooth step / delta / delta′ kernels
//! - [`gauges`]: closed-form potentials
//! - [`fields`]: fields, charge and current densities, continuity checks
//! - [`gauge_transform`]: divergence source, Green's function, Poisson solver, numeric Coulomb gauge
//! - [`phase`]: loop-phase quadrature, path builders and topological classification
//! - [`oracles`]: independent cross-checks and the verification suite

pub mod error;
pub mod fields;
pub mod gauge_transform;
pub mod gauges;
pub mod kernels;
pub mod model;
pub mod oracles;
pub mod phase;

pub use error::{ConfigError, FieldError, GaugeError, PathError, PhaseError};
pub use model::{
    path_length, validate_config, CylPoint, GaugeLabel, Num, PhaseBreakdown, PolyPath, Potential,
    PotentialField, RegularizationParams, Setup, SetupConfig, SpacetimePoint,
};
