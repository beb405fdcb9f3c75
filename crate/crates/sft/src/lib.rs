//! Single-facility location under wind-shifted vehicle dynamics.
//!
//! The objective family minimized here is a maximum over groups of summed
//! anisotropic travel times between a candidate station location and convex
//! service areas. Travel times come from Minkowski gauges of wind-shifted
//! speed disks, so headwinds, tailwinds and vehicle heterogeneity all shape
//! the geometry. Degenerate group structures recover the classical shapes:
//! a single group is a generalized Fermat–Torricelli (min-sum) problem, and
//! all-singleton groups a generalized Sylvester (min-max) problem.
//!
//! Modules, bottom to top:
//!
//! * [`gauge`] — wind-shifted speed disks and their gauges, gradients and
//!   support functions.
//! * [`sets`] — box/disk target regions with projections and normal cones.
//! * [`projection`] — nearest and farthest generalized projections onto
//!   targets, `ρ_F^Ω` and `ρ̄_F^Ω`.
//! * [`problem`] — grouped objectives, evaluation and subgradient selection.
//! * [`solver`] — projected subgradient descent with best-iterate tracking.
//! * [`oracle`] — brute-force grid search and boundary sampling, used to
//!   cross-check everything above.
//! * [`scenario`], [`experiment`], [`plot`] — scenario files, the
//!   neglected-vs-included wind pipeline, table emission and SVG rendering.
//! * [`validate`] — the seeded invariant suite behind `sft check`.

pub mod error;
pub mod experiment;
pub mod gauge;
pub mod oracle;
pub mod plot;
pub mod problem;
pub mod projection;
pub mod scenario;
pub mod sets;
pub mod solver;
pub mod validate;
pub mod vec2;

pub use error::{Error, Result};
pub use gauge::DynamicSet;
pub use problem::{Direction, Evaluation, Extremum, Problem, Term};
pub use projection::{msmg, set_gauge, ProjectionResult};
pub use scenario::{Scenario, Variant};
pub use sets::{ConstraintSet, ReferenceSet};
pub use solver::{multistart_solve, solve, SolveResult, SolverConfig};
pub use vec2::Vec2;
