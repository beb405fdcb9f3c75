//! Scenario files: the on-disk description of an experiment instance.
//!
//! A scenario is TOML with top-level keys `name`, `wind`, `variant` and
//! `targets`, plus optional `constraint` and `solver` tables:
//!
//! ```toml
//! name = "info4"
//! wind = [-0.6, 0.6]
//! variant = "sylvester"
//!
//! [[targets]]
//! shape = "disk"        # or "box"
//! center = [30.0, 350.0]
//! size = 10.0           # disk radius; box half-extent (scalar or [hx, hy])
//! speed = 2.0           # vehicle nominal speed, m/s
//! ```
//!
//! The `variant` decides how targets turn into objective terms; see
//! [`Variant`].

use crate::error::{Error, Result};
use crate::gauge::DynamicSet;
use crate::problem::{Direction, Extremum, Problem, Term};
use crate::sets::{ConstraintSet, ReferenceSet};
use crate::solver::{SolverConfig, DEFAULT_IMPROVEMENT_WINDOW};
use crate::vec2::Vec2;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Objective family of a scenario.
///
/// * `FermatTorricelli` — one round trip per target, all summed: each target
///   contributes from-target and to-target nearest legs in a single group.
/// * `Sylvester` — worst target wins: one from-target nearest leg per group.
/// * `Sft` — per-target round-trip groups under a maximum.
/// * `Extended*` — the return leg is replaced by the worst-case leg: a
///   from-target nearest leg plus a to-target farthest leg per target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "ft")]
    FermatTorricelli,
    #[serde(rename = "sylvester")]
    Sylvester,
    #[serde(rename = "sft")]
    Sft,
    #[serde(rename = "extended-ft")]
    ExtendedFermatTorricelli,
    #[serde(rename = "extended-sylvester")]
    ExtendedSylvester,
    #[serde(rename = "extended-sft")]
    ExtendedSft,
}

/// One service area and the nominal speed of the vehicle assigned to it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TargetSpec {
    pub set: ReferenceSet,
    pub speed: f64,
}

/// Optional per-scenario solver overrides.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SolverOverrides {
    pub x0: Option<Vec2>,
    pub step_c: Option<f64>,
    pub max_iters: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub wind: Vec2,
    pub variant: Variant,
    pub targets: Vec<TargetSpec>,
    pub constraint: ConstraintSet,
    pub solver: SolverOverrides,
}

// ---------------------------------------------------------------------------
// serde mirror types

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawSize {
    Scalar(f64),
    Pair([f64; 2]),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawShape {
    shape: String,
    center: [f64; 2],
    size: RawSize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTarget {
    shape: String,
    center: [f64; 2],
    size: RawSize,
    speed: f64,
}

#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    #[serde(skip_serializing_if = "Option::is_none")]
    x0: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    step_c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_iters: Option<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: String,
    wind: [f64; 2],
    variant: Variant,
    targets: Vec<RawTarget>,
    #[serde(skip_serializing_if = "Option::is_none")]
    constraint: Option<RawShape>,
    #[serde(skip_serializing_if = "Option::is_none")]
    solver: Option<RawSolver>,
}

fn shape_to_set(shape: &str, center: [f64; 2], size: &RawSize, ctx: &str) -> Result<ReferenceSet> {
    let c = Vec2::new(center[0], center[1]);
    match (shape, size) {
        ("disk", RawSize::Scalar(r)) => ReferenceSet::disk(c, *r),
        ("disk", RawSize::Pair(_)) => Err(Error::invalid(format!(
            "{ctx}: disk size must be a scalar radius"
        ))),
        ("box", RawSize::Scalar(h)) => ReferenceSet::square(c, *h),
        ("box", RawSize::Pair([hx, hy])) => ReferenceSet::rect(c, (*hx, *hy)),
        (other, _) => Err(Error::invalid(format!(
            "{ctx}: unknown shape {other:?} (expected \"box\" or \"disk\")"
        ))),
    }
}

fn set_to_shape(set: &ReferenceSet) -> (String, [f64; 2], RawSize) {
    match *set {
        ReferenceSet::Disk { center, radius } => {
            ("disk".into(), [center.x, center.y], RawSize::Scalar(radius))
        }
        ReferenceSet::Rect { center, half } if half.0 == half.1 => {
            ("box".into(), [center.x, center.y], RawSize::Scalar(half.0))
        }
        ReferenceSet::Rect { center, half } => (
            "box".into(),
            [center.x, center.y],
            RawSize::Pair([half.0, half.1]),
        ),
    }
}

impl Scenario {
    pub fn load(path: impl AsRef<Path>) -> Result<Scenario> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Scenario::from_toml_str(&text, &path.display().to_string())
    }

    /// Parses and validates scenario TOML. `origin` labels parse errors.
    pub fn from_toml_str(text: &str, origin: &str) -> Result<Scenario> {
        let raw: RawScenario = toml::from_str(text).map_err(|e| Error::Parse {
            path: origin.to_string(),
            message: e.to_string(),
        })?;
        Scenario::from_raw(raw, origin)
    }

    fn from_raw(raw: RawScenario, origin: &str) -> Result<Scenario> {
        let wind = Vec2::new(raw.wind[0], raw.wind[1]);
        if !wind.is_finite() {
            return Err(Error::invalid(format!("{origin}: wind must be finite")));
        }
        if raw.targets.is_empty() {
            return Err(Error::invalid(format!(
                "{origin}: scenario needs at least one target"
            )));
        }
        let mut targets = Vec::with_capacity(raw.targets.len());
        for (i, t) in raw.targets.iter().enumerate() {
            let ctx = format!("{origin}: target {}", i + 1);
            let set = shape_to_set(&t.shape, t.center, &t.size, &ctx)?;
            // validate the speed/wind pairing right away
            DynamicSet::new(wind, t.speed).map_err(|e| match e {
                Error::Invalid(msg) => Error::invalid(format!("{ctx}: {msg}")),
                other => other,
            })?;
            targets.push(TargetSpec { set, speed: t.speed });
        }
        let constraint = match &raw.constraint {
            None => ConstraintSet::WholePlane,
            Some(s) => ConstraintSet::Within(shape_to_set(
                &s.shape,
                s.center,
                &s.size,
                &format!("{origin}: constraint"),
            )?),
        };
        let solver = raw
            .solver
            .map(|s| SolverOverrides {
                x0: s.x0.map(|p| Vec2::new(p[0], p[1])),
                step_c: s.step_c,
                max_iters: s.max_iters,
            })
            .unwrap_or_default();
        if let Some(c) = solver.step_c {
            if !(c > 0.0) {
                return Err(Error::invalid(format!(
                    "{origin}: solver.step_c must be positive"
                )));
            }
        }
        Ok(Scenario {
            name: raw.name,
            wind,
            variant: raw.variant,
            targets,
            constraint,
            solver,
        })
    }

    pub fn to_toml_string(&self) -> String {
        let raw = RawScenario {
            name: self.name.clone(),
            wind: [self.wind.x, self.wind.y],
            variant: self.variant,
            targets: self
                .targets
                .iter()
                .map(|t| {
                    let (shape, center, size) = set_to_shape(&t.set);
                    RawTarget {
                        shape,
                        center,
                        size,
                        speed: t.speed,
                    }
                })
                .collect(),
            constraint: match &self.constraint {
                ConstraintSet::WholePlane => None,
                ConstraintSet::Within(set) => {
                    let (shape, center, size) = set_to_shape(set);
                    Some(RawShape {
                        shape,
                        center,
                        size,
                    })
                }
            },
            solver: if self.solver == SolverOverrides::default() {
                None
            } else {
                Some(RawSolver {
                    x0: self.solver.x0.map(|p| [p.x, p.y]),
                    step_c: self.solver.step_c,
                    max_iters: self.solver.max_iters,
                })
            },
        };
        toml::to_string(&raw).expect("scenario serialization cannot fail")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        crate::experiment::atomic_write(path, self.to_toml_string().as_bytes())
    }

    /// The objective under this scenario's own wind.
    pub fn problem(&self) -> Result<Problem> {
        self.problem_with_wind(self.wind)
    }

    /// The objective under an explicit wind (e.g. zero for the
    /// wind-neglected baseline). Target speeds stay as configured.
    pub fn problem_with_wind(&self, wind: Vec2) -> Result<Problem> {
        self.problem_with(wind, self.variant)
    }

    /// Builds the grouped-term objective for any wind and variant.
    pub fn problem_with(&self, wind: Vec2, variant: Variant) -> Result<Problem> {
        let mut per_target = Vec::with_capacity(self.targets.len());
        for t in &self.targets {
            let f = DynamicSet::new(wind, t.speed)?;
            per_target.push((f, t.set));
        }
        let near = |f: DynamicSet, set, d| Term::new(f, set, d, Extremum::Nearest);
        let far = |f: DynamicSet, set, d| Term::new(f, set, d, Extremum::Farthest);

        let groups: Vec<Vec<Term>> = match variant {
            Variant::FermatTorricelli => vec![per_target
                .iter()
                .flat_map(|&(f, set)| {
                    [
                        near(f, set, Direction::FromTarget),
                        near(f, set, Direction::ToTarget),
                    ]
                })
                .collect()],
            Variant::Sylvester => per_target
                .iter()
                .map(|&(f, set)| vec![near(f, set, Direction::FromTarget)])
                .collect(),
            Variant::Sft => per_target
                .iter()
                .map(|&(f, set)| {
                    vec![
                        near(f, set, Direction::FromTarget),
                        near(f, set, Direction::ToTarget),
                    ]
                })
                .collect(),
            Variant::ExtendedSft => per_target
                .iter()
                .map(|&(f, set)| {
                    vec![
                        near(f, set, Direction::FromTarget),
                        far(f, set, Direction::ToTarget),
                    ]
                })
                .collect(),
            Variant::ExtendedFermatTorricelli => vec![per_target
                .iter()
                .flat_map(|&(f, set)| {
                    [
                        near(f, set, Direction::FromTarget),
                        far(f, set, Direction::ToTarget),
                    ]
                })
                .collect()],
            Variant::ExtendedSylvester => per_target
                .iter()
                .flat_map(|&(f, set)| {
                    [
                        vec![near(f, set, Direction::FromTarget)],
                        vec![far(f, set, Direction::ToTarget)],
                    ]
                })
                .collect(),
        };
        Problem::new(groups, self.constraint, self.name.clone())
    }

    /// Solver configuration for this scenario: scale-aware defaults with the
    /// file's overrides applied.
    pub fn solver_config(&self, p: &Problem) -> SolverConfig {
        let mut cfg = SolverConfig::for_problem(p);
        cfg.improvement_window = Some(DEFAULT_IMPROVEMENT_WINDOW);
        if let Some(x0) = self.solver.x0 {
            cfg.x0 = x0;
        }
        if let Some(c) = self.solver.step_c {
            cfg.step_c = c;
        }
        if let Some(k) = self.solver.max_iters {
            cfg.max_iters = k;
        }
        cfg
    }

    /// Multistart seeds: the centroid of the target centers, then each
    /// target center, all projected onto the constraint.
    pub fn default_starts(&self) -> Vec<Vec2> {
        let mut centroid = Vec2::ZERO;
        for t in &self.targets {
            centroid += t.set.center();
        }
        centroid = centroid * (1.0 / self.targets.len() as f64);
        let mut starts = vec![self.constraint.project(centroid)];
        for t in &self.targets {
            starts.push(self.constraint.project(t.set.center()));
        }
        starts
    }
}

/// One row of an experiment suite: a scenario reference plus the wind (and
/// optionally variant) it is run under.
#[derive(Clone, Debug, PartialEq)]
pub struct CaseSpec {
    pub id: String,
    pub scenario: Scenario,
    pub wind: Vec2,
    pub variant: Variant,
}

/// A named list of cases, loaded from a TOML file whose `scenario` entries
/// are paths relative to the file (or bundled scenario names).
#[derive(Clone, Debug, PartialEq)]
pub struct CaseSet {
    pub name: String,
    pub cases: Vec<CaseSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCase {
    #[serde(default)]
    id: Option<String>,
    scenario: String,
    wind: [f64; 2],
    #[serde(default)]
    variant: Option<Variant>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCaseSet {
    name: String,
    #[serde(default)]
    variant: Option<Variant>,
    cases: Vec<RawCase>,
}

impl CaseSet {
    pub fn load(path: impl AsRef<Path>) -> Result<CaseSet> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        CaseSet::from_toml_str(&text, &path.display().to_string(), path.parent())
    }

    /// `base_dir` resolves relative scenario paths; without it only bundled
    /// scenario names can be referenced.
    pub fn from_toml_str(text: &str, origin: &str, base_dir: Option<&Path>) -> Result<CaseSet> {
        let raw: RawCaseSet = toml::from_str(text).map_err(|e| Error::Parse {
            path: origin.to_string(),
            message: e.to_string(),
        })?;
        if raw.cases.is_empty() {
            return Err(Error::invalid(format!("{origin}: case set has no cases")));
        }
        let mut cases = Vec::with_capacity(raw.cases.len());
        for (i, c) in raw.cases.into_iter().enumerate() {
            let scenario = resolve_scenario(&c.scenario, base_dir, origin)?;
            let variant = c.variant.or(raw.variant).unwrap_or(scenario.variant);
            cases.push(CaseSpec {
                id: c.id.unwrap_or_else(|| format!("{}", i + 1)),
                wind: Vec2::new(c.wind[0], c.wind[1]),
                variant,
                scenario,
            });
        }
        Ok(CaseSet {
            name: raw.name,
            cases,
        })
    }
}

fn resolve_scenario(reference: &str, base_dir: Option<&Path>, origin: &str) -> Result<Scenario> {
    if let Some(dir) = base_dir {
        let candidate = dir.join(reference);
        if candidate.exists() {
            return Scenario::load(candidate);
        }
    }
    let stem = Path::new(reference)
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or(reference);
    if let Some(text) = bundled(stem) {
        return Scenario::from_toml_str(text, &format!("bundled:{stem}"));
    }
    Err(Error::invalid(format!(
        "{origin}: cannot resolve scenario reference {reference:?}"
    )))
}

macro_rules! bundled_scenarios {
    ($($name:literal),+ $(,)?) => {
        /// Source text of a bundled scenario or case set, by name.
        pub fn bundled(name: &str) -> Option<&'static str> {
            match name {
                $($name => Some(include_str!(concat!(
                    env!("CARGO_MANIFEST_DIR"),
                    "/../../scenarios/",
                    $name,
                    ".toml"
                ))),)+
                _ => None,
            }
        }

        pub const BUNDLED_NAMES: &[&str] = &[$($name),+];
    };
}

bundled_scenarios!(
    "info1", "info2", "info3", "info4", "info5", "info6", "info7", "table1", "table2", "table3",
);

/// Loads a bundled scenario by name.
pub fn bundled_scenario(name: &str) -> Result<Scenario> {
    let text = bundled(name)
        .ok_or_else(|| Error::invalid(format!("no bundled scenario named {name:?}")))?;
    Scenario::from_toml_str(text, &format!("bundled:{name}"))
}

/// Loads a bundled case set (e.g. `table2`) by name.
pub fn bundled_case_set(name: &str) -> Result<CaseSet> {
    let text = bundled(name)
        .ok_or_else(|| Error::invalid(format!("no bundled case set named {name:?}")))?;
    CaseSet::from_toml_str(text, &format!("bundled:{name}"), None)
}
