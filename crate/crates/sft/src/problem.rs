//! Objective assembly: terms, grouped partitions, evaluation, subgradients.
//!
//! An objective is the maximum over groups of summed travel-time terms,
//! `max_k Σ_{i ∈ I_k} term_i(x)`. A single group is a pure min-sum
//! (Fermat–Torricelli) shape, all-singleton groups a pure min-max (Sylvester)
//! shape, anything else the general min-max-of-sums.

use crate::error::{Error, Result};
use crate::gauge::DynamicSet;
use crate::projection::{msmg, set_gauge, ProjectionResult};
use crate::sets::{ConstraintSet, ReferenceSet};
use crate::vec2::Vec2;
use std::fmt;

/// Which way the vehicle flies relative to its target set.
///
/// Travel time *from* a target point to `x` uses the dynamics as given;
/// travel *to* the target reverses every velocity, i.e. uses the negated
/// dynamic set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    FromTarget,
    ToTarget,
}

/// Whether the term scores the best-case or the worst-case point of the
/// target set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extremum {
    Nearest,
    Farthest,
}

/// One gauge summand of the objective.
#[derive(Clone, Copy, Debug)]
pub struct Term {
    dynamics: DynamicSet,
    target: ReferenceSet,
    direction: Direction,
    extremum: Extremum,
    weight: f64,
    /// Weight folded in via scaling, direction folded in via negation.
    resolved: DynamicSet,
}

impl Term {
    pub fn new(
        dynamics: DynamicSet,
        target: ReferenceSet,
        direction: Direction,
        extremum: Extremum,
    ) -> Self {
        Term::weighted(dynamics, target, direction, extremum, 1.0)
            .expect("unit weight cannot fail")
    }

    /// A term with a positive weight `w`; `w·ρ_F^Ω = ρ_{F/w}^Ω`, so the
    /// weight is folded into the dynamics once, here.
    pub fn weighted(
        dynamics: DynamicSet,
        target: ReferenceSet,
        direction: Direction,
        extremum: Extremum,
        weight: f64,
    ) -> Result<Self> {
        let scaled = dynamics.scale(weight)?;
        let resolved = match direction {
            Direction::FromTarget => scaled,
            Direction::ToTarget => scaled.negate(),
        };
        Ok(Term {
            dynamics,
            target,
            direction,
            extremum,
            weight,
            resolved,
        })
    }

    pub fn dynamics(&self) -> DynamicSet {
        self.dynamics
    }

    pub fn target(&self) -> ReferenceSet {
        self.target
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn extremum(&self) -> Extremum {
        self.extremum
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// The direction- and weight-resolved dynamic set actually evaluated.
    pub fn resolved_dynamics(&self) -> DynamicSet {
        self.resolved
    }

    /// Travel time of this term at `x`, with witness.
    pub fn value(&self, x: Vec2) -> ProjectionResult {
        match self.extremum {
            Extremum::Nearest => set_gauge(self.resolved, self.target, x),
            Extremum::Farthest => msmg(self.resolved, self.target, x),
        }
    }
}

/// How the group structure degenerates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProblemShape {
    /// One group: minimize a plain sum.
    FermatTorricelli,
    /// All groups singletons: minimize a plain maximum.
    Sylvester,
    /// Proper max of sums.
    SylvesterFermatTorricelli,
}

impl fmt::Display for ProblemShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemShape::FermatTorricelli => write!(f, "min-sum (Fermat-Torricelli)"),
            ProblemShape::Sylvester => write!(f, "min-max (Sylvester)"),
            ProblemShape::SylvesterFermatTorricelli => write!(f, "min-max-of-sums (SFT)"),
        }
    }
}

/// A full instance: partitioned terms plus the feasible region.
#[derive(Clone, Debug)]
pub struct Problem {
    groups: Vec<Vec<Term>>,
    constraint: ConstraintSet,
    label: String,
}

/// Result of evaluating a [`Problem`] at a point.
#[derive(Clone, Debug)]
pub struct Evaluation {
    /// `max(group_values)`, seconds.
    pub objective: f64,
    /// Summed term values per group.
    pub group_values: Vec<f64>,
    /// Index of the first group attaining the maximum.
    pub active_group: usize,
    /// Per-term projection results, parallel to the group structure.
    pub witnesses: Vec<Vec<ProjectionResult>>,
}

/// Advisory existence/uniqueness diagnostics for an instance.
#[derive(Clone, Debug)]
pub struct UniquenessReport {
    /// True when some set (constraint or target) is bounded, which is enough
    /// for an optimal solution to exist.
    pub bounded: bool,
    /// True when every target set is strictly convex.
    pub strictly_convex_targets: bool,
    pub notes: Vec<String>,
}

impl fmt::Display for UniquenessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "bounded: {}", if self.bounded { "yes" } else { "no" })?;
        writeln!(
            f,
            "strictly convex targets: {}",
            if self.strictly_convex_targets { "yes" } else { "no" }
        )?;
        for note in &self.notes {
            writeln!(f, "note: {note}")?;
        }
        Ok(())
    }
}

impl Problem {
    /// Builds an instance from nonempty groups of terms.
    pub fn new(
        groups: Vec<Vec<Term>>,
        constraint: ConstraintSet,
        label: impl Into<String>,
    ) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::invalid("a problem needs at least one term group"));
        }
        if groups.iter().any(|g| g.is_empty()) {
            return Err(Error::invalid("term groups must be nonempty"));
        }
        Ok(Problem {
            groups,
            constraint,
            label: label.into(),
        })
    }

    pub fn groups(&self) -> &[Vec<Term>] {
        &self.groups
    }

    pub fn constraint(&self) -> ConstraintSet {
        self.constraint
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn shape(&self) -> ProblemShape {
        if self.groups.len() == 1 {
            ProblemShape::FermatTorricelli
        } else if self.groups.iter().all(|g| g.len() == 1) {
            ProblemShape::Sylvester
        } else {
            ProblemShape::SylvesterFermatTorricelli
        }
    }

    /// Evaluates every term, sums per group and takes the max.
    pub fn evaluate(&self, x: Vec2) -> Evaluation {
        assert!(x.is_finite(), "objective evaluated at a non-finite point");
        let mut group_values = Vec::with_capacity(self.groups.len());
        let mut witnesses = Vec::with_capacity(self.groups.len());
        for group in &self.groups {
            let prs: Vec<ProjectionResult> = group.iter().map(|t| t.value(x)).collect();
            group_values.push(prs.iter().map(|p| p.value).sum::<f64>());
            witnesses.push(prs);
        }
        let objective = group_values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let active_group = group_values
            .iter()
            .position(|&v| v == objective)
            .expect("max comes from the list");
        Evaluation {
            objective,
            group_values,
            active_group,
            witnesses,
        }
    }

    /// One valid subgradient of the objective at `x`.
    ///
    /// The max rule admits any active group's subgradient; the first active
    /// group is chosen. Within it, the sum rule adds one subgradient per
    /// term: zero for nearest terms whose target already contains `x`, and
    /// the gauge gradient at `x − witness` otherwise.
    pub fn subgradient(&self, x: Vec2) -> Vec2 {
        let ev = self.evaluate(x);
        self.subgradient_from(x, &ev)
    }

    /// Same as [`subgradient`](Self::subgradient) but reuses an evaluation.
    pub fn subgradient_from(&self, x: Vec2, ev: &Evaluation) -> Vec2 {
        let k = ev.active_group;
        let mut v = Vec2::ZERO;
        for (term, pr) in self.groups[k].iter().zip(&ev.witnesses[k]) {
            if pr.value == 0.0 {
                continue; // x in target (nearest case): 0 is a valid subgradient
            }
            let z = x - pr.witness;
            match term.resolved_dynamics().grad(z) {
                Ok(g) => v += g,
                Err(_) => {} // witness == x only in the degenerate zero-value case
            }
        }
        v
    }

    /// Axis-aligned bounding box of all targets.
    pub fn targets_bbox(&self) -> (Vec2, Vec2) {
        let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for t in self.groups.iter().flatten() {
            let (l, h) = t.target().bbox();
            lo = lo.min(l);
            hi = hi.max(h);
        }
        (lo, hi)
    }

    /// Bounding box of the target centers (used for step-size scaling).
    pub fn centers_bbox(&self) -> (Vec2, Vec2) {
        let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for t in self.groups.iter().flatten() {
            let c = t.target().center();
            lo = lo.min(c);
            hi = hi.max(c);
        }
        (lo, hi)
    }

    /// Advisory existence/uniqueness diagnostics.
    pub fn check_uniqueness(&self) -> UniquenessReport {
        let any_target_bounded = !self.groups.is_empty(); // targets are compact by construction
        let bounded = self.constraint.is_bounded() || any_target_bounded;
        let strictly_convex_targets = self
            .groups
            .iter()
            .flatten()
            .all(|t| t.target().is_strictly_convex());
        let mut notes = Vec::new();
        if !strictly_convex_targets {
            notes.push("targets not strictly convex; uniqueness not guaranteed".to_string());
        }
        UniquenessReport {
            bounded,
            strictly_convex_targets,
            notes,
        }
    }
}
