//! Seeded, deterministic invariant suite.
//!
//! Each group checks the mathematical contracts of one module on randomly
//! drawn instances: gauge identities, projection cross-checks against the
//! brute-force boundary oracle, subgradient inequalities, and solver
//! feasibility. The CLI `check` subcommand runs all groups; the acceptance
//! tests assert they pass.

use crate::gauge::DynamicSet;
use crate::oracle::{sample_boundary_extremum, Mode};
use crate::problem::{Direction, Extremum, Problem, Term};
use crate::projection::{msmg, set_gauge};
use crate::sets::{ConstraintSet, ReferenceSet};
use crate::solver::{solve, SolverConfig};
use crate::vec2::Vec2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Result of one invariant group.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn pass(name: &'static str, detail: impl Into<String>) -> Self {
        CheckOutcome {
            name,
            passed: true,
            detail: detail.into(),
        }
    }

    fn fail(name: &'static str, detail: impl Into<String>) -> Self {
        CheckOutcome {
            name,
            passed: false,
            detail: detail.into(),
        }
    }
}

fn rand_dynamics(rng: &mut ChaCha8Rng) -> DynamicSet {
    let speed = rng.gen_range(0.5..4.0);
    let wind_mag = rng.gen_range(0.0..0.8) * speed;
    let th = rng.gen_range(0.0..std::f64::consts::TAU);
    DynamicSet::new(Vec2::new(wind_mag * th.cos(), wind_mag * th.sin()), speed)
        .expect("wind below speed by construction")
}

fn rand_point(rng: &mut ChaCha8Rng, span: f64) -> Vec2 {
    Vec2::new(rng.gen_range(-span..span), rng.gen_range(-span..span))
}

fn rand_set(rng: &mut ChaCha8Rng) -> ReferenceSet {
    let c = rand_point(rng, 150.0);
    if rng.gen_bool(0.5) {
        ReferenceSet::disk(c, rng.gen_range(1.0..25.0)).unwrap()
    } else {
        ReferenceSet::rect(c, (rng.gen_range(1.0..25.0), rng.gen_range(1.0..25.0))).unwrap()
    }
}

macro_rules! ensure {
    ($name:expr, $cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return CheckOutcome::fail($name, format!($($fmt)+));
        }
    };
}

/// Gauge identities: positive homogeneity, subadditivity, midpoint
/// convexity, boundary membership of the realized velocity, the Euler
/// relation, unit support of gradients, the Lipschitz bound and the
/// reflection identity.
pub fn gauge_invariants(seed: u64) -> CheckOutcome {
    const NAME: &str = "gauge invariants";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..400 {
        let f = rand_dynamics(&mut rng);
        let x = rand_point(&mut rng, 300.0);
        let y = rand_point(&mut rng, 300.0);
        let c = rng.gen_range(0.0..5.0);

        let vx = f.eval(x);
        let vy = f.eval(y);
        ensure!(NAME, vx >= 0.0, "trial {trial}: negative gauge {vx}");

        let hom = f.eval(c * x);
        ensure!(
            NAME,
            (hom - c * vx).abs() <= 1e-10 * (c * vx).max(1.0),
            "trial {trial}: homogeneity violated: {hom} vs {}",
            c * vx
        );

        let sub = f.eval(x + y);
        ensure!(
            NAME,
            sub <= vx + vy + 1e-10,
            "trial {trial}: subadditivity violated: {sub} > {vx} + {vy}"
        );

        let mid = f.eval((x + y) * 0.5);
        ensure!(
            NAME,
            mid <= 0.5 * vx + 0.5 * vy + 1e-10,
            "trial {trial}: midpoint convexity violated"
        );

        if vx > 1e-12 {
            // realized velocity lies on the disk boundary
            let vel = x * (1.0 / vx);
            let err = ((vel - f.wind()).norm() - f.speed()).abs();
            ensure!(
                NAME,
                err <= 1e-9 * f.speed().max(1.0),
                "trial {trial}: boundary membership off by {err}"
            );
            let g = f.grad(x).expect("x nonzero");
            ensure!(
                NAME,
                (g.dot(x) - vx).abs() <= 1e-9 * vx.max(1.0),
                "trial {trial}: Euler relation violated"
            );
            ensure!(
                NAME,
                (f.support(g) - 1.0).abs() <= 1e-9,
                "trial {trial}: gradient support is {});",
                f.support(g)
            );
        }

        let lip = (vx - vy).abs();
        ensure!(
            NAME,
            lip <= (x - y).norm() / f.margin() + 1e-9,
            "trial {trial}: Lipschitz bound violated"
        );

        let neg = f.negate().eval(-x);
        ensure!(
            NAME,
            (neg - vx).abs() <= 1e-12 * vx.max(1.0),
            "trial {trial}: reflection identity violated"
        );

        let lambda = rng.gen_range(0.2..5.0);
        let scaled = f.scale(lambda).expect("positive scale").eval(x);
        ensure!(
            NAME,
            (scaled - lambda * vx).abs() <= 1e-12 * (lambda * vx).max(1.0),
            "trial {trial}: scaling law violated"
        );
    }
    CheckOutcome::pass(NAME, "400 random dynamics/point trials")
}

/// Central finite differences of the gauge against the closed-form gradient:
/// `h = 1e-6`, absolute tolerance `1e-5`, 1000 points.
pub fn gradient_finite_difference(seed: u64) -> CheckOutcome {
    const NAME: &str = "gradient vs finite differences";
    const H: f64 = 1e-6;
    const TOL: f64 = 1e-5;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..1000 {
        let f = rand_dynamics(&mut rng);
        let mut x = rand_point(&mut rng, 200.0);
        if x.norm() < 1.0 {
            x = Vec2::new(x.x + 2.0, x.y - 2.0); // keep away from the kink at 0
        }
        let g = f.grad(x).expect("x nonzero");
        let fd = Vec2::new(
            (f.eval(Vec2::new(x.x + H, x.y)) - f.eval(Vec2::new(x.x - H, x.y))) / (2.0 * H),
            (f.eval(Vec2::new(x.x, x.y + H)) - f.eval(Vec2::new(x.x, x.y - H))) / (2.0 * H),
        );
        ensure!(
            NAME,
            (g.x - fd.x).abs() <= TOL && (g.y - fd.y).abs() <= TOL,
            "trial {trial}: gradient {g} vs finite difference {fd} at {x}"
        );
    }
    CheckOutcome::pass(NAME, "1000 random points, h = 1e-6, abs tol 1e-5")
}

/// Projection layer against the dense boundary-sampling oracle, plus
/// translation consistency, the scaling law, the Lipschitz bound, the
/// direction-flip identities and the nearest/farthest sandwich.
pub fn projection_invariants(seed: u64) -> CheckOutcome {
    const NAME: &str = "projection invariants";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..200 {
        let f = rand_dynamics(&mut rng);
        let omega = rand_set(&mut rng);
        let x = rand_point(&mut rng, 400.0);

        let near = set_gauge(f, omega, x);
        let far = msmg(f, omega, x);

        // witness admissibility and value consistency
        ensure!(
            NAME,
            omega.contains(near.witness, 1e-7),
            "trial {trial}: nearest witness outside target"
        );
        ensure!(
            NAME,
            omega.contains(far.witness, 1e-7),
            "trial {trial}: farthest witness outside target"
        );
        ensure!(
            NAME,
            (near.value - f.eval(x - near.witness)).abs() <= 1e-9 * near.value.max(1.0),
            "trial {trial}: nearest value/witness mismatch"
        );
        ensure!(
            NAME,
            (far.value - f.eval(x - far.witness)).abs() <= 1e-9 * far.value.max(1.0),
            "trial {trial}: farthest value/witness mismatch"
        );

        // sandwich
        ensure!(
            NAME,
            near.value <= far.value + 1e-9,
            "trial {trial}: nearest exceeds farthest"
        );
        if !omega.contains(x, 1e-9) {
            ensure!(
                NAME,
                near.at_boundary,
                "trial {trial}: exterior nearest witness not flagged boundary"
            );
            ensure!(
                NAME,
                near.value + 1e-9 < far.value,
                "trial {trial}: sandwich not strict outside the target"
            );
            // dense-sampling oracle agreement (min only defined outside)
            let oracle_min = sample_boundary_extremum(f, omega, x, Mode::Min, 4096)
                .expect("enough samples");
            ensure!(
                NAME,
                (near.value - oracle_min).abs() <= 1e-6 * oracle_min.max(1e-9),
                "trial {trial}: nearest {} vs oracle {oracle_min}",
                near.value
            );
        }
        let oracle_max =
            sample_boundary_extremum(f, omega, x, Mode::Max, 4096).expect("enough samples");
        ensure!(
            NAME,
            (far.value - oracle_max).abs() <= 1e-6 * oracle_max.max(1e-9),
            "trial {trial}: farthest {} vs oracle {oracle_max}",
            far.value
        );

        // translation consistency
        let d = rand_point(&mut rng, 100.0);
        let shifted = match omega {
            ReferenceSet::Rect { center, half } => ReferenceSet::rect(center + d, half).unwrap(),
            ReferenceSet::Disk { center, radius } => {
                ReferenceSet::disk(center + d, radius).unwrap()
            }
        };
        let tnear = set_gauge(f, shifted, x + d);
        ensure!(
            NAME,
            (tnear.value - near.value).abs() <= 1e-9 * near.value.max(1.0),
            "trial {trial}: translation changed the value"
        );

        // scaling law
        let lambda = rng.gen_range(0.25..4.0);
        let snear = set_gauge(f.scale(lambda).unwrap(), omega, x);
        ensure!(
            NAME,
            (snear.value - lambda * near.value).abs() <= 1e-8 * (lambda * near.value).max(1.0),
            "trial {trial}: projection scaling law violated"
        );

        // Lipschitz in x
        let y = rand_point(&mut rng, 400.0);
        let ny = set_gauge(f, omega, y);
        ensure!(
            NAME,
            (near.value - ny.value).abs() <= (x - y).norm() / f.margin() + 1e-8,
            "trial {trial}: set-gauge Lipschitz bound violated"
        );

        // direction flips: minimal/maximal time to reach the set from x
        let flip_near = set_gauge(f.negate(), omega, x).value;
        let flip_far = msmg(f.negate(), omega, x).value;
        let mut to_min = f64::INFINITY;
        let mut to_max = f64::NEG_INFINITY;
        for i in 0..2048 {
            let w = omega.boundary_point(i as f64 / 2048.0);
            let v = f.eval(w - x);
            to_min = to_min.min(v);
            to_max = to_max.max(v);
        }
        // the sampled side is unrefined, so allow its discretization error
        if !omega.contains(x, 1e-9) {
            ensure!(
                NAME,
                (flip_near - to_min).abs() <= 2e-3 * to_min.max(1.0),
                "trial {trial}: reversed nearest {flip_near} vs sampled travel-to {to_min}"
            );
            ensure!(
                NAME,
                flip_near <= to_min + 1e-9,
                "trial {trial}: reversed nearest above the sampled minimum"
            );
        }
        ensure!(
            NAME,
            (flip_far - to_max).abs() <= 2e-3 * to_max.max(1.0),
            "trial {trial}: reversed farthest {flip_far} vs sampled travel-to {to_max}"
        );
        ensure!(
            NAME,
            flip_far >= to_max - 1e-9,
            "trial {trial}: reversed farthest below the sampled maximum"
        );
    }
    CheckOutcome::pass(NAME, "200 random (dynamics, target, point) triples")
}

fn rand_problem(rng: &mut ChaCha8Rng) -> Problem {
    let n_groups = rng.gen_range(1..4);
    let groups = (0..n_groups)
        .map(|_| {
            let n_terms = rng.gen_range(1..3);
            (0..n_terms)
                .map(|_| {
                    let dir = if rng.gen_bool(0.5) {
                        Direction::FromTarget
                    } else {
                        Direction::ToTarget
                    };
                    let ext = if rng.gen_bool(0.7) {
                        Extremum::Nearest
                    } else {
                        Extremum::Farthest
                    };
                    Term::new(rand_dynamics(rng), rand_set(rng), dir, ext)
                })
                .collect()
        })
        .collect();
    Problem::new(groups, ConstraintSet::WholePlane, "random").unwrap()
}

/// Objective-level checks: the subgradient inequality on 500 draws, midpoint
/// convexity, weighted/scaled equivalence, active-group bookkeeping, variant
/// collapse and the unit-support property of exterior contributions.
pub fn problem_invariants(seed: u64) -> CheckOutcome {
    const NAME: &str = "problem invariants";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for trial in 0..500 {
        let p = rand_problem(&mut rng);
        let xbar = rand_point(&mut rng, 400.0);
        let x = rand_point(&mut rng, 400.0);
        let ev_bar = p.evaluate(xbar);
        let v = p.subgradient_from(xbar, &ev_bar);
        let ev_x = p.evaluate(x);
        ensure!(
            NAME,
            ev_x.objective >= ev_bar.objective + v.dot(x - xbar) - 1e-7,
            "trial {trial}: subgradient inequality violated by {}",
            ev_bar.objective + v.dot(x - xbar) - ev_x.objective
        );

        // midpoint convexity of the objective
        let mid = p.evaluate((x + xbar) * 0.5).objective;
        ensure!(
            NAME,
            mid <= 0.5 * ev_x.objective + 0.5 * ev_bar.objective + 1e-9,
            "trial {trial}: objective midpoint convexity violated"
        );

        // active-group bookkeeping
        ensure!(
            NAME,
            ev_bar.group_values[ev_bar.active_group] == ev_bar.objective,
            "trial {trial}: active group does not attain the max"
        );

        // exterior nearest contributions support to exactly 1
        for (term, pr) in p.groups()[ev_bar.active_group]
            .iter()
            .zip(&ev_bar.witnesses[ev_bar.active_group])
        {
            if term.extremum() == Extremum::Nearest && pr.value > 1e-9 {
                let g = term.resolved_dynamics().grad(xbar - pr.witness).unwrap();
                let sup = term.resolved_dynamics().support(g);
                ensure!(
                    NAME,
                    (sup - 1.0).abs() <= 1e-6,
                    "trial {trial}: exterior contribution support {sup}"
                );
            }
        }
    }

    // weighted term == unit weight on scaled dynamics, as whole problems
    for trial in 0..50 {
        let f = rand_dynamics(&mut rng);
        let omega = rand_set(&mut rng);
        let w = rng.gen_range(0.2..5.0);
        let weighted = Problem::new(
            vec![vec![Term::weighted(
                f,
                omega,
                Direction::FromTarget,
                Extremum::Nearest,
                w,
            )
            .unwrap()]],
            ConstraintSet::WholePlane,
            "w",
        )
        .unwrap();
        let scaled = Problem::new(
            vec![vec![Term::new(
                f.scale(w).unwrap(),
                omega,
                Direction::FromTarget,
                Extremum::Nearest,
            )]],
            ConstraintSet::WholePlane,
            "s",
        )
        .unwrap();
        let x = rand_point(&mut rng, 300.0);
        let a = weighted.evaluate(x).objective;
        let b = scaled.evaluate(x).objective;
        ensure!(
            NAME,
            (a - b).abs() <= 1e-10 * a.max(1.0),
            "trial {trial}: weighted/scaled equivalence violated"
        );
    }

    // variant collapse: singleton-group construction equals the max of its
    // groups, single-group construction equals the sum of its terms
    for trial in 0..50 {
        let terms: Vec<Term> = (0..3)
            .map(|_| {
                Term::new(
                    rand_dynamics(&mut rng),
                    rand_set(&mut rng),
                    Direction::FromTarget,
                    Extremum::Nearest,
                )
            })
            .collect();
        let x = rand_point(&mut rng, 300.0);
        let sylvester = Problem::new(
            terms.iter().map(|t| vec![*t]).collect(),
            ConstraintSet::WholePlane,
            "syl",
        )
        .unwrap();
        let by_hand_max = terms
            .iter()
            .map(|t| t.value(x).value)
            .fold(f64::MIN, f64::max);
        ensure!(
            NAME,
            (sylvester.evaluate(x).objective - by_hand_max).abs() <= 1e-12 * by_hand_max.max(1.0),
            "trial {trial}: singleton-group collapse violated"
        );
        let ft = Problem::new(vec![terms.clone()], ConstraintSet::WholePlane, "ft").unwrap();
        let by_hand_sum: f64 = terms.iter().map(|t| t.value(x).value).sum();
        ensure!(
            NAME,
            (ft.evaluate(x).objective - by_hand_sum).abs() <= 1e-12 * by_hand_sum.max(1.0),
            "trial {trial}: single-group collapse violated"
        );
    }

    CheckOutcome::pass(NAME, "500 subgradient draws plus structural identities")
}

/// Solver behavior on random instances: feasible trace, monotone running
/// best, and subgradient validity of the returned point against 100 probes.
pub fn solver_invariants(seed: u64) -> CheckOutcome {
    const NAME: &str = "solver invariants";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..10 {
        let p = rand_problem(&mut rng);
        let constraint = if rng.gen_bool(0.5) {
            ConstraintSet::Within(ReferenceSet::rect(Vec2::ZERO, (220.0, 220.0)).unwrap())
        } else {
            ConstraintSet::WholePlane
        };
        let p = Problem::new(p.groups().to_vec(), constraint, "solved").unwrap();
        let mut cfg = SolverConfig::for_problem(&p);
        cfg.record_trace = true;
        cfg.max_iters = 4000;
        cfg.x0 = rand_point(&mut rng, 300.0);
        let res = solve(&p, &cfg).expect("valid config");

        let mut best = f64::INFINITY;
        for pt in res.trace.as_ref().unwrap() {
            ensure!(
                NAME,
                p.constraint().contains(pt.x, 1e-9),
                "trial {trial}: infeasible iterate"
            );
            best = best.min(pt.value);
        }
        ensure!(
            NAME,
            res.best_value <= best + 1e-12,
            "trial {trial}: reported best above trace best"
        );

        let ev = p.evaluate(res.best_x);
        let v = p.subgradient_from(res.best_x, &ev);
        for probe in 0..100 {
            let y = p.constraint().project(rand_point(&mut rng, 350.0));
            let lhs = p.evaluate(y).objective;
            ensure!(
                NAME,
                lhs >= ev.objective + v.dot(y - res.best_x) - 1e-7,
                "trial {trial} probe {probe}: subgradient inequality fails at best_x"
            );
        }
    }
    CheckOutcome::pass(NAME, "10 random solves, feasibility + validity probes")
}

/// Runs every group with sub-seeds derived from `seed`.
pub fn run_all(seed: u64) -> Vec<CheckOutcome> {
    vec![
        gauge_invariants(seed),
        gradient_finite_difference(seed.wrapping_add(1)),
        projection_invariants(seed.wrapping_add(2)),
        problem_invariants(seed.wrapping_add(3)),
        solver_invariants(seed.wrapping_add(4)),
    ]
}
