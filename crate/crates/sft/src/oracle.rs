//! Brute-force cross-checks: refined grid search over the plane for global
//! minima, and dense boundary sampling for projections. Deliberately
//! independent of the solver and of the projection module's search routines.

use crate::error::{Error, Result};
use crate::gauge::DynamicSet;
use crate::problem::Problem;
use crate::sets::ReferenceSet;
use crate::vec2::Vec2;
use rayon::prelude::*;

/// A refined rectangular search grid.
#[derive(Clone, Copy, Debug)]
pub struct GridSpec {
    pub lo: Vec2,
    pub hi: Vec2,
    /// Points per axis in each round.
    pub coarse_n: usize,
    /// Zoom rounds after the coarse pass; each shrinks the span tenfold
    /// around the incumbent.
    pub refine_rounds: usize,
}

pub const DEFAULT_COARSE_N: usize = 400;
pub const DEFAULT_REFINE_ROUNDS: usize = 3;

impl GridSpec {
    /// Covers the bounding box of the problem's targets, inflated by 50%.
    /// Optima of these objectives live near the targets' convex hull, and the
    /// margin absorbs wind-driven drift.
    pub fn for_problem(p: &Problem) -> GridSpec {
        let (lo, hi) = p.targets_bbox();
        let center = (lo + hi) * 0.5;
        let half = (hi - lo) * 0.75; // 1.5x the original half-span
        let pad = Vec2::new(half.x.max(1.0), half.y.max(1.0));
        GridSpec {
            lo: center - pad,
            hi: center + pad,
            coarse_n: DEFAULT_COARSE_N,
            refine_rounds: DEFAULT_REFINE_ROUNDS,
        }
    }

    pub fn with_resolution(mut self, coarse_n: usize, refine_rounds: usize) -> GridSpec {
        self.coarse_n = coarse_n;
        self.refine_rounds = refine_rounds;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.lo.x < self.hi.x && self.lo.y < self.hi.y) {
            return Err(Error::invalid("grid bounds must satisfy lo < hi"));
        }
        if self.coarse_n < 2 {
            return Err(Error::invalid("grid needs at least 2 points per axis"));
        }
        Ok(())
    }
}

/// Global minimum of the objective over the refined grid. Deterministic:
/// rows are evaluated in parallel but reduced in index order, and ties keep
/// the lexicographically first grid point.
pub fn grid_min(p: &Problem, g: &GridSpec) -> Result<(f64, Vec2)> {
    g.validate()?;
    let n = g.coarse_n;
    let mut lo = g.lo;
    let mut hi = g.hi;
    let mut best_v = f64::INFINITY;
    let mut best_x = (lo + hi) * 0.5;

    for _ in 0..=g.refine_rounds {
        let dx = (hi.x - lo.x) / (n - 1) as f64;
        let dy = (hi.y - lo.y) / (n - 1) as f64;
        let rows: Vec<(f64, usize)> = (0..n)
            .into_par_iter()
            .map(|j| {
                let y = lo.y + dy * j as f64;
                let mut row_best = f64::INFINITY;
                let mut row_i = 0;
                for i in 0..n {
                    let v = p.evaluate(Vec2::new(lo.x + dx * i as f64, y)).objective;
                    if v < row_best {
                        row_best = v;
                        row_i = i;
                    }
                }
                (row_best, row_i)
            })
            .collect();
        let mut round_best = f64::INFINITY;
        let mut round_x = best_x;
        for (j, &(v, i)) in rows.iter().enumerate() {
            if v < round_best {
                round_best = v;
                round_x = Vec2::new(lo.x + dx * i as f64, lo.y + dy * j as f64);
            }
        }
        // carry the incumbent so refinement can only improve
        if round_best < best_v {
            best_v = round_best;
            best_x = round_x;
        }
        let half = Vec2::new((hi.x - lo.x) / 20.0, (hi.y - lo.y) / 20.0);
        lo = best_x - half;
        hi = best_x + half;
    }
    Ok((best_v, best_x))
}

/// Which extremum the boundary sampling oracle hunts for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Min,
    Max,
}

/// Extremum of `ω ↦ ρ_F(x − ω)` over `n` uniform boundary samples of `Ω`,
/// plus golden-section refinement inside the best bracket. This is the
/// reference implementation that the fast projection searches are tested
/// against; for nearest projections it only applies when `x ∉ Ω` (the
/// boundary minimum is positive even when the set-gauge value is 0).
pub fn sample_boundary_extremum(
    f: DynamicSet,
    omega: ReferenceSet,
    x: Vec2,
    mode: Mode,
    n: usize,
) -> Result<f64> {
    if n < 1024 {
        return Err(Error::invalid(format!(
            "boundary oracle needs at least 1024 samples, got {n}"
        )));
    }
    let sign = match mode {
        Mode::Min => 1.0,
        Mode::Max => -1.0,
    };
    let mut best = f64::INFINITY;
    let mut best_i = 0usize;
    for i in 0..n {
        let w = omega.boundary_point(i as f64 / n as f64);
        let v = sign * f.eval(x - w);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let step = 1.0 / n as f64;
    let u0 = best_i as f64 * step;
    let mut refined = best;
    // boundary_point wraps, so the bracket may straddle u = 0
    let (_, v) = golden(
        |u| sign * f.eval(x - omega.boundary_point(u)),
        u0 - step,
        u0 + step,
        90,
    );
    if v < refined {
        refined = v;
    }
    Ok(sign * refined)
}

fn golden(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    (mid, f(mid))
}
