//! Generalized nearest and farthest projections onto reference sets.
//!
//! `set_gauge` computes `ρ_F^Ω(x) = min_{ω ∈ Ω} ρ_F(x − ω)`, the minimal
//! travel time to `x` from the best point of `Ω`, together with a minimizing
//! witness. `msmg` computes the farthest counterpart
//! `ρ̄_F^Ω(x) = max_{ω ∈ Ω} ρ_F(x − ω)`.

use crate::gauge::DynamicSet;
use crate::sets::ReferenceSet;
use crate::vec2::Vec2;
use std::sync::OnceLock;

/// Value and witness of a nearest or farthest projection.
#[derive(Clone, Copy, Debug)]
pub struct ProjectionResult {
    /// Extremal gauge value (seconds).
    pub value: f64,
    /// The point of `Ω` attaining it.
    pub witness: Vec2,
    /// Whether the witness lies on the boundary of `Ω`.
    pub at_boundary: bool,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9; // (sqrt(5) - 1) / 2

/// Golden-section minimization of `f` on `[a, b]`. Valid whenever `f` is
/// unimodal on the bracket; restrictions of gauges to segments and to
/// boundary arcs are quasiconvex, which is enough.
fn golden_min(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
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

/// Box-edge searches shrink the bracket below 1e-12 of the edge length.
const EDGE_GOLDEN_ITERS: usize = 200;
/// Uniform boundary-angle grid used to bracket disk extrema.
const DISK_GRID_N: usize = 720;
const DISK_REFINE_ITERS: usize = 48;

fn disk_grid_dirs() -> &'static [Vec2; DISK_GRID_N] {
    static DIRS: OnceLock<[Vec2; DISK_GRID_N]> = OnceLock::new();
    DIRS.get_or_init(|| {
        let mut dirs = [Vec2::ZERO; DISK_GRID_N];
        for (i, d) in dirs.iter_mut().enumerate() {
            let th = 2.0 * std::f64::consts::PI * (i as f64) / (DISK_GRID_N as f64);
            *d = Vec2::new(th.cos(), th.sin());
        }
        dirs
    })
}

/// Extremum of the gauge over the boundary angle of a disk: coarse grid, then
/// golden refinement within one grid step of the best sample. The gauge's
/// sublevel sets cut the circle in arcs, so the restriction is unimodal
/// around its extremum and the bracket is safe.
fn disk_boundary_extremum(
    f: DynamicSet,
    center: Vec2,
    radius: f64,
    x: Vec2,
    maximize: bool,
) -> (f64, Vec2) {
    let sign = if maximize { -1.0 } else { 1.0 };
    let d = x - center;
    let mut best_i = 0;
    let mut best = f64::INFINITY;
    for (i, dir) in disk_grid_dirs().iter().enumerate() {
        let v = sign * f.eval(d - radius * *dir);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let step = 2.0 * std::f64::consts::PI / (DISK_GRID_N as f64);
    let th0 = step * best_i as f64;
    let (th, v) = golden_min(
        |th| sign * f.eval(d - radius * Vec2::new(th.cos(), th.sin())),
        th0 - step,
        th0 + step,
        DISK_REFINE_ITERS,
    );
    let witness = center + radius * Vec2::new(th.cos(), th.sin());
    (sign * v, witness)
}

/// Nearest generalized projection: `ρ_F^Ω(x)` with a minimizing witness.
///
/// Inside `Ω` the value is 0 with `x` itself as witness. Outside, the witness
/// lies on the boundary: for boxes the four edges are minimized independently
/// by golden section and the best edge wins (first edge on ties); for disks a
/// 720-point angle grid brackets the minimum before refinement.
pub fn set_gauge(f: DynamicSet, omega: ReferenceSet, x: Vec2) -> ProjectionResult {
    if omega.contains(x, crate::sets::CONTAINS_TOL) {
        return ProjectionResult {
            value: 0.0,
            witness: x,
            at_boundary: false,
        };
    }
    let (value, witness) = match omega {
        ReferenceSet::Disk { center, radius } => {
            disk_boundary_extremum(f, center, radius, x, false)
        }
        ReferenceSet::Rect { .. } => {
            let vs = omega.vertices().expect("boxes have vertices");
            // counter-clockwise edge loop from the bottom-left corner
            let edges = [
                (vs[0], vs[1]),
                (vs[1], vs[3]),
                (vs[3], vs[2]),
                (vs[2], vs[0]),
            ];
            let mut best = f64::INFINITY;
            let mut best_w = vs[0];
            for (a, b) in edges {
                let dir = b - a;
                let (lam, v) = golden_min(
                    |lam| f.eval(x - (a + lam * dir)),
                    0.0,
                    1.0,
                    EDGE_GOLDEN_ITERS,
                );
                if v < best {
                    best = v;
                    best_w = a + lam * dir;
                }
            }
            (best, best_w)
        }
    };
    ProjectionResult {
        value,
        witness,
        at_boundary: true,
    }
}

/// Farthest generalized projection: `ρ̄_F^Ω(x)` with a maximizing witness.
///
/// The gauge is convex, so the maximum over a compact convex set is attained
/// at an extreme point: a vertex for boxes (first vertex on ties, in
/// enumeration order), a boundary point for disks.
pub fn msmg(f: DynamicSet, omega: ReferenceSet, x: Vec2) -> ProjectionResult {
    let (value, witness) = match omega {
        ReferenceSet::Disk { center, radius } => disk_boundary_extremum(f, center, radius, x, true),
        ReferenceSet::Rect { .. } => {
            let vs = omega.vertices().expect("boxes have vertices");
            let mut best = f64::NEG_INFINITY;
            let mut best_w = vs[0];
            for v in vs {
                let val = f.eval(x - v);
                if val > best {
                    best = val;
                    best_w = v;
                }
            }
            (best, best_w)
        }
    };
    ProjectionResult {
        value,
        witness,
        at_boundary: true,
    }
}

/// Whether `x` belongs to the r-enlargement `{ y : ρ_F^Ω(y) ≤ r }` of `Ω`,
/// up to a 1e-9 slack.
pub fn r_enlargement_contains(f: DynamicSet, omega: ReferenceSet, r: f64, x: Vec2) -> bool {
    debug_assert!(r > 0.0);
    set_gauge(f, omega, x).value <= r + 1e-9
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dyn_set(wx: f64, wy: f64, r: f64) -> DynamicSet {
        DynamicSet::new(Vec2::new(wx, wy), r).unwrap()
    }

    #[test]
    fn interior_point_has_zero_value_and_self_witness() {
        let f = dyn_set(-0.6, 0.6, 1.0);
        let omega = ReferenceSet::disk(Vec2::new(10.0, 10.0), 5.0).unwrap();
        let pr = set_gauge(f, omega, Vec2::new(12.0, 9.0));
        assert_eq!(pr.value, 0.0);
        assert_eq!(pr.witness, Vec2::new(12.0, 9.0));
        assert!(!pr.at_boundary);
    }

    #[test]
    fn box_witness_reproduces_corner_projection() {
        // Wind-shifted nearest projection of (100,100) onto the box centered
        // (30,350) with half-extent 15 lands on the corner (45,335).
        let f = dyn_set(-0.6, 0.6, 1.0);
        let omega = ReferenceSet::square(Vec2::new(30.0, 350.0), 15.0).unwrap();
        let pr = set_gauge(f, omega, Vec2::new(100.0, 100.0));
        assert!(pr.at_boundary);
        assert!(
            pr.witness.dist(Vec2::new(45.0, 335.0)) < 1e-6,
            "witness {}",
            pr.witness
        );
        assert!((pr.value - f.eval(Vec2::new(55.0, -235.0))).abs() < 1e-9);
    }

    #[test]
    fn disk_nearest_matches_dense_sampling_value() {
        // Frozen from a 2e6-sample boundary sweep.
        let f = dyn_set(0.3, -0.2, 2.0);
        let omega = ReferenceSet::disk(Vec2::new(210.0, 10.0), 10.0).unwrap();
        let pr = set_gauge(f, omega, Vec2::new(300.0, 200.0));
        assert!(
            (pr.value - 104.448_746_820_920_9).abs() < 1e-6,
            "value {}",
            pr.value
        );
        assert!(omega.contains(pr.witness, 1e-7));
        assert!((pr.value - f.eval(Vec2::new(300.0, 200.0) - pr.witness)).abs() < 1e-9);
    }

    #[test]
    fn msmg_box_farthest_corner_without_wind() {
        let f = dyn_set(0.0, 0.0, 1.0);
        let omega = ReferenceSet::square(Vec2::ZERO, 1.0).unwrap();
        let pr = msmg(f, omega, Vec2::new(5.0, 0.0));
        assert!((pr.value - 37.0f64.sqrt()).abs() < 1e-12);
        // ties between (-1,-1) and (-1,1) resolve to the first vertex
        assert_eq!(pr.witness, Vec2::new(-1.0, -1.0));
    }

    #[test]
    fn msmg_disk_matches_dense_sampling_value() {
        // Frozen from a 2e6-sample boundary sweep.
        let f = dyn_set(-0.6, 0.6, 2.0);
        let omega = ReferenceSet::disk(Vec2::new(30.0, 350.0), 10.0).unwrap();
        let pr = msmg(f, omega, Vec2::new(189.0, 56.0));
        assert!(
            (pr.value - 293.765_910_502_96).abs() < 1e-5,
            "value {}",
            pr.value
        );
    }

    #[test]
    fn msmg_from_disk_center_is_radius_over_effective_speed() {
        // From the center every boundary point is at Euclidean distance R, so
        // the farthest point under wind sits where the headwind is worst.
        let f = dyn_set(0.5, 0.0, 1.0);
        let omega = ReferenceSet::disk(Vec2::new(3.0, 4.0), 2.0).unwrap();
        let pr = msmg(f, omega, Vec2::new(3.0, 4.0));
        // x - w points opposite the wind: effective speed r - |s| = 0.5
        assert!((pr.value - 2.0 / 0.5).abs() < 1e-9, "value {}", pr.value);
    }

    #[test]
    fn r_enlargement_membership() {
        let f = dyn_set(-0.3, 0.2, 1.0);
        let omega = ReferenceSet::disk(Vec2::new(0.0, 0.0), 5.0).unwrap();
        let r = 7.0;
        // inside the base set
        assert!(r_enlargement_contains(f, omega, r, Vec2::new(1.0, -2.0)));
        // constructed boundary case: w + r*f with f on the disk boundary
        let w = omega.boundary_point(0.13);
        let dir = Vec2::new(0.6, -0.8);
        let fb = f.wind() + f.speed() * dir; // boundary velocity
        let x = w + r * fb;
        assert!(r_enlargement_contains(f, omega, r, x));
        // beyond the fastest ground speed times r, no start point reaches x
        let top_speed = f.speed() + f.wind().norm();
        let x2 = Vec2::new(0.0, 0.0) + (5.0 + r * top_speed + 1.0) * Vec2::new(0.6, -0.8);
        assert!(!r_enlargement_contains(f, omega, r, x2));
    }

    #[test]
    fn nearest_projection_translation_consistency() {
        let f = dyn_set(0.2, -0.4, 1.5);
        let omega = ReferenceSet::square(Vec2::new(5.0, 5.0), 2.0).unwrap();
        let d = Vec2::new(-40.0, 17.0);
        let shifted = ReferenceSet::square(Vec2::new(5.0, 5.0) + d, 2.0).unwrap();
        for &x in &[Vec2::new(30.0, -10.0), Vec2::new(-10.0, 30.0)] {
            let a = set_gauge(f, omega, x).value;
            let b = set_gauge(f, shifted, x + d).value;
            assert!((a - b).abs() < 1e-9);
        }
    }
}
