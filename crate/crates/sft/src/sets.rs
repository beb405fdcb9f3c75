//! Convex reference sets: the regions vehicles must reach.

use crate::error::{Error, Result};
use crate::vec2::Vec2;

/// Default tolerance for membership tests.
pub const CONTAINS_TOL: f64 = 1e-12;

/// A compact convex target region: an axis-aligned box or a disk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ReferenceSet {
    Rect { center: Vec2, half: (f64, f64) },
    Disk { center: Vec2, radius: f64 },
}

impl ReferenceSet {
    /// Axis-aligned box given by center and half-extents.
    pub fn rect(center: Vec2, half: (f64, f64)) -> Result<Self> {
        if !center.is_finite() || !half.0.is_finite() || !half.1.is_finite() {
            return Err(Error::invalid("box parameters must be finite"));
        }
        if half.0 <= 0.0 || half.1 <= 0.0 {
            return Err(Error::invalid(format!(
                "box half-extents must be positive, got ({}, {})",
                half.0, half.1
            )));
        }
        Ok(ReferenceSet::Rect { center, half })
    }

    /// Square box, the shape used by every experiment that has boxes.
    pub fn square(center: Vec2, half: f64) -> Result<Self> {
        ReferenceSet::rect(center, (half, half))
    }

    pub fn disk(center: Vec2, radius: f64) -> Result<Self> {
        if !center.is_finite() || !radius.is_finite() {
            return Err(Error::invalid("disk parameters must be finite"));
        }
        if radius <= 0.0 {
            return Err(Error::invalid(format!(
                "disk radius must be positive, got {radius}"
            )));
        }
        Ok(ReferenceSet::Disk { center, radius })
    }

    pub fn center(&self) -> Vec2 {
        match *self {
            ReferenceSet::Rect { center, .. } | ReferenceSet::Disk { center, .. } => center,
        }
    }

    /// True iff `x` lies in the set inflated by `tol`.
    pub fn contains(&self, x: Vec2, tol: f64) -> bool {
        match *self {
            ReferenceSet::Rect { center, half } => {
                (x.x - center.x).abs() <= half.0 + tol && (x.y - center.y).abs() <= half.1 + tol
            }
            ReferenceSet::Disk { center, radius } => x.dist(center) <= radius + tol,
        }
    }

    /// Euclidean projection onto the set: componentwise clamp for boxes,
    /// radial pull-in for disks.
    pub fn project(&self, x: Vec2) -> Vec2 {
        match *self {
            ReferenceSet::Rect { center, half } => Vec2::new(
                x.x.clamp(center.x - half.0, center.x + half.0),
                x.y.clamp(center.y - half.1, center.y + half.1),
            ),
            ReferenceSet::Disk { center, radius } => {
                let d = x - center;
                let n = d.norm();
                if n <= radius {
                    x
                } else {
                    center + d * (radius / n)
                }
            }
        }
    }

    /// The four corners of a box, ordered (−,−), (+,−), (−,+), (+,+).
    /// Disks have no vertices.
    pub fn vertices(&self) -> Result<[Vec2; 4]> {
        match *self {
            ReferenceSet::Rect { center, half } => Ok([
                Vec2::new(center.x - half.0, center.y - half.1),
                Vec2::new(center.x + half.0, center.y - half.1),
                Vec2::new(center.x - half.0, center.y + half.1),
                Vec2::new(center.x + half.0, center.y + half.1),
            ]),
            ReferenceSet::Disk { .. } => Err(Error::domain(
                "a disk has no vertices; search its boundary instead",
            )),
        }
    }

    /// Point on the boundary at normalized parameter `u` (taken mod 1).
    ///
    /// Disks map `u` to the angle `2πu` from the positive x-axis. Boxes map
    /// `u` to perimeter arclength starting at the bottom-left corner and
    /// walking counter-clockwise.
    pub fn boundary_point(&self, u: f64) -> Vec2 {
        let u = u.rem_euclid(1.0);
        match *self {
            ReferenceSet::Disk { center, radius } => {
                let th = 2.0 * std::f64::consts::PI * u;
                center + radius * Vec2::new(th.cos(), th.sin())
            }
            ReferenceSet::Rect { center, half } => {
                let (w, h) = (2.0 * half.0, 2.0 * half.1);
                let perimeter = 2.0 * (w + h);
                let mut s = u * perimeter;
                let bl = Vec2::new(center.x - half.0, center.y - half.1);
                if s < w {
                    return bl + Vec2::new(s, 0.0);
                }
                s -= w;
                if s < h {
                    return bl + Vec2::new(w, s);
                }
                s -= h;
                if s < w {
                    return bl + Vec2::new(w - s, h);
                }
                s -= w;
                bl + Vec2::new(0.0, h - s)
            }
        }
    }

    /// Whether `v` lies in the normal cone to the set at `xbar`:
    /// `⟨v, x − xbar⟩ ≤ 0` for all set members `x`. Exact sign tests on the
    /// active faces for boxes, radial-direction test for disks. Test helper.
    pub fn normal_cone_contains(&self, xbar: Vec2, v: Vec2) -> Result<bool> {
        const POS_TOL: f64 = 1e-9;
        if !self.contains(xbar, POS_TOL) {
            return Err(Error::domain(
                "normal cone is empty at points outside the set",
            ));
        }
        match *self {
            ReferenceSet::Rect { center, half } => {
                let check_axis = |coord: f64, c: f64, h: f64, vj: f64| -> bool {
                    let hi_active = coord >= c + h - POS_TOL;
                    let lo_active = coord <= c - h + POS_TOL;
                    if hi_active {
                        vj >= 0.0
                    } else if lo_active {
                        vj <= 0.0
                    } else {
                        vj == 0.0
                    }
                };
                Ok(check_axis(xbar.x, center.x, half.0, v.x)
                    && check_axis(xbar.y, center.y, half.1, v.y))
            }
            ReferenceSet::Disk { center, radius } => {
                if v == Vec2::ZERO {
                    return Ok(true);
                }
                let d = xbar - center;
                if d.norm() < radius - POS_TOL {
                    // interior: cone is {0}
                    return Ok(false);
                }
                // v must be a nonnegative multiple of the outward radius
                let cross = (v.x * d.y - v.y * d.x).abs();
                Ok(cross <= POS_TOL * v.norm() * radius && v.dot(d) >= 0.0)
            }
        }
    }

    /// Axis-aligned bounding box, as (low corner, high corner).
    pub fn bbox(&self) -> (Vec2, Vec2) {
        match *self {
            ReferenceSet::Rect { center, half } => (
                Vec2::new(center.x - half.0, center.y - half.1),
                Vec2::new(center.x + half.0, center.y + half.1),
            ),
            ReferenceSet::Disk { center, radius } => (
                Vec2::new(center.x - radius, center.y - radius),
                Vec2::new(center.x + radius, center.y + radius),
            ),
        }
    }

    /// Disks are strictly convex; boxes are not.
    pub fn is_strictly_convex(&self) -> bool {
        matches!(self, ReferenceSet::Disk { .. })
    }
}

/// The feasible region the solver projects onto each step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ConstraintSet {
    /// Unconstrained: projection is the identity.
    WholePlane,
    Within(ReferenceSet),
}

impl ConstraintSet {
    pub fn project(&self, x: Vec2) -> Vec2 {
        match self {
            ConstraintSet::WholePlane => x,
            ConstraintSet::Within(set) => set.project(x),
        }
    }

    pub fn contains(&self, x: Vec2, tol: f64) -> bool {
        match self {
            ConstraintSet::WholePlane => true,
            ConstraintSet::Within(set) => set.contains(x, tol),
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, ConstraintSet::Within(_))
    }
}
