//! Minkowski gauges of wind-shifted speed disks.
//!
//! A vehicle with nominal speed `r` flying through a steady wind `s` can hold
//! any ground velocity `f` with `‖f − s‖ ≤ r`. That reachable-velocity disk is
//! the *dynamic set* `F`, and the gauge `ρ_F(x) = min { t ≥ 0 : x ∈ tF }` is
//! the travel time from the origin to `x` under those dynamics. Requiring
//! `‖s‖ < r` keeps the origin in the interior of `F`, so every displacement is
//! reachable in finite time.

use crate::error::{Error, Result};
use crate::vec2::Vec2;

/// Minimum admissible `speed − ‖wind‖`. The gauge's Lipschitz modulus is
/// `1 / (speed − ‖wind‖)`, so a vanishing margin makes travel times blow up.
pub const MIN_WIND_MARGIN: f64 = 1e-9;

/// A wind-shifted speed disk `{ f : ‖f − wind‖ ≤ speed }` in the plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DynamicSet {
    wind: Vec2,
    speed: f64,
}

impl DynamicSet {
    /// Builds the disk, rejecting winds the vehicle cannot make headway
    /// against (`speed − ‖wind‖ < MIN_WIND_MARGIN`).
    pub fn new(wind: Vec2, speed: f64) -> Result<Self> {
        if !wind.is_finite() || !speed.is_finite() {
            return Err(Error::invalid("dynamic set parameters must be finite"));
        }
        if speed <= 0.0 {
            return Err(Error::invalid(format!(
                "vehicle speed must be positive, got {speed}"
            )));
        }
        if speed - wind.norm() < MIN_WIND_MARGIN {
            return Err(Error::invalid(format!(
                "wind speed exceeds vehicle speed (or leaves less than {MIN_WIND_MARGIN} headway): \
                 ‖wind‖ = {}, speed = {speed}",
                wind.norm()
            )));
        }
        Ok(DynamicSet { wind, speed })
    }

    /// A windless disk of the given speed.
    pub fn symmetric(speed: f64) -> Result<Self> {
        DynamicSet::new(Vec2::ZERO, speed)
    }

    pub fn wind(&self) -> Vec2 {
        self.wind
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    /// Worst-case ground speed, `speed − ‖wind‖`. Its reciprocal is a
    /// Lipschitz modulus for the gauge.
    pub fn margin(&self) -> f64 {
        self.speed - self.wind.norm()
    }

    /// Travel time `ρ_F(x)`: the smallest `t ≥ 0` with `x ∈ tF`.
    ///
    /// Solving `‖x/t − s‖ = r` for `t` gives the closed form
    /// `t = (⟨s,x⟩ − √β(x)) / (‖s‖² − r²)` with
    /// `β(x) = x₁²(r²−s₂²) + x₂²(r²−s₁²) + 2s₁s₂x₁x₂`.
    /// `β ≥ 0` holds whenever `‖s‖ < r`; it is clamped against rounding.
    pub fn eval(&self, x: Vec2) -> f64 {
        if x.x == 0.0 && x.y == 0.0 {
            return 0.0;
        }
        let (s1, s2) = (self.wind.x, self.wind.y);
        let r2 = self.speed * self.speed;
        let beta = (x.x * x.x * (r2 - s2 * s2)
            + x.y * x.y * (r2 - s1 * s1)
            + 2.0 * s1 * s2 * x.x * x.y)
            .max(0.0);
        (self.wind.dot(x) - beta.sqrt()) / (self.wind.norm_sq() - r2)
    }

    /// Gradient of [`eval`](Self::eval) at `x ≠ 0`.
    ///
    /// Satisfies the Euler relation `⟨∇ρ_F(x), x⟩ = ρ_F(x)` and
    /// `σ_F(∇ρ_F(x)) = 1`. The gauge is not differentiable at the origin.
    pub fn grad(&self, x: Vec2) -> Result<Vec2> {
        if x.x == 0.0 && x.y == 0.0 {
            return Err(Error::domain("gauge gradient is undefined at the origin"));
        }
        let (s1, s2) = (self.wind.x, self.wind.y);
        let r2 = self.speed * self.speed;
        let (a11, a22) = (r2 - s2 * s2, r2 - s1 * s1);
        let beta = (x.x * x.x * a11 + x.y * x.y * a22 + 2.0 * s1 * s2 * x.x * x.y).max(0.0);
        if beta == 0.0 {
            return Err(Error::domain("gauge gradient is undefined at the origin"));
        }
        let sqrt_beta = beta.sqrt();
        let alpha = 1.0 / (self.wind.norm_sq() - r2);
        Ok(Vec2::new(
            alpha * (s1 - (x.x * a11 + s1 * s2 * x.y) / sqrt_beta),
            alpha * (s2 - (x.y * a22 + s1 * s2 * x.x) / sqrt_beta),
        ))
    }

    /// The reflected disk `−F`, i.e. the dynamics of travel in the opposite
    /// direction: `ρ_{−F}(x) = ρ_F(−x)`.
    pub fn negate(&self) -> DynamicSet {
        DynamicSet {
            wind: -self.wind,
            speed: self.speed,
        }
    }

    /// Support function `σ_F(v) = sup { ⟨v, f⟩ : f ∈ F } = ⟨v, s⟩ + r‖v‖`.
    pub fn support(&self, v: Vec2) -> f64 {
        self.wind.dot(v) + self.speed * v.norm()
    }

    /// The scaled disk `F/λ`, which satisfies
    /// `ρ_{F/λ}(x) = λ · ρ_F(x)`. Used to fold positive term weights into the
    /// dynamics. Rejects `λ ≤ 0`.
    pub fn scale(&self, lambda: f64) -> Result<DynamicSet> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::invalid(format!(
                "scale factor must be positive and finite, got {lambda}"
            )));
        }
        DynamicSet::new(self.wind * (1.0 / lambda), self.speed / lambda)
    }
}
