//! Single-ellipse fire spread model.
//!
//! A fire burning from one ignition point under constant wind and soil
//! wetness grows as an ellipse elongated downwind. The downwind head speed
//! is
//!
//! ```text
//! u_p = u_max * g(W_s) * h(beta)
//! g(W_s) = 1 - (1 - g0) * exp(-W_s^2 / 2500)
//! h(beta) = (1 - min(beta / beta_e, 1))^2
//! ```
//!
//! the back-spread speed is `u_b = 0.2 * u_p`, and the lateral speed `v`
//! follows from the length-to-breadth ratio
//! `L_B = (u_p + u_b) / 2v = 1 + 10 * (1 - exp(-0.017 * W_s))`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, non_negative, positive};
use crate::geom::Point2;
use crate::{math, Result};

/// Tunable constants of the spread model. [`Default`] gives the reference values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SpreadModel {
    /// Maximum head spread speed (m/s).
    pub u_max: f64,
    /// Wind factor at zero wind.
    pub g0: f64,
    /// Denominator of the wind-factor exponent (m²/s²).
    pub wind_scale_sq: f64,
    /// Soil wetness at and above which spread stops.
    pub beta_e: f64,
    /// Back-spread speed as a fraction of head speed.
    pub back_ratio: f64,
    /// Asymptotic gain of the length-to-breadth ratio above 1.
    pub lb_gain: f64,
    /// Rate constant of the length-to-breadth ratio (s/m).
    pub lb_rate: f64,
}

impl Default for SpreadModel {
    fn default() -> Self {
        Self {
            u_max: 0.13,
            g0: 0.1,
            wind_scale_sq: 2500.0,
            beta_e: 0.35,
            back_ratio: 0.2,
            lb_gain: 10.0,
            lb_rate: 0.017,
        }
    }
}

/// Wind speed and direction at one place and hour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindSample {
    /// Speed (m/s), never negative.
    pub speed_ms: f64,
    /// Direction the wind blows toward, from the +x axis, in (-π, π].
    pub theta_rad: f64,
}

impl WindSample {
    pub fn new(speed_ms: f64, theta_rad: f64) -> Result<Self> {
        non_negative("wind speed", speed_ms)?;
        if !theta_rad.is_finite() {
            return Err(invalid("theta_rad", "must be finite"));
        }
        Ok(Self {
            speed_ms,
            theta_rad: normalize_angle(theta_rad),
        })
    }

    /// From eastward/northward components. Calm air gets direction 0.
    pub fn from_components(u10: f64, v10: f64) -> Self {
        let speed_ms = math::hypot(u10, v10);
        let theta_rad = if speed_ms > 0.0 {
            normalize_angle(math::atan2(v10, u10))
        } else {
            0.0
        };
        Self {
            speed_ms,
            theta_rad,
        }
    }
}

// Maps any finite angle into (-π, π].
fn normalize_angle(theta: f64) -> f64 {
    use core::f64::consts::{PI, TAU};
    let mut t = theta % TAU;
    if t <= -PI {
        t += TAU;
    } else if t > PI {
        t -= TAU;
    }
    t
}

/// Head, back and flank spread speeds (m/s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpreadSpeeds {
    pub u_p: f64,
    pub u_b: f64,
    pub v: f64,
}

/// One elliptical burn patch grown for `dt` from an ignition point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FireEllipse {
    pub ignition: Point2,
    pub center: Point2,
    pub semi_major_km: f64,
    pub semi_minor_km: f64,
    pub theta_rad: f64,
    pub t_created: usize,
}

impl SpreadModel {
    pub fn validate(&self) -> Result<()> {
        positive("u_max", self.u_max)?;
        positive("wind_scale_sq", self.wind_scale_sq)?;
        positive("beta_e", self.beta_e)?;
        non_negative("lb_gain", self.lb_gain)?;
        non_negative("lb_rate", self.lb_rate)?;
        if !(self.g0 > 0.0 && self.g0 <= 1.0) {
            return Err(invalid("g0", "must be in (0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.back_ratio) {
            return Err(invalid("back_ratio", "must be in [0, 1]"));
        }
        Ok(())
    }

    /// `g(W_s)`, in `[g0, 1)`.
    pub fn wind_factor(&self, ws: f64) -> Result<f64> {
        let ws = non_negative("wind speed", ws)?;
        // g0 + (1 - g0)(1 - e) is algebraically the same and exact at ws = 0
        Ok(self.g0 + (1.0 - self.g0) * (1.0 - math::exp(-ws * ws / self.wind_scale_sq)))
    }

    /// `h(beta)`, in `[0, 1]`; zero from `beta_e` upward.
    pub fn moisture_factor(&self, beta_root: f64) -> Result<f64> {
        let beta = non_negative("soil wetness", beta_root)?;
        let beta_m = if beta <= self.beta_e {
            beta / self.beta_e
        } else {
            1.0
        };
        let dry = 1.0 - beta_m;
        Ok(dry * dry)
    }

    /// Downwind head speed `u_p` (m/s).
    pub fn spread_speed(&self, ws: f64, beta_root: f64) -> Result<f64> {
        Ok(self.u_max * self.wind_factor(ws)? * self.moisture_factor(beta_root)?)
    }

    /// Length-to-breadth ratio, in `[1, 1 + lb_gain)`.
    pub fn length_breadth_ratio(&self, ws: f64) -> Result<f64> {
        let ws = non_negative("wind speed", ws)?;
        Ok(1.0 + self.lb_gain * (1.0 - math::exp(-self.lb_rate * ws)))
    }

    pub fn speeds(&self, ws: f64, beta_root: f64) -> Result<SpreadSpeeds> {
        let u_p = self.spread_speed(ws, beta_root)?;
        let u_b = self.back_ratio * u_p;
        let v = (u_p + u_b) / (2.0 * self.length_breadth_ratio(ws)?);
        Ok(SpreadSpeeds { u_p, u_b, v })
    }

    /// Ellipse grown for `dt_s` seconds from `ignition`.
    ///
    /// The head vertex lands at `u_p * dt` downwind of the ignition point and
    /// the rear vertex at `u_b * dt` upwind of it.
    pub fn ellipse_from_ignition(
        &self,
        ignition: Point2,
        wind: WindSample,
        beta_root: f64,
        dt_s: f64,
        t: usize,
    ) -> Result<FireEllipse> {
        positive("dt_s", dt_s)?;
        let s = self.speeds(wind.speed_ms, beta_root)?;
        self.ellipse_with_speeds(ignition, wind.theta_rad, s, dt_s, t)
    }

    pub(crate) fn ellipse_with_speeds(
        &self,
        ignition: Point2,
        theta_rad: f64,
        s: SpreadSpeeds,
        dt_s: f64,
        t: usize,
    ) -> Result<FireEllipse> {
        positive("dt_s", dt_s)?;
        let km = dt_s / 1000.0;
        let axis = Point2::unit(theta_rad);
        Ok(FireEllipse {
            ignition,
            center: ignition + axis * ((s.u_p - s.u_b) * 0.5 * km),
            semi_major_km: (s.u_p + s.u_b) * 0.5 * km,
            semi_minor_km: s.v * km,
            theta_rad,
            t_created: t,
        })
    }
}

impl FireEllipse {
    /// Ends of the major and minor axes: head, rear, left flank, right flank.
    pub fn axis_endpoints(&self) -> [Point2; 4] {
        let axis = Point2::unit(self.theta_rad);
        let lateral = axis.perp() * self.semi_minor_km;
        let along = axis * self.semi_major_km;
        [
            self.center + along,
            self.center - along,
            self.center + lateral,
            self.center - lateral,
        ]
    }

    /// Normalised radial coordinate of `p`: `< 1` inside, `1` on the boundary.
    /// Infinite for points off a degenerate (zero-axis) ellipse.
    pub fn level(&self, p: Point2) -> f64 {
        let local = (p - self.center).rotate(-self.theta_rad);
        let q = |d: f64, a: f64| {
            if a > 0.0 {
                (d / a) * (d / a)
            } else if d == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        };
        math::sqrt(q(local.x, self.semi_major_km) + q(local.y, self.semi_minor_km))
    }

    pub fn area_km2(&self) -> f64 {
        core::f64::consts::PI * self.semi_major_km * self.semi_minor_km
    }
}

/// [`SpreadModel::wind_factor`] with reference constants.
pub fn wind_factor(ws: f64) -> Result<f64> {
    SpreadModel::default().wind_factor(ws)
}

/// [`SpreadModel::moisture_factor`] with reference constants.
pub fn moisture_factor(beta_root: f64) -> Result<f64> {
    SpreadModel::default().moisture_factor(beta_root)
}

/// [`SpreadModel::spread_speed`] with reference constants.
pub fn spread_speed(ws: f64, beta_root: f64) -> Result<f64> {
    SpreadModel::default().spread_speed(ws, beta_root)
}

/// [`SpreadModel::length_breadth_ratio`] with reference constants.
pub fn length_breadth_ratio(ws: f64) -> Result<f64> {
    SpreadModel::default().length_breadth_ratio(ws)
}

/// [`SpreadModel::speeds`] with reference constants.
pub fn speeds(ws: f64, beta_root: f64) -> Result<SpreadSpeeds> {
    SpreadModel::default().speeds(ws, beta_root)
}

/// [`SpreadModel::ellipse_from_ignition`] with reference constants.
pub fn ellipse_from_ignition(
    ignition: Point2,
    wind: WindSample,
    beta_root: f64,
    dt_s: f64,
    t: usize,
) -> Result<FireEllipse> {
    SpreadModel::default().ellipse_from_ignition(ignition, wind, beta_root, dt_s, t)
}

/// Free-function form of [`FireEllipse::axis_endpoints`].
pub fn axis_endpoints(e: &FireEllipse) -> [Point2; 4] {
    e.axis_endpoints()
}
