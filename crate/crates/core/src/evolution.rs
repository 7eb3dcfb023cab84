//! Hour-by-hour fire growth by four-point branching.
//!
//! Every active ignition point grows one ellipse per step, and the ends of
//! that ellipse's major and minor axes become the next ignition points. The
//! burned area is approximated by a circle centred on the mean of all
//! ignition points with radius reaching the farthest one.
//!
//! Branching multiplies the point count by four each hour, so
//! [`prune`] folds interior points into a [`SettledMass`]: their weight and
//! first moment keep contributing to the circle centre while their
//! positions stop being tracked. Points carry weights so that the mean of
//! the tracked points plus the settled mass equals the mean of the full,
//! unpruned point multiset.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::envdata::{EnvGrid, Incident};
use crate::error::{non_negative, positive};
use crate::firekernel::{SpreadModel, WindSample};
use crate::geom::Point2;
use crate::sensors::SensorField;
use crate::{math, Error, Result};

/// An active ignition point and the share of the full point multiset it stands for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IgnitionPoint {
    pub pos: Point2,
    pub weight: f64,
}

/// Active ignition points at grid hour `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Frontier {
    pub points: Vec<IgnitionPoint>,
    pub t: usize,
}

impl Frontier {
    /// A single ignition point carrying all the weight.
    pub fn ignite(pos: Point2, t: usize) -> Self {
        Self {
            points: alloc::vec![IgnitionPoint { pos, weight: 1.0 }],
            t,
        }
    }

    /// Equal-weight frontier.
    pub fn from_points(points: &[Point2], t: usize) -> Self {
        let w = 1.0 / points.len().max(1) as f64;
        Self {
            points: points
                .iter()
                .map(|&pos| IgnitionPoint { pos, weight: w })
                .collect(),
            t,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn positions(&self) -> Vec<Point2> {
        self.points.iter().map(|p| p.pos).collect()
    }
}

/// Weight and weighted position sum of points no longer tracked individually.
///
/// `moment` may also hold zero-mass corrections from snapping merged points
/// onto one representative.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SettledMass {
    pub mass: f64,
    pub moment: Point2,
}

impl SettledMass {
    fn absorb(&mut self, other: SettledMass) {
        self.mass += other.mass;
        self.moment = self.moment + other.moment;
    }

    fn centroid(&self) -> Option<Point2> {
        (self.mass > 0.0).then(|| self.moment * (1.0 / self.mass))
    }

    /// Moves the settled mass by the mean ellipse drift at its centroid.
    /// The mean of an ellipse's four axis endpoints is its centre.
    pub fn advance(
        &mut self,
        env: &EnvGrid,
        model: &SpreadModel,
        t: usize,
        dt_s: f64,
    ) -> Result<()> {
        let Some(c) = self.centroid() else {
            return Ok(());
        };
        let s = env.sample_clamped(c, t)?;
        let wind = WindSample::from_components(s.u10, s.v10);
        let e = model.ellipse_from_ignition(c, wind, s.swvl1, dt_s, t)?;
        self.moment = self.moment + (e.center - c) * self.mass;
        Ok(())
    }
}

/// Circle approximating the burned area.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BurnCircle {
    pub center: Point2,
    pub radius_km: f64,
}

impl BurnCircle {
    pub fn area_km2(&self) -> f64 {
        core::f64::consts::PI * self.radius_km * self.radius_km
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.distance(self.center) <= self.radius_km
    }
}

/// Evolution settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvolutionConfig {
    /// Step length (s).
    pub dt_s: f64,
    /// Dedup lattice pitch (km); 0 disables dedup.
    pub snap_km: f64,
    /// Points closer to the circle centre than `radius - margin` are settled;
    /// `None` disables interior pruning.
    pub margin_km: Option<f64>,
    /// Burn-time cap (h) for incidents without a historical duration.
    pub max_hours: f64,
    /// Use an incident's historical duration as its cap when present.
    pub historical_cap: bool,
    /// Check sensors against the bare ignition point before the first step.
    pub detect_at_ignition: bool,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            dt_s: 3600.0,
            snap_km: 0.05,
            margin_km: Some(0.0),
            max_hours: 240.0,
            historical_cap: true,
            detect_at_ignition: true,
        }
    }
}

impl EvolutionConfig {
    /// No dedup and no interior pruning.
    pub fn unpruned() -> Self {
        Self {
            snap_km: 0.0,
            margin_km: None,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive("dt_s", self.dt_s)?;
        non_negative("snap_km", self.snap_km)?;
        if let Some(m) = self.margin_km {
            non_negative("margin_km", m)?;
        }
        non_negative("max_hours", self.max_hours)?;
        Ok(())
    }

    /// Hour cap for `incident`.
    pub fn cap_for(&self, incident: &Incident) -> f64 {
        match incident.historical_burn_hours {
            Some(h) if self.historical_cap => h,
            _ => self.max_hours,
        }
    }
}

/// Grows one ellipse per frontier point and returns their axis endpoints as
/// the frontier one hour later. Weights split evenly over the four children;
/// points that cannot spread re-emit themselves.
pub fn step(
    frontier: &Frontier,
    env: &EnvGrid,
    model: &SpreadModel,
    dt_s: f64,
) -> Result<Frontier> {
    let t = frontier.t;
    if t + 1 >= env.nt() {
        return Err(Error::TimeOutOfRange {
            hour: t + 1,
            nt: env.nt(),
        });
    }
    let mut next = Vec::with_capacity(frontier.len() * 4);
    for p in &frontier.points {
        let s = env.sample_clamped(p.pos, t)?;
        let wind = WindSample::from_components(s.u10, s.v10);
        let speeds = model.speeds(wind.speed_ms, s.swvl1)?;
        if speeds.u_p <= 0.0 {
            next.push(*p);
            continue;
        }
        let e = model.ellipse_with_speeds(p.pos, wind.theta_rad, speeds, dt_s, t)?;
        let w = p.weight * 0.25;
        next.extend(
            e.axis_endpoints()
                .into_iter()
                .map(|pos| IgnitionPoint { pos, weight: w }),
        );
    }
    Ok(Frontier {
        points: next,
        t: t + 1,
    })
}

/// Mean-centred circle reaching the farthest point.
pub fn burned_circle(points: &[Point2]) -> Result<BurnCircle> {
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = points.len() as f64;
    let sum = points.iter().fold(Point2::ORIGIN, |acc, p| acc + *p);
    let center = sum * (1.0 / n);
    Ok(BurnCircle {
        center,
        radius_km: max_distance(center, points.iter().copied()),
    })
}

/// Circle for a weighted frontier plus settled mass: the centre is the
/// weighted mean of both, the radius reaches the farthest tracked point.
pub fn weighted_circle(frontier: &Frontier, settled: &SettledMass) -> Result<BurnCircle> {
    if frontier.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut mass = settled.mass;
    let mut moment = settled.moment;
    for p in &frontier.points {
        mass += p.weight;
        moment = moment + p.pos * p.weight;
    }
    let center = if mass > 0.0 {
        moment * (1.0 / mass)
    } else {
        // all weights underflowed: fall back to the plain mean
        return burned_circle(&frontier.positions());
    };
    Ok(BurnCircle {
        center,
        radius_km: max_distance(center, frontier.points.iter().map(|p| p.pos)),
    })
}

fn max_distance(center: Point2, points: impl Iterator<Item = Point2>) -> f64 {
    points.map(|p| p.distance(center)).fold(0.0, f64::max)
}

/// Result of [`prune`]: the kept frontier and everything folded out of it.
#[derive(Debug, Clone, PartialEq)]
pub struct Pruned {
    pub frontier: Frontier,
    pub settled: SettledMass,
}

/// Thins a frontier against the circle built from it.
///
/// 1. With `margin_km = Some(m)`, points strictly inside the circle shrunk
///    by `m` are settled.
/// 2. With `snap_km > 0`, survivors are bucketed on a `snap_km` lattice and
///    each bucket keeps one representative carrying the bucket's weight: the
///    point farthest from the circle centre, ties to the lexicographically
///    smallest. The displacement of merged weight goes to the settled moment.
///
/// With `margin_km = None` and `snap_km = 0` the frontier is returned unchanged.
pub fn prune(
    frontier: &Frontier,
    circle: &BurnCircle,
    snap_km: f64,
    margin_km: Option<f64>,
) -> Pruned {
    let mut settled = SettledMass::default();
    let inner = margin_km.map(|m| circle.radius_km - m);
    let survivors: Vec<IgnitionPoint> = frontier
        .points
        .iter()
        .copied()
        .filter(|p| match inner {
            Some(r) if p.pos.distance(circle.center) < r => {
                settled.mass += p.weight;
                settled.moment = settled.moment + p.pos * p.weight;
                false
            }
            _ => true,
        })
        .collect();

    if !(snap_km > 0.0) {
        return Pruned {
            frontier: Frontier {
                points: survivors,
                t: frontier.t,
            },
            settled,
        };
    }

    let key = |p: Point2| {
        (
            math::floor(p.x / snap_km) as i64,
            math::floor(p.y / snap_km) as i64,
        )
    };
    let mut cells: BTreeMap<(i64, i64), Vec<IgnitionPoint>> = BTreeMap::new();
    for p in survivors {
        cells.entry(key(p.pos)).or_default().push(p);
    }
    let points = cells
        .into_values()
        .map(|group| {
            let rep = group
                .iter()
                .map(|p| p.pos)
                .reduce(|best, p| {
                    let (db, dp) = (best.distance(circle.center), p.distance(circle.center));
                    if dp > db || (dp == db && p.lex_cmp(&best).is_lt()) {
                        p
                    } else {
                        best
                    }
                })
                .expect("non-empty bucket");
            let mut weight = 0.0;
            for p in &group {
                weight += p.weight;
                settled.moment = settled.moment + (p.pos - rep) * p.weight;
            }
            IgnitionPoint { pos: rep, weight }
        })
        .collect();
    Pruned {
        frontier: Frontier {
            points,
            t: frontier.t,
        },
        settled,
    }
}

/// Lowest-index sensor inside the closed circle.
pub fn detect(circle: &BurnCircle, sensors: &SensorField) -> Option<usize> {
    sensors.first_within(circle.center, circle.radius_km)
}

/// Full state of one burning fire.
#[derive(Debug, Clone, PartialEq)]
pub struct FireState {
    pub frontier: Frontier,
    pub settled: SettledMass,
}

impl FireState {
    pub fn ignite(pos: Point2, t: usize) -> Self {
        Self {
            frontier: Frontier::ignite(pos, t),
            settled: SettledMass::default(),
        }
    }

    /// One branching step followed by the circle; pruning is separate.
    pub fn advance(&mut self, env: &EnvGrid, model: &SpreadModel, dt_s: f64) -> Result<BurnCircle> {
        let t = self.frontier.t;
        let next = step(&self.frontier, env, model, dt_s)?;
        self.settled.advance(env, model, t, dt_s)?;
        self.frontier = next;
        weighted_circle(&self.frontier, &self.settled)
    }

    pub fn prune(&mut self, circle: &BurnCircle, snap_km: f64, margin_km: Option<f64>) {
        let p = prune(&self.frontier, circle, snap_km, margin_km);
        self.frontier = p.frontier;
        self.settled.absorb(p.settled);
    }
}

/// Why a simulated incident stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Detected,
    Capped,
    EnvExhausted,
}

/// One row of the per-hour trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    /// Hours since ignition.
    pub hour: usize,
    pub circle: BurnCircle,
    pub n_frontier: usize,
}

/// Outcome of one incident.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncidentResult {
    pub incident_id: String,
    pub detected: bool,
    /// Hours from ignition to detection, or to the stop for undetected fires.
    pub detection_hour: f64,
    pub burned_area_km2: f64,
    pub final_circle: BurnCircle,
    pub detecting_sensor: Option<usize>,
    pub cap_hours: f64,
    pub stop: StopReason,
    pub circle_trace: Vec<TraceRow>,
}

/// Runs one incident until a sensor falls inside the burn circle, the hour
/// cap is reached, or the environmental record ends.
///
/// The cap is `cfg.cap_for(incident)`; a fractional cap runs `ceil(cap)`
/// steps and reports `cap` hours.
pub fn simulate_incident(
    incident: &Incident,
    env: &EnvGrid,
    sensors: &SensorField,
    model: &SpreadModel,
    cfg: &EvolutionConfig,
) -> Result<IncidentResult> {
    cfg.validate()?;
    incident.validate(env)?;
    let cap = cfg.cap_for(incident);
    let max_steps = math::ceil(cap) as usize;
    let mut state = FireState::ignite(incident.ignition, incident.start_hour);
    let mut circle = BurnCircle {
        center: incident.ignition,
        radius_km: 0.0,
    };
    let mut trace = Vec::new();
    let finish =
        |circle: BurnCircle, hours: f64, sensor: Option<usize>, stop, trace| IncidentResult {
            incident_id: incident.id.clone(),
            detected: sensor.is_some(),
            detection_hour: hours,
            burned_area_km2: circle.area_km2(),
            final_circle: circle,
            detecting_sensor: sensor,
            cap_hours: cap,
            stop,
            circle_trace: trace,
        };

    if cfg.detect_at_ignition {
        if let Some(s) = detect(&circle, sensors) {
            return Ok(finish(circle, 0.0, Some(s), StopReason::Detected, trace));
        }
    }
    for k in 1..=max_steps {
        if state.frontier.t + 1 >= env.nt() {
            let hours = (k - 1) as f64;
            return Ok(finish(circle, hours, None, StopReason::EnvExhausted, trace));
        }
        circle = state.advance(env, model, cfg.dt_s)?;
        trace.push(TraceRow {
            hour: k,
            circle,
            n_frontier: state.frontier.len(),
        });
        if let Some(s) = detect(&circle, sensors) {
            let hours = (k as f64).min(cap);
            return Ok(finish(circle, hours, Some(s), StopReason::Detected, trace));
        }
        state.prune(&circle, cfg.snap_km, cfg.margin_km);
    }
    Ok(finish(circle, cap, None, StopReason::Capped, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envdata::GridShape;
    use crate::geom::Rect;
    use alloc::vec;
    use approx::assert_relative_eq;

    fn grid(u: f32, v: f32, soil: f32, nt: usize) -> EnvGrid {
        EnvGrid::uniform(
            GridShape {
                nx: 20,
                ny: 20,
                nt,
                spacing_km: 10.0,
                origin: Point2::ORIGIN,
            },
            u,
            v,
            soil,
        )
        .unwrap()
    }

    fn incident(at: Point2) -> Incident {
        Incident {
            id: "t".into(),
            start_hour: 0,
            ignition: at,
            historical_burn_hours: None,
            historical_area_km2: None,
        }
    }

    fn no_sensors() -> SensorField {
        SensorField::empty(Rect::from_extents(200.0, 200.0)).unwrap()
    }

    #[test]
    fn step_branches_into_four() {
        let env = grid(6.0, 2.0, 0.1, 10);
        let m = SpreadModel::default();
        let f = step(
            &Frontier::ignite(Point2::new(100.0, 100.0), 0),
            &env,
            &m,
            3600.0,
        )
        .unwrap();
        assert_eq!(f.len(), 4);
        assert_eq!(f.t, 1);
        let g = step(&f, &env, &m, 3600.0).unwrap();
        assert_eq!(g.len(), 16);
        let total: f64 = g.points.iter().map(|p| p.weight).sum();
        assert_relative_eq!(total, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn soaked_point_persists() {
        let env = grid(6.0, 2.0, 0.4, 10);
        let start = Frontier::ignite(Point2::new(50.0, 50.0), 3);
        let f = step(&start, &env, &SpreadModel::default(), 3600.0).unwrap();
        assert_eq!(f.points, start.points);
        assert_eq!(f.t, 4);
    }

    #[test]
    fn step_past_end_is_error() {
        let env = grid(1.0, 0.0, 0.1, 3);
        let f = Frontier::ignite(Point2::new(5.0, 5.0), 2);
        assert!(matches!(
            step(&f, &env, &SpreadModel::default(), 3600.0),
            Err(Error::TimeOutOfRange { .. })
        ));
    }

    #[test]
    fn circle_of_square_and_point() {
        let sq = [
            Point2::new(0.0, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(0.0, 2.0),
            Point2::new(2.0, 2.0),
        ];
        let c = burned_circle(&sq).unwrap();
        assert_eq!(c.center, Point2::new(1.0, 1.0));
        assert_relative_eq!(c.radius_km, 2f64.sqrt(), max_relative = 1e-15);
        let c = burned_circle(&[Point2::new(3.0, -1.0)]).unwrap();
        assert_eq!((c.center, c.radius_km), (Point2::new(3.0, -1.0), 0.0));
        assert_eq!(burned_circle(&[]), Err(Error::EmptySet));
    }

    #[test]
    fn prune_cases() {
        let circle = BurnCircle {
            center: Point2::ORIGIN,
            radius_km: 1.0,
        };
        let f = Frontier::from_points(
            &[
                Point2::new(0.1, 0.0),
                Point2::new(0.0, -0.5),
                Point2::new(1.0, 0.0),
            ],
            0,
        );
        let p = prune(&f, &circle, 0.0, Some(0.0));
        assert_eq!(p.frontier.positions(), vec![Point2::new(1.0, 0.0)]);
        assert_relative_eq!(p.settled.mass, 2.0 / 3.0, max_relative = 1e-15);

        let f = Frontier::from_points(&[Point2::new(0.5003, 0.2), Point2::new(0.5013, 0.2)], 0);
        let p = prune(&f, &circle, 0.1, None);
        assert_eq!(p.frontier.len(), 1);
        // farthest from the centre represents the bucket
        assert_eq!(p.frontier.points[0].pos, Point2::new(0.5013, 0.2));
        assert_relative_eq!(p.frontier.points[0].weight, 1.0, max_relative = 1e-15);
        assert_relative_eq!(p.settled.moment.x, -0.0005, epsilon = 1e-12);

        let f = Frontier::from_points(
            &[
                Point2::new(0.3, 0.1),
                Point2::new(0.3, 0.1),
                Point2::new(-2.0, 0.0),
            ],
            0,
        );
        let p = prune(&f, &circle, 0.0, None);
        assert_eq!(p.frontier, f);
        assert_eq!(p.settled, SettledMass::default());
    }

    #[test]
    fn detect_rules() {
        let region = Rect::from_extents(10.0, 10.0);
        let sensors = SensorField::new(
            vec![Point2::new(7.0, 5.0), Point2::new(5.0, 5.0)],
            region,
            None,
        )
        .unwrap();
        let c = BurnCircle {
            center: Point2::new(5.0, 5.0),
            radius_km: 0.0,
        };
        assert_eq!(detect(&c, &sensors), Some(1));
        let c = BurnCircle {
            center: Point2::new(5.0, 5.0),
            radius_km: 2.0,
        };
        assert_eq!(detect(&c, &sensors), Some(0));
        let c = BurnCircle {
            center: Point2::new(1.0, 1.0),
            radius_km: 1.0,
        };
        assert_eq!(detect(&c, &sensors), None);
    }

    #[test]
    fn sensor_at_ignition() {
        let env = grid(3.0, 0.0, 0.1, 30);
        let at = Point2::new(42.0, 17.0);
        let sensors = SensorField::new(vec![at], Rect::from_extents(200.0, 200.0), None).unwrap();
        let m = SpreadModel::default();
        let r = simulate_incident(
            &incident(at),
            &env,
            &sensors,
            &m,
            &EvolutionConfig::default(),
        )
        .unwrap();
        assert!(r.detected);
        assert_eq!((r.detection_hour, r.burned_area_km2), (0.0, 0.0));
        let late = EvolutionConfig {
            detect_at_ignition: false,
            ..EvolutionConfig::default()
        };
        let r = simulate_incident(&incident(at), &env, &sensors, &m, &late).unwrap();
        assert_eq!(r.detection_hour, 1.0);
        assert_eq!(r.detecting_sensor, Some(0));
    }

    #[test]
    fn undetected_constant_wind_run() {
        let env = grid(5.0, 0.0, 0.0, 40);
        let m = SpreadModel::default();
        let cfg = EvolutionConfig {
            max_hours: 10.0,
            ..EvolutionConfig::default()
        };
        let r = simulate_incident(
            &incident(Point2::new(100.0, 100.0)),
            &env,
            &no_sensors(),
            &m,
            &cfg,
        )
        .unwrap();
        assert!(!r.detected);
        assert_eq!(r.stop, StopReason::Capped);
        assert_eq!(r.detection_hour, 10.0);
        assert_eq!(r.circle_trace.len(), 10);
        let radii: Vec<f64> = r.circle_trace.iter().map(|t| t.circle.radius_km).collect();
        assert!(radii.windows(2).all(|w| w[1] >= w[0]));
        // radius grows by (u_p - mean drift) per hour = 0.6 u_p dt
        let u_p = m.spread_speed(5.0, 0.0).unwrap();
        let rate = radii[9] / 10.0;
        let nominal = u_p * 3.6;
        assert!(
            (rate - nominal).abs() <= 0.4 * nominal,
            "rate {rate} vs {nominal}"
        );
        assert_relative_eq!(rate, 0.6 * nominal, max_relative = 1e-9);
    }

    #[test]
    fn soaked_incident_never_grows() {
        let env = grid(8.0, 8.0, 0.5, 20);
        let cfg = EvolutionConfig {
            max_hours: 12.0,
            ..EvolutionConfig::default()
        };
        let r = simulate_incident(
            &incident(Point2::new(10.0, 10.0)),
            &env,
            &no_sensors(),
            &SpreadModel::default(),
            &cfg,
        )
        .unwrap();
        assert_eq!(r.burned_area_km2, 0.0);
        assert_eq!(r.detection_hour, 12.0);
    }

    #[test]
    fn stops_at_end_of_record() {
        let env = grid(5.0, 0.0, 0.0, 6);
        let mut inc = incident(Point2::new(100.0, 100.0));
        inc.start_hour = 2;
        let r = simulate_incident(
            &inc,
            &env,
            &no_sensors(),
            &SpreadModel::default(),
            &EvolutionConfig::default(),
        )
        .unwrap();
        assert_eq!(r.stop, StopReason::EnvExhausted);
        assert_eq!(r.detection_hour, 3.0);
    }

    #[test]
    fn historical_cap_is_used() {
        let env = grid(5.0, 0.0, 0.0, 40);
        let mut inc = incident(Point2::new(100.0, 100.0));
        inc.historical_burn_hours = Some(4.5);
        let r = simulate_incident(
            &inc,
            &env,
            &no_sensors(),
            &SpreadModel::default(),
            &EvolutionConfig::default(),
        )
        .unwrap();
        assert_eq!(r.detection_hour, 4.5);
        assert_eq!(r.circle_trace.len(), 5);
    }
}
