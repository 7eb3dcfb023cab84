// Deterministic synthetic stand-ins for the gridded inputs and incident list.

use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{BiomassGrid, EnvGrid, GridShape, Incident};
use crate::error::{invalid, positive};
use crate::geom::{Point2, Rect};
use crate::rng::{self, Rng};
use crate::{math, Result};

/// Closed value range for a random field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldRange {
    pub min: f64,
    pub max: f64,
}

impl FieldRange {
    pub const fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }

    fn validate(&self, field: &'static str) -> Result<()> {
        if self.min.is_finite() && self.max.is_finite() && self.min <= self.max {
            Ok(())
        } else {
            Err(invalid(
                field,
                format!("bad range [{}, {}]", self.min, self.max),
            ))
        }
    }
}

/// One entry of a piecewise-constant wind schedule, active from `start_hour`
/// until the next entry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindSegment {
    pub start_hour: usize,
    pub u10: f64,
    pub v10: f64,
}

fn default_modes() -> usize {
    6
}

fn default_length_scale() -> f64 {
    300.0
}

fn default_time_scale() -> f64 {
    36.0
}

/// Synthetic scenario descriptor for [`synth_env`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SynthSpec {
    /// Same values everywhere, every hour.
    Constant {
        #[serde(flatten)]
        shape: GridShape,
        u10: f64,
        v10: f64,
        swvl1: f64,
    },
    /// Spatially uniform wind that switches at the listed hours.
    Schedule {
        #[serde(flatten)]
        shape: GridShape,
        segments: Vec<WindSegment>,
        swvl1: f64,
    },
    /// Smooth random fields: a sum of `modes` travelling plane waves per
    /// variable, rescaled into the stated ranges.
    Random {
        #[serde(flatten)]
        shape: GridShape,
        u10: FieldRange,
        v10: FieldRange,
        swvl1: FieldRange,
        #[serde(default = "default_modes")]
        modes: usize,
        #[serde(default = "default_length_scale")]
        length_scale_km: f64,
        #[serde(default = "default_time_scale")]
        time_scale_h: f64,
    },
}

impl SynthSpec {
    pub fn shape(&self) -> GridShape {
        match self {
            SynthSpec::Constant { shape, .. }
            | SynthSpec::Schedule { shape, .. }
            | SynthSpec::Random { shape, .. } => *shape,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.shape().validate()?;
        let soil = |field: &'static str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(invalid(field, format!("{v} outside [0, 1]")))
            }
        };
        match self {
            SynthSpec::Constant {
                u10, v10, swvl1, ..
            } => {
                if !(u10.is_finite() && v10.is_finite()) {
                    return Err(invalid("u10/v10", "must be finite"));
                }
                soil("swvl1", *swvl1)
            }
            SynthSpec::Schedule {
                segments, swvl1, ..
            } => {
                match segments.first() {
                    Some(s) if s.start_hour == 0 => {}
                    _ => return Err(invalid("segments", "first segment must start at hour 0")),
                }
                if segments
                    .windows(2)
                    .any(|w| w[0].start_hour >= w[1].start_hour)
                {
                    return Err(invalid(
                        "segments",
                        "start hours must be strictly increasing",
                    ));
                }
                if segments
                    .iter()
                    .any(|s| !(s.u10.is_finite() && s.v10.is_finite()))
                {
                    return Err(invalid("segments", "wind components must be finite"));
                }
                soil("swvl1", *swvl1)
            }
            SynthSpec::Random {
                u10,
                v10,
                swvl1,
                modes,
                length_scale_km,
                time_scale_h,
                ..
            } => {
                u10.validate("u10")?;
                v10.validate("v10")?;
                swvl1.validate("swvl1")?;
                soil("swvl1.min", swvl1.min)?;
                soil("swvl1.max", swvl1.max)?;
                if *modes == 0 {
                    return Err(invalid("modes", "must be >= 1"));
                }
                positive("length_scale_km", *length_scale_km)?;
                positive("time_scale_h", *time_scale_h)?;
                Ok(())
            }
        }
    }
}

/// Builds a synthetic environmental grid. The output depends only on
/// `(spec, seed)`; constant and schedule specs ignore the seed.
pub fn synth_env(spec: &SynthSpec, seed: u64) -> Result<EnvGrid> {
    spec.validate()?;
    let shape = spec.shape();
    let cells = shape.nx * shape.ny;
    match spec {
        SynthSpec::Constant {
            u10, v10, swvl1, ..
        } => EnvGrid::uniform(shape, *u10 as f32, *v10 as f32, *swvl1 as f32),
        SynthSpec::Schedule {
            segments, swvl1, ..
        } => {
            let n = shape.raster_len();
            let (mut u, mut v) = (Vec::with_capacity(n), Vec::with_capacity(n));
            let mut seg = 0;
            for t in 0..shape.nt {
                while seg + 1 < segments.len() && segments[seg + 1].start_hour <= t {
                    seg += 1;
                }
                u.extend(core::iter::repeat_n(segments[seg].u10 as f32, cells));
                v.extend(core::iter::repeat_n(segments[seg].v10 as f32, cells));
            }
            EnvGrid::new(shape, u, v, alloc::vec![*swvl1 as f32; n])
        }
        SynthSpec::Random {
            u10,
            v10,
            swvl1,
            modes,
            length_scale_km,
            time_scale_h,
            ..
        } => {
            let mut rng = rng::seeded(seed);
            let mut field = |range: &FieldRange| {
                let waves = WaveSet::draw(&mut rng, *modes, *length_scale_km, *time_scale_h);
                waves.render(&shape, *range)
            };
            let u = field(u10);
            let v = field(v10);
            let s = field(swvl1);
            EnvGrid::new(shape, u, v, s)
        }
    }
}

// Sum of plane waves with non-negative weights summing to one, so the raw
// field is confined to [-1, 1] before rescaling.
struct WaveSet {
    waves: Vec<Wave>,
}

struct Wave {
    weight: f64,
    kx: f64,
    ky: f64,
    omega: f64,
    phase: f64,
}

impl WaveSet {
    fn draw(rng: &mut Rng, modes: usize, length_km: f64, period_h: f64) -> Self {
        let mut waves: Vec<Wave> = (0..modes)
            .map(|_| {
                let dir = rng::uniform(rng, 0.0, core::f64::consts::TAU);
                let wavelength = length_km * rng::uniform(rng, 0.5, 2.0);
                let k = core::f64::consts::TAU / wavelength;
                let period = period_h * rng::uniform(rng, 0.5, 2.0);
                Wave {
                    weight: rng::uniform(rng, 0.2, 1.0),
                    kx: k * math::cos(dir),
                    ky: k * math::sin(dir),
                    omega: core::f64::consts::TAU / period,
                    phase: rng::uniform(rng, 0.0, core::f64::consts::TAU),
                }
            })
            .collect();
        let total: f64 = waves.iter().map(|w| w.weight).sum();
        for w in &mut waves {
            w.weight /= total;
        }
        Self { waves }
    }

    fn render(&self, shape: &GridShape, range: FieldRange) -> Vec<f32> {
        let cells = shape.nx * shape.ny;
        // cos(a + b) = cos a cos b - sin a sin b with a spatial, b temporal
        let mut spatial = Vec::with_capacity(self.waves.len() * cells * 2);
        for w in &self.waves {
            for iy in 0..shape.ny {
                for ix in 0..shape.nx {
                    let x = (ix as f64 + 0.5) * shape.spacing_km;
                    let y = (iy as f64 + 0.5) * shape.spacing_km;
                    let a = w.kx * x + w.ky * y + w.phase;
                    spatial.push((w.weight * math::cos(a), w.weight * math::sin(a)));
                }
            }
        }
        let mut out = Vec::with_capacity(shape.raster_len());
        let span = range.max - range.min;
        for t in 0..shape.nt {
            let temporal: Vec<(f64, f64)> = self
                .waves
                .iter()
                .map(|w| {
                    let b = w.omega * t as f64;
                    (math::cos(b), math::sin(b))
                })
                .collect();
            for c in 0..cells {
                let mut s = 0.0;
                for (m, (cb, sb)) in temporal.iter().enumerate() {
                    let (ca, sa) = spatial[m * cells + c];
                    s += ca * cb - sa * sb;
                }
                let unit = ((s.clamp(-1.0, 1.0) + 1.0) * 0.5).clamp(0.0, 1.0);
                let v = (range.min + span * unit) as f32;
                out.push(v.clamp(range.min as f32, range.max as f32));
            }
        }
        out
    }
}

/// Synthetic biomass raster descriptor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiomassSpec {
    pub nx: usize,
    pub ny: usize,
    pub spacing_km: f64,
    #[serde(default)]
    pub origin: Point2,
    pub range: FieldRange,
    #[serde(default = "default_modes")]
    pub modes: usize,
    #[serde(default = "default_length_scale")]
    pub length_scale_km: f64,
}

/// Smooth random biomass in `spec.range` (constant when min == max).
pub fn synth_biomass(spec: &BiomassSpec, seed: u64) -> Result<BiomassGrid> {
    spec.range.validate("range")?;
    if spec.range.min < 0.0 {
        return Err(invalid("range", "biomass must be >= 0"));
    }
    if spec.modes == 0 {
        return Err(invalid("modes", "must be >= 1"));
    }
    positive("length_scale_km", spec.length_scale_km)?;
    positive("spacing_km", spec.spacing_km)?;
    let mut rng = rng::seeded(seed);
    let waves = WaveSet::draw(&mut rng, spec.modes, spec.length_scale_km, 1.0);
    let shape = GridShape {
        nx: spec.nx,
        ny: spec.ny,
        nt: 1,
        spacing_km: spec.spacing_km,
        origin: spec.origin,
    };
    let values = waves.render(&shape, spec.range);
    BiomassGrid::new(spec.nx, spec.ny, spec.spacing_km, spec.origin, values)
}

/// Synthetic incident list descriptor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncidentSpec {
    pub count: usize,
    /// Ignition region; defaults to the grid rectangle.
    #[serde(default)]
    pub region: Option<Rect>,
    /// Start hours are drawn from `0..latest_start_hour` (default: `nt`).
    #[serde(default)]
    pub latest_start_hour: Option<usize>,
}

/// Uniformly placed incidents with uniform start hours and no historical fields.
pub fn synth_incidents(spec: &IncidentSpec, grid: &EnvGrid, seed: u64) -> Result<Vec<Incident>> {
    let region = spec.region.unwrap_or_else(|| grid.rect());
    let grid_rect = grid.rect();
    if !(grid_rect.contains(region.min) && grid_rect.contains(region.max)) || region.area() <= 0.0 {
        return Err(invalid(
            "region",
            "must be a non-empty rectangle inside the grid",
        ));
    }
    let latest = spec.latest_start_hour.unwrap_or(grid.nt()).min(grid.nt());
    if latest == 0 {
        return Err(invalid("latest_start_hour", "must be >= 1"));
    }
    let mut rng = rng::seeded(seed);
    Ok((0..spec.count)
        .map(|i| {
            let x = rng::uniform(&mut rng, region.min.x, region.max.x);
            let y = rng::uniform(&mut rng, region.min.y, region.max.y);
            let start_hour = rng::below(&mut rng, latest as u64) as usize;
            Incident {
                id: format!("syn-{i:04}"),
                start_hour,
                ignition: Point2::new(x, y),
                historical_burn_hours: None,
                historical_area_km2: None,
            }
        })
        .collect())
}
