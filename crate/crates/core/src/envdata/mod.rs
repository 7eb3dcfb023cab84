//! Gridded environmental inputs: hourly wind and soil wetness, static
//! biomass, the geographic-to-planar transform and fire incidents.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, non_negative, positive};
use crate::geom::{Point2, Rect};
use crate::math;
use crate::{Error, Result};

mod synth;

pub use synth::{
    synth_biomass, synth_env, synth_incidents, BiomassSpec, FieldRange, IncidentSpec, SynthSpec,
    WindSegment,
};

/// Hourly raster of 10 m wind components and volumetric soil water.
///
/// Rasters are stored flat, row-major `[t][y][x]`, matching the on-disk
/// layout. The grid covers the closed rectangle
/// `origin + [0, nx*spacing] x [0, ny*spacing]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvGrid {
    nx: usize,
    ny: usize,
    nt: usize,
    spacing_km: f64,
    origin: Point2,
    u10: Vec<f32>,
    v10: Vec<f32>,
    swvl1: Vec<f32>,
}

/// Values of one grid cell at one hour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvSample {
    pub u10: f64,
    pub v10: f64,
    pub swvl1: f64,
}

/// Grid dimensions and placement shared by the manifest formats.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridShape {
    pub nx: usize,
    pub ny: usize,
    pub nt: usize,
    pub spacing_km: f64,
    #[serde(default)]
    pub origin: Point2,
}

impl GridShape {
    pub fn validate(&self) -> Result<()> {
        for (field, n) in [("nx", self.nx), ("ny", self.ny), ("nt", self.nt)] {
            if n == 0 {
                return Err(invalid(field, "must be >= 1"));
            }
        }
        positive("spacing_km", self.spacing_km)?;
        if !self.origin.is_finite() {
            return Err(invalid("origin", "must be finite"));
        }
        Ok(())
    }

    /// Number of values in one full `[t][y][x]` raster.
    pub fn raster_len(&self) -> usize {
        self.nx * self.ny * self.nt
    }
}

impl EnvGrid {
    /// Builds a grid, checking dimensions, finiteness and the soil-wetness range.
    pub fn new(shape: GridShape, u10: Vec<f32>, v10: Vec<f32>, swvl1: Vec<f32>) -> Result<Self> {
        shape.validate()?;
        let expected = shape.raster_len();
        for (what, r) in [("u10", &u10), ("v10", &v10), ("swvl1", &swvl1)] {
            if r.len() != expected {
                return Err(Error::DimensionMismatch {
                    what,
                    expected,
                    found: r.len(),
                });
            }
            if let Some(index) = r.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { what, index });
            }
        }
        if let Some(index) = swvl1.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::SoilWetnessRange {
                value: swvl1[index],
                index,
            });
        }
        Ok(Self {
            nx: shape.nx,
            ny: shape.ny,
            nt: shape.nt,
            spacing_km: shape.spacing_km,
            origin: shape.origin,
            u10,
            v10,
            swvl1,
        })
    }

    /// A grid with the same values in every cell and hour.
    pub fn uniform(shape: GridShape, u10: f32, v10: f32, swvl1: f32) -> Result<Self> {
        let n = shape.raster_len();
        Self::new(
            shape,
            alloc::vec![u10; n],
            alloc::vec![v10; n],
            alloc::vec![swvl1; n],
        )
    }

    pub fn shape(&self) -> GridShape {
        GridShape {
            nx: self.nx,
            ny: self.ny,
            nt: self.nt,
            spacing_km: self.spacing_km,
            origin: self.origin,
        }
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn nt(&self) -> usize {
        self.nt
    }

    pub fn spacing_km(&self) -> f64 {
        self.spacing_km
    }

    pub fn u10(&self) -> &[f32] {
        &self.u10
    }

    pub fn v10(&self) -> &[f32] {
        &self.v10
    }

    pub fn swvl1(&self) -> &[f32] {
        &self.swvl1
    }

    /// The closed planar rectangle covered by the grid.
    pub fn rect(&self) -> Rect {
        Rect::new(
            self.origin,
            self.origin
                + Point2::new(
                    self.nx as f64 * self.spacing_km,
                    self.ny as f64 * self.spacing_km,
                ),
        )
    }

    /// Column/row of the cell holding `xy`. Points on a shared edge go to
    /// the lower-index cell.
    pub fn cell_of(&self, xy: Point2) -> Result<(usize, usize)> {
        if !xy.is_finite() || !self.rect().contains(xy) {
            return Err(Error::OutOfBounds { x: xy.x, y: xy.y });
        }
        Ok((
            edge_low_index(xy.x - self.origin.x, self.spacing_km, self.nx),
            edge_low_index(xy.y - self.origin.y, self.spacing_km, self.ny),
        ))
    }

    /// Center of cell `(ix, iy)`.
    pub fn cell_center(&self, ix: usize, iy: usize) -> Point2 {
        self.origin
            + Point2::new(
                (ix as f64 + 0.5) * self.spacing_km,
                (iy as f64 + 0.5) * self.spacing_km,
            )
    }

    fn at(&self, ix: usize, iy: usize, t: usize) -> EnvSample {
        let i = (t * self.ny + iy) * self.nx + ix;
        EnvSample {
            u10: f64::from(self.u10[i]),
            v10: f64::from(self.v10[i]),
            swvl1: f64::from(self.swvl1[i]),
        }
    }

    /// Nearest-cell lookup of the values at `xy` and hour `t`.
    pub fn sample(&self, xy: Point2, t: usize) -> Result<EnvSample> {
        if t >= self.nt {
            return Err(Error::TimeOutOfRange {
                hour: t,
                nt: self.nt,
            });
        }
        let (ix, iy) = self.cell_of(xy)?;
        Ok(self.at(ix, iy, t))
    }

    /// Like [`EnvGrid::sample`], but positions outside the rectangle read
    /// the nearest edge cell. Fire fronts may leave the data domain.
    pub fn sample_clamped(&self, xy: Point2, t: usize) -> Result<EnvSample> {
        let xy = if xy.is_finite() {
            self.rect().clamp(xy)
        } else {
            return Err(Error::OutOfBounds { x: xy.x, y: xy.y });
        };
        self.sample(xy, t)
    }
}

/// Free-function form of [`EnvGrid::sample`].
pub fn sample_env(grid: &EnvGrid, xy: Point2, t: usize) -> Result<EnvSample> {
    grid.sample(xy, t)
}

// ceil(offset / spacing) - 1, so exact multiples of the spacing land in the
// lower cell. Assumes offset is already inside [0, n * spacing].
fn edge_low_index(offset: f64, spacing: f64, n: usize) -> usize {
    let k = math::ceil(offset / spacing) - 1.0;
    if k <= 0.0 {
        0
    } else {
        (k as usize).min(n - 1)
    }
}

/// Static above-ground live biomass raster (Mg/ha), row-major `[y][x]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiomassGrid {
    nx: usize,
    ny: usize,
    spacing_km: f64,
    origin: Point2,
    values: Vec<f32>,
}

impl BiomassGrid {
    pub fn new(
        nx: usize,
        ny: usize,
        spacing_km: f64,
        origin: Point2,
        values: Vec<f32>,
    ) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(invalid("nx/ny", "biomass grid must have at least one cell"));
        }
        positive("spacing_km", spacing_km)?;
        if values.len() != nx * ny {
            return Err(Error::DimensionMismatch {
                what: "biomass",
                expected: nx * ny,
                found: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "biomass",
                index,
            });
        }
        if let Some(i) = values.iter().position(|v| *v < 0.0) {
            return Err(invalid(
                "biomass",
                alloc::format!("negative value {} at flat index {i}", values[i]),
            ));
        }
        Ok(Self {
            nx,
            ny,
            spacing_km,
            origin,
            values,
        })
    }

    pub fn uniform(
        nx: usize,
        ny: usize,
        spacing_km: f64,
        origin: Point2,
        value: f32,
    ) -> Result<Self> {
        Self::new(nx, ny, spacing_km, origin, alloc::vec![value; nx * ny])
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn spacing_km(&self) -> f64 {
        self.spacing_km
    }

    pub fn origin(&self) -> Point2 {
        self.origin
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    pub fn value(&self, ix: usize, iy: usize) -> f64 {
        f64::from(self.values[iy * self.nx + ix])
    }

    pub fn rect(&self) -> Rect {
        Rect::new(
            self.origin,
            self.origin
                + Point2::new(
                    self.nx as f64 * self.spacing_km,
                    self.ny as f64 * self.spacing_km,
                ),
        )
    }

    pub fn cell_center(&self, ix: usize, iy: usize) -> Point2 {
        self.origin
            + Point2::new(
                (ix as f64 + 0.5) * self.spacing_km,
                (iy as f64 + 0.5) * self.spacing_km,
            )
    }

    /// Cell holding `xy`, clamping points outside the raster to the nearest edge cell.
    pub fn cell_of_clamped(&self, xy: Point2) -> (usize, usize) {
        let p = self.rect().clamp(xy);
        (
            edge_low_index(p.x - self.origin.x, self.spacing_km, self.nx),
            edge_low_index(p.y - self.origin.y, self.spacing_km, self.ny),
        )
    }

    /// Mean over every cell of the raster.
    pub fn mean(&self) -> f64 {
        let sum: f64 = self.values.iter().map(|v| f64::from(*v)).sum();
        sum / self.values.len() as f64
    }

    /// Checks that the raster spans the same rectangle as `env`, to within
    /// one environmental cell on each axis.
    pub fn check_coverage(&self, env: &EnvGrid) -> Result<()> {
        let (a, b) = (self.rect(), env.rect());
        let tol = env.spacing_km() + 1e-9;
        let close = (a.min.x - b.min.x).abs() <= tol
            && (a.min.y - b.min.y).abs() <= tol
            && (a.width() - b.width()).abs() <= tol
            && (a.height() - b.height()).abs() <= tol;
        if close {
            Ok(())
        } else {
            Err(invalid(
                "biomass extent",
                alloc::format!(
                    "{}x{} km does not match environment grid {}x{} km",
                    a.width(),
                    a.height(),
                    b.width(),
                    b.height()
                ),
            ))
        }
    }
}

/// Equirectangular map from a lat/lon box to a planar rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoTransform {
    pub lat_min: f64,
    pub lat_max: f64,
    pub lon_min: f64,
    pub lon_max: f64,
    pub width_km: f64,
    pub height_km: f64,
}

impl Default for GeoTransform {
    /// California box 32°32'N–42°N, 124°26'W–114°8'W on a 1000 x 1100 km rectangle.
    fn default() -> Self {
        Self {
            lat_min: 32.0 + 32.0 / 60.0,
            lat_max: 42.0,
            lon_min: -(124.0 + 26.0 / 60.0),
            lon_max: -(114.0 + 8.0 / 60.0),
            width_km: 1000.0,
            height_km: 1100.0,
        }
    }
}

impl GeoTransform {
    pub fn validate(&self) -> Result<()> {
        if !(self.lat_min < self.lat_max) {
            return Err(invalid("lat_min/lat_max", "lat_min must be < lat_max"));
        }
        if !(self.lon_min < self.lon_max) {
            return Err(invalid("lon_min/lon_max", "lon_min must be < lon_max"));
        }
        positive("width_km", self.width_km)?;
        positive("height_km", self.height_km)?;
        Ok(())
    }

    /// The planar rectangle `[0, width_km] x [0, height_km]`.
    pub fn rect(&self) -> Rect {
        Rect::from_extents(self.width_km, self.height_km)
    }

    pub fn to_planar(&self, lat: f64, lon: f64) -> Result<Point2> {
        geo_to_planar(self, lat, lon)
    }
}

/// Maps latitude/longitude (degrees) into the planar rectangle.
pub fn geo_to_planar(gt: &GeoTransform, lat: f64, lon: f64) -> Result<Point2> {
    gt.validate()?;
    let inside =
        (gt.lat_min..=gt.lat_max).contains(&lat) && (gt.lon_min..=gt.lon_max).contains(&lon);
    if !inside {
        return Err(Error::GeoOutOfBounds { lat, lon });
    }
    Ok(Point2::new(
        (lon - gt.lon_min) / (gt.lon_max - gt.lon_min) * gt.width_km,
        (lat - gt.lat_min) / (gt.lat_max - gt.lat_min) * gt.height_km,
    ))
}

/// A historical or synthetic fire outbreak.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Incident {
    pub id: String,
    /// Index into the environmental time axis.
    pub start_hour: usize,
    pub ignition: Point2,
    #[serde(default)]
    pub historical_burn_hours: Option<f64>,
    #[serde(default)]
    pub historical_area_km2: Option<f64>,
}

impl Incident {
    /// Checks the incident against the grid it will be simulated on.
    pub fn validate(&self, grid: &EnvGrid) -> Result<()> {
        if self.start_hour >= grid.nt() {
            return Err(Error::TimeOutOfRange {
                hour: self.start_hour,
                nt: grid.nt(),
            });
        }
        if !self.ignition.is_finite() || !grid.rect().contains(self.ignition) {
            return Err(Error::OutOfBounds {
                x: self.ignition.x,
                y: self.ignition.y,
            });
        }
        if let Some(h) = self.historical_burn_hours {
            non_negative("historical_burn_hours", h)?;
        }
        if let Some(a) = self.historical_area_km2 {
            non_negative("historical_area_km2", a)?;
        }
        Ok(())
    }
}
