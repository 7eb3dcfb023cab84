//! Burned area to carbon tonnage, price and savings.
//!
//! Emitted carbon (t) is `area_km2 * 1.2 * b_avg * 100`: the 1.2 adds
//! below-ground biomass at 20% of above-ground, and 100 converts
//! km² x Mg/ha to tonnes.

use serde::{Deserialize, Serialize};

use crate::envdata::BiomassGrid;
use crate::error::non_negative;
use crate::evolution::BurnCircle;
use crate::{math, Error, Result};

/// Emission constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CarbonModel {
    /// Total over above-ground biomass.
    pub biomass_expansion: f64,
    /// km² x Mg/ha to t.
    pub unit_factor: f64,
}

impl Default for CarbonModel {
    fn default() -> Self {
        Self {
            biomass_expansion: 1.2,
            unit_factor: 100.0,
        }
    }
}

impl CarbonModel {
    pub fn emission_tons(&self, area_km2: f64, b_avg: f64) -> Result<f64> {
        let a = non_negative("area_km2", area_km2)?;
        let b = non_negative("b_avg", b_avg)?;
        Ok(a * self.biomass_expansion * b * self.unit_factor)
    }
}

/// Carbon and price for one burned area.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmissionReport {
    pub area_km2: f64,
    pub b_avg_mg_ha: f64,
    pub carbon_tons: f64,
    pub price_usd: f64,
}

impl EmissionReport {
    pub fn new(
        model: &CarbonModel,
        area_km2: f64,
        b_avg_mg_ha: f64,
        usd_per_ton: f64,
    ) -> Result<Self> {
        let carbon_tons = model.emission_tons(area_km2, b_avg_mg_ha)?;
        Ok(Self {
            area_km2,
            b_avg_mg_ha,
            carbon_tons,
            price_usd: carbon_price(carbon_tons, usd_per_ton)?,
        })
    }
}

/// Baseline cost against a sensor scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SavingsReport {
    pub baseline_price_usd: f64,
    pub scenario_price_usd: f64,
    pub n_sensors: u64,
    pub unit_cost_usd: f64,
    pub savings_usd: f64,
}

/// Mean biomass (Mg/ha) over the cells whose centres lie in the closed
/// circle. A circle too small to hold any cell centre uses the cell under
/// its centre (the nearest edge cell if the centre is off the raster).
pub fn average_biomass(circle: &BurnCircle, bio: &BiomassGrid) -> Result<f64> {
    let (c, r) = (circle.center, circle.radius_km);
    if !c.is_finite() || !(r >= 0.0) || !bio.rect().intersects_disk(c, r) {
        return Err(Error::OutsideBiomass);
    }
    let s = bio.spacing_km();
    let o = bio.origin();
    let range = |lo: f64, hi: f64, origin: f64, n: usize| {
        let a = math::floor((lo - origin) / s - 0.5).max(0.0) as usize;
        let b = (math::ceil((hi - origin) / s - 0.5).max(0.0) as usize).min(n - 1);
        (a, b)
    };
    let (x0, x1) = range(c.x - r, c.x + r, o.x, bio.nx());
    let (y0, y1) = range(c.y - r, c.y + r, o.y, bio.ny());
    let r2 = r * r;
    let mut sum = 0.0;
    let mut count = 0usize;
    for iy in y0..=y1 {
        for ix in x0..=x1 {
            if bio.cell_center(ix, iy).distance_sq(c) <= r2 {
                sum += bio.value(ix, iy);
                count += 1;
            }
        }
    }
    if count > 0 {
        Ok(sum / count as f64)
    } else {
        let (ix, iy) = bio.cell_of_clamped(c);
        Ok(bio.value(ix, iy))
    }
}

/// Tonnes of carbon from `area_km2` at mean biomass `b_avg` (Mg/ha).
pub fn emission_tons(area_km2: f64, b_avg: f64) -> Result<f64> {
    CarbonModel::default().emission_tons(area_km2, b_avg)
}

pub fn carbon_price(tons: f64, usd_per_ton: f64) -> Result<f64> {
    Ok(non_negative("tons", tons)? * non_negative("usd_per_ton", usd_per_ton)?)
}

/// `baseline - (scenario + n_sensors * unit_cost)`; negative when the
/// deployment costs more than it saves.
pub fn savings(
    baseline_usd: f64,
    scenario_usd: f64,
    n_sensors: u64,
    unit_cost_usd: f64,
) -> SavingsReport {
    SavingsReport {
        baseline_price_usd: baseline_usd,
        scenario_price_usd: scenario_usd,
        n_sensors,
        unit_cost_usd,
        savings_usd: baseline_usd - (scenario_usd + n_sensors as f64 * unit_cost_usd),
    }
}
