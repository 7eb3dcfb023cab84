//! One fire season replayed against one sensor deployment.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::carbon::{average_biomass, CarbonModel};
use crate::envdata::{BiomassGrid, EnvGrid, Incident};
use crate::evolution::{simulate_incident, EvolutionConfig, IncidentResult};
use crate::firekernel::SpreadModel;
use crate::sensors::SensorField;
use crate::{Error, Result};

/// Everything needed to simulate incidents, apart from the sensors.
#[derive(Debug, Clone, Copy)]
pub struct SeasonInputs<'a> {
    pub env: &'a EnvGrid,
    pub biomass: &'a BiomassGrid,
    pub model: &'a SpreadModel,
    pub evolution: &'a EvolutionConfig,
    pub carbon: &'a CarbonModel,
}

/// Season sums.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SeasonTotals {
    pub incidents: usize,
    pub detected: usize,
    pub burned_hours: f64,
    pub burned_area_km2: f64,
    pub carbon_tons: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeasonResult {
    pub results: Vec<IncidentResult>,
    /// Carbon per incident, aligned with `results`.
    pub carbon_tons: Vec<f64>,
    pub totals: SeasonTotals,
}

/// Carbon for one finished incident, averaging biomass over its own final
/// circle. Circles that drifted fully off the biomass raster use the
/// nearest raster cell.
pub fn incident_carbon(
    result: &IncidentResult,
    biomass: &BiomassGrid,
    carbon: &CarbonModel,
) -> Result<f64> {
    if result.burned_area_km2 == 0.0 {
        return Ok(0.0);
    }
    let b_avg = match average_biomass(&result.final_circle, biomass) {
        Ok(b) => b,
        Err(Error::OutsideBiomass) => {
            let (ix, iy) = biomass.cell_of_clamped(result.final_circle.center);
            biomass.value(ix, iy)
        }
        Err(e) => return Err(e),
    };
    carbon.emission_tons(result.burned_area_km2, b_avg)
}

/// Simulates every incident against the same sensor field and sums hours,
/// area and carbon in incident order.
pub fn run_season(
    incidents: &[Incident],
    field: &SensorField,
    inputs: SeasonInputs<'_>,
) -> Result<SeasonResult> {
    let mut results = Vec::with_capacity(incidents.len());
    let mut carbon = Vec::with_capacity(incidents.len());
    let mut totals = SeasonTotals::default();
    for inc in incidents {
        let r = simulate_incident(inc, inputs.env, field, inputs.model, inputs.evolution)?;
        let c = incident_carbon(&r, inputs.biomass, inputs.carbon)?;
        totals.incidents += 1;
        totals.detected += usize::from(r.detected);
        totals.burned_hours += r.detection_hour;
        totals.burned_area_km2 += r.burned_area_km2;
        totals.carbon_tons += c;
        results.push(r);
        carbon.push(c);
    }
    Ok(SeasonResult {
        results,
        carbon_tons: carbon,
        totals,
    })
}

/// Sums of the recorded burn durations and areas, skipping missing fields.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HistoricalTotals {
    pub incidents: usize,
    pub burned_hours: f64,
    pub burned_area_km2: f64,
}

pub fn historical_totals(incidents: &[Incident]) -> HistoricalTotals {
    incidents
        .iter()
        .fold(HistoricalTotals::default(), |mut acc, inc| {
            acc.incidents += 1;
            acc.burned_hours += inc.historical_burn_hours.unwrap_or(0.0);
            acc.burned_area_km2 += inc.historical_area_km2.unwrap_or(0.0);
            acc
        })
}
