//! Synthetic scenarios: environment, biomass and incidents from one descriptor.

use std::path::Path;

use chrono::{DateTime, Utc};
use firesat_core::envdata::{
    synth_biomass, synth_env, synth_incidents, BiomassSpec, IncidentSpec, SynthSpec,
};
use firesat_core::envdata::{BiomassGrid, EnvGrid, Incident};
use serde::{Deserialize, Serialize};

use crate::error::{Context, Error, Result};
use crate::io;

/// The California-sized synthetic season shipped with the tool.
pub const BUNDLED_SCENARIO: &str = include_str!("../data/california-synthetic.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub start_iso8601: Option<String>,
    pub env: SynthSpec,
    pub env_seed: u64,
    pub biomass: BiomassSpec,
    pub biomass_seed: u64,
    pub incidents: IncidentSpec,
    pub incident_seed: u64,
}

impl ScenarioSpec {
    pub fn bundled() -> Self {
        serde_json::from_str(BUNDLED_SCENARIO).expect("bundled scenario is valid JSON")
    }

    pub fn load(path: &Path) -> Result<Self> {
        io::read_json(path)
    }

    /// Replaces the three seeds with `seed`, `seed + 1` and `seed + 2`.
    pub fn reseed(&mut self, seed: u64) {
        self.env_seed = seed;
        self.biomass_seed = seed.wrapping_add(1);
        self.incident_seed = seed.wrapping_add(2);
    }

    pub fn start(&self) -> Result<DateTime<Utc>> {
        let s = self.start_iso8601.as_deref().unwrap_or(io::DEFAULT_START);
        io::parse_time(s)
            .ok_or_else(|| Error::invalid("start_iso8601", format!("cannot parse {s:?}")))
    }

    pub fn build(&self) -> Result<Scenario> {
        let env = synth_env(&self.env, self.env_seed).context(|| "scenario env".into())?;
        let biomass = synth_biomass(&self.biomass, self.biomass_seed)
            .context(|| "scenario biomass".into())?;
        let incidents = synth_incidents(&self.incidents, &env, self.incident_seed)
            .context(|| "scenario incidents".into())?;
        Ok(Scenario {
            env,
            biomass,
            incidents,
            start: self.start()?,
        })
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub env: EnvGrid,
    pub biomass: BiomassGrid,
    pub incidents: Vec<Incident>,
    pub start: DateTime<Utc>,
}
