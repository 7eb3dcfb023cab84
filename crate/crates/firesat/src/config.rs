//! Run configuration: one JSON document holding every model constant,
//! with defaults for anything left out and `key.path=value` overrides.

use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use firesat_core::carbon::CarbonModel;
use firesat_core::envdata::{BiomassGrid, EnvGrid, GeoTransform, Incident};
use firesat_core::evolution::EvolutionConfig;
use firesat_core::firekernel::SpreadModel;
use firesat_core::linkbudget::{LinkParams, TbsMap, TrafficModel, UplinkLayout};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Context, Error, Result};
use crate::harness::SweepConfig;
use crate::io;
use crate::scenario::ScenarioSpec;

/// Input files. Without `env`, the synthetic scenario (`scenario`, or the
/// bundled one) supplies environment, biomass and incidents.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct InputPaths {
    pub env: Option<PathBuf>,
    pub biomass: Option<PathBuf>,
    pub incidents: Option<PathBuf>,
    pub sensors: Option<PathBuf>,
    pub scenario: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LinkConfig {
    pub params: LinkParams,
    pub tbs: TbsMap,
    /// CSV `min_cnr_db,bits_per_ru`; replaces `tbs` when set.
    pub tbs_file: Option<PathBuf>,
    pub layout: UplinkLayout,
    pub traffic: Vec<TrafficModel>,
}

impl Default for LinkConfig {
    fn default() -> Self {
        Self {
            params: LinkParams::geo_10deg(),
            tbs: TbsMap::default(),
            tbs_file: None,
            layout: UplinkLayout::default(),
            traffic: vec![TrafficModel::periodic(), TrafficModel::event_triggered()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub inputs: InputPaths,
    pub geo: GeoTransform,
    pub model: SpreadModel,
    pub evolution: EvolutionConfig,
    pub carbon: CarbonModel,
    pub sweep: SweepConfig,
    pub link: LinkConfig,
    pub out_dir: PathBuf,
    /// Worker threads; `None` uses every core.
    pub workers: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            inputs: InputPaths::default(),
            geo: GeoTransform::default(),
            model: SpreadModel::default(),
            evolution: EvolutionConfig::default(),
            carbon: CarbonModel::default(),
            sweep: SweepConfig::default(),
            link: LinkConfig::default(),
            out_dir: PathBuf::from("firesat-out"),
            workers: None,
        }
    }
}

const PATH_KEYS: [&[&str]; 6] = [
    &["inputs", "env"],
    &["inputs", "biomass"],
    &["inputs", "incidents"],
    &["inputs", "sensors"],
    &["inputs", "scenario"],
    &["link", "tbs_file"],
];

impl RunConfig {
    /// Defaults, overlaid with `file` (relative paths resolved against its
    /// directory), then with each `key.path=value` override.
    pub fn load(file: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let mut value = serde_json::to_value(Self::default()).expect("default config serializes");
        if let Some(path) = file {
            let mut user: Value = io::read_json(path)?;
            let base = path.parent().unwrap_or(Path::new(""));
            for key in PATH_KEYS {
                if let Some(Value::String(s)) = pointer_mut(&mut user, key) {
                    let p = Path::new(s.as_str());
                    if p.is_relative() {
                        *s = base.join(p).to_string_lossy().into_owned();
                    }
                }
            }
            merge(&mut value, user, "")
                .map_err(|key| Error::parse(path, format!("unknown config key {key:?}")))?;
        }
        for o in overrides {
            apply_override(&mut value, o)?;
        }
        let cfg: RunConfig =
            serde_json::from_value(value).map_err(|e| Error::invalid("config", e))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.geo.validate().context(|| "geo".into())?;
        self.model.validate().context(|| "model".into())?;
        self.evolution.validate().context(|| "evolution".into())?;
        for (field, v) in [
            ("carbon.biomass_expansion", self.carbon.biomass_expansion),
            ("carbon.unit_factor", self.carbon.unit_factor),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(field, "must be finite and > 0"));
            }
        }
        self.sweep.validate()?;
        self.link
            .params
            .validate()
            .context(|| "link.params".into())?;
        for t in &self.link.traffic {
            t.validate()
                .context(|| format!("link.traffic {}", t.name))?;
        }
        if self.workers == Some(0) {
            return Err(Error::invalid("workers", "must be >= 1"));
        }
        Ok(())
    }

    pub fn tbs(&self) -> Result<TbsMap> {
        match &self.link.tbs_file {
            Some(p) => io::read_tbs(p),
            None => Ok(self.link.tbs.clone()),
        }
    }

    /// Loads environment, incidents and (optionally) biomass.
    pub fn load_inputs(&self, need_biomass: bool) -> Result<Inputs> {
        let i = &self.inputs;
        let Some(env_path) = &i.env else {
            let spec = match &i.scenario {
                Some(p) => ScenarioSpec::load(p)?,
                None => ScenarioSpec::bundled(),
            };
            let s = spec.build()?;
            return Ok(Inputs {
                env: s.env,
                biomass: Some(s.biomass),
                incidents: s.incidents,
                start: s.start,
                source: InputSource::Scenario {
                    file: i.scenario.clone(),
                    spec: Box::new(spec),
                },
            });
        };
        let incidents_path = i
            .incidents
            .as_ref()
            .ok_or_else(|| Error::invalid("inputs.incidents", "required when inputs.env is set"))?;
        let env = io::load_env(env_path)?;
        let biomass = match (&i.biomass, need_biomass) {
            (Some(p), _) => Some(io::load_biomass(p)?),
            (None, true) => {
                return Err(Error::invalid(
                    "inputs.biomass",
                    "required when inputs.env is set",
                ))
            }
            (None, false) => None,
        };
        if let Some(b) = &biomass {
            b.check_coverage(&env.grid)
                .context(|| "inputs.biomass".into())?;
        }
        let incidents = io::read_incidents(incidents_path, &self.geo, env.start, &env.grid)?;
        Ok(Inputs {
            env: env.grid,
            biomass,
            incidents,
            start: env.start,
            source: InputSource::Files {
                env: env_path.clone(),
                biomass: i.biomass.clone(),
                incidents: incidents_path.clone(),
            },
        })
    }
}

/// Where the simulation inputs came from, for the run manifest.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputSource {
    Files {
        env: PathBuf,
        biomass: Option<PathBuf>,
        incidents: PathBuf,
    },
    Scenario {
        file: Option<PathBuf>,
        spec: Box<ScenarioSpec>,
    },
}

#[derive(Debug, Clone)]
pub struct Inputs {
    pub env: EnvGrid,
    pub biomass: Option<BiomassGrid>,
    pub incidents: Vec<Incident>,
    pub start: DateTime<Utc>,
    pub source: InputSource,
}

fn pointer_mut<'a>(v: &'a mut Value, key: &[&str]) -> Option<&'a mut Value> {
    key.iter().try_fold(v, |v, k| v.get_mut(*k))
}

/// Overlays `user` on `base`. Objects merge key by key; anything else
/// replaces. Returns the first key absent from `base`.
fn merge(base: &mut Value, user: Value, at: &str) -> Result<(), String> {
    match (base, user) {
        (Value::Object(b), Value::Object(u)) => {
            for (k, v) in u {
                let path = if at.is_empty() {
                    k.clone()
                } else {
                    format!("{at}.{k}")
                };
                match b.get_mut(&k) {
                    Some(slot) if slot.is_object() && v.is_object() => merge(slot, v, &path)?,
                    Some(slot) => *slot = v,
                    None => return Err(path),
                }
            }
            Ok(())
        }
        (b, u) => {
            *b = u;
            Ok(())
        }
    }
}

/// `a.b.c=value`; the value is parsed as JSON, falling back to a string.
fn apply_override(root: &mut Value, spec: &str) -> Result<()> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| Error::invalid("--set", format!("{spec:?} is not KEY=VALUE")))?;
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let parts: Vec<&str> = key.split('.').collect();
    let slot = pointer_mut(root, &parts)
        .ok_or_else(|| Error::invalid("--set", format!("unknown config key {key:?}")))?;
    *slot = value;
    Ok(())
}
