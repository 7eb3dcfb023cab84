//! Sensor-count sweeps: many seasons, one deployment per (count, trial).

use firesat_core::carbon::{carbon_price, savings, CarbonModel};
use firesat_core::envdata::{BiomassGrid, EnvGrid, Incident};
use firesat_core::evolution::{simulate_incident, EvolutionConfig};
use firesat_core::firekernel::SpreadModel;
use firesat_core::season::{historical_totals, incident_carbon};
use firesat_core::sensors::{deploy_uniform, SensorField};
use firesat_core::Rect;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Context, Error, Result};

/// What the sensor scenarios are compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Baseline {
    /// Sums of the incident file's recorded durations and areas; carbon
    /// uses the mean of the whole biomass raster.
    Historical,
    /// The same incidents simulated without sensors, to the hour cap.
    #[default]
    SimulatedZeroSensor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    /// Ascending sensor counts.
    pub sensor_counts: Vec<usize>,
    /// Deployments per count.
    pub trials: usize,
    /// Trial `i` deploys with seed `seed + i`.
    pub seed: u64,
    pub usd_per_ton: f64,
    pub unit_sensor_cost_usd: Vec<f64>,
    /// Burn-time cap (h) for incidents without a recorded duration.
    pub cap_hours: f64,
    pub baseline: Baseline,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            sensor_counts: vec![10_000, 100_000, 1_000_000],
            trials: 10,
            seed: 0,
            usd_per_ton: 20.0,
            unit_sensor_cost_usd: vec![10.0, 20.0, 50.0, 100.0],
            cap_hours: 240.0,
            baseline: Baseline::default(),
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sensor_counts.is_empty() {
            return Err(Error::invalid("sweep.sensor_counts", "must not be empty"));
        }
        if self.sensor_counts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(
                "sweep.sensor_counts",
                "must be strictly ascending",
            ));
        }
        if self.trials == 0 {
            return Err(Error::invalid("sweep.trials", "must be >= 1"));
        }
        if !(self.usd_per_ton.is_finite() && self.usd_per_ton >= 0.0) {
            return Err(Error::invalid(
                "sweep.usd_per_ton",
                "must be finite and >= 0",
            ));
        }
        if self
            .unit_sensor_cost_usd
            .iter()
            .any(|c| !(c.is_finite() && *c >= 0.0))
        {
            return Err(Error::invalid(
                "sweep.unit_sensor_cost_usd",
                "costs must be finite and >= 0",
            ));
        }
        if !(self.cap_hours.is_finite() && self.cap_hours >= 0.0) {
            return Err(Error::invalid("sweep.cap_hours", "must be finite and >= 0"));
        }
        Ok(())
    }

    pub fn deployment_seed(&self, trial: usize) -> u64 {
        self.seed.wrapping_add(trial as u64)
    }

    /// Savings column names, one per unit cost.
    pub fn savings_columns(&self, prefix: &str) -> Vec<String> {
        self.unit_sensor_cost_usd
            .iter()
            .map(|c| format!("{prefix}savings_usd@cost{c}"))
            .collect()
    }
}

/// The scenario shared by every trial.
#[derive(Debug, Clone, Copy)]
pub struct SweepInputs<'a> {
    pub incidents: &'a [Incident],
    pub env: &'a EnvGrid,
    pub biomass: &'a BiomassGrid,
    pub model: &'a SpreadModel,
    pub evolution: &'a EvolutionConfig,
    pub carbon: &'a CarbonModel,
    /// Sensor deployment rectangle.
    pub region: Rect,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeasonSums {
    pub burned_hours: f64,
    pub burned_area_km2: f64,
    pub carbon_tons: f64,
    pub detected: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineTotals {
    pub mode: Baseline,
    pub burned_hours: f64,
    pub burned_area_km2: f64,
    pub carbon_tons: f64,
    pub carbon_price_usd: f64,
    /// Raster-wide mean biomass used for the historical baseline.
    pub mean_biomass_mg_ha: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub n_sensors: usize,
    pub trial: usize,
    pub deployment_seed: u64,
    pub burned_hours: f64,
    pub burned_area_km2: f64,
    pub carbon_tons: f64,
    pub carbon_price_usd: f64,
    pub detected: usize,
    /// One entry per unit sensor cost.
    pub savings_usd: Vec<f64>,
}

/// Means over the trials of one sensor count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n_sensors: usize,
    pub trials: usize,
    pub mean_burned_hours: f64,
    pub sd_burned_hours: f64,
    pub mean_burned_area_km2: f64,
    pub sd_burned_area_km2: f64,
    pub carbon_tons: f64,
    pub carbon_price_usd: f64,
    pub savings_usd: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub baseline: BaselineTotals,
    pub trials: Vec<TrialRow>,
    pub summary: Vec<SweepRow>,
}

impl SweepOutput {
    pub fn trials_for(&self, n_sensors: usize) -> impl Iterator<Item = &TrialRow> {
        self.trials.iter().filter(move |r| r.n_sensors == n_sensors)
    }
}

/// One season against one field. Incidents may run in parallel; sums are
/// taken in incident order.
pub fn season_sums(
    inputs: &SweepInputs<'_>,
    field: &SensorField,
    evolution: &EvolutionConfig,
) -> Result<SeasonSums> {
    let per_incident = inputs
        .incidents
        .par_iter()
        .map(|inc| {
            let r = simulate_incident(inc, inputs.env, field, inputs.model, evolution)
                .context(|| format!("incident {}", inc.id))?;
            let c = incident_carbon(&r, inputs.biomass, inputs.carbon)
                .context(|| format!("incident {}", inc.id))?;
            Ok((r.detection_hour, r.burned_area_km2, c, r.detected))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut s = SeasonSums {
        burned_hours: 0.0,
        burned_area_km2: 0.0,
        carbon_tons: 0.0,
        detected: 0,
    };
    for (h, a, c, d) in per_incident {
        s.burned_hours += h;
        s.burned_area_km2 += a;
        s.carbon_tons += c;
        s.detected += usize::from(d);
    }
    Ok(s)
}

/// Evolution settings used by the sweep: the configured ones with the
/// sweep's hour cap.
pub fn sweep_evolution(inputs: &SweepInputs<'_>, cfg: &SweepConfig) -> EvolutionConfig {
    EvolutionConfig {
        max_hours: cfg.cap_hours,
        ..*inputs.evolution
    }
}

pub fn baseline(inputs: &SweepInputs<'_>, cfg: &SweepConfig) -> Result<BaselineTotals> {
    match cfg.baseline {
        Baseline::Historical => {
            if let Some(inc) = inputs
                .incidents
                .iter()
                .find(|i| i.historical_burn_hours.is_none() || i.historical_area_km2.is_none())
            {
                return Err(Error::invalid(
                    "sweep.baseline",
                    format!("historical baseline needs duration and area for every incident; {} lacks them", inc.id),
                ));
            }
            let h = historical_totals(inputs.incidents);
            let b = inputs.biomass.mean();
            let carbon_tons = inputs
                .carbon
                .emission_tons(h.burned_area_km2, b)
                .context(|| "historical baseline".into())?;
            Ok(BaselineTotals {
                mode: Baseline::Historical,
                burned_hours: h.burned_hours,
                burned_area_km2: h.burned_area_km2,
                carbon_tons,
                carbon_price_usd: carbon_price(carbon_tons, cfg.usd_per_ton)
                    .context(|| "baseline price".into())?,
                mean_biomass_mg_ha: Some(b),
            })
        }
        Baseline::SimulatedZeroSensor => {
            let empty = SensorField::empty(inputs.region).context(|| "sensor region".into())?;
            let s = season_sums(inputs, &empty, &sweep_evolution(inputs, cfg))?;
            Ok(BaselineTotals {
                mode: Baseline::SimulatedZeroSensor,
                burned_hours: s.burned_hours,
                burned_area_km2: s.burned_area_km2,
                carbon_tons: s.carbon_tons,
                carbon_price_usd: carbon_price(s.carbon_tons, cfg.usd_per_ton)
                    .context(|| "baseline price".into())?,
                mean_biomass_mg_ha: None,
            })
        }
    }
}

/// Runs every (count, trial) pair on the current rayon pool. The result
/// does not depend on the pool size.
pub fn sweep(inputs: &SweepInputs<'_>, cfg: &SweepConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    inputs.evolution.validate().context(|| "evolution".into())?;
    let base = baseline(inputs, cfg)?;
    let evolution = sweep_evolution(inputs, cfg);
    let jobs: Vec<(usize, usize)> = cfg
        .sensor_counts
        .iter()
        .flat_map(|&n| (0..cfg.trials).map(move |t| (n, t)))
        .collect();
    let trials = jobs
        .par_iter()
        .map(|&(n, trial)| {
            let seed = cfg.deployment_seed(trial);
            let field =
                deploy_uniform(n, inputs.region, seed).context(|| "sensor deployment".into())?;
            let s = season_sums(inputs, &field, &evolution)?;
            let price =
                carbon_price(s.carbon_tons, cfg.usd_per_ton).context(|| "carbon price".into())?;
            Ok(TrialRow {
                n_sensors: n,
                trial,
                deployment_seed: seed,
                burned_hours: s.burned_hours,
                burned_area_km2: s.burned_area_km2,
                carbon_tons: s.carbon_tons,
                carbon_price_usd: price,
                detected: s.detected,
                savings_usd: cfg
                    .unit_sensor_cost_usd
                    .iter()
                    .map(|&c| savings(base.carbon_price_usd, price, n as u64, c).savings_usd)
                    .collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let summary = cfg
        .sensor_counts
        .iter()
        .map(|&n| {
            summarize(
                n,
                trials.iter().filter(|r| r.n_sensors == n),
                cfg.unit_sensor_cost_usd.len(),
            )
        })
        .collect();
    Ok(SweepOutput {
        baseline: base,
        trials,
        summary,
    })
}

fn summarize<'a>(n: usize, rows: impl Iterator<Item = &'a TrialRow>, n_costs: usize) -> SweepRow {
    let rows: Vec<&TrialRow> = rows.collect();
    let hours: Vec<f64> = rows.iter().map(|r| r.burned_hours).collect();
    let area: Vec<f64> = rows.iter().map(|r| r.burned_area_km2).collect();
    let col = |f: &dyn Fn(&TrialRow) -> f64| mean(&rows.iter().map(|r| f(r)).collect::<Vec<_>>());
    SweepRow {
        n_sensors: n,
        trials: rows.len(),
        mean_burned_hours: mean(&hours),
        sd_burned_hours: std_dev(&hours),
        mean_burned_area_km2: mean(&area),
        sd_burned_area_km2: std_dev(&area),
        carbon_tons: col(&|r| r.carbon_tons),
        carbon_price_usd: col(&|r| r.carbon_price_usd),
        savings_usd: (0..n_costs).map(|i| col(&|r| r.savings_usd[i])).collect(),
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation; 0 for fewer than two values.
pub fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Welch's unequal-variance t test of `mean(a) > mean(b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WelchTest {
    pub t: f64,
    pub df: f64,
    /// One-sided p-value.
    pub p_value: f64,
}

pub fn welch_greater(a: &[f64], b: &[f64]) -> WelchTest {
    let (ma, mb) = (mean(a), mean(b));
    let va = std_dev(a).powi(2) / a.len() as f64;
    let vb = std_dev(b).powi(2) / b.len() as f64;
    let se2 = va + vb;
    if se2 == 0.0 {
        let p = if ma > mb { 0.0 } else { 1.0 };
        let t = if ma > mb {
            f64::INFINITY
        } else if ma < mb {
            f64::NEG_INFINITY
        } else {
            0.0
        };
        return WelchTest {
            t,
            df: f64::INFINITY,
            p_value: p,
        };
    }
    let t = (ma - mb) / se2.sqrt();
    let df = se2 * se2
        / (va * va / (a.len() as f64 - 1.0).max(1.0) + vb * vb / (b.len() as f64 - 1.0).max(1.0));
    let p_value = match StudentsT::new(0.0, 1.0, df) {
        Ok(dist) => dist.sf(t),
        Err(_) => f64::NAN,
    };
    WelchTest { t, df, p_value }
}

/// Per-trial CSV (`n_sensors,trial,burned_hours,...,savings_usd@cost*`).
pub fn trials_csv(out: &SweepOutput, cfg: &SweepConfig) -> String {
    let mut header: Vec<String> = [
        "n_sensors",
        "trial",
        "burned_hours",
        "burned_area_km2",
        "carbon_tons",
        "carbon_price_usd",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend(cfg.savings_columns(""));
    let mut text = header.join(",");
    text.push('\n');
    for r in &out.trials {
        let mut cells = vec![
            r.n_sensors.to_string(),
            r.trial.to_string(),
            r.burned_hours.to_string(),
            r.burned_area_km2.to_string(),
            r.carbon_tons.to_string(),
            r.carbon_price_usd.to_string(),
        ];
        cells.extend(r.savings_usd.iter().map(f64::to_string));
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    text
}

/// Per-count summary CSV.
pub fn summary_csv(out: &SweepOutput, cfg: &SweepConfig) -> String {
    let mut header: Vec<String> = [
        "n_sensors",
        "trials",
        "mean_burned_hours",
        "sd_burned_hours",
        "mean_burned_area_km2",
        "sd_burned_area_km2",
        "mean_carbon_tons",
        "mean_carbon_price_usd",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend(cfg.savings_columns("mean_"));
    let mut text = header.join(",");
    text.push('\n');
    for r in &out.summary {
        let mut cells = vec![
            r.n_sensors.to_string(),
            r.trials.to_string(),
            r.mean_burned_hours.to_string(),
            r.sd_burned_hours.to_string(),
            r.mean_burned_area_km2.to_string(),
            r.sd_burned_area_km2.to_string(),
            r.carbon_tons.to_string(),
            r.carbon_price_usd.to_string(),
        ];
        cells.extend(r.savings_usd.iter().map(f64::to_string));
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    text
}
