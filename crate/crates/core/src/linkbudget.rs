//! GEO NB-IoT uplink budget and sensor capacity.
//!
//! ```text
//! CNR  = EIRP_dBW + G/T - FSPL - L_atm - L_shadow - L_scint - L_pol - 10 log10(BW) - k
//! FSPL = 32.45 + 20 log10(d_km) + 20 log10(f_MHz)
//! ```
//!
//! with Boltzmann's constant k = -228.6 dBW/K/Hz.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, non_negative, positive};
use crate::{math, Error, Result};

/// Boltzmann constant (dBW/K/Hz).
pub const BOLTZMANN_DBW_K_HZ: f64 = -228.6;

/// Free-space path loss constant for km and MHz.
pub const FSPL_CONSTANT_DB: f64 = 32.45;

/// Uplink parameters, one column of the GEO link table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkParams {
    pub eirp_dbm: f64,
    pub g_over_t_db_k: f64,
    /// Subcarrier bandwidth (Hz).
    pub bandwidth_hz: f64,
    pub freq_mhz: f64,
    pub distance_km: f64,
    pub pl_atmos_db: f64,
    pub pl_shadow_db: f64,
    pub pl_scint_db: f64,
    pub pl_polar_db: f64,
    /// Informational only.
    #[serde(default)]
    pub elevation_deg: Option<f64>,
}

impl LinkParams {
    /// 10° elevation, slant range 40581 km.
    pub fn geo_10deg() -> Self {
        Self {
            eirp_dbm: 23.0,
            g_over_t_db_k: 19.0,
            bandwidth_hz: 3750.0,
            freq_mhz: 1500.0,
            distance_km: 40581.0,
            pl_atmos_db: 0.16,
            pl_shadow_db: 3.0,
            pl_scint_db: 2.2,
            pl_polar_db: 3.0,
            elevation_deg: Some(10.0),
        }
    }

    /// Satellite overhead, slant range 35786 km.
    pub fn geo_90deg() -> Self {
        Self {
            distance_km: 35786.0,
            elevation_deg: Some(90.0),
            ..Self::geo_10deg()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (field, v) in [
            ("eirp_dbm", self.eirp_dbm),
            ("g_over_t_db_k", self.g_over_t_db_k),
        ] {
            if !v.is_finite() {
                return Err(invalid(field, "must be finite"));
            }
        }
        positive("bandwidth_hz", self.bandwidth_hz)?;
        positive("freq_mhz", self.freq_mhz)?;
        positive("distance_km", self.distance_km)?;
        non_negative("pl_atmos_db", self.pl_atmos_db)?;
        non_negative("pl_shadow_db", self.pl_shadow_db)?;
        non_negative("pl_scint_db", self.pl_scint_db)?;
        non_negative("pl_polar_db", self.pl_polar_db)?;
        Ok(())
    }
}

/// Sensor reporting pattern.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrafficModel {
    #[serde(default)]
    pub name: String,
    pub reports_per_day: f64,
    pub payload_bytes: f64,
}

impl TrafficModel {
    /// Two 50-byte reports a day.
    pub fn periodic() -> Self {
        Self {
            name: "periodic".into(),
            reports_per_day: 2.0,
            payload_bytes: 50.0,
        }
    }

    /// One 50-byte report a minute while a fire is in view.
    pub fn event_triggered() -> Self {
        Self {
            name: "event_triggered".into(),
            reports_per_day: 1440.0,
            payload_bytes: 50.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive("reports_per_day", self.reports_per_day)?;
        positive("payload_bytes", self.payload_bytes)?;
        Ok(())
    }
}

/// One TBS threshold: at or above `min_cnr_db` an RU carries `bits_per_ru`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TbsRow {
    pub min_cnr_db: f64,
    pub bits_per_ru: u32,
}

/// CNR-to-transport-block map, strictly increasing in both columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<TbsRow>", into = "Vec<TbsRow>")]
pub struct TbsMap {
    rows: Vec<TbsRow>,
}

impl Default for TbsMap {
    /// Single-tone anchor: 144 bits per RU from 8 dB.
    fn default() -> Self {
        Self {
            rows: alloc::vec![TbsRow {
                min_cnr_db: 8.0,
                bits_per_ru: 144,
            }],
        }
    }
}

impl TbsMap {
    pub fn new(rows: Vec<TbsRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(invalid("tbs map", "needs at least one row"));
        }
        if rows.iter().any(|r| !r.min_cnr_db.is_finite()) {
            return Err(invalid("tbs map", "thresholds must be finite"));
        }
        let increasing = rows
            .windows(2)
            .all(|w| w[0].min_cnr_db < w[1].min_cnr_db && w[0].bits_per_ru < w[1].bits_per_ru);
        if !increasing {
            return Err(invalid(
                "tbs map",
                "rows must strictly increase in both columns",
            ));
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[TbsRow] {
        &self.rows
    }

    /// Largest block whose threshold is at or below `cnr_db`.
    pub fn lookup(&self, cnr_db: f64) -> Result<u32> {
        self.rows
            .iter()
            .rev()
            .find(|r| r.min_cnr_db <= cnr_db)
            .map(|r| r.bits_per_ru)
            .ok_or(Error::LinkInfeasible {
                cnr_db,
                min_cnr_db: self.rows[0].min_cnr_db,
            })
    }
}

impl TryFrom<Vec<TbsRow>> for TbsMap {
    type Error = Error;
    fn try_from(rows: Vec<TbsRow>) -> Result<Self> {
        Self::new(rows)
    }
}

impl From<TbsMap> for Vec<TbsRow> {
    fn from(m: TbsMap) -> Self {
        m.rows
    }
}

/// Carrier layout of the uplink.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct UplinkLayout {
    pub system_bw_hz: f64,
    pub ru_duration_s: f64,
}

impl Default for UplinkLayout {
    /// 180 kHz carrier, 32 ms single-tone resource units.
    fn default() -> Self {
        Self {
            system_bw_hz: 180_000.0,
            ru_duration_s: 0.032,
        }
    }
}

/// Capacity figures for one traffic model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityReport {
    pub traffic: String,
    pub cnr_db: f64,
    pub bits_per_ru: u32,
    pub peak_rate_bps: f64,
    pub per_sensor_bps: f64,
    pub supportable_sensors: u64,
}

pub fn fspl_db(distance_km: f64, freq_mhz: f64) -> Result<f64> {
    positive("distance_km", distance_km)?;
    positive("freq_mhz", freq_mhz)?;
    Ok(FSPL_CONSTANT_DB + 20.0 * math::log10(distance_km) + 20.0 * math::log10(freq_mhz))
}

/// Received uplink carrier-to-noise ratio (dB). EIRP is converted from dBm.
pub fn cnr_db(p: &LinkParams) -> Result<f64> {
    p.validate()?;
    let eirp_dbw = p.eirp_dbm - 30.0;
    Ok(eirp_dbw + p.g_over_t_db_k
        - fspl_db(p.distance_km, p.freq_mhz)?
        - p.pl_atmos_db
        - p.pl_shadow_db
        - p.pl_scint_db
        - p.pl_polar_db
        - 10.0 * math::log10(p.bandwidth_hz)
        - BOLTZMANN_DBW_K_HZ)
}

pub fn bits_per_ru(cnr_db: f64, map: &TbsMap) -> Result<u32> {
    map.lookup(cnr_db)
}

/// `bits_ru * (system_bw / subcarrier) / ru_duration` (bit/s).
pub fn peak_rate_bps(
    bits_ru: u32,
    system_bw_hz: f64,
    subcarrier_hz: f64,
    ru_duration_s: f64,
) -> Result<f64> {
    positive("system_bw_hz", system_bw_hz)?;
    positive("subcarrier_hz", subcarrier_hz)?;
    positive("ru_duration_s", ru_duration_s)?;
    let tones = system_bw_hz / subcarrier_hz;
    if (tones - math::round(tones)).abs() > 1e-9 * tones.max(1.0) || tones < 0.5 {
        return Err(invalid(
            "system_bw_hz",
            alloc::format!(
                "{system_bw_hz} Hz is not a multiple of the {subcarrier_hz} Hz subcarrier"
            ),
        ));
    }
    Ok(f64::from(bits_ru) * math::round(tones) / ru_duration_s)
}

/// Average bit rate of one sensor (bit/s).
pub fn per_sensor_bps(t: &TrafficModel) -> Result<f64> {
    t.validate()?;
    Ok(t.payload_bytes * 8.0 * t.reports_per_day / 86_400.0)
}

/// `floor(peak / per_sensor)`. Quotients within 1e-9 relative of an integer
/// count as that integer, so exact ratios survive float rounding.
pub fn supportable_sensors(peak_bps: f64, per_sensor: f64) -> Result<u64> {
    non_negative("peak_bps", peak_bps)?;
    positive("per_sensor_bps", per_sensor)?;
    let q = peak_bps / per_sensor;
    let r = math::round(q);
    Ok(if (q - r).abs() <= 1e-9 * q.max(1.0) {
        r as u64
    } else {
        math::floor(q) as u64
    })
}

/// Full chain from link parameters to supportable sensor count.
pub fn capacity(
    params: &LinkParams,
    map: &TbsMap,
    layout: &UplinkLayout,
    traffic: &TrafficModel,
) -> Result<CapacityReport> {
    let cnr = cnr_db(params)?;
    let bits = bits_per_ru(cnr, map)?;
    let peak = peak_rate_bps(
        bits,
        layout.system_bw_hz,
        params.bandwidth_hz,
        layout.ru_duration_s,
    )?;
    let per = per_sensor_bps(traffic)?;
    Ok(CapacityReport {
        traffic: traffic.name.clone(),
        cnr_db: cnr,
        bits_per_ru: bits,
        peak_rate_bps: peak,
        per_sensor_bps: per,
        supportable_sensors: supportable_sensors(peak, per)?,
    })
}
