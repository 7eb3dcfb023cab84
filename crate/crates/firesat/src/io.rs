//! On-disk formats: JSON manifests with little-endian `f32` rasters,
//! incident and sensor CSVs, TBS tables and traces.

use std::fs;
use std::path::{Path, PathBuf};

use chrono::{DateTime, NaiveDate, NaiveDateTime, Utc};
use firesat_core::envdata::{BiomassGrid, EnvGrid, GeoTransform, GridShape, Incident};
use firesat_core::evolution::IncidentResult;
use firesat_core::linkbudget::{TbsMap, TbsRow};
use firesat_core::sensors::SensorField;
use firesat_core::{Point2, Rect};
use serde::{Deserialize, Serialize};

use crate::error::{Context, Error, Result};

/// 1 acre in km².
pub const ACRE_KM2: f64 = 0.00404686;

/// Time of grid hour 0 when a manifest does not say.
pub const DEFAULT_START: &str = "2020-01-01T00:00:00Z";

/// Writes through a temporary file in the same directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let name = path.file_name().ok_or_else(|| {
        Error::invalid(
            "output path",
            format!("{} has no file name", path.display()),
        )
    })?;
    let tmp = dir.join(format!(
        ".{}.tmp-{}",
        name.to_string_lossy(),
        std::process::id()
    ));
    fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::io(path, e)
    })
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::parse(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::parse(path, e))?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

pub fn read_raster(path: &Path, expected_len: usize) -> Result<Vec<f32>> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.len() != expected_len * 4 {
        return Err(Error::parse(
            path,
            format!(
                "expected {expected_len} f32 values ({} bytes), found {} bytes",
                expected_len * 4,
                bytes.len()
            ),
        ));
    }
    Ok(bytes
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect())
}

pub fn raster_bytes(values: &[f32]) -> Vec<u8> {
    values.iter().flat_map(|v| v.to_le_bytes()).collect()
}

fn resolve(base: &Path, file: &Path) -> PathBuf {
    if file.is_absolute() {
        file.to_path_buf()
    } else {
        base.parent().unwrap_or(Path::new(".")).join(file)
    }
}

/// Parses RFC 3339, or a naive `YYYY-MM-DD[ T]HH:MM[:SS]` / `YYYY-MM-DD`
/// taken as UTC.
pub fn parse_time(s: &str) -> Option<DateTime<Utc>> {
    let s = s.trim();
    if let Ok(t) = DateTime::parse_from_rfc3339(s) {
        return Some(t.with_timezone(&Utc));
    }
    for fmt in [
        "%Y-%m-%dT%H:%M:%S",
        "%Y-%m-%d %H:%M:%S",
        "%Y-%m-%dT%H:%M",
        "%Y-%m-%d %H:%M",
    ] {
        if let Ok(t) = NaiveDateTime::parse_from_str(s, fmt) {
            return Some(t.and_utc());
        }
    }
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .ok()
        .and_then(|d| d.and_hms_opt(0, 0, 0))
        .map(|t| t.and_utc())
}

pub fn format_time(t: DateTime<Utc>) -> String {
    t.format("%Y-%m-%dT%H:%M:%SZ").to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvFiles {
    pub u10: PathBuf,
    pub v10: PathBuf,
    pub swvl1: PathBuf,
}

/// Environmental grid manifest. Raster paths are relative to the manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvManifest {
    pub nx: usize,
    pub ny: usize,
    pub nt: usize,
    pub spacing_km: f64,
    #[serde(default)]
    pub origin: Point2,
    pub files: EnvFiles,
    /// Wall-clock time of hour 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_iso8601: Option<String>,
}

impl EnvManifest {
    pub fn shape(&self) -> GridShape {
        GridShape {
            nx: self.nx,
            ny: self.ny,
            nt: self.nt,
            spacing_km: self.spacing_km,
            origin: self.origin,
        }
    }
}

/// A loaded grid and the wall-clock time of its first hour.
#[derive(Debug, Clone)]
pub struct LoadedEnv {
    pub grid: EnvGrid,
    pub start: DateTime<Utc>,
}

pub fn load_env(manifest_path: &Path) -> Result<LoadedEnv> {
    let m: EnvManifest = read_json(manifest_path)?;
    let shape = m.shape();
    shape
        .validate()
        .context(|| format!("{}", manifest_path.display()))?;
    let start_text = m.start_iso8601.as_deref().unwrap_or(DEFAULT_START);
    let start = parse_time(start_text)
        .ok_or_else(|| Error::parse(manifest_path, format!("bad start_iso8601 {start_text:?}")))?;
    let n = shape.raster_len();
    let u10 = read_raster(&resolve(manifest_path, &m.files.u10), n)?;
    let v10 = read_raster(&resolve(manifest_path, &m.files.v10), n)?;
    let swvl1 = read_raster(&resolve(manifest_path, &m.files.swvl1), n)?;
    let grid =
        EnvGrid::new(shape, u10, v10, swvl1).context(|| format!("{}", manifest_path.display()))?;
    Ok(LoadedEnv { grid, start })
}

/// Writes `env.json` plus `u10.f32`, `v10.f32`, `swvl1.f32` into `dir`.
pub fn save_env(dir: &Path, grid: &EnvGrid, start: DateTime<Utc>) -> Result<PathBuf> {
    let shape = grid.shape();
    let m = EnvManifest {
        nx: shape.nx,
        ny: shape.ny,
        nt: shape.nt,
        spacing_km: shape.spacing_km,
        origin: shape.origin,
        files: EnvFiles {
            u10: "u10.f32".into(),
            v10: "v10.f32".into(),
            swvl1: "swvl1.f32".into(),
        },
        start_iso8601: Some(format_time(start)),
    };
    write_atomic(&dir.join("u10.f32"), &raster_bytes(grid.u10()))?;
    write_atomic(&dir.join("v10.f32"), &raster_bytes(grid.v10()))?;
    write_atomic(&dir.join("swvl1.f32"), &raster_bytes(grid.swvl1()))?;
    let path = dir.join("env.json");
    write_json(&path, &m)?;
    Ok(path)
}

/// Biomass manifest; values in Mg/ha, row-major `[y][x]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiomassManifest {
    pub nx: usize,
    pub ny: usize,
    pub spacing_km: f64,
    pub file: PathBuf,
    #[serde(default)]
    pub origin: Point2,
}

pub fn load_biomass(manifest_path: &Path) -> Result<BiomassGrid> {
    let m: BiomassManifest = read_json(manifest_path)?;
    let values = read_raster(&resolve(manifest_path, &m.file), m.nx.saturating_mul(m.ny))?;
    BiomassGrid::new(m.nx, m.ny, m.spacing_km, m.origin, values)
        .context(|| format!("{}", manifest_path.display()))
}

/// Writes `biomass.json` and `biomass.f32` into `dir`.
pub fn save_biomass(dir: &Path, grid: &BiomassGrid) -> Result<PathBuf> {
    let m = BiomassManifest {
        nx: grid.nx(),
        ny: grid.ny(),
        spacing_km: grid.spacing_km(),
        file: "biomass.f32".into(),
        origin: grid.origin(),
    };
    write_atomic(&dir.join("biomass.f32"), &raster_bytes(grid.values()))?;
    let path = dir.join("biomass.json");
    write_json(&path, &m)?;
    Ok(path)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncidentRow {
    pub id: String,
    pub start_iso8601: String,
    pub lat_deg: f64,
    pub lon_deg: f64,
    #[serde(default)]
    pub contained_iso8601: Option<String>,
    #[serde(default)]
    pub area_acre: Option<f64>,
}

/// Reads an incident CSV and places each row on the grid. Start times are
/// floored to the hour; recorded durations keep their fractional hours.
pub fn read_incidents(
    path: &Path,
    geo: &GeoTransform,
    start: DateTime<Utc>,
    grid: &EnvGrid,
) -> Result<Vec<Incident>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let mut out = Vec::new();
    for (i, rec) in rdr.deserialize::<IncidentRow>().enumerate() {
        let line = i + 2;
        let row = rec.map_err(|e| Error::parse(path, format!("row {line}: {e}")))?;
        let inc = incident_from_row(&row, geo, start, grid).map_err(|reason| {
            Error::parse(path, format!("row {line} (id {}): {reason}", row.id))
        })?;
        out.push(inc);
    }
    Ok(out)
}

fn incident_from_row(
    row: &IncidentRow,
    geo: &GeoTransform,
    start: DateTime<Utc>,
    grid: &EnvGrid,
) -> Result<Incident, String> {
    if row.id.is_empty() {
        return Err("empty id".into());
    }
    let ignition = geo
        .to_planar(row.lat_deg, row.lon_deg)
        .map_err(|e| e.to_string())?;
    let t0 = parse_time(&row.start_iso8601)
        .ok_or_else(|| format!("bad start time {:?}", row.start_iso8601))?;
    let offset_s = (t0 - start).num_seconds();
    if offset_s < 0 {
        return Err(format!(
            "start {} is before the grid start {}",
            row.start_iso8601,
            format_time(start)
        ));
    }
    let start_hour = (offset_s / 3600) as usize;
    if start_hour >= grid.nt() {
        return Err(format!(
            "start hour {start_hour} is past the grid end ({} h)",
            grid.nt()
        ));
    }
    let historical_burn_hours = match row.contained_iso8601.as_deref() {
        None | Some("") => None,
        Some(s) => {
            let t1 = parse_time(s).ok_or_else(|| format!("bad contained time {s:?}"))?;
            let ms = (t1 - t0).num_milliseconds();
            if ms < 0 {
                return Err("contained before start".into());
            }
            Some(ms as f64 / 3_600_000.0)
        }
    };
    let historical_area_km2 = match row.area_acre {
        None => None,
        Some(a) if a.is_finite() && a >= 0.0 => Some(a * ACRE_KM2),
        Some(a) => return Err(format!("bad area_acre {a}")),
    };
    let inc = Incident {
        id: row.id.clone(),
        start_hour,
        ignition,
        historical_burn_hours,
        historical_area_km2,
    };
    inc.validate(grid).map_err(|e| e.to_string())?;
    Ok(inc)
}

/// Inverse of the equirectangular map, for writing planar incidents back out.
pub fn planar_to_geo(geo: &GeoTransform, p: Point2) -> (f64, f64) {
    let lat = geo.lat_min + p.y / geo.height_km * (geo.lat_max - geo.lat_min);
    let lon = geo.lon_min + p.x / geo.width_km * (geo.lon_max - geo.lon_min);
    (lat, lon)
}

pub fn write_incidents(
    path: &Path,
    incidents: &[Incident],
    geo: &GeoTransform,
    start: DateTime<Utc>,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "id",
        "start_iso8601",
        "lat_deg",
        "lon_deg",
        "contained_iso8601",
        "area_acre",
    ])
    .map_err(|e| csv_error(path, e))?;
    for inc in incidents {
        let t0 = start + chrono::Duration::hours(inc.start_hour as i64);
        let (lat, lon) = planar_to_geo(geo, inc.ignition);
        let contained = inc
            .historical_burn_hours
            .map(|h| {
                format_time(t0 + chrono::Duration::milliseconds((h * 3_600_000.0).round() as i64))
            })
            .unwrap_or_default();
        let area = inc
            .historical_area_km2
            .map(|a| (a / ACRE_KM2).to_string())
            .unwrap_or_default();
        w.write_record([
            inc.id.clone(),
            format_time(t0),
            lat.to_string(),
            lon.to_string(),
            contained,
            area,
        ])
        .map_err(|e| csv_error(path, e))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::parse(path, e))?;
    write_atomic(path, &bytes)
}

const REGION_TAG: &str = "# region=";

/// Sensor positions as `x_km,y_km`, preceded by a `# region=` comment line
/// carrying the deployment rectangle. Floats use shortest round-trip form.
pub fn write_sensors(path: &Path, field: &SensorField) -> Result<()> {
    let r = field.region();
    let mut text = format!(
        "{REGION_TAG}{},{},{},{}\nx_km,y_km\n",
        r.min.x, r.min.y, r.max.x, r.max.y
    );
    for p in field.positions() {
        text.push_str(&format!("{},{}\n", p.x, p.y));
    }
    write_atomic(path, text.as_bytes())
}

#[derive(Deserialize)]
struct SensorRow {
    x_km: f64,
    y_km: f64,
}

pub fn read_sensors(path: &Path) -> Result<SensorField> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let region = match text.lines().next().and_then(|l| l.strip_prefix(REGION_TAG)) {
        Some(spec) => {
            let v: Vec<f64> = spec
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| Error::parse(path, format!("bad region line: {e}")))?;
            if v.len() != 4 {
                return Err(Error::parse(path, "region line needs xmin,ymin,xmax,ymax"));
            }
            Some(Rect::new(Point2::new(v[0], v[1]), Point2::new(v[2], v[3])))
        }
        None => None,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut positions = Vec::new();
    for (i, rec) in rdr.deserialize::<SensorRow>().enumerate() {
        let r = rec.map_err(|e| Error::parse(path, format!("sensor {i}: {e}")))?;
        positions.push(Point2::new(r.x_km, r.y_km));
    }
    let field = match region {
        Some(region) => SensorField::new(positions, region, None),
        None => SensorField::from_positions(positions),
    };
    field.context(|| format!("{}", path.display()))
}

pub fn read_tbs(path: &Path) -> Result<TbsMap> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let rows = rdr
        .deserialize::<TbsRow>()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| csv_error(path, e))?;
    TbsMap::new(rows).context(|| format!("{}", path.display()))
}

/// Per-hour trace: `t,center_x_km,center_y_km,radius_km,n_frontier`.
pub fn write_trace(path: &Path, result: &IncidentResult) -> Result<()> {
    let mut text = String::from("t,center_x_km,center_y_km,radius_km,n_frontier\n");
    for row in &result.circle_trace {
        text.push_str(&format!(
            "{},{},{},{},{}\n",
            row.hour,
            row.circle.center.x,
            row.circle.center.y,
            row.circle.radius_km,
            row.n_frontier
        ));
    }
    write_atomic(path, text.as_bytes())
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.kind() {
        csv::ErrorKind::Io(io) if io.kind() == std::io::ErrorKind::NotFound => {
            Error::Missing { path: path.into() }
        }
        _ => Error::parse(path, e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use firesat_core::sensors::deploy_uniform;

    fn grid(nt: usize) -> EnvGrid {
        let shape = GridShape {
            nx: 101,
            ny: 111,
            nt,
            spacing_km: 10.0,
            origin: Point2::ORIGIN,
        };
        EnvGrid::uniform(shape, 1.0, 2.0, 0.1).unwrap()
    }

    #[test]
    fn times() {
        let t = parse_time("2020-08-16T04:30:00Z").unwrap();
        assert_eq!(parse_time("2020-08-16 04:30").unwrap(), t);
        assert_eq!(parse_time("2020-08-16T06:30:00+02:00").unwrap(), t);
        assert_eq!(
            format_time(parse_time("2020-01-02").unwrap()),
            "2020-01-02T00:00:00Z"
        );
        assert!(parse_time("yesterday").is_none());
    }

    #[test]
    fn env_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let shape = GridShape {
            nx: 3,
            ny: 2,
            nt: 4,
            spacing_km: 5.0,
            origin: Point2::new(1.0, 2.0),
        };
        let n = shape.raster_len();
        let u: Vec<f32> = (0..n).map(|i| i as f32 * 0.5 - 3.0).collect();
        let v: Vec<f32> = (0..n).map(|i| -(i as f32) * 0.25).collect();
        let s: Vec<f32> = (0..n).map(|i| i as f32 / n as f32).collect();
        let g = EnvGrid::new(shape, u, v, s).unwrap();
        let start = parse_time("2021-06-01T00:00:00Z").unwrap();
        let path = save_env(dir.path(), &g, start).unwrap();
        let back = load_env(&path).unwrap();
        assert_eq!(back.grid, g);
        assert_eq!(back.start, start);
    }

    #[test]
    fn env_size_mismatch_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let g = grid(2);
        let path = save_env(dir.path(), &g, parse_time(DEFAULT_START).unwrap()).unwrap();
        fs::write(dir.path().join("v10.f32"), [0u8; 12]).unwrap();
        let err = load_env(&path).unwrap_err().to_string();
        assert!(err.contains("v10.f32") && err.contains("bytes"), "{err}");
    }

    #[test]
    fn missing_raster_names_path() {
        let dir = tempfile::tempdir().unwrap();
        let path = save_env(dir.path(), &grid(2), parse_time(DEFAULT_START).unwrap()).unwrap();
        fs::remove_file(dir.path().join("swvl1.f32")).unwrap();
        match load_env(&path) {
            Err(Error::Missing { path }) => assert!(path.ends_with("swvl1.f32")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn biomass_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let b = BiomassGrid::new(
            3,
            2,
            1.0,
            Point2::new(0.5, 0.0),
            vec![1.0, 2.0, 3.0, 4.0, 5.5, 0.0],
        )
        .unwrap();
        let path = save_biomass(dir.path(), &b).unwrap();
        assert_eq!(load_biomass(&path).unwrap(), b);
    }

    #[test]
    fn incidents_parse() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("inc.csv");
        let geo = GeoTransform::default();
        fs::write(
            &path,
            format!(
                "id,start_iso8601,lat_deg,lon_deg,contained_iso8601,area_acre\n\
                 corner,2020-01-01T00:00:00Z,{},{},,\n\
                 mid,2020-01-03T05:59:59Z,37.0,-120.0,2020-01-04T06:15:00Z,1000\n",
                geo.lat_min, geo.lon_min
            ),
        )
        .unwrap();
        let start = parse_time(DEFAULT_START).unwrap();
        let incs = read_incidents(&path, &geo, start, &grid(100)).unwrap();
        assert_eq!(incs.len(), 2);
        assert_eq!(incs[0].start_hour, 0);
        assert_eq!(incs[0].ignition, Point2::ORIGIN);
        assert_eq!(incs[0].historical_burn_hours, None);
        assert_eq!(incs[1].start_hour, 53);
        assert!(
            (incs[1].historical_burn_hours.unwrap() - (24.0 + 15.0 / 60.0 + 1.0 / 3600.0)).abs()
                < 1e-12
        );
        assert_eq!(incs[1].historical_area_km2, Some(1000.0 * ACRE_KM2));
    }

    #[test]
    fn incident_errors_name_row() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("inc.csv");
        fs::write(
            &path,
            "id,start_iso8601,lat_deg,lon_deg\nok,2020-01-01T00:00:00Z,37,-120\nbad,2020-01-01T00:00:00Z,37,-100\n",
        )
        .unwrap();
        let start = parse_time(DEFAULT_START).unwrap();
        let err = read_incidents(&path, &GeoTransform::default(), start, &grid(10))
            .unwrap_err()
            .to_string();
        assert!(err.contains("row 3") && err.contains("bad"), "{err}");
        fs::write(
            &path,
            "id,start_iso8601,lat_deg,lon_deg\nlate,2020-02-01T00:00:00Z,37,-120\n",
        )
        .unwrap();
        let err = read_incidents(&path, &GeoTransform::default(), start, &grid(10))
            .unwrap_err()
            .to_string();
        assert!(err.contains("past the grid end"), "{err}");
    }

    #[test]
    fn incidents_write_read() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("inc.csv");
        let geo = GeoTransform::default();
        let g = grid(50);
        let incs = vec![Incident {
            id: "a".into(),
            start_hour: 7,
            ignition: Point2::new(123.25, 456.5),
            historical_burn_hours: Some(10.25),
            historical_area_km2: Some(2.0),
        }];
        let start = parse_time(DEFAULT_START).unwrap();
        write_incidents(&path, &incs, &geo, start).unwrap();
        let back = read_incidents(&path, &geo, start, &g).unwrap();
        assert_eq!(back[0].start_hour, 7);
        assert!(back[0].ignition.distance(incs[0].ignition) < 1e-9);
        assert_eq!(back[0].historical_burn_hours, Some(10.25));
        assert!((back[0].historical_area_km2.unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn sensors_lossless() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        let field = deploy_uniform(500, Rect::from_extents(1000.0, 1100.0), 99).unwrap();
        write_sensors(&path, &field).unwrap();
        let back = read_sensors(&path).unwrap();
        assert_eq!(back.positions(), field.positions());
        assert_eq!(back.region(), field.region());
        fs::write(&path, "x_km,y_km\n1.5,2\n3,4.25\n").unwrap();
        let plain = read_sensors(&path).unwrap();
        assert_eq!(
            plain.region(),
            Rect::new(Point2::new(1.5, 2.0), Point2::new(3.0, 4.25))
        );
    }

    #[test]
    fn tbs_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tbs.csv");
        fs::write(&path, "min_cnr_db,bits_per_ru\n0.0,32\n8.0,144\n").unwrap();
        let m = read_tbs(&path).unwrap();
        assert_eq!(m.lookup(5.0).unwrap(), 32);
        fs::write(&path, "min_cnr_db,bits_per_ru\n8.0,144\n0.0,32\n").unwrap();
        assert!(read_tbs(&path).is_err());
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub").join("x.txt");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(fs::read(&path).unwrap(), b"two");
        assert_eq!(fs::read_dir(path.parent().unwrap()).unwrap().count(), 1);
    }
}
