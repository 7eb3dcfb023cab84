//! `firesat` command line. Exit codes: 0 success, 1 invalid input or
//! configuration, 2 failure while running.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use firesat_core::envdata::{synth_env, SynthSpec};
use firesat_core::evolution::simulate_incident;
use firesat_core::linkbudget::{
    capacity, cnr_db, fspl_db, CapacityReport, LinkParams, TbsMap, TrafficModel, UplinkLayout,
};
use firesat_core::sensors::deploy_uniform;
use serde::Serialize;

use crate::config::{InputPaths, RunConfig};
use crate::error::{Context, Error, Result};
use crate::harness::{self, Baseline, SweepInputs};
use crate::io;
use crate::scenario::ScenarioSpec;

const GEO_10DEG_PARAMS: &str = include_str!("../data/table1-10deg.json");
const GEO_90DEG_PARAMS: &str = include_str!("../data/table1-90deg.json");

#[derive(Debug, Parser)]
#[command(
    name = "firesat",
    version,
    about = "Wildfire detection by ground sensors with a GEO NB-IoT uplink"
)]
struct Cli {
    /// JSON run configuration; omitted keys take their defaults.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output directory (overrides `out_dir`).
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,
    /// Worker threads (overrides `workers`).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Base seed for sensor deployments, or the synthesis seed for synth-env.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override any config value, e.g. `--set model.u_max=0.2`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate one incident against one sensor field.
    Simulate {
        /// Incident id.
        #[arg(long)]
        incident: String,
        /// Also write the per-hour circle trace.
        #[arg(long)]
        trace: bool,
        /// Deploy this many sensors uniformly when `inputs.sensors` is unset.
        #[arg(long, default_value_t = 100_000)]
        n_sensors: usize,
    },
    /// Sweep sensor counts and write per-trial and summary CSVs.
    Sweep {
        /// Comma-separated ascending sensor counts.
        #[arg(long, value_delimiter = ',')]
        counts: Option<Vec<usize>>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, value_enum)]
        baseline: Option<Baseline>,
    },
    /// Uplink budget and supportable sensor counts.
    Linkbudget(LinkArgs),
    /// Generate synthetic environmental rasters.
    SynthEnv {
        /// Grid descriptor (`kind`: constant, schedule or random). Writes
        /// only the environment.
        #[arg(long, value_name = "FILE", conflicts_with = "scenario")]
        spec: Option<PathBuf>,
        /// Full scenario descriptor; defaults to the bundled one. Writes
        /// environment, biomass, incidents and a run config pointing at them.
        #[arg(long, value_name = "FILE")]
        scenario: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Preset {
    #[value(name = "10deg")]
    Deg10,
    #[value(name = "90deg")]
    Deg90,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Traffic {
    Periodic,
    EventTriggered,
    All,
}

#[derive(Debug, clap::Args)]
struct LinkArgs {
    /// LinkParams JSON file.
    #[arg(long, value_name = "FILE", conflicts_with = "preset")]
    params: Option<PathBuf>,
    /// Bundled GEO parameter set.
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// TBS table CSV (`min_cnr_db,bits_per_ru`).
    #[arg(long, value_name = "FILE")]
    tbs: Option<PathBuf>,
    #[arg(long, value_enum)]
    traffic: Option<Traffic>,
    #[arg(long)]
    eirp_dbm: Option<f64>,
    #[arg(long)]
    g_over_t_db_k: Option<f64>,
    /// Subcarrier bandwidth.
    #[arg(long)]
    bandwidth_hz: Option<f64>,
    #[arg(long)]
    freq_mhz: Option<f64>,
    #[arg(long)]
    distance_km: Option<f64>,
    #[arg(long)]
    pl_atmos_db: Option<f64>,
    #[arg(long)]
    pl_shadow_db: Option<f64>,
    #[arg(long)]
    pl_scint_db: Option<f64>,
    #[arg(long)]
    pl_polar_db: Option<f64>,
    /// Carrier bandwidth shared by the subcarriers.
    #[arg(long)]
    system_bw_hz: Option<f64>,
    #[arg(long)]
    ru_duration_s: Option<f64>,
}

/// An error and the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub error: Error,
}

fn invalid(error: Error) -> Failure {
    Failure { code: 1, error }
}

fn failed(error: Error) -> Failure {
    Failure { code: 2, error }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.error);
            f.code
        }
    }
}

fn execute(cli: Cli) -> Result<(), Failure> {
    let mut cfg = RunConfig::load(cli.config.as_deref(), &cli.overrides).map_err(invalid)?;
    let out_dir_given = cli.out_dir.is_some();
    if let Some(d) = cli.out_dir {
        cfg.out_dir = d;
    }
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(invalid(Error::Invalid {
                field: "--workers".into(),
                reason: "must be >= 1".into(),
            }));
        }
        cfg.workers = Some(w);
    }
    match cli.command {
        Command::Simulate {
            incident,
            trace,
            n_sensors,
        } => {
            if let Some(s) = cli.seed {
                cfg.sweep.seed = s;
            }
            cmd_simulate(&cfg, &incident, trace, n_sensors)
        }
        Command::Sweep {
            counts,
            trials,
            baseline,
        } => {
            if let Some(s) = cli.seed {
                cfg.sweep.seed = s;
            }
            if let Some(c) = counts {
                cfg.sweep.sensor_counts = c;
            }
            if let Some(t) = trials {
                cfg.sweep.trials = t;
            }
            if let Some(b) = baseline {
                cfg.sweep.baseline = b;
            }
            cfg.validate().map_err(invalid)?;
            cmd_sweep(&cfg)
        }
        Command::Linkbudget(args) => cmd_linkbudget(&cfg, &args, out_dir_given),
        Command::SynthEnv { spec, scenario } => {
            cmd_synth(&cfg, spec.as_deref(), scenario.as_deref(), cli.seed)
        }
    }
}

fn file_stem_safe(id: &str) -> String {
    id.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || "-_.".contains(c) {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn cmd_simulate(cfg: &RunConfig, id: &str, trace: bool, n_sensors: usize) -> Result<(), Failure> {
    let inputs = cfg.load_inputs(false).map_err(invalid)?;
    let incident = inputs
        .incidents
        .iter()
        .find(|i| i.id == id)
        .ok_or_else(|| {
            invalid(Error::invalid(
                "--incident",
                format!("no incident with id {id:?}"),
            ))
        })?;
    let field = match &cfg.inputs.sensors {
        Some(p) => io::read_sensors(p).map_err(invalid)?,
        None => deploy_uniform(n_sensors, cfg.geo.rect(), cfg.sweep.seed)
            .context(|| "sensor deployment".into())
            .map_err(invalid)?,
    };
    let result = simulate_incident(incident, &inputs.env, &field, &cfg.model, &cfg.evolution)
        .context(|| format!("incident {id}"))
        .map_err(failed)?;
    let stem = file_stem_safe(id);
    let json_path = cfg.out_dir.join(format!("incident-{stem}.json"));
    io::write_json(&json_path, &result).map_err(failed)?;
    if trace {
        io::write_trace(&cfg.out_dir.join(format!("trace-{stem}.csv")), &result).map_err(failed)?;
    }
    println!(
        "{id}: {} after {} h, burned area {:.6} km2 -> {}",
        if result.detected {
            "detected"
        } else {
            "not detected"
        },
        result.detection_hour,
        result.burned_area_km2,
        json_path.display()
    );
    Ok(())
}

fn thread_pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        b = b.num_threads(w);
    }
    b.build().map_err(|e| Error::invalid("workers", e))
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    rng: &'static str,
    averaging: String,
    outputs: [&'static str; 2],
    deployment_seeds: Vec<u64>,
    inputs: &'a crate::config::InputSource,
    incidents: usize,
    baseline: &'a harness::BaselineTotals,
    config: &'a RunConfig,
}

fn cmd_sweep(cfg: &RunConfig) -> Result<(), Failure> {
    let inputs = cfg.load_inputs(true).map_err(invalid)?;
    let biomass = inputs.biomass.as_ref().expect("biomass loaded");
    let sweep_inputs = SweepInputs {
        incidents: &inputs.incidents,
        env: &inputs.env,
        biomass,
        model: &cfg.model,
        evolution: &cfg.evolution,
        carbon: &cfg.carbon,
        region: cfg.geo.rect(),
    };
    let pool = thread_pool(cfg.workers).map_err(invalid)?;
    let out = pool
        .install(|| harness::sweep(&sweep_inputs, &cfg.sweep))
        .map_err(failed)?;
    let dir = &cfg.out_dir;
    io::write_atomic(
        &dir.join("sweep.csv"),
        harness::trials_csv(&out, &cfg.sweep).as_bytes(),
    )
    .map_err(failed)?;
    io::write_atomic(
        &dir.join("sweep_summary.csv"),
        harness::summary_csv(&out, &cfg.sweep).as_bytes(),
    )
    .map_err(failed)?;
    let mut echoed = cfg.clone();
    echoed.workers = None;
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        rng: firesat_core::RNG_NAME,
        averaging: format!(
            "summary rows are means over {} trials per sensor count; sweep.csv holds every trial",
            cfg.sweep.trials
        ),
        outputs: ["sweep.csv", "sweep_summary.csv"],
        deployment_seeds: (0..cfg.sweep.trials)
            .map(|t| cfg.sweep.deployment_seed(t))
            .collect(),
        inputs: &inputs.source,
        incidents: inputs.incidents.len(),
        baseline: &out.baseline,
        config: &echoed,
    };
    io::write_json(&dir.join("manifest.json"), &manifest).map_err(failed)?;
    println!(
        "baseline ({:?}): {} h, {} km2, {} t",
        out.baseline.mode,
        out.baseline.burned_hours,
        out.baseline.burned_area_km2,
        out.baseline.carbon_tons
    );
    for r in &out.summary {
        println!(
            "n={:>9}  hours {:>12.2}  area {:>12.4} km2  carbon {:>14.1} t",
            r.n_sensors, r.mean_burned_hours, r.mean_burned_area_km2, r.carbon_tons
        );
    }
    println!("wrote {}", dir.display());
    Ok(())
}

#[derive(Serialize)]
struct LinkReport {
    params: LinkParams,
    layout: UplinkLayout,
    tbs: TbsMap,
    fspl_db: f64,
    cnr_db: f64,
    reports: Vec<CapacityReport>,
}

fn cmd_linkbudget(cfg: &RunConfig, a: &LinkArgs, write_file: bool) -> Result<(), Failure> {
    let mut p = match (&a.params, a.preset) {
        (Some(path), _) => io::read_json::<LinkParams>(path).map_err(invalid)?,
        (None, Some(Preset::Deg10)) => serde_json::from_str(GEO_10DEG_PARAMS).expect("bundled params"),
        (None, Some(Preset::Deg90)) => serde_json::from_str(GEO_90DEG_PARAMS).expect("bundled params"),
        (None, None) => cfg.link.params.clone(),
    };
    let set = |slot: &mut f64, v: Option<f64>| {
        if let Some(v) = v {
            *slot = v;
        }
    };
    set(&mut p.eirp_dbm, a.eirp_dbm);
    set(&mut p.g_over_t_db_k, a.g_over_t_db_k);
    set(&mut p.bandwidth_hz, a.bandwidth_hz);
    set(&mut p.freq_mhz, a.freq_mhz);
    set(&mut p.distance_km, a.distance_km);
    set(&mut p.pl_atmos_db, a.pl_atmos_db);
    set(&mut p.pl_shadow_db, a.pl_shadow_db);
    set(&mut p.pl_scint_db, a.pl_scint_db);
    set(&mut p.pl_polar_db, a.pl_polar_db);
    let mut layout = cfg.link.layout;
    set(&mut layout.system_bw_hz, a.system_bw_hz);
    set(&mut layout.ru_duration_s, a.ru_duration_s);
    p.validate()
        .context(|| "link params".into())
        .map_err(invalid)?;
    let tbs = match &a.tbs {
        Some(path) => io::read_tbs(path),
        None => cfg.tbs(),
    }
    .map_err(invalid)?;
    let traffic: Vec<TrafficModel> = match a.traffic {
        None => cfg.link.traffic.clone(),
        Some(Traffic::Periodic) => vec![TrafficModel::periodic()],
        Some(Traffic::EventTriggered) => vec![TrafficModel::event_triggered()],
        Some(Traffic::All) => vec![TrafficModel::periodic(), TrafficModel::event_triggered()],
    };
    let reports = traffic
        .iter()
        .map(|t| capacity(&p, &tbs, &layout, t))
        .collect::<firesat_core::Result<Vec<_>>>()
        .context(|| "link budget".into())
        .map_err(failed)?;
    let report = LinkReport {
        fspl_db: fspl_db(p.distance_km, p.freq_mhz)
            .context(|| "fspl".into())
            .map_err(failed)?,
        cnr_db: cnr_db(&p).context(|| "cnr".into()).map_err(failed)?,
        params: p,
        layout,
        tbs,
        reports,
    };
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    println!("{text}");
    if write_file {
        io::write_json(&cfg.out_dir.join("linkbudget.json"), &report).map_err(failed)?;
    }
    Ok(())
}

fn cmd_synth(
    cfg: &RunConfig,
    spec: Option<&Path>,
    scenario: Option<&Path>,
    seed: Option<u64>,
) -> Result<(), Failure> {
    let dir = &cfg.out_dir;
    if let Some(path) = spec {
        let s: SynthSpec = io::read_json(path).map_err(invalid)?;
        s.validate()
            .context(|| format!("{}", path.display()))
            .map_err(invalid)?;
        let grid = synth_env(&s, seed.unwrap_or(0))
            .context(|| "synthesis".into())
            .map_err(failed)?;
        let start = io::parse_time(io::DEFAULT_START).expect("default start parses");
        let m = io::save_env(dir, &grid, start).map_err(failed)?;
        println!("wrote {}", m.display());
        return Ok(());
    }
    let mut s = match scenario {
        Some(p) => ScenarioSpec::load(p).map_err(invalid)?,
        None => ScenarioSpec::bundled(),
    };
    if let Some(seed) = seed {
        s.reseed(seed);
    }
    let built = s.build().map_err(invalid)?;
    let env = io::save_env(dir, &built.env, built.start).map_err(failed)?;
    let biomass = io::save_biomass(dir, &built.biomass).map_err(failed)?;
    let incidents = dir.join("incidents.csv");
    io::write_incidents(&incidents, &built.incidents, &cfg.geo, built.start).map_err(failed)?;
    io::write_json(&dir.join("scenario.json"), &s).map_err(failed)?;
    let run_cfg = RunConfig {
        inputs: InputPaths {
            env: Some("env.json".into()),
            biomass: Some("biomass.json".into()),
            incidents: Some("incidents.csv".into()),
            ..InputPaths::default()
        },
        ..cfg.clone()
    };
    io::write_json(&dir.join("run-config.json"), &run_cfg).map_err(failed)?;
    println!(
        "wrote {}, {}, {}",
        env.display(),
        biomass.display(),
        incidents.display()
    );
    Ok(())
}
