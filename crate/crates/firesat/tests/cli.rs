use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use firesat::io;

fn firesat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_firesat"))
        .args(args)
        .output()
        .expect("spawn firesat")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const SMALL_SCENARIO: &str = r#"{
  "name": "small",
  "start_iso8601": "2020-07-01T00:00:00Z",
  "env": {
    "kind": "random", "nx": 20, "ny": 22, "nt": 120, "spacing_km": 50.0,
    "u10": {"min": -20.0, "max": 20.0}, "v10": {"min": -20.0, "max": 20.0},
    "swvl1": {"min": 0.0, "max": 0.3}, "modes": 4, "length_scale_km": 400.0, "time_scale_h": 24.0
  },
  "env_seed": 1,
  "biomass": {"nx": 100, "ny": 110, "spacing_km": 10.0, "range": {"min": 10.0, "max": 80.0}},
  "biomass_seed": 2,
  "incidents": {"count": 8, "region": {"min": {"x": 0.0, "y": 0.0}, "max": {"x": 1000.0, "y": 1100.0}},
                "latest_start_hour": 60},
  "incident_seed": 3
}"#;

fn small_scenario(dir: &Path) -> String {
    let p = dir.join("scenario.json");
    fs::write(&p, SMALL_SCENARIO).unwrap();
    p.to_string_lossy().into_owned()
}

fn report_json(o: &Output) -> serde_json::Value {
    assert!(o.status.success(), "{}", stderr(o));
    serde_json::from_str(&stdout(o)).unwrap()
}

#[test]
fn linkbudget_presets() {
    let r = report_json(&firesat(&["linkbudget", "--preset", "10deg"]));
    assert!((r["cnr_db"].as_f64().unwrap() - 8.3714).abs() <= 0.02);
    assert_eq!(r["reports"][0]["bits_per_ru"], 144);
    assert_eq!(r["reports"][0]["peak_rate_bps"], 216000.0);
    let r = report_json(&firesat(&["linkbudget", "--preset", "90deg"]));
    assert!((r["cnr_db"].as_f64().unwrap() - 9.4636).abs() <= 0.02);
}

#[test]
fn linkbudget_params_file_and_flags() {
    let params = concat!(env!("CARGO_MANIFEST_DIR"), "/data/table1-10deg.json");
    let r = report_json(&firesat(&[
        "linkbudget",
        "--params",
        params,
        "--system-bw-hz",
        "360000",
    ]));
    assert_eq!(r["reports"][0]["peak_rate_bps"], 432000.0);
    let r = report_json(&firesat(&[
        "linkbudget",
        "--distance-km",
        "35786",
        "--traffic",
        "event-triggered",
    ]));
    assert!((r["cnr_db"].as_f64().unwrap() - 9.4636).abs() <= 0.02);
    assert_eq!(r["reports"].as_array().unwrap().len(), 1);
    assert_eq!(r["reports"][0]["supportable_sensors"], 32400);
}

#[test]
fn linkbudget_infeasible_is_runtime_failure() {
    let dir = tempfile::tempdir().unwrap();
    let tbs = dir.path().join("tbs.csv");
    fs::write(&tbs, "min_cnr_db,bits_per_ru\n20.0,1000\n").unwrap();
    let o = firesat(&["linkbudget", "--tbs", tbs.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let o = firesat(&["linkbudget", "--freq-mhz=-1"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stderr(&o).contains("freq_mhz"));
}

#[test]
fn missing_env_file_exits_1_naming_path() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nowhere").join("env.json");
    let inc = dir.path().join("inc.csv");
    fs::write(&inc, "id,start_iso8601,lat_deg,lon_deg\n").unwrap();
    let o = firesat(&[
        "--set",
        &format!("inputs.env=\"{}\"", missing.display()),
        "--set",
        &format!("inputs.incidents=\"{}\"", inc.display()),
        "simulate",
        "--incident",
        "x",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains(&missing.display().to_string()),
        "{}",
        stderr(&o)
    );
}

#[test]
fn bad_usage_and_config_exit_1() {
    assert_eq!(firesat(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        firesat(&["--set", "model.nope=1", "linkbudget"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        firesat(&["--workers", "0", "linkbudget"]).status.code(),
        Some(1)
    );
    let o = firesat(&["sweep", "--counts", "100,10"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("sensor_counts"));
    assert_eq!(firesat(&["--help"]).status.code(), Some(0));
}

#[test]
fn synth_scenario_then_simulate_with_trace() {
    let dir = tempfile::tempdir().unwrap();
    let scen = small_scenario(dir.path());
    let out = dir.path().join("scen");
    let o = firesat(&[
        "--out-dir",
        out.to_str().unwrap(),
        "synth-env",
        "--scenario",
        &scen,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    for f in [
        "env.json",
        "u10.f32",
        "v10.f32",
        "swvl1.f32",
        "biomass.json",
        "biomass.f32",
        "incidents.csv",
        "run-config.json",
    ] {
        assert!(out.join(f).exists(), "{f}");
    }
    let cfg = out.join("run-config.json");
    let sim_dir = dir.path().join("sim");
    let o = firesat(&[
        "--config",
        cfg.to_str().unwrap(),
        "--out-dir",
        sim_dir.to_str().unwrap(),
        "--set",
        "evolution.max_hours=30",
        "simulate",
        "--incident",
        "syn-0003",
        "--n-sensors",
        "10",
        "--trace",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let result: serde_json::Value = io::read_json(&sim_dir.join("incident-syn-0003.json")).unwrap();
    let trace = fs::read_to_string(sim_dir.join("trace-syn-0003.csv")).unwrap();
    let mut lines = trace.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,center_x_km,center_y_km,radius_km,n_frontier"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), result["circle_trace"].as_array().unwrap().len());
    assert_eq!(
        rows.len() as f64,
        result["detection_hour"].as_f64().unwrap().ceil()
    );
    assert!(rows.first().unwrap().starts_with("1,"));

    let o = firesat(&[
        "--config",
        cfg.to_str().unwrap(),
        "simulate",
        "--incident",
        "nope",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn synth_env_spec_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    fs::write(
        &spec,
        r#"{"kind": "random", "nx": 6, "ny": 5, "nt": 10, "spacing_km": 10.0,
            "u10": {"min": -5, "max": 5}, "v10": {"min": -5, "max": 5}, "swvl1": {"min": 0.1, "max": 0.3}}"#,
    )
    .unwrap();
    let gen = |name: &str, seed: &str| {
        let d = dir.path().join(name);
        let o = firesat(&[
            "--out-dir",
            d.to_str().unwrap(),
            "--seed",
            seed,
            "synth-env",
            "--spec",
            spec.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        d
    };
    let (a, b, c) = (gen("a", "5"), gen("b", "5"), gen("c", "6"));
    for f in ["env.json", "u10.f32", "v10.f32", "swvl1.f32"] {
        assert_eq!(
            fs::read(a.join(f)).unwrap(),
            fs::read(b.join(f)).unwrap(),
            "{f}"
        );
    }
    assert_ne!(
        fs::read(a.join("u10.f32")).unwrap(),
        fs::read(c.join("u10.f32")).unwrap()
    );

    let constant = dir.path().join("const.json");
    fs::write(
        &constant,
        r#"{"kind": "constant", "nx": 3, "ny": 4, "nt": 5, "spacing_km": 2.0, "u10": 1.5, "v10": -2.0, "swvl1": 0.2}"#,
    )
    .unwrap();
    let d = dir.path().join("k");
    let o = firesat(&[
        "--out-dir",
        d.to_str().unwrap(),
        "synth-env",
        "--spec",
        constant.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let g = io::load_env(&d.join("env.json")).unwrap().grid;
    assert_eq!((g.nx(), g.ny(), g.nt()), (3, 4, 5));
    assert!(g.u10().iter().all(|&u| u == 1.5));
    assert!(g.swvl1().iter().all(|&s| s == 0.2));
}

#[test]
fn sweep_outputs_are_deterministic_and_complete() {
    let dir = tempfile::tempdir().unwrap();
    let scen = small_scenario(dir.path());
    let run = |name: &str, workers: &str| {
        let d = dir.path().join(name);
        let o = firesat(&[
            "--out-dir",
            d.to_str().unwrap(),
            "--workers",
            workers,
            "--seed",
            "42",
            "--set",
            &format!("inputs.scenario=\"{scen}\""),
            "sweep",
            "--counts",
            "100,1000,10000",
            "--trials",
            "3",
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        d
    };
    let (a, b) = (run("a", "1"), run("b", "3"));
    for f in ["sweep.csv", "sweep_summary.csv"] {
        assert_eq!(
            fs::read_to_string(a.join(f)).unwrap(),
            fs::read_to_string(b.join(f)).unwrap(),
            "{f}"
        );
    }
    let without_out_dir = |d: &Path| {
        let mut m: serde_json::Value = io::read_json(&d.join("manifest.json")).unwrap();
        m["config"].as_object_mut().unwrap().remove("out_dir");
        m
    };
    assert_eq!(without_out_dir(&a), without_out_dir(&b));
    let csv = fs::read_to_string(a.join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 9);
    let m: serde_json::Value = io::read_json(&a.join("manifest.json")).unwrap();
    assert_eq!(m["deployment_seeds"], serde_json::json!([42, 43, 44]));
    assert_eq!(m["config"]["model"]["u_max"], 0.13);
    assert_eq!(m["config"]["carbon"]["biomass_expansion"], 1.2);
    assert_eq!(m["config"]["link"]["params"]["distance_km"], 40581.0);
    assert_eq!(m["rng"], firesat_core::RNG_NAME);
    assert!(m["averaging"].as_str().unwrap().contains("3 trials"));

    // rerun into the same directory: files replaced, no temporaries left
    run("a", "2");
    assert_eq!(
        fs::read(a.join("sweep.csv")).unwrap(),
        fs::read(b.join("sweep.csv")).unwrap()
    );
    let names: Vec<String> = fs::read_dir(&a)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    assert_eq!(names.len(), 3, "{names:?}");
}

#[test]
fn historical_baseline_requires_history() {
    let dir = tempfile::tempdir().unwrap();
    let scen = small_scenario(dir.path());
    let o = firesat(&[
        "--out-dir",
        dir.path().join("o").to_str().unwrap(),
        "--set",
        &format!("inputs.scenario=\"{scen}\""),
        "sweep",
        "--counts",
        "10",
        "--trials",
        "1",
        "--baseline",
        "historical",
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("historical"));
}
