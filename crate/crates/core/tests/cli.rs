use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use proptest::prelude::*;
use xrl_core::cli::{
    cmd_actuation, cmd_redistribute, cmd_squat, cmd_stairs, redistribution_file_name, ScenarioConfig,
    ACTUATION_HEADER, REDISTRIBUTION_HEADER, SQUAT_HEADER,
};
use xrl_core::stairs::stair_knee_torque;
use xrl_core::statics::{minimax_torques, AnkleMode};

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|x| x.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn num(s: &str) -> f64 {
    s.parse().unwrap_or_else(|_| panic!("not a number: {s:?}"))
}

fn xrl(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_xrl")).args(args).output().unwrap()
}

fn config_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.toml")
}

#[test]
fn shipped_config_is_the_default() {
    assert_eq!(ScenarioConfig::load(&config_path()).unwrap(), ScenarioConfig::default());
}

#[test]
fn squat_files_have_contract_columns_and_rows() {
    let dir = tempfile::tempdir().unwrap();
    cmd_squat(&ScenarioConfig::default(), dir.path()).unwrap();
    for tag in ["sagittal", "frontal_l2", "frontal_minimax", "frontal_fixed_ankle"] {
        let (header, rows) = read_csv(&dir.path().join(format!("squat_{tag}.csv")));
        assert_eq!(header, SQUAT_HEADER);
        assert_eq!(rows.len(), 200, "{tag}");
        let heights: Vec<f64> = rows.iter().map(|r| num(&r[0])).collect();
        assert!(heights.windows(2).all(|w| w[1] > w[0]));
        for r in &rows {
            if tag == "sagittal" {
                assert!(r[4].is_empty() && r[5].is_empty());
            } else {
                num(&r[4]);
                num(&r[5]);
            }
        }
    }
    let (_, sag) = read_csv(&dir.path().join("squat_sagittal.csv"));
    let knee_peak = sag.iter().map(|r| num(&r[2]).abs()).fold(0.0, f64::max);
    assert!(knee_peak > 200.0 && knee_peak < 307.0, "{knee_peak}");
    let (_, cmp) = read_csv(&dir.path().join("comparison.csv"));
    assert_eq!(cmp.len(), 200);
}

#[test]
fn zero_load_gives_zero_torques() {
    let mut cfg = ScenarioConfig::default();
    cfg.loads.robot_mass_kg = 0.0;
    cfg.loads.payload_mass_kg = 0.0;
    cfg.loads.assist_force_n = 0.0;
    cfg.sweep.samples = 25;
    let dir = tempfile::tempdir().unwrap();
    cmd_squat(&cfg, dir.path()).unwrap();
    for tag in ["sagittal", "frontal_l2", "frontal_minimax"] {
        let (_, rows) = read_csv(&dir.path().join(format!("squat_{tag}.csv")));
        assert_eq!(rows.len(), 25);
        for r in rows {
            for c in [1, 2, 3, 6, 7] {
                assert_eq!(r[c], "0", "{tag} {r:?}");
            }
        }
    }
}

#[test]
fn wide_stance_flags_unreachable_rows() {
    let mut cfg = ScenarioConfig::default();
    cfg.anthropometrics.stance_width_m = 1.4;
    cfg.sweep.samples = 40;
    let dir = tempfile::tempdir().unwrap();
    cmd_squat(&cfg, dir.path()).unwrap();
    let (_, rows) = read_csv(&dir.path().join("squat_frontal_minimax.csv"));
    assert_eq!(rows.len(), 40);
    let blank = rows.iter().filter(|r| r[1].is_empty()).count();
    assert!(blank > 0 && blank < 40);
    for r in rows.iter().filter(|r| r[1].is_empty()) {
        num(&r[0]);
        assert!(r[1..].iter().all(String::is_empty));
    }
}

#[test]
fn redistribution_optimum_matches_solver() {
    let cfg = ScenarioConfig::default();
    let dir = tempfile::tempdir().unwrap();
    cmd_redistribute(&cfg, 1.0, dir.path()).unwrap();
    let (header, rows) = read_csv(&dir.path().join(redistribution_file_name(1.0)));
    assert_eq!(header, REDISTRIBUTION_HEADER);
    assert_eq!(&header[..5], ["free_param_nm", "tau_hip_nm", "tau_knee_nm", "tau_ankle_nm", "max_abs_tau_nm"]);
    let opt: Vec<_> = rows.iter().filter(|r| r[7] == "true").collect();
    assert_eq!(opt.len(), 1);
    let sol = minimax_torques(&cfg.squat_model().unwrap(), 1.0, AnkleMode::Free).unwrap();
    let close = |s: &str, v: f64| (num(s) - v).abs() <= 1e-5 * v.abs().max(1.0);
    assert!(close(&opt[0][1], sol.torques.tau_hip));
    assert!(close(&opt[0][2], sol.torques.tau_knee));
    assert!(close(&opt[0][3], sol.torques.tau_ankle));
    assert!(close(&opt[0][4], sol.max_abs));
    for r in &rows {
        assert!(num(&r[5]).abs() <= 1e-9 && num(&r[6]).abs() <= 1e-9, "{r:?}");
        assert!(num(&r[4]) >= num(&opt[0][4]) - 1e-9);
    }
}

#[test]
fn stairs_outputs() {
    let cfg = ScenarioConfig::default();
    let dir = tempfile::tempdir().unwrap();
    let peaks = cmd_stairs(&cfg, dir.path()).unwrap();
    let (_, p) = read_csv(&dir.path().join("stairs_peaks.csv"));
    let get = |j: &str| num(&p.iter().find(|r| r[0] == j).unwrap()[1]);
    assert_eq!(get("ankle"), 115.66);
    assert_eq!(get("hip"), 102.822);

    let (_, sweep) = read_csv(&dir.path().join("stairs.csv"));
    let best = sweep
        .iter()
        .max_by(|a, b| num(&a[2]).abs().total_cmp(&num(&b[2]).abs()))
        .unwrap();
    let worst = stair_knee_torque(&cfg.stair_scenario().unwrap(), &cfg.geometry().unwrap()).unwrap();
    assert!((num(&best[0]) - worst.hip_height).abs() <= 1e-3);
    assert!((num(&best[2]).abs() - peaks.knee).abs() <= 1e-4 * peaks.knee);

    let mut flat = cfg.clone();
    flat.stairs.forward_lean_m = 0.0;
    assert_eq!(cmd_stairs(&flat, dir.path()).unwrap().ankle, 0.0);
}

#[test]
fn actuation_report_rows() {
    let cfg = ScenarioConfig::default();
    let dir = tempfile::tempdir().unwrap();
    cmd_actuation(&cfg, dir.path()).unwrap();
    let (header, rows) = read_csv(&dir.path().join("actuation_report.csv"));
    assert_eq!(header, ACTUATION_HEADER);
    let single = rows.iter().find(|r| r[0] == "knee_single_motor").unwrap();
    assert_eq!(single[7], "7.46667");
    let diff = rows.iter().find(|r| r[0] == "knee").unwrap();
    assert_eq!(diff[7], "3.73333");

    let mut empty = cfg.clone();
    empty.actuation.drives.clear();
    cmd_actuation(&empty, dir.path()).unwrap();
    let text = fs::read_to_string(dir.path().join("actuation_report.csv")).unwrap();
    assert_eq!(text, format!("{}\n", ACTUATION_HEADER.join(",")));
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let out_s = out.to_str().unwrap();

    let ok = xrl(&["stairs", "--config", config_path().to_str().unwrap(), "--out", out_s]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(out.join("stairs.csv").exists());

    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "[motor]\ntorque_constant_nm_per_a = -1.0\n").unwrap();
    let r = xrl(&["squat", "--config", bad.to_str().unwrap(), "--out", out_s]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("motor.torque_constant_nm_per_a"));

    let r = xrl(&["squat", "--config", dir.path().join("missing.toml").to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));

    let r = xrl(&["squat", "--samples", "0", "--out", out_s]);
    assert_eq!(r.status.code(), Some(2));

    let wide = dir.path().join("wide.toml");
    fs::write(&wide, "[anthropometrics]\nstance_width_m = 3.5\n").unwrap();
    let r = xrl(&["squat", "--config", wide.to_str().unwrap(), "--out", out_s, "--samples", "10"]);
    assert_eq!(r.status.code(), Some(3));

    let r = xrl(&["redistribute", "--height", "5.0", "--out", out_s]);
    assert_eq!(r.status.code(), Some(3));

    let r = xrl(&["redistribute", "--height", "0.9", "--out", out_s]);
    assert_eq!(r.status.code(), Some(0));
    assert!(out.join("redistribution_0.900.csv").exists());
}

#[test]
fn unix_line_endings_and_utf8() {
    let dir = tempfile::tempdir().unwrap();
    let r = xrl(&["all", "--out", dir.path().to_str().unwrap(), "--samples", "20"]);
    assert_eq!(r.status.code(), Some(0));
    for e in fs::read_dir(dir.path()).unwrap() {
        let bytes = fs::read(e.unwrap().path()).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        assert!(!text.contains('\r'));
        assert!(text.ends_with('\n'));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn config_round_trip(
        ls in 1.0f64..2.0,
        lc_frac in 0.2f64..0.8,
        hw in 0.1f64..0.6,
        mass in 0.0f64..200.0,
        assist in 0.0f64..500.0,
        samples in 1usize..1000,
        stair in 0.0f64..2000.0,
        from_masses in any::<bool>(),
    ) {
        let mut cfg = ScenarioConfig::default();
        cfg.anthropometrics.standing_attach_height_m = ls;
        cfg.anthropometrics.crawling_attach_height_m = ls * lc_frac;
        cfg.anthropometrics.hip_width_m = hw;
        cfg.loads.robot_mass_kg = mass;
        cfg.loads.assist_force_n = assist;
        cfg.loads.stair_total_load_n = stair;
        cfg.loads.stair_load_from_masses = from_masses;
        cfg.sweep.samples = samples;
        let back = ScenarioConfig::from_toml_str(&cfg.to_toml_string()).unwrap();
        prop_assert_eq!(back, cfg);
    }
}
