use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use super::config::{ConfigError, ScenarioConfig};
use super::format::{fmt_opt, fmt_sig};
use super::reconcile::{reconcile, render_markdown, Reconciliation};
use crate::actuation::{check_actuation_feasibility, FeasibilityEntry};
use crate::error::Error;
use crate::model::Joint;
use crate::stairs::{stair_knee_sweep, stair_peaks, StairPeaks, KNEE_SWEEP_SAMPLES};
use crate::statics::{
    compare_strategies, redistribution_sweep, squat_profile, sweep_heights, RedistributionSweep, SquatProfile,
    Strategy,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("infeasible scenario: {0}")]
    Infeasible(String),
    #[error("analysis failed: {0}")]
    Analysis(#[from] Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Infeasible(_) | CliError::Analysis(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

pub const SQUAT_HEADER: [&str; 8] = [
    "height_m",
    "tau_hip_nm",
    "tau_knee_nm",
    "tau_ankle_nm",
    "fy_n",
    "m_nm",
    "max_abs_tau_nm",
    "l2_norm_nm",
];

pub const COMPARISON_HEADER: [&str; 6] = [
    "height_m",
    "sagittal_max_abs_tau_nm",
    "frontal_l2_max_abs_tau_nm",
    "frontal_minimax_max_abs_tau_nm",
    "l2_norm_ratio",
    "minimax_to_sagittal_ratio",
];

pub const REDISTRIBUTION_HEADER: [&str; 8] = [
    "free_param_nm",
    "tau_hip_nm",
    "tau_knee_nm",
    "tau_ankle_nm",
    "max_abs_tau_nm",
    "residual_knee_hip_nm",
    "residual_ankle_knee_nm",
    "is_optimum",
];

pub const STAIRS_HEADER: [&str; 4] = ["hip_height_m", "tau_hip_nm", "tau_knee_nm", "tau_ankle_nm"];

pub const STAIR_PEAKS_HEADER: [&str; 3] = ["joint", "peak_abs_tau_nm", "hip_height_m"];

pub const ACTUATION_HEADER: [&str; 14] = [
    "name",
    "joint",
    "motors",
    "differential",
    "gear_ratio",
    "peak_torque_nm",
    "peak_source",
    "required_ratio",
    "required_current_a",
    "current_margin_a",
    "continuous_ok",
    "peak_ok",
    "feasible",
    "notes",
];

fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let io = |source: std::io::Error| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(|e| io(e.into()))?;
    w.write_record(header).map_err(|e| io(e.into()))?;
    for r in rows {
        w.write_record(r).map_err(|e| io(e.into()))?;
    }
    w.flush().map_err(io)
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })
}

fn bool_str(b: bool) -> String {
    if b { "true" } else { "false" }.into()
}

pub fn squat_rows(profile: &SquatProfile) -> Vec<Vec<String>> {
    profile
        .samples
        .iter()
        .map(|s| match &s.values {
            Ok(v) => vec![
                fmt_sig(s.height),
                fmt_sig(v.torques.tau_hip),
                fmt_sig(v.torques.tau_knee),
                fmt_sig(v.torques.tau_ankle),
                fmt_opt(v.internal_wrench.map(|w| w.f_y)),
                fmt_opt(v.internal_wrench.map(|w| w.m)),
                fmt_sig(v.max_abs),
                fmt_sig(v.l2_norm),
            ],
            Err(_) => {
                let mut row = vec![String::new(); SQUAT_HEADER.len()];
                row[0] = fmt_sig(s.height);
                row
            }
        })
        .collect()
}

/// Writes one CSV per strategy plus `comparison.csv`.
pub fn cmd_squat(cfg: &ScenarioConfig, out: &Path) -> Result<Vec<SquatProfile>, CliError> {
    let model = cfg.squat_model()?;
    let heights = sweep_heights(&model.geom, cfg.sweep.samples);
    ensure_dir(out)?;
    let mut profiles = Vec::with_capacity(Strategy::ALL.len());
    for strategy in Strategy::ALL {
        let p = squat_profile(&model, &heights, strategy)?;
        write_csv(
            &out.join(format!("squat_{}.csv", strategy.tag())),
            &SQUAT_HEADER,
            &squat_rows(&p),
        )?;
        profiles.push(p);
    }
    let rows: Vec<Vec<String>> = compare_strategies(&model, &heights)?
        .iter()
        .map(|r| {
            vec![
                fmt_sig(r.height),
                fmt_opt(r.sagittal_max_abs),
                fmt_opt(r.frontal_l2_max_abs),
                fmt_opt(r.frontal_minimax_max_abs),
                fmt_opt(r.l2_norm_ratio),
                fmt_opt(r.minimax_to_sagittal_ratio),
            ]
        })
        .collect();
    write_csv(&out.join("comparison.csv"), &COMPARISON_HEADER, &rows)?;
    if let Some(p) = profiles.iter().find(|p| p.all_unreachable()) {
        return Err(CliError::Infeasible(format!(
            "no sweep height is reachable for {}",
            p.strategy.tag()
        )));
    }
    Ok(profiles)
}

pub fn redistribution_file_name(height: f64) -> String {
    format!("redistribution_{height:.3}.csv")
}

/// Sweeps the ankle torque around the minimax optimum at `height`.
pub fn cmd_redistribute(cfg: &ScenarioConfig, height: f64, out: &Path) -> Result<RedistributionSweep, CliError> {
    let model = cfg.squat_model()?;
    let optimum = crate::statics::minimax_torques(&model, height, crate::statics::AnkleMode::Free)
        .map_err(|e| CliError::Infeasible(e.to_string()))?;
    let half = cfg.sweep.redistribution_half_width_nm.unwrap_or_else(|| {
        let p = optimum.constraints.offsets();
        let spread = p.iter().copied().fold(f64::MIN, f64::max) - p.iter().copied().fold(f64::MAX, f64::min);
        spread.max(1.0)
    });
    let a = optimum.free_param;
    let sweep = redistribution_sweep(&model, height, (a - half, a + half), cfg.sweep.redistribution_samples)?;
    let rows: Vec<Vec<String>> = sweep
        .samples
        .iter()
        .map(|s| {
            let (r1, r2) = sweep.constraints.residuals(&s.torques);
            vec![
                fmt_sig(s.free_param),
                fmt_sig(s.torques.tau_hip),
                fmt_sig(s.torques.tau_knee),
                fmt_sig(s.torques.tau_ankle),
                fmt_sig(s.max_abs),
                fmt_sig(r1),
                fmt_sig(r2),
                bool_str(s.is_optimum),
            ]
        })
        .collect();
    ensure_dir(out)?;
    write_csv(&out.join(redistribution_file_name(height)), &REDISTRIBUTION_HEADER, &rows)?;
    Ok(sweep)
}

/// Writes the stance-knee sweep to `stairs.csv` and the three peaks to
/// `stairs_peaks.csv`.
pub fn cmd_stairs(cfg: &ScenarioConfig, out: &Path) -> Result<StairPeaks, CliError> {
    let geom = cfg.geometry()?;
    let s = cfg.stair_scenario()?;
    let infeasible = |e: Error| CliError::Infeasible(e.to_string());
    let sweep = stair_knee_sweep(&s, &geom, KNEE_SWEEP_SAMPLES).map_err(infeasible)?;
    let peaks = stair_peaks(&s, &geom).map_err(infeasible)?;
    ensure_dir(out)?;
    let rows: Vec<Vec<String>> = sweep
        .iter()
        .map(|x| {
            vec![
                fmt_sig(x.hip_height),
                fmt_sig(x.torques.tau_hip),
                fmt_sig(x.torques.tau_knee),
                fmt_sig(x.torques.tau_ankle),
            ]
        })
        .collect();
    write_csv(&out.join("stairs.csv"), &STAIRS_HEADER, &rows)?;
    let peak_rows = vec![
        vec!["hip".into(), fmt_sig(peaks.hip), String::new()],
        vec![
            "knee".into(),
            fmt_sig(peaks.knee),
            fmt_sig(peaks.knee_worst.hip_height),
        ],
        vec!["ankle".into(), fmt_sig(peaks.ankle), String::new()],
    ];
    write_csv(&out.join("stairs_peaks.csv"), &STAIR_PEAKS_HEADER, &peak_rows)?;
    Ok(peaks)
}

/// Per-joint design peaks with their source: config override, or the larger
/// of the stair peak and the frontal minimax squat peak.
pub fn design_peaks(cfg: &ScenarioConfig) -> Result<BTreeMap<Joint, (f64, &'static str)>, CliError> {
    let geom = cfg.geometry()?;
    let stair = cfg.stair_scenario()?;
    let sp = stair_peaks(&stair, &geom).map_err(|e| CliError::Infeasible(e.to_string()))?;
    let model = cfg.squat_model()?;
    let squat = squat_profile(&model, &sweep_heights(&geom, cfg.sweep.samples), Strategy::FrontalMinimax)?;
    let mut peaks = BTreeMap::new();
    for joint in Joint::ALL {
        let stair_peak = match joint {
            Joint::Hip => sp.hip,
            Joint::Knee => sp.knee,
            Joint::Ankle => sp.ankle,
        };
        let squat_peak = squat
            .reachable()
            .map(|(_, v)| joint.of(&v.torques).abs())
            .fold(0.0, f64::max);
        let entry = match cfg.actuation.design_peaks_nm.get(&joint) {
            Some(&v) => (v, "config"),
            None if stair_peak >= squat_peak => (stair_peak, "stairs"),
            None => (squat_peak, "squat_frontal_minimax"),
        };
        peaks.insert(joint, entry);
    }
    Ok(peaks)
}

pub fn cmd_actuation(cfg: &ScenarioConfig, out: &Path) -> Result<Vec<FeasibilityEntry>, CliError> {
    let drives = cfg.drives()?;
    let spec = cfg.motor_spec()?;
    let sourced = if drives.is_empty() { BTreeMap::new() } else { design_peaks(cfg)? };
    let peaks: BTreeMap<Joint, f64> = sourced.iter().map(|(j, (v, _))| (*j, *v)).collect();
    let entries = check_actuation_feasibility(&peaks, &drives, &spec, &cfg.feasibility_rules());
    let rows: Vec<Vec<String>> = entries
        .iter()
        .map(|e| {
            vec![
                e.name.clone(),
                e.joint.name().into(),
                e.drive.motors_per_joint.to_string(),
                bool_str(e.drive.differential),
                fmt_sig(e.drive.gear_ratio),
                fmt_opt(e.peak_torque),
                sourced.get(&e.joint).map(|(_, s)| s.to_string()).unwrap_or_default(),
                fmt_opt(e.required_ratio),
                fmt_opt(e.required_current),
                fmt_opt(e.current_margin),
                bool_str(e.continuous_ok),
                bool_str(e.peak_ok),
                bool_str(e.feasible),
                e.notes.join("; "),
            ]
        })
        .collect();
    ensure_dir(out)?;
    write_csv(&out.join("actuation_report.csv"), &ACTUATION_HEADER, &rows)?;
    Ok(entries)
}

pub fn cmd_reconcile(cfg: &ScenarioConfig, out: &Path) -> Result<Reconciliation, CliError> {
    let r = reconcile(cfg)?;
    ensure_dir(out)?;
    let path = out.join("reconciliation.md");
    fs::write(&path, render_markdown(&r)).map_err(|source| CliError::Io { path, source })?;
    Ok(r)
}

/// Runs every command with the configured redistribution height.
pub fn cmd_all(cfg: &ScenarioConfig, out: &Path) -> Result<(), CliError> {
    cmd_squat(cfg, out)?;
    cmd_redistribute(cfg, cfg.sweep.redistribution_height_m, out)?;
    cmd_stairs(cfg, out)?;
    cmd_actuation(cfg, out)?;
    cmd_reconcile(cfg, out)?;
    Ok(())
}
