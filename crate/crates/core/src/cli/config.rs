//! Scenario configuration file (TOML).
//!
//! All numbers are SI. Keys carry their unit as a suffix. Every section and
//! key is optional; missing values fall back to [`ScenarioConfig::default`].

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::actuation::{DriveAssignment, FeasibilityRules, JointDrive, MotorSpec};
use crate::model::{
    make_load_case, solve_link_lengths, Anthropometrics, Joint, LegGeometry, LoadCase, ScenarioKind,
    DEFAULT_ASSIST_MOMENT_ARM,
};
use crate::stairs::{StairScenario, DEFAULT_FORWARD_LEAN, DEFAULT_STAIR_HEIGHT};
use crate::statics::SquatModel;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse config: {0}")]
    Parse(String),
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

fn invalid(path: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        path: path.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnthropometricsConfig {
    pub standing_attach_height_m: f64,
    pub crawling_attach_height_m: f64,
    pub hip_width_m: f64,
    pub foot_width_m: f64,
    /// Ankle spacing in the frontal squat.
    pub stance_width_m: f64,
}

impl Default for AnthropometricsConfig {
    fn default() -> Self {
        let a = Anthropometrics::default();
        Self {
            standing_attach_height_m: a.standing_attach_height,
            crawling_attach_height_m: a.crawling_attach_height,
            hip_width_m: a.hip_width,
            foot_width_m: a.foot_width,
            stance_width_m: a.hip_width,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LoadsConfig {
    pub robot_mass_kg: f64,
    pub payload_mass_kg: f64,
    pub assist_force_n: f64,
    pub assist_moment_arm_m: f64,
    /// Stated single-leg stair load.
    pub stair_total_load_n: f64,
    /// Derive the stair load from the masses instead of `stair_total_load_n`.
    pub stair_load_from_masses: bool,
}

impl Default for LoadsConfig {
    fn default() -> Self {
        Self {
            robot_mass_kg: 36.3,
            payload_mass_kg: 22.7,
            assist_force_n: 222.4,
            assist_moment_arm_m: DEFAULT_ASSIST_MOMENT_ARM,
            stair_total_load_n: 578.3,
            stair_load_from_masses: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StairsConfig {
    pub stair_height_m: f64,
    pub forward_lean_m: f64,
}

impl Default for StairsConfig {
    fn default() -> Self {
        Self {
            stair_height_m: DEFAULT_STAIR_HEIGHT,
            forward_lean_m: DEFAULT_FORWARD_LEAN,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MotorConfig {
    pub torque_constant_nm_per_a: f64,
    pub max_continuous_current_a: f64,
    pub max_peak_current_a: f64,
    pub mass_kg: f64,
}

impl Default for MotorConfig {
    fn default() -> Self {
        let m = MotorSpec::default();
        Self {
            torque_constant_nm_per_a: m.torque_constant,
            max_continuous_current_a: m.max_continuous_current,
            max_peak_current_a: m.max_peak_current,
            mass_kg: m.mass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveConfig {
    pub name: String,
    pub joint: Joint,
    pub motors: u8,
    pub gear_ratio: f64,
    #[serde(default)]
    pub differential: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ActuationConfig {
    pub max_gear_ratio: f64,
    pub single_stage_max_ratio: f64,
    pub efficiency: f64,
    /// Per-joint design peaks; joints not listed use computed peaks.
    pub design_peaks_nm: BTreeMap<Joint, f64>,
    pub drives: Vec<DriveConfig>,
}

impl Default for ActuationConfig {
    fn default() -> Self {
        let rules = FeasibilityRules::default();
        let diff = |joint: Joint| DriveConfig {
            name: joint.name().into(),
            joint,
            motors: 2,
            gear_ratio: 3.74,
            differential: true,
        };
        Self {
            max_gear_ratio: rules.max_ratio,
            single_stage_max_ratio: rules.single_stage_max_ratio,
            efficiency: rules.efficiency,
            design_peaks_nm: BTreeMap::from([(Joint::Knee, 168.0)]),
            drives: vec![
                diff(Joint::Hip),
                diff(Joint::Knee),
                diff(Joint::Ankle),
                DriveConfig {
                    name: "knee_single_motor".into(),
                    joint: Joint::Knee,
                    motors: 1,
                    gear_ratio: 7.47,
                    differential: false,
                },
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub samples: usize,
    pub redistribution_height_m: f64,
    pub redistribution_samples: usize,
    /// Half-width of the ankle-torque sweep around the optimum; automatic
    /// when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub redistribution_half_width_nm: Option<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            samples: 200,
            redistribution_height_m: 1.0,
            redistribution_samples: 201,
            redistribution_half_width_nm: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: PathBuf::from("out") }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub anthropometrics: AnthropometricsConfig,
    pub loads: LoadsConfig,
    pub stairs: StairsConfig,
    pub motor: MotorConfig,
    pub actuation: ActuationConfig,
    pub sweep: SweepConfig,
    pub output: OutputConfig,
}

fn positive(path: &str, v: f64) -> Result<(), ConfigError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(path, format!("must be a finite positive number, got {v}")))
    }
}

fn non_negative(path: &str, v: f64) -> Result<(), ConfigError> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(invalid(path, format!("must be a finite non-negative number, got {v}")))
    }
}

impl ScenarioConfig {
    pub fn from_toml_str(s: &str) -> Result<Self, ConfigError> {
        let cfg: Self = toml::from_str(s).map_err(|e| ConfigError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let a = &self.anthropometrics;
        positive("anthropometrics.crawling_attach_height_m", a.crawling_attach_height_m)?;
        positive("anthropometrics.standing_attach_height_m", a.standing_attach_height_m)?;
        if a.standing_attach_height_m <= a.crawling_attach_height_m {
            return Err(invalid(
                "anthropometrics.standing_attach_height_m",
                format!(
                    "must exceed crawling_attach_height_m ({} <= {})",
                    a.standing_attach_height_m, a.crawling_attach_height_m
                ),
            ));
        }
        positive("anthropometrics.hip_width_m", a.hip_width_m)?;
        positive("anthropometrics.foot_width_m", a.foot_width_m)?;
        positive("anthropometrics.stance_width_m", a.stance_width_m)?;

        let l = &self.loads;
        non_negative("loads.robot_mass_kg", l.robot_mass_kg)?;
        non_negative("loads.payload_mass_kg", l.payload_mass_kg)?;
        non_negative("loads.assist_force_n", l.assist_force_n)?;
        non_negative("loads.assist_moment_arm_m", l.assist_moment_arm_m)?;
        non_negative("loads.stair_total_load_n", l.stair_total_load_n)?;

        positive("stairs.stair_height_m", self.stairs.stair_height_m)?;
        non_negative("stairs.forward_lean_m", self.stairs.forward_lean_m)?;

        let m = &self.motor;
        positive("motor.torque_constant_nm_per_a", m.torque_constant_nm_per_a)?;
        positive("motor.max_continuous_current_a", m.max_continuous_current_a)?;
        positive("motor.max_peak_current_a", m.max_peak_current_a)?;
        positive("motor.mass_kg", m.mass_kg)?;
        if m.max_peak_current_a < m.max_continuous_current_a {
            return Err(invalid("motor.max_peak_current_a", "must be at least max_continuous_current_a"));
        }

        let act = &self.actuation;
        positive("actuation.max_gear_ratio", act.max_gear_ratio)?;
        positive("actuation.single_stage_max_ratio", act.single_stage_max_ratio)?;
        if !(act.efficiency > 0.0 && act.efficiency <= 1.0) {
            return Err(invalid("actuation.efficiency", "must lie in (0, 1]"));
        }
        for (joint, v) in &act.design_peaks_nm {
            non_negative(&format!("actuation.design_peaks_nm.{joint}"), *v)?;
        }
        for (i, d) in act.drives.iter().enumerate() {
            JointDrive::new(d.motors, d.gear_ratio, d.differential)
                .map_err(|e| invalid(&format!("actuation.drives[{i}]"), e.to_string()))?;
        }

        if self.sweep.samples == 0 {
            return Err(invalid("sweep.samples", "must be at least 1"));
        }
        positive("sweep.redistribution_height_m", self.sweep.redistribution_height_m)?;
        if self.sweep.redistribution_samples == 0 {
            return Err(invalid("sweep.redistribution_samples", "must be at least 1"));
        }
        if let Some(w) = self.sweep.redistribution_half_width_nm {
            positive("sweep.redistribution_half_width_nm", w)?;
        }
        Ok(())
    }

    pub fn anthropometrics(&self) -> Anthropometrics {
        let a = &self.anthropometrics;
        Anthropometrics {
            standing_attach_height: a.standing_attach_height_m,
            crawling_attach_height: a.crawling_attach_height_m,
            hip_width: a.hip_width_m,
            foot_width: a.foot_width_m,
        }
    }

    pub fn geometry(&self) -> Result<LegGeometry, ConfigError> {
        solve_link_lengths(&self.anthropometrics())
            .map_err(|e| invalid("anthropometrics", e.to_string()))
    }

    pub fn squat_load(&self) -> Result<LoadCase, ConfigError> {
        let l = &self.loads;
        make_load_case(ScenarioKind::Squat, l.robot_mass_kg, l.payload_mass_kg, l.assist_force_n)
            .and_then(|c| c.with_assist_moment_arm(l.assist_moment_arm_m))
            .map_err(|e| invalid("loads", e.to_string()))
    }

    /// Stair load from masses, ignoring any stated total.
    pub fn stair_load_from_masses(&self) -> Result<LoadCase, ConfigError> {
        let l = &self.loads;
        make_load_case(ScenarioKind::Stair, l.robot_mass_kg, l.payload_mass_kg, 0.0)
            .map_err(|e| invalid("loads", e.to_string()))
    }

    pub fn stair_load(&self) -> Result<LoadCase, ConfigError> {
        if self.loads.stair_load_from_masses {
            self.stair_load_from_masses()
        } else {
            LoadCase::stair_total(self.loads.stair_total_load_n)
                .map_err(|e| invalid("loads.stair_total_load_n", e.to_string()))
        }
    }

    pub fn lateral_offset(&self) -> f64 {
        SquatModel::offset_for_stance(self.anthropometrics.stance_width_m, self.anthropometrics.hip_width_m)
    }

    pub fn squat_model(&self) -> Result<SquatModel, ConfigError> {
        Ok(SquatModel::new(
            self.geometry()?,
            self.squat_load()?,
            self.lateral_offset(),
            self.anthropometrics.foot_width_m,
        ))
    }

    pub fn stair_scenario(&self) -> Result<StairScenario, ConfigError> {
        StairScenario::new(
            self.stairs.stair_height_m,
            self.stairs.forward_lean_m,
            self.anthropometrics.hip_width_m,
            self.stair_load()?,
        )
        .map_err(|e| invalid("stairs", e.to_string()))
    }

    pub fn motor_spec(&self) -> Result<MotorSpec, ConfigError> {
        let m = &self.motor;
        MotorSpec::new(
            m.torque_constant_nm_per_a,
            m.max_continuous_current_a,
            m.max_peak_current_a,
            m.mass_kg,
        )
        .map_err(|e| invalid("motor", e.to_string()))
    }

    pub fn feasibility_rules(&self) -> FeasibilityRules {
        FeasibilityRules {
            max_ratio: self.actuation.max_gear_ratio,
            single_stage_max_ratio: self.actuation.single_stage_max_ratio,
            efficiency: self.actuation.efficiency,
        }
    }

    pub fn drives(&self) -> Result<Vec<DriveAssignment>, ConfigError> {
        self.actuation
            .drives
            .iter()
            .enumerate()
            .map(|(i, d)| {
                Ok(DriveAssignment {
                    name: d.name.clone(),
                    joint: d.joint,
                    drive: JointDrive::new(d.motors, d.gear_ratio, d.differential)
                        .map_err(|e| invalid(&format!("actuation.drives[{i}]"), e.to_string()))?,
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips_through_toml() {
        let cfg = ScenarioConfig::default();
        let text = cfg.to_toml_string();
        let back = ScenarioConfig::from_toml_str(&text).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn empty_file_is_default() {
        assert_eq!(ScenarioConfig::from_toml_str("").unwrap(), ScenarioConfig::default());
    }

    #[test]
    fn validation_reports_field_path() {
        let err = ScenarioConfig::from_toml_str(
            "[anthropometrics]\nstanding_attach_height_m = 0.5\ncrawling_attach_height_m = 0.6\n",
        )
        .unwrap_err();
        assert!(err.to_string().starts_with("anthropometrics.standing_attach_height_m"), "{err}");

        let err = ScenarioConfig::from_toml_str("[loads]\nrobot_mass_kg = -3.0\n").unwrap_err();
        assert!(err.to_string().starts_with("loads.robot_mass_kg"), "{err}");

        let err = ScenarioConfig::from_toml_str(
            "[[actuation.drives]]\nname = \"k\"\njoint = \"knee\"\nmotors = 3\ngear_ratio = 2.0\n",
        )
        .unwrap_err();
        assert!(err.to_string().starts_with("actuation.drives[0]"), "{err}");
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(matches!(
            ScenarioConfig::from_toml_str("[loads]\nmass = 3.0\n"),
            Err(ConfigError::Parse(_))
        ));
    }

    #[test]
    fn default_offset_is_zero() {
        assert_eq!(ScenarioConfig::default().lateral_offset(), 0.0);
    }
}
