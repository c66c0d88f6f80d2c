//! Motor model, two-motor differential joints and gear-ratio checks.

use std::collections::BTreeMap;

use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{check_finite, check_positive, Error, Result};
use crate::model::Joint;

/// Largest net reduction still counted as near-direct drive.
pub const NEAR_DIRECT_DRIVE_MAX_RATIO: f64 = 10.0;

/// Largest reduction assumed to fit in one transmission stage.
pub const SINGLE_STAGE_MAX_RATIO: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotorSpec {
    /// Nm/A
    pub torque_constant: f64,
    pub max_continuous_current: f64,
    pub max_peak_current: f64,
    /// kg
    pub mass: f64,
}

impl Default for MotorSpec {
    /// Hub motor from a self-balancing scooter, driven by a 50 A / 75 A
    /// controller channel.
    fn default() -> Self {
        Self {
            torque_constant: 0.45,
            max_continuous_current: 50.0,
            max_peak_current: 75.0,
            mass: 2.2,
        }
    }
}

impl MotorSpec {
    pub fn new(torque_constant: f64, max_continuous_current: f64, max_peak_current: f64, mass: f64) -> Result<Self> {
        let spec = Self {
            torque_constant,
            max_continuous_current,
            max_peak_current,
            mass,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("torque_constant", self.torque_constant)?;
        check_positive("max_continuous_current", self.max_continuous_current)?;
        check_positive("max_peak_current", self.max_peak_current)?;
        check_positive("mass", self.mass)?;
        if self.max_peak_current < self.max_continuous_current {
            return Err(Error::InvalidInput {
                field: "max_peak_current",
                reason: format!(
                    "peak rating {} A is below the continuous rating {} A",
                    self.max_peak_current, self.max_continuous_current
                ),
            });
        }
        Ok(())
    }

    /// Torque at the continuous current rating.
    pub fn continuous_torque(&self) -> f64 {
        self.torque_constant * self.max_continuous_current
    }
}

/// Linear torque-constant model, valid up to the peak current rating.
pub fn motor_torque(current: f64, spec: &MotorSpec) -> Result<f64> {
    check_finite("current", current)?;
    if current < 0.0 {
        return Err(Error::InvalidInput {
            field: "current",
            reason: format!("expected a non-negative current magnitude, got {current}"),
        });
    }
    if current > spec.max_peak_current {
        return Err(Error::OverCurrent {
            current,
            peak: spec.max_peak_current,
        });
    }
    Ok(spec.torque_constant * current)
}

fn check_motor_count(motors: u8) -> Result<()> {
    if !(1..=2).contains(&motors) {
        return Err(Error::InvalidInput {
            field: "motors",
            reason: format!("a joint is driven by one or two motors, got {motors}"),
        });
    }
    Ok(())
}

/// Lossless reduction needed for `motors` motors at continuous current to
/// reach `peak_joint_torque`.
pub fn required_gear_ratio(peak_joint_torque: f64, spec: &MotorSpec, motors: u8) -> Result<f64> {
    check_motor_count(motors)?;
    check_positive("peak_joint_torque", peak_joint_torque)?;
    Ok(peak_joint_torque / (f64::from(motors) * spec.continuous_torque()))
}

/// Two input shafts geared to one output shaft that can spin about its own
/// axis or swing about the input axis.
///
/// Joint rates are `(1/ratio) · D · ω_motors` with `D = ½[[1, −1], [1, 1]]`:
/// motors turning in opposite directions spin the output axis, motors
/// turning together swing the carrier. Joint torques follow from power
/// balance, `τ_joint = ratio · D⁻ᵀ · τ_motors`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Differential {
    pub ratio: f64,
}

/// (output axis, carrier axis)
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DifferentialOutput {
    pub output_axis: f64,
    pub carrier_axis: f64,
}

impl Differential {
    pub fn new(ratio: f64) -> Result<Self> {
        check_positive("ratio", ratio)?;
        Ok(Self { ratio })
    }

    pub fn velocity_matrix(&self) -> Matrix2<f64> {
        Matrix2::new(0.5, -0.5, 0.5, 0.5) / self.ratio
    }

    /// Exact inverse-transpose of [`Self::velocity_matrix`].
    pub fn torque_matrix(&self) -> Matrix2<f64> {
        Matrix2::new(1.0, -1.0, 1.0, 1.0) * self.ratio
    }

    pub fn joint_rates(&self, omega_a: f64, omega_b: f64) -> DifferentialOutput {
        let v = self.velocity_matrix() * Vector2::new(omega_a, omega_b);
        DifferentialOutput {
            output_axis: v[0],
            carrier_axis: v[1],
        }
    }

    pub fn joint_torques(&self, tau_a: f64, tau_b: f64) -> DifferentialOutput {
        let t = self.torque_matrix() * Vector2::new(tau_a, tau_b);
        DifferentialOutput {
            output_axis: t[0],
            carrier_axis: t[1],
        }
    }
}

pub fn differential_map(tau_motor_a: f64, tau_motor_b: f64, ratio: f64) -> Result<DifferentialOutput> {
    check_finite("tau_motor_a", tau_motor_a)?;
    check_finite("tau_motor_b", tau_motor_b)?;
    Ok(Differential::new(ratio)?.joint_torques(tau_motor_a, tau_motor_b))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointDrive {
    pub motors_per_joint: u8,
    pub gear_ratio: f64,
    pub differential: bool,
}

impl JointDrive {
    pub fn new(motors_per_joint: u8, gear_ratio: f64, differential: bool) -> Result<Self> {
        let d = Self {
            motors_per_joint,
            gear_ratio,
            differential,
        };
        d.validate()?;
        Ok(d)
    }

    /// Ratios above the near-direct-drive limit are accepted here and
    /// reported as infeasible by [`check_actuation_feasibility`].
    pub fn validate(&self) -> Result<()> {
        check_motor_count(self.motors_per_joint)?;
        check_finite("gear_ratio", self.gear_ratio)?;
        if self.gear_ratio < 1.0 {
            return Err(Error::InvalidInput {
                field: "gear_ratio",
                reason: format!("expected a reduction of at least 1, got {}", self.gear_ratio),
            });
        }
        if self.differential && self.motors_per_joint != 2 {
            return Err(Error::InvalidInput {
                field: "differential",
                reason: "a differential joint combines exactly two motors".into(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriveAssignment {
    pub name: String,
    pub joint: Joint,
    pub drive: JointDrive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityRules {
    pub max_ratio: f64,
    pub single_stage_max_ratio: f64,
    /// Transmission efficiency, 1.0 for lossless.
    pub efficiency: f64,
}

impl Default for FeasibilityRules {
    fn default() -> Self {
        Self {
            max_ratio: NEAR_DIRECT_DRIVE_MAX_RATIO,
            single_stage_max_ratio: SINGLE_STAGE_MAX_RATIO,
            efficiency: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityEntry {
    pub name: String,
    pub joint: Joint,
    pub drive: JointDrive,
    pub peak_torque: Option<f64>,
    pub required_ratio: Option<f64>,
    /// Per-motor current at the drive's ratio.
    pub required_current: Option<f64>,
    pub continuous_ok: bool,
    pub peak_ok: bool,
    /// Continuous rating minus required current, A.
    pub current_margin: Option<f64>,
    pub feasible: bool,
    pub notes: Vec<String>,
}

pub fn check_actuation_feasibility(
    peaks: &BTreeMap<Joint, f64>,
    drives: &[DriveAssignment],
    spec: &MotorSpec,
    rules: &FeasibilityRules,
) -> Vec<FeasibilityEntry> {
    drives
        .iter()
        .map(|d| {
            let drive = d.drive;
            let motors = f64::from(drive.motors_per_joint);
            let mut notes = Vec::new();
            let Some(&peak) = peaks.get(&d.joint) else {
                notes.push(format!("no peak torque for {}", d.joint));
                return FeasibilityEntry {
                    name: d.name.clone(),
                    joint: d.joint,
                    drive,
                    peak_torque: None,
                    required_ratio: None,
                    required_current: None,
                    continuous_ok: false,
                    peak_ok: false,
                    current_margin: None,
                    feasible: false,
                    notes,
                };
            };
            let peak = peak.abs();
            let required_ratio = peak / (motors * spec.continuous_torque() * rules.efficiency);
            let current = peak / (motors * spec.torque_constant * drive.gear_ratio * rules.efficiency);
            let continuous_ok = current <= spec.max_continuous_current;
            let peak_ok = current <= spec.max_peak_current;
            if !continuous_ok {
                notes.push("exceeds continuous current rating".into());
            }
            if !peak_ok {
                notes.push("exceeds peak current rating".into());
            }
            let ratio_ok = required_ratio <= rules.max_ratio && drive.gear_ratio <= rules.max_ratio;
            if !ratio_ok {
                notes.push(format!("reduction above {}:1 near-direct-drive limit", rules.max_ratio));
            } else if drive.gear_ratio > rules.single_stage_max_ratio {
                notes.push("would require multiple transmission stages".into());
            }
            FeasibilityEntry {
                name: d.name.clone(),
                joint: d.joint,
                drive,
                peak_torque: Some(peak),
                required_ratio: Some(required_ratio),
                required_current: Some(current),
                continuous_ok,
                peak_ok,
                current_margin: Some(spec.max_continuous_current - current),
                feasible: continuous_ok && peak_ok && ratio_ok,
                notes,
            }
        })
        .collect()
}
