//! Worst-case torques while stepping up a stair on one supporting leg.
//!
//! Knee and ankle use the sagittal model with the whole load on the stance
//! leg. The hip holds the torso and swing leg up in the frontal plane, with
//! the load acting at half the hip width from the stance hip.

use serde::{Deserialize, Serialize};

use crate::error::{check_non_negative, check_positive, Error, Result};
use crate::kinematics::{jacobian, solve_squat_posture, JointState, Plane};
use crate::model::{JointTorques, LegGeometry, LoadCase, PlanarWrench};
use crate::statics::leg_torques_from_wrench;

pub const DEFAULT_STAIR_HEIGHT: f64 = 0.203;
pub const DEFAULT_FORWARD_LEAN: f64 = 0.20;

/// Evenly spaced samples in the knee worst-case search.
pub const KNEE_SWEEP_SAMPLES: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StairScenario {
    pub stair_height: f64,
    pub forward_lean: f64,
    pub hip_width: f64,
    pub load: LoadCase,
}

impl StairScenario {
    pub fn new(stair_height: f64, forward_lean: f64, hip_width: f64, load: LoadCase) -> Result<Self> {
        check_positive("stair_height", stair_height)?;
        check_non_negative("forward_lean", forward_lean)?;
        check_positive("hip_width", hip_width)?;
        Ok(Self {
            stair_height,
            forward_lean,
            hip_width,
            load,
        })
    }

    /// 20.3 cm step, 20 cm lean, 35.56 cm hip width.
    pub fn with_defaults(load: LoadCase) -> Self {
        Self {
            stair_height: DEFAULT_STAIR_HEIGHT,
            forward_lean: DEFAULT_FORWARD_LEAN,
            hip_width: 0.3556,
            load,
        }
    }

    /// Load carried by the single stance leg.
    pub fn stance_load(&self) -> f64 {
        self.load.total_vertical_load
    }
}

pub fn stair_ankle_torque(s: &StairScenario) -> f64 {
    s.stance_load() * s.forward_lean
}

pub fn stair_hip_torque(s: &StairScenario) -> f64 {
    s.stance_load() * s.hip_width / 2.0
}

/// Stance-leg torques with the hip attachment at `hip_height`, directly
/// above the ankle and carrying the full load.
pub fn stance_torques(s: &StairScenario, geom: &LegGeometry, hip_height: f64) -> Result<(JointState, JointTorques)> {
    let q = solve_squat_posture(geom, hip_height, Plane::Sagittal, 0.0)?;
    let w = PlanarWrench {
        f_t: 0.0,
        f_n: -s.stance_load(),
        m: 0.0,
    };
    Ok((q, leg_torques_from_wrench(&jacobian(geom, &q), &w)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KneeWorstCase {
    /// Largest knee torque magnitude, Nm.
    pub torque: f64,
    pub hip_height: f64,
    pub posture: JointState,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StairSweepSample {
    pub hip_height: f64,
    pub torques: JointTorques,
}

fn hip_height_band(s: &StairScenario, geom: &LegGeometry) -> Result<(f64, f64)> {
    let band = geom.standing_height() - geom.crawling_height();
    if s.stair_height >= band {
        return Err(Error::UnreachableStep {
            stair_height: s.stair_height,
            band,
        });
    }
    Ok((geom.standing_height() - s.stair_height, geom.standing_height()))
}

/// Stance torques over the hip descent needed to clear the step, from the
/// lowest hip height up to full extension.
pub fn stair_knee_sweep(s: &StairScenario, geom: &LegGeometry, samples: usize) -> Result<Vec<StairSweepSample>> {
    let (lo, hi) = hip_height_band(s, geom)?;
    let n = samples.max(2);
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| {
            let h = if i + 1 == n { hi } else { lo + step * i as f64 };
            stance_torques(s, geom, h).map(|(_, torques)| StairSweepSample { hip_height: h, torques })
        })
        .collect()
}

pub fn stair_knee_torque(s: &StairScenario, geom: &LegGeometry) -> Result<KneeWorstCase> {
    let (lo, hi) = hip_height_band(s, geom)?;
    let sweep = stair_knee_sweep(s, geom, KNEE_SWEEP_SAMPLES)?;
    let (best_i, _) = sweep
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, smp)| {
            let k = smp.torques.tau_knee.abs();
            if k > best.1 {
                (i, k)
            } else {
                best
            }
        });
    let knee_at = |h: f64| stance_torques(s, geom, h).map(|(_, t)| t.tau_knee.abs());

    // Golden-section refinement on the bracket around the best sample.
    let mut a = sweep[best_i.saturating_sub(1)].hip_height.max(lo);
    let mut b = sweep[(best_i + 1).min(sweep.len() - 1)].hip_height.min(hi);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let c = b - ratio * (b - a);
        let d = a + ratio * (b - a);
        if knee_at(c)? >= knee_at(d)? {
            b = d;
        } else {
            a = c;
        }
    }
    let mut best_h = 0.5 * (a + b);
    if knee_at(best_h)? < sweep[best_i].torques.tau_knee.abs() {
        best_h = sweep[best_i].hip_height;
    }
    let (posture, torques) = stance_torques(s, geom, best_h)?;
    Ok(KneeWorstCase {
        torque: torques.tau_knee.abs(),
        hip_height: best_h,
        posture,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StairPeaks {
    pub knee: f64,
    pub ankle: f64,
    pub hip: f64,
    pub knee_worst: KneeWorstCase,
}

pub fn stair_peaks(s: &StairScenario, geom: &LegGeometry) -> Result<StairPeaks> {
    let knee_worst = stair_knee_torque(s, geom)?;
    Ok(StairPeaks {
        knee: knee_worst.torque,
        ankle: stair_ankle_torque(s).abs(),
        hip: stair_hip_torque(s).abs(),
        knee_worst,
    })
}
