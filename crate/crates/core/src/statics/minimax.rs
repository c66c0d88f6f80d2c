//! Minimax torque redistribution in the frontal squat.
//!
//! Holding the lateral squeeze force at zero and treating the internal
//! moment as the redundant input, the right-leg torques form a
//! one-parameter family fixed by two difference constraints:
//!
//! ```text
//! τ_knee  − τ_hip  = (mg/2) · l1 · sin(thigh inclination)
//! τ_ankle − τ_knee = (mg/2) · l2 · sin(shank inclination)
//! ```
//!
//! Parametrizing by the ankle torque `a`, each joint torque is `a − p_j` for
//! a constant offset `p_j`, so `max_j |τ_j|` is piecewise linear and convex
//! in `a`. Its minimum sits on a breakpoint: an offset or the midpoint of
//! two offsets. Enumerating them gives the exact optimum.
//!
//! In the usual `τ1..τ3` numbering these read `−l1 sin θ1 (mg/2) = τ2 − τ1`
//! and `l2 sin θ3 (mg/2) = τ3 − τ2` with τ1 = hip, τ2 = knee, τ3 = ankle,
//! θ1 = −(thigh inclination) and θ3 = shank inclination.

use serde::{Deserialize, Serialize};

use super::{InternalWrench, SquatModel};
use crate::error::{check_finite, Error, Result};
use crate::kinematics::JointState;
use crate::model::{JointTorques, LegGeometry};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode", content = "ankle_torque")]
pub enum AnkleMode {
    /// Ankle torque chosen to minimize the largest joint torque.
    Free,
    /// Ankle torque pinned; hip and knee follow from the constraints.
    Fixed(f64),
}

/// Right-hand sides of the two difference constraints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyConstraints {
    pub knee_minus_hip: f64,
    pub ankle_minus_knee: f64,
}

impl FamilyConstraints {
    pub fn from_posture(geom: &LegGeometry, q: &JointState, leg_load: f64) -> Self {
        Self {
            knee_minus_hip: leg_load * geom.l1() * q.thigh_inclination().sin(),
            ankle_minus_knee: leg_load * geom.l2() * q.shank_inclination().sin(),
        }
    }

    /// The family member with the given ankle torque.
    pub fn torques_for_ankle(&self, ankle: f64) -> JointTorques {
        let knee = ankle - self.ankle_minus_knee;
        JointTorques::new(knee - self.knee_minus_hip, knee, ankle)
    }

    /// Offsets `p_j` with `τ_j = a − p_j`, in (hip, knee, ankle) order.
    pub fn offsets(&self) -> [f64; 3] {
        [
            self.knee_minus_hip + self.ankle_minus_knee,
            self.ankle_minus_knee,
            0.0,
        ]
    }

    /// Constraint violations of a torque triple, (knee − hip, ankle − knee).
    pub fn residuals(&self, t: &JointTorques) -> (f64, f64) {
        (
            (t.tau_knee - t.tau_hip) - self.knee_minus_hip,
            (t.tau_ankle - t.tau_knee) - self.ankle_minus_knee,
        )
    }

    /// Internal wrench producing a family member in the frontal chain. The
    /// squeeze force is zero and the moment equals the hip torque.
    pub fn internal_wrench(&self, t: &JointTorques) -> InternalWrench {
        InternalWrench { f_y: 0.0, m: t.tau_hip }
    }
}

/// Exact minimizer of `a ↦ max_j |a − p_j|` by breakpoint enumeration.
///
/// Returns `(argmin, min)`. Ties resolve to the smallest argmin. An empty
/// slice yields `(0, 0)`.
pub fn minimize_max_abs_offset(points: &[f64]) -> (f64, f64) {
    let objective = |a: f64| points.iter().fold(0.0f64, |acc, p| acc.max((a - p).abs()));
    let mut best = (0.0, objective(0.0));
    if points.is_empty() {
        return best;
    }
    best = (points[0], objective(points[0]));
    let mut consider = |a: f64| {
        let v = objective(a);
        if v < best.1 || (v == best.1 && a < best.0) {
            best = (a, v);
        }
    };
    for (i, &p) in points.iter().enumerate() {
        consider(p);
        for &r in &points[i + 1..] {
            consider(0.5 * (p + r));
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimaxSolution {
    pub torques: JointTorques,
    pub max_abs: f64,
    /// The ankle torque selecting this member of the family.
    pub free_param: f64,
    pub constraints: FamilyConstraints,
}

pub fn minimax_torques(model: &SquatModel, height: f64, ankle_mode: AnkleMode) -> Result<MinimaxSolution> {
    let q = model.frontal_posture(height)?;
    let constraints = FamilyConstraints::from_posture(&model.geom, &q, model.load.leg_vertical_load());
    let ankle = match ankle_mode {
        AnkleMode::Free => minimize_max_abs_offset(&constraints.offsets()).0,
        AnkleMode::Fixed(a) => {
            check_finite("ankle_torque", a)?;
            a
        }
    };
    let torques = constraints.torques_for_ankle(ankle);
    Ok(MinimaxSolution {
        torques,
        max_abs: torques.max_abs(),
        free_param: ankle,
        constraints,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RedistributionSample {
    pub free_param: f64,
    pub torques: JointTorques,
    pub max_abs: f64,
    pub is_optimum: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RedistributionSweep {
    pub height: f64,
    pub constraints: FamilyConstraints,
    pub optimum: MinimaxSolution,
    /// Ascending in the free parameter; the exact optimum is inserted in
    /// order and flagged.
    pub samples: Vec<RedistributionSample>,
}

/// Sweeps the ankle torque over `range` with `samples` evenly spaced points.
pub fn redistribution_sweep(
    model: &SquatModel,
    height: f64,
    range: (f64, f64),
    samples: usize,
) -> Result<RedistributionSweep> {
    let (lo, hi) = range;
    check_finite("range.lo", lo)?;
    check_finite("range.hi", hi)?;
    if hi < lo || samples == 0 {
        return Err(Error::InvalidInput {
            field: "free_param_range",
            reason: format!("need lo <= hi and at least one sample, got [{lo}, {hi}] x {samples}"),
        });
    }
    let optimum = minimax_torques(model, height, AnkleMode::Free)?;
    let c = optimum.constraints;
    let step = if samples > 1 { (hi - lo) / (samples - 1) as f64 } else { 0.0 };
    let mut rows: Vec<RedistributionSample> = (0..samples)
        .map(|i| {
            let a = if i + 1 == samples { hi } else { lo + step * i as f64 };
            let t = c.torques_for_ankle(a);
            RedistributionSample {
                free_param: a,
                torques: t,
                max_abs: t.max_abs(),
                is_optimum: false,
            }
        })
        .collect();
    let opt_row = RedistributionSample {
        free_param: optimum.free_param,
        torques: optimum.torques,
        max_abs: optimum.max_abs,
        is_optimum: true,
    };
    match rows.iter().position(|r| r.free_param >= opt_row.free_param) {
        Some(i) if rows[i].free_param == opt_row.free_param => rows[i].is_optimum = true,
        Some(i) => rows.insert(i, opt_row),
        None => rows.push(opt_row),
    }
    Ok(RedistributionSweep {
        height,
        constraints: c,
        optimum,
        samples: rows,
    })
}
