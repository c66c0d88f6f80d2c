//! Quasi-static joint torques for squat postures.
//!
//! Every torque here comes from the transpose-Jacobian law `τ = Jᵀ w`, with
//! `w` the wrench one leg must deliver to the body at its hip attachment.
//! The sagittal squat is an open chain per leg. In the frontal squat both
//! legs, the ground and the body close a loop, which leaves a lateral squeeze
//! force and a moment free to choose: the right leg carries `(+f_y, +m)` and
//! the left `(−f_y, −m)` in a common frame. Results are reported for the
//! right leg; the left leg's torques are identical in its mirrored frame.

mod minimax;
mod profile;
mod redundancy;

pub use minimax::{
    minimax_torques, minimize_max_abs_offset, redistribution_sweep, AnkleMode, FamilyConstraints,
    MinimaxSolution, RedistributionSample, RedistributionSweep,
};
pub use profile::{
    compare_strategies, squat_profile, sweep_heights, ComparisonRow, ProfileSample, SampleValues,
    SquatProfile, Strategy,
};
pub use redundancy::{
    l2_projector, optimal_internal_wrench, optimal_internal_wrench_at, optimal_torques_l2,
    pseudo_inverse, squared_torque_objective,
};

use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Result};
use crate::kinematics::{jacobian, solve_squat_posture, JointState, PlanarJacobian, Plane};
use crate::model::{JointTorques, LegGeometry, LoadCase, PlanarWrench};

/// Free lateral force and moment circulating in the closed frontal chain.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct InternalWrench {
    pub f_y: f64,
    pub m: f64,
}

impl InternalWrench {
    pub const ZERO: Self = Self { f_y: 0.0, m: 0.0 };

    pub fn new(f_y: f64, m: f64) -> Result<Self> {
        check_finite("f_y", f_y)?;
        check_finite("m", m)?;
        Ok(Self { f_y, m })
    }

    /// The share carried by the left leg, in the common frame.
    pub fn left(&self) -> Self {
        Self {
            f_y: -self.f_y,
            m: -self.m,
        }
    }
}

/// Everything the squat analyses need besides the hip height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SquatModel {
    pub geom: LegGeometry,
    pub load: LoadCase,
    /// Horizontal distance from ankle to hip attachment in the frontal
    /// model, positive toward the body midline.
    pub lateral_offset: f64,
    pub foot_width: f64,
}

impl SquatModel {
    pub fn new(geom: LegGeometry, load: LoadCase, lateral_offset: f64, foot_width: f64) -> Self {
        Self {
            geom,
            load,
            lateral_offset,
            foot_width,
        }
    }

    /// Lateral offset of each leg for a given ankle spacing.
    pub fn offset_for_stance(stance_width: f64, hip_width: f64) -> f64 {
        (stance_width - hip_width) / 2.0
    }

    pub fn frontal_posture(&self, height: f64) -> Result<JointState> {
        solve_squat_posture(&self.geom, height, Plane::Frontal, self.lateral_offset)
    }

    pub fn sagittal_posture(&self, height: f64) -> Result<JointState> {
        solve_squat_posture(&self.geom, height, Plane::Sagittal, 0.0)
    }

    /// Ankle torque that keeps the foot edge from lifting: half the
    /// gravitational load times half the foot width.
    pub fn foot_hold_ankle_torque(&self) -> f64 {
        self.load.leg_vertical_load() * self.foot_width / 2.0
    }
}

pub fn leg_torques_from_wrench(jac: &PlanarJacobian, w: &PlanarWrench) -> JointTorques {
    JointTorques::from_vector(&(jac.matrix().transpose() * w.as_vector()))
}

/// Wrench each leg delivers in the sagittal squat: half the vertical load
/// and half the rearing moment of the assistive force.
pub fn sagittal_wrench(load: &LoadCase) -> PlanarWrench {
    PlanarWrench {
        f_t: 0.0,
        f_n: -load.leg_vertical_load(),
        m: load.leg_assist_moment(),
    }
}

pub fn sagittal_squat_torques(geom: &LegGeometry, load: &LoadCase, height: f64) -> Result<JointTorques> {
    let q = solve_squat_posture(geom, height, Plane::Sagittal, 0.0)?;
    Ok(leg_torques_from_wrench(&jacobian(geom, &q), &sagittal_wrench(load)))
}

/// Right-leg wrench in the frontal squat for a given internal wrench.
pub fn frontal_wrench(load: &LoadCase, iw: &InternalWrench) -> PlanarWrench {
    PlanarWrench {
        f_t: iw.f_y,
        f_n: -load.leg_vertical_load(),
        m: iw.m,
    }
}

/// `τ = J_ytᵀ (f_y, m) − J_zᵀ · (mg/2)` at a known posture.
pub fn frontal_torques_at(jac: &PlanarJacobian, load: &LoadCase, iw: &InternalWrench) -> JointTorques {
    let free = jac.tangential_angular_block().transpose() * nalgebra::Vector2::new(iw.f_y, iw.m);
    let gravity = jac.row_z().transpose() * load.leg_vertical_load();
    JointTorques::from_vector(&(free - gravity))
}

pub fn frontal_chain_torques(model: &SquatModel, height: f64, iw: &InternalWrench) -> Result<JointTorques> {
    let q = model.frontal_posture(height)?;
    Ok(frontal_torques_at(&jacobian(&model.geom, &q), &model.load, iw))
}
