//! Planar three-joint leg kinematics.
//!
//! Frame: origin at the ankle joint, `z` up, `t` the in-plane horizontal
//! axis. In the sagittal model `t` points forward; in the frontal model it
//! points from the ankle toward the body midline, and the left leg is the
//! mirror image of the right. Joint angles are relative bends measured from
//! the straight leg, positive when rotating from `z` toward `t`, and are
//! ordered foot to body: (ankle, knee, hip). The hip attachment orientation
//! `phi` is the sum of the three angles; the torso is level at `phi = 0`.
//!
//! Both knee branches put the knee on the `−t` side of the ankle-hip line
//! (`theta_knee >= 0`): behind the leg in the sagittal model, outboard in the
//! frontal model.

use nalgebra::{Matrix3, RowVector3};
use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};
use crate::model::LegGeometry;

/// Slack allowed when checking that a requested hip distance is reachable.
const REACH_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Plane {
    Sagittal,
    Frontal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KneeBranch {
    KneesBack,
    KneesOut,
}

impl Plane {
    pub fn knee_branch(&self) -> KneeBranch {
        match self {
            Plane::Sagittal => KneeBranch::KneesBack,
            Plane::Frontal => KneeBranch::KneesOut,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointState {
    pub theta_ankle: f64,
    pub theta_knee: f64,
    pub theta_hip: f64,
    pub plane: Plane,
    pub knee_branch: KneeBranch,
}

impl JointState {
    pub fn new(theta_ankle: f64, theta_knee: f64, theta_hip: f64, plane: Plane) -> Result<Self> {
        check_finite("theta_ankle", theta_ankle)?;
        check_finite("theta_knee", theta_knee)?;
        check_finite("theta_hip", theta_hip)?;
        Ok(Self {
            theta_ankle,
            theta_knee,
            theta_hip,
            plane,
            knee_branch: plane.knee_branch(),
        })
    }

    /// Straight leg, torso level.
    pub fn straight(plane: Plane) -> Self {
        Self {
            theta_ankle: 0.0,
            theta_knee: 0.0,
            theta_hip: 0.0,
            plane,
            knee_branch: plane.knee_branch(),
        }
    }

    /// The same posture seen in the mirrored frame (`t → −t`).
    pub fn mirrored(&self) -> Self {
        Self {
            theta_ankle: -self.theta_ankle,
            theta_knee: -self.theta_knee,
            theta_hip: -self.theta_hip,
            ..*self
        }
    }

    pub fn angles(&self) -> [f64; 3] {
        [self.theta_ankle, self.theta_knee, self.theta_hip]
    }

    pub fn with_angles(&self, angles: [f64; 3]) -> Self {
        Self {
            theta_ankle: angles[0],
            theta_knee: angles[1],
            theta_hip: angles[2],
            ..*self
        }
    }

    /// Inclination of the shank from vertical.
    pub fn shank_inclination(&self) -> f64 {
        self.theta_ankle
    }

    /// Inclination of the thigh from vertical.
    pub fn thigh_inclination(&self) -> f64 {
        self.theta_ankle + self.theta_knee
    }
}

/// Hip attachment pose relative to the ankle joint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HipPose {
    pub t: f64,
    pub z: f64,
    pub phi: f64,
}

/// 3×3 map from joint rates (ankle, knee, hip) to the hip attachment twist
/// (tangential velocity, vertical velocity, angular rate).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarJacobian(pub Matrix3<f64>);

impl PlanarJacobian {
    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn row_t(&self) -> RowVector3<f64> {
        self.0.row(0).into_owned()
    }

    pub fn row_z(&self) -> RowVector3<f64> {
        self.0.row(1).into_owned()
    }

    pub fn row_theta(&self) -> RowVector3<f64> {
        self.0.row(2).into_owned()
    }

    /// The 2×3 block of the tangential and angular rows.
    pub fn tangential_angular_block(&self) -> nalgebra::Matrix2x3<f64> {
        let mut m = nalgebra::Matrix2x3::zeros();
        m.set_row(0, &self.row_t());
        m.set_row(1, &self.row_theta());
        m
    }
}

pub fn forward_kinematics(geom: &LegGeometry, q: &JointState) -> HipPose {
    let shank = q.shank_inclination();
    let thigh = q.thigh_inclination();
    HipPose {
        t: geom.l2() * shank.sin() + geom.l1() * thigh.sin(),
        z: geom.l2() * shank.cos() + geom.l1() * thigh.cos(),
        phi: thigh + q.theta_hip,
    }
}

pub fn jacobian(geom: &LegGeometry, q: &JointState) -> PlanarJacobian {
    let (s2, c2) = q.shank_inclination().sin_cos();
    let (s1, c1) = q.thigh_inclination().sin_cos();
    let (l1, l2) = (geom.l1(), geom.l2());
    PlanarJacobian(Matrix3::new(
        l2 * c2 + l1 * c1,
        l1 * c1,
        0.0,
        -l2 * s2 - l1 * s1,
        -l1 * s1,
        0.0,
        1.0,
        1.0,
        1.0,
    ))
}

/// Joint state placing the hip attachment at `(lateral_offset, height)`
/// with the torso level, using the knee branch of `plane`.
///
/// Solved in closed form: the knee from the link triangle, then the ankle
/// from the target direction, then the hip closes the orientation.
pub fn solve_squat_posture(
    geom: &LegGeometry,
    height: f64,
    plane: Plane,
    lateral_offset: f64,
) -> Result<JointState> {
    check_finite("height", height)?;
    check_finite("lateral_offset", lateral_offset)?;
    if plane == Plane::Sagittal && lateral_offset != 0.0 {
        return Err(Error::BranchInfeasible(format!(
            "sagittal squat stands directly over the ankle; lateral offset {lateral_offset} m given"
        )));
    }
    let (l1, l2) = (geom.l1(), geom.l2());
    let (min, max) = (geom.crawling_height(), geom.standing_height());
    let reach = height.hypot(lateral_offset);
    if height <= 0.0 || reach < min - REACH_SLACK || reach > max + REACH_SLACK {
        return Err(Error::UnreachableHeight {
            height,
            offset: lateral_offset,
            min,
            max,
        });
    }
    // Half-angle form; acos of the cosine rule loses half its digits near
    // the straight and folded postures.
    let open = ((max - reach) * (max + reach)).max(0.0);
    let fold = ((reach - min) * (reach + min)).max(0.0);
    let knee = 2.0 * open.sqrt().atan2(fold.sqrt());
    let ankle = lateral_offset.atan2(height) - (l1 * knee.sin()).atan2(l2 + l1 * knee.cos());
    let hip = -(ankle + knee);
    JointState::new(ankle, knee, hip, plane)
}

/// Hip heights of the two singular postures: (straight, fully folded).
pub fn singular_heights(geom: &LegGeometry) -> (f64, f64) {
    (geom.standing_height(), geom.crawling_height())
}
