//! Height sweeps of the squat strategies.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    frontal_torques_at, minimax_torques, optimal_internal_wrench_at, sagittal_squat_torques, AnkleMode,
    InternalWrench, SquatModel,
};
use crate::error::{Error, Result};
use crate::kinematics::jacobian;
use crate::model::{JointTorques, LegGeometry};

/// Margin kept from the singular end postures in default sweeps, m.
pub const SWEEP_END_MARGIN: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Sagittal,
    FrontalL2,
    FrontalMinimax,
    FrontalFixedAnkle,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::Sagittal,
        Strategy::FrontalL2,
        Strategy::FrontalMinimax,
        Strategy::FrontalFixedAnkle,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Strategy::Sagittal => "sagittal",
            Strategy::FrontalL2 => "frontal_l2",
            Strategy::FrontalMinimax => "frontal_minimax",
            Strategy::FrontalFixedAnkle => "frontal_fixed_ankle",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.tag() == tag)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleValues {
    pub torques: JointTorques,
    /// `None` for the sagittal strategy.
    pub internal_wrench: Option<InternalWrench>,
    pub max_abs: f64,
    pub l2_norm: f64,
}

impl SampleValues {
    fn new(torques: JointTorques, internal_wrench: Option<InternalWrench>) -> Self {
        Self {
            torques,
            internal_wrench,
            max_abs: torques.max_abs(),
            l2_norm: torques.l2_norm(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSample {
    pub height: f64,
    /// `Err` when the posture is unreachable; the sweep carries on.
    pub values: std::result::Result<SampleValues, Error>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SquatProfile {
    pub strategy: Strategy,
    pub samples: Vec<ProfileSample>,
}

impl SquatProfile {
    pub fn reachable(&self) -> impl Iterator<Item = (f64, &SampleValues)> {
        self.samples
            .iter()
            .filter_map(|s| s.values.as_ref().ok().map(|v| (s.height, v)))
    }

    pub fn peak_max_abs(&self) -> f64 {
        self.reachable().map(|(_, v)| v.max_abs).fold(0.0, f64::max)
    }

    pub fn all_unreachable(&self) -> bool {
        self.samples.iter().all(|s| s.values.is_err())
    }
}

/// `n` evenly spaced heights over `[ℓ_c + 1 mm, ℓ_s − 1 mm]`.
pub fn sweep_heights(geom: &LegGeometry, n: usize) -> Vec<f64> {
    let lo = geom.crawling_height() + SWEEP_END_MARGIN;
    let hi = geom.standing_height() - SWEEP_END_MARGIN;
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i + 1 == n { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

fn evaluate(model: &SquatModel, height: f64, strategy: Strategy) -> Result<SampleValues> {
    match strategy {
        Strategy::Sagittal => {
            let t = sagittal_squat_torques(&model.geom, &model.load, height)?;
            Ok(SampleValues::new(t, None))
        }
        Strategy::FrontalL2 => {
            let q = model.frontal_posture(height)?;
            let jac = jacobian(&model.geom, &q);
            let tau_zero = frontal_torques_at(&jac, &model.load, &InternalWrench::ZERO).to_vector();
            let iw = optimal_internal_wrench_at(&jac, &tau_zero);
            let t = frontal_torques_at(&jac, &model.load, &iw);
            Ok(SampleValues::new(t, Some(iw)))
        }
        Strategy::FrontalMinimax | Strategy::FrontalFixedAnkle => {
            let mode = if strategy == Strategy::FrontalMinimax {
                AnkleMode::Free
            } else {
                AnkleMode::Fixed(model.foot_hold_ankle_torque())
            };
            let sol = minimax_torques(model, height, mode)?;
            let iw = sol.constraints.internal_wrench(&sol.torques);
            Ok(SampleValues::new(sol.torques, Some(iw)))
        }
    }
}

/// Evaluates `strategy` at each height. Heights must be strictly increasing.
/// Samples are computed in parallel and assembled in height order.
pub fn squat_profile(model: &SquatModel, heights: &[f64], strategy: Strategy) -> Result<SquatProfile> {
    if heights.windows(2).any(|w| w[1] <= w[0]) || heights.iter().any(|h| !h.is_finite()) {
        return Err(Error::InvalidInput {
            field: "heights",
            reason: "sweep heights must be finite and strictly increasing".into(),
        });
    }
    let samples = heights
        .par_iter()
        .map(|&height| ProfileSample {
            height,
            values: evaluate(model, height, strategy),
        })
        .collect();
    Ok(SquatProfile { strategy, samples })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub height: f64,
    pub sagittal_max_abs: Option<f64>,
    pub frontal_l2_max_abs: Option<f64>,
    pub frontal_minimax_max_abs: Option<f64>,
    /// ‖τ_L2‖ / ‖τ(zero internal wrench)‖ in the frontal chain; zero when
    /// both vanish.
    pub l2_norm_ratio: Option<f64>,
    /// Frontal minimax peak over sagittal peak; zero when both vanish.
    pub minimax_to_sagittal_ratio: Option<f64>,
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        num / den
    }
}

pub fn compare_strategies(model: &SquatModel, heights: &[f64]) -> Result<Vec<ComparisonRow>> {
    let sag = squat_profile(model, heights, Strategy::Sagittal)?;
    let l2 = squat_profile(model, heights, Strategy::FrontalL2)?;
    let mm = squat_profile(model, heights, Strategy::FrontalMinimax)?;
    let rows = heights
        .par_iter()
        .enumerate()
        .map(|(i, &height)| {
            let s = sag.samples[i].values.as_ref().ok();
            let l = l2.samples[i].values.as_ref().ok();
            let m = mm.samples[i].values.as_ref().ok();
            let zero_norm = model
                .frontal_posture(height)
                .ok()
                .map(|q| {
                    frontal_torques_at(&jacobian(&model.geom, &q), &model.load, &InternalWrench::ZERO).l2_norm()
                });
            ComparisonRow {
                height,
                sagittal_max_abs: s.map(|v| v.max_abs),
                frontal_l2_max_abs: l.map(|v| v.max_abs),
                frontal_minimax_max_abs: m.map(|v| v.max_abs),
                l2_norm_ratio: l.zip(zero_norm).map(|(v, z)| ratio(v.l2_norm, z)),
                minimax_to_sagittal_ratio: m.zip(s).map(|(m, s)| ratio(m.max_abs, s.max_abs)),
            }
        })
        .collect();
    Ok(rows)
}
