//! Least-squares use of the frontal chain's internal wrench.
//!
//! The sum of squared joint torques, `V(f_y, m) = τᵀτ`, is a convex
//! quadratic in the internal wrench. Its minimizer is
//! `(f_y, m) = −(J_ytᵀ)⁺ τ_0`, where `τ_0` is the torque vector at zero
//! internal wrench, and the optimal torques are the projection
//! `τ* = (I − J_ytᵀ (J_ytᵀ)⁺) τ_0`.

use nalgebra::{Matrix2x3, Matrix3, Matrix3x2, Vector3};

use super::{frontal_torques_at, InternalWrench, SquatModel};
use crate::error::Result;
use crate::kinematics::{jacobian, PlanarJacobian};
use crate::model::JointTorques;

/// Singular values below this fraction of the largest are treated as zero.
const PINV_RELATIVE_CUTOFF: f64 = 1e-10;

/// Moore–Penrose pseudoinverse of a 3×2 matrix via SVD.
pub fn pseudo_inverse(a: &Matrix3x2<f64>) -> Matrix2x3<f64> {
    let svd = a.svd(true, true);
    let u = svd.u.expect("svd computed with u");
    let v_t = svd.v_t.expect("svd computed with v_t");
    let cutoff = PINV_RELATIVE_CUTOFF * svd.singular_values.max();
    let mut pinv = Matrix2x3::zeros();
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > cutoff && s > 0.0 {
            pinv += v_t.row(i).transpose() * u.column(i).transpose() / s;
        }
    }
    pinv
}

/// `I − J_ytᵀ (J_ytᵀ)⁺`, the projector onto torques the internal wrench
/// cannot reach.
pub fn l2_projector(jac: &PlanarJacobian) -> Matrix3<f64> {
    let a = jac.tangential_angular_block().transpose();
    Matrix3::identity() - a * pseudo_inverse(&a)
}

pub fn optimal_internal_wrench_at(jac: &PlanarJacobian, tau_zero: &Vector3<f64>) -> InternalWrench {
    let a = jac.tangential_angular_block().transpose();
    let x = -(pseudo_inverse(&a) * tau_zero);
    InternalWrench { f_y: x[0], m: x[1] }
}

/// Sum of squared right-leg torques for a given internal wrench.
pub fn squared_torque_objective(jac: &PlanarJacobian, model: &SquatModel, iw: &InternalWrench) -> f64 {
    frontal_torques_at(jac, &model.load, iw).to_vector().norm_squared()
}

pub fn optimal_internal_wrench(model: &SquatModel, height: f64) -> Result<InternalWrench> {
    let q = model.frontal_posture(height)?;
    let jac = jacobian(&model.geom, &q);
    let tau_zero = frontal_torques_at(&jac, &model.load, &InternalWrench::ZERO).to_vector();
    Ok(optimal_internal_wrench_at(&jac, &tau_zero))
}

/// Torques of the least-squares internal wrench, via the projector.
pub fn optimal_torques_l2(model: &SquatModel, height: f64) -> Result<JointTorques> {
    let q = model.frontal_posture(height)?;
    let jac = jacobian(&model.geom, &q);
    let tau_zero = frontal_torques_at(&jac, &model.load, &InternalWrench::ZERO).to_vector();
    Ok(JointTorques::from_vector(&(l2_projector(&jac) * tau_zero)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{JointState, Plane};
    use crate::model::{LegGeometry, LoadCase, ScenarioKind};
    use crate::statics::frontal_chain_torques;
    use proptest::prelude::*;

    fn model(l1: f64, l2: f64, mg: f64, offset: f64) -> SquatModel {
        let load = LoadCase::new(ScenarioKind::Squat, mg, 0.0, 0.0, true).unwrap();
        SquatModel::new(LegGeometry::new(l1, l2).unwrap(), load, offset, 0.15)
    }

    #[test]
    fn pseudo_inverse_of_full_rank_is_left_inverse() {
        let a = Matrix3x2::new(1.0, 2.0, 0.5, -1.0, 3.0, 0.25);
        let p = pseudo_inverse(&a);
        assert!((p * a - nalgebra::Matrix2::identity()).amax() <= 1e-12);
    }

    #[test]
    fn pseudo_inverse_of_rank_one() {
        let a = Matrix3x2::new(1.0, 2.0, 1.0, 2.0, 1.0, 2.0);
        let p = pseudo_inverse(&a);
        // Penrose conditions
        assert!((a * p * a - a).amax() <= 1e-12);
        assert!((p * a * p - p).amax() <= 1e-12);
        assert!(((a * p).transpose() - a * p).amax() <= 1e-12);
        assert!(((p * a).transpose() - p * a).amax() <= 1e-12);
    }

    #[test]
    fn straight_leg_needs_no_internal_wrench() {
        let m = model(0.4, 0.6, 800.0, 0.0);
        let iw = optimal_internal_wrench(&m, 1.0).unwrap();
        assert_eq!(iw, InternalWrench { f_y: 0.0, m: 0.0 });
        assert_eq!(optimal_torques_l2(&m, 1.0).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn projector_route_matches_wrench_route() {
        let m = model(0.4, 0.6, 800.0, 0.1);
        for h in [0.35, 0.6, 0.85] {
            let iw = optimal_internal_wrench(&m, h).unwrap();
            let via_wrench = frontal_chain_torques(&m, h, &iw).unwrap();
            let via_projector = optimal_torques_l2(&m, h).unwrap();
            assert!((via_wrench.to_vector() - via_projector.to_vector()).norm() <= 1e-9);
        }
    }

    proptest! {
        #[test]
        fn projector_is_idempotent(a in -1.5f64..1.5, k in 0.0f64..3.1, hp in -1.5f64..1.5) {
            let g = LegGeometry::new(0.4, 0.6).unwrap();
            let jac = jacobian(&g, &JointState::new(a, k, hp, Plane::Frontal).unwrap());
            let p = l2_projector(&jac);
            prop_assert!((p * p - p).amax() <= 1e-12);
            prop_assert!((p.transpose() - p).amax() <= 1e-12);
        }

        #[test]
        fn l2_never_worse_than_zero_wrench(
            l1 in 0.2f64..0.6, extra in 0.05f64..0.8, mg in 0.0f64..2000.0,
            frac in 0.01f64..0.99, offset in -0.2f64..0.3,
        ) {
            let m = model(l1, l1 + extra, mg, offset);
            let g = m.geom;
            let h = g.crawling_height() + frac * (g.standing_height() - g.crawling_height());
            prop_assume!(m.frontal_posture(h).is_ok());
            let zero = frontal_chain_torques(&m, h, &InternalWrench::ZERO).unwrap();
            let best = optimal_torques_l2(&m, h).unwrap();
            prop_assert!(best.l2_norm() <= zero.l2_norm() * (1.0 + 1e-12) + 1e-12);
        }
    }
}
