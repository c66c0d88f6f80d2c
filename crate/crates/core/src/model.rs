//! Core domain types: operator dimensions, leg geometry, load cases, and the
//! wrench/torque value types shared by every analysis.
//!
//! Everything stored here is SI (m, kg, N, Nm). Imperial figures are
//! converted with the helpers in [`units`] before they reach a constructor.

use serde::{Deserialize, Serialize};

use crate::error::{check_finite, check_non_negative, check_positive, Error, Result};

/// Standard gravity, m/s².
pub const STANDARD_GRAVITY: f64 = 9.80665;

/// Default rearing-moment arm of the assistive force, m.
///
/// Back-solved so that one leg's share of the rearing moment,
/// `222.4 N × arm / 2`, equals the 59 Nm constant hip/ankle torque of the
/// sagittal squat.
pub const DEFAULT_ASSIST_MOMENT_ARM: f64 = 2.0 * 59.0 / 222.4;

pub mod units {
    //! Boundary conversions from imperial units.

    pub const NEWTONS_PER_POUND_FORCE: f64 = 4.448_221_615_260_5;
    pub const METERS_PER_INCH: f64 = 0.0254;
    pub const KILOGRAMS_PER_POUND: f64 = 0.453_592_37;

    pub fn pound_force_to_newtons(lbf: f64) -> f64 {
        lbf * NEWTONS_PER_POUND_FORCE
    }

    pub fn inches_to_meters(inches: f64) -> f64 {
        inches * METERS_PER_INCH
    }

    pub fn pounds_to_kilograms(lb: f64) -> f64 {
        lb * KILOGRAMS_PER_POUND
    }
}

/// Operator-derived attachment heights and widths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Anthropometrics {
    /// Hip attachment height while standing (ℓ_s), m.
    pub standing_attach_height: f64,
    /// Hip attachment height while crawling (ℓ_c), m.
    pub crawling_attach_height: f64,
    pub hip_width: f64,
    pub foot_width: f64,
}

impl Default for Anthropometrics {
    /// Estimates for a 194.31 cm operator. The attachment heights are not
    /// measured values; the foot width reproduces a 30.5 Nm foot-hold ankle
    /// torque at an 800.7 N squat load.
    fn default() -> Self {
        Self {
            standing_attach_height: 1.45,
            crawling_attach_height: 0.60,
            hip_width: 0.3556,
            foot_width: 0.1524,
        }
    }
}

impl Anthropometrics {
    pub fn new(
        standing_attach_height: f64,
        crawling_attach_height: f64,
        hip_width: f64,
        foot_width: f64,
    ) -> Result<Self> {
        let a = Self {
            standing_attach_height,
            crawling_attach_height,
            hip_width,
            foot_width,
        };
        a.validate()?;
        Ok(a)
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("crawling_attach_height", self.crawling_attach_height)?;
        check_positive("standing_attach_height", self.standing_attach_height)?;
        if self.standing_attach_height <= self.crawling_attach_height {
            return Err(Error::DegenerateGeometry(format!(
                "standing height {} m must exceed crawling height {} m",
                self.standing_attach_height, self.crawling_attach_height
            )));
        }
        check_positive("hip_width", self.hip_width)?;
        check_positive("foot_width", self.foot_width)?;
        Ok(())
    }
}

/// Link lengths of one leg. `l1` is the thigh (knee to hip attachment),
/// `l2` the shank (ankle to knee).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LegGeometry {
    l1: f64,
    l2: f64,
}

impl LegGeometry {
    pub fn new(l1: f64, l2: f64) -> Result<Self> {
        check_positive("l1", l1)?;
        check_positive("l2", l2)?;
        if l2 <= l1 {
            return Err(Error::DegenerateGeometry(format!(
                "shank l2 = {l2} m must be longer than thigh l1 = {l1} m"
            )));
        }
        Ok(Self { l1, l2 })
    }

    pub fn l1(&self) -> f64 {
        self.l1
    }

    pub fn l2(&self) -> f64 {
        self.l2
    }

    /// Hip height with the leg fully extended.
    pub fn standing_height(&self) -> f64 {
        self.l1 + self.l2
    }

    /// Hip height with the knee fully folded.
    pub fn crawling_height(&self) -> f64 {
        self.l2 - self.l1
    }
}

/// Link lengths that make the standing and crawling attachment heights the
/// two singular postures of the leg: `ℓ_s = l1 + l2`, `ℓ_c = l2 − l1`.
pub fn solve_link_lengths(anthro: &Anthropometrics) -> Result<LegGeometry> {
    let ls = anthro.standing_attach_height;
    let lc = anthro.crawling_attach_height;
    check_finite("standing_attach_height", ls)?;
    check_finite("crawling_attach_height", lc)?;
    if lc <= 0.0 || ls <= lc {
        return Err(Error::DegenerateGeometry(format!(
            "need standing height > crawling height > 0, got ℓ_s = {ls} m, ℓ_c = {lc} m"
        )));
    }
    LegGeometry::new((ls - lc) / 2.0, (ls + lc) / 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    /// Both legs on the ground, assistive lift applied to the operator.
    Squat,
    /// One leg on the ground, no assistive lift.
    Stair,
    /// Caller-specified totals.
    Custom,
}

/// Loads defining a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoadCase {
    pub kind: ScenarioKind,
    /// Total vertical load (gravity plus assistive), N, positive magnitude.
    pub total_vertical_load: f64,
    pub assist_force: f64,
    pub assist_moment_arm: f64,
    /// Whether the loads are shared equally by two legs.
    pub per_leg: bool,
}

impl LoadCase {
    pub fn new(
        kind: ScenarioKind,
        total_vertical_load: f64,
        assist_force: f64,
        assist_moment_arm: f64,
        per_leg: bool,
    ) -> Result<Self> {
        check_non_negative("total_vertical_load", total_vertical_load)?;
        check_non_negative("assist_force", assist_force)?;
        check_non_negative("assist_moment_arm", assist_moment_arm)?;
        Ok(Self {
            kind,
            total_vertical_load,
            assist_force,
            assist_moment_arm,
            per_leg,
        })
    }

    /// A stair load from a stated total, carried by a single leg.
    pub fn stair_total(total_vertical_load: f64) -> Result<Self> {
        Self::new(ScenarioKind::Stair, total_vertical_load, 0.0, 0.0, false)
    }

    pub fn with_assist_moment_arm(mut self, arm: f64) -> Result<Self> {
        check_non_negative("assist_moment_arm", arm)?;
        self.assist_moment_arm = arm;
        Ok(self)
    }

    /// Vertical load on one supporting leg.
    pub fn leg_vertical_load(&self) -> f64 {
        if self.per_leg {
            self.total_vertical_load / 2.0
        } else {
            self.total_vertical_load
        }
    }

    /// Rearing moment from the assistive force.
    pub fn assist_moment(&self) -> f64 {
        self.assist_force * self.assist_moment_arm
    }

    pub fn leg_assist_moment(&self) -> f64 {
        if self.per_leg {
            self.assist_moment() / 2.0
        } else {
            self.assist_moment()
        }
    }

    /// Same case with every load multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            total_vertical_load: self.total_vertical_load * factor,
            assist_force: self.assist_force * factor,
            ..*self
        }
    }
}

/// Builds a load case from masses and the assistive force.
///
/// Squat loads include the assistive force and are split over two legs.
/// Stair loads exclude it and rest on one leg.
pub fn make_load_case(
    kind: ScenarioKind,
    robot_mass: f64,
    payload_mass: f64,
    assist_force: f64,
) -> Result<LoadCase> {
    check_non_negative("robot_mass", robot_mass)?;
    check_non_negative("payload_mass", payload_mass)?;
    check_non_negative("assist_force", assist_force)?;
    let weight = (robot_mass + payload_mass) * STANDARD_GRAVITY;
    match kind {
        ScenarioKind::Squat | ScenarioKind::Custom => LoadCase::new(
            kind,
            weight + assist_force,
            assist_force,
            DEFAULT_ASSIST_MOMENT_ARM,
            true,
        ),
        ScenarioKind::Stair => LoadCase::new(kind, weight, 0.0, 0.0, false),
    }
}

/// Force and moment applied at the hip attachment of one leg, expressed in
/// the leg's plane: tangential force, vertical force, moment about the plane
/// normal (same sense as the joint angles).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PlanarWrench {
    pub f_t: f64,
    pub f_n: f64,
    pub m: f64,
}

impl PlanarWrench {
    pub fn new(f_t: f64, f_n: f64, m: f64) -> Result<Self> {
        check_finite("f_t", f_t)?;
        check_finite("f_n", f_n)?;
        check_finite("m", m)?;
        Ok(Self { f_t, f_n, m })
    }

    pub fn as_vector(&self) -> nalgebra::Vector3<f64> {
        nalgebra::Vector3::new(self.f_t, self.f_n, self.m)
    }
}

/// Joint torques of one leg, Nm, stored by joint name.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct JointTorques {
    pub tau_hip: f64,
    pub tau_knee: f64,
    pub tau_ankle: f64,
}

impl JointTorques {
    pub const ZERO: Self = Self {
        tau_hip: 0.0,
        tau_knee: 0.0,
        tau_ankle: 0.0,
    };

    pub fn new(tau_hip: f64, tau_knee: f64, tau_ankle: f64) -> Self {
        Self {
            tau_hip,
            tau_knee,
            tau_ankle,
        }
    }

    /// Torques in foot-to-body joint order (ankle, knee, hip).
    pub fn to_vector(&self) -> nalgebra::Vector3<f64> {
        nalgebra::Vector3::new(self.tau_ankle, self.tau_knee, self.tau_hip)
    }

    pub fn from_vector(v: &nalgebra::Vector3<f64>) -> Self {
        Self::new(v[2], v[1], v[0])
    }

    pub fn max_abs(&self) -> f64 {
        self.tau_hip
            .abs()
            .max(self.tau_knee.abs())
            .max(self.tau_ankle.abs())
    }

    pub fn l2_norm(&self) -> f64 {
        self.to_vector().norm()
    }

    pub fn is_finite(&self) -> bool {
        self.tau_hip.is_finite() && self.tau_knee.is_finite() && self.tau_ankle.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Joint {
    Hip,
    Knee,
    Ankle,
}

impl Joint {
    pub const ALL: [Joint; 3] = [Joint::Hip, Joint::Knee, Joint::Ankle];

    pub fn name(&self) -> &'static str {
        match self {
            Joint::Hip => "hip",
            Joint::Knee => "knee",
            Joint::Ankle => "ankle",
        }
    }

    pub fn of(&self, torques: &JointTorques) -> f64 {
        match self {
            Joint::Hip => torques.tau_hip,
            Joint::Knee => torques.tau_knee,
            Joint::Ankle => torques.tau_ankle,
        }
    }
}

impl std::fmt::Display for Joint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn anthro(ls: f64, lc: f64) -> Anthropometrics {
        Anthropometrics {
            standing_attach_height: ls,
            crawling_attach_height: lc,
            ..Default::default()
        }
    }

    #[test]
    fn link_lengths_from_heights() {
        let g = solve_link_lengths(&anthro(1.0, 0.2)).unwrap();
        assert_relative_eq!(g.l1(), 0.4, epsilon = 1e-15);
        assert_relative_eq!(g.l2(), 0.6, epsilon = 1e-15);

        let g = solve_link_lengths(&anthro(1.6, 0.7)).unwrap();
        assert_relative_eq!(g.l1(), 0.45, epsilon = 1e-15);
        assert_relative_eq!(g.l2(), 1.15, epsilon = 1e-15);
    }

    #[test]
    fn equal_heights_are_degenerate() {
        assert!(matches!(
            solve_link_lengths(&anthro(0.8, 0.8)),
            Err(Error::DegenerateGeometry(_))
        ));
        assert!(matches!(
            solve_link_lengths(&anthro(0.5, 0.8)),
            Err(Error::DegenerateGeometry(_))
        ));
        assert!(solve_link_lengths(&anthro(0.8, 0.0)).is_err());
    }

    #[test]
    fn geometry_rejects_long_thigh() {
        assert!(LegGeometry::new(0.5, 0.5).is_err());
        assert!(LegGeometry::new(0.0, 0.5).is_err());
    }

    #[test]
    fn squat_load_matches_reported_total() {
        let load = make_load_case(ScenarioKind::Squat, 36.3, 22.7, 222.4).unwrap();
        assert_relative_eq!(load.total_vertical_load, 800.9, max_relative = 2e-4);
        assert!((load.total_vertical_load - 800.7).abs() / 800.7 <= 5e-4);
        assert!(load.per_leg);
        assert_relative_eq!(load.leg_vertical_load(), load.total_vertical_load / 2.0);
    }

    #[test]
    fn stair_load_excludes_assist() {
        let load = make_load_case(ScenarioKind::Stair, 36.3, 22.7, 222.4).unwrap();
        assert_relative_eq!(load.total_vertical_load, 578.6, max_relative = 2e-4);
        assert!((load.total_vertical_load - 578.3).abs() / 578.3 <= 6e-4);
        assert_eq!(load.assist_force, 0.0);
        assert!(!load.per_leg);
        assert_eq!(load.leg_vertical_load(), load.total_vertical_load);
    }

    #[test]
    fn zero_masses_zero_load() {
        let load = make_load_case(ScenarioKind::Squat, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(load.total_vertical_load, 0.0);
    }

    #[test]
    fn negative_inputs_rejected() {
        assert!(matches!(
            make_load_case(ScenarioKind::Squat, -1.0, 0.0, 0.0),
            Err(Error::InvalidInput { field: "robot_mass", .. })
        ));
        assert!(make_load_case(ScenarioKind::Squat, 1.0, -0.1, 0.0).is_err());
        assert!(make_load_case(ScenarioKind::Squat, 1.0, 0.0, -3.0).is_err());
    }

    #[test]
    fn assist_arm_reproduces_constant_torque() {
        assert_relative_eq!(DEFAULT_ASSIST_MOMENT_ARM, 0.5306, epsilon = 1e-4);
        let load = make_load_case(ScenarioKind::Squat, 36.3, 22.7, 222.4).unwrap();
        assert_relative_eq!(load.leg_assist_moment(), 59.0, epsilon = 1e-12);
    }

    #[test]
    fn imperial_conversions() {
        assert_relative_eq!(units::inches_to_meters(14.0), 0.3556, epsilon = 1e-12);
        assert_relative_eq!(units::pound_force_to_newtons(180.0), 800.7, epsilon = 0.05);
        assert_relative_eq!(units::pound_force_to_newtons(130.0), 578.3, epsilon = 0.05);
        assert_relative_eq!(units::pounds_to_kilograms(80.0), 36.3, epsilon = 0.05);
    }

    #[test]
    fn default_foot_width_gives_reported_ankle_hold() {
        let fw = Anthropometrics::default().foot_width;
        assert_relative_eq!(fw, 0.1524, epsilon = 1e-12);
        assert_relative_eq!(800.7 / 2.0 * fw / 2.0, 30.5, epsilon = 0.01);
    }

    proptest! {
        #[test]
        fn link_lengths_round_trip(lc in 0.01f64..2.0, extra in 0.01f64..2.0) {
            let ls = lc + extra;
            let g = solve_link_lengths(&anthro(ls, lc)).unwrap();
            prop_assert!((g.standing_height() - ls).abs() <= 1e-12 * ls);
            prop_assert!((g.crawling_height() - lc).abs() <= 1e-12 * ls);
        }

        #[test]
        fn load_is_monotone(
            robot in 0.0f64..200.0,
            payload in 0.0f64..200.0,
            assist in 0.0f64..1000.0,
            bump in 0.0f64..50.0,
        ) {
            let base = make_load_case(ScenarioKind::Squat, robot, payload, assist).unwrap();
            for bumped in [
                make_load_case(ScenarioKind::Squat, robot + bump, payload, assist),
                make_load_case(ScenarioKind::Squat, robot, payload + bump, assist),
                make_load_case(ScenarioKind::Squat, robot, payload, assist + bump),
            ] {
                prop_assert!(bumped.unwrap().total_vertical_load >= base.total_vertical_load);
            }
        }
    }
}
