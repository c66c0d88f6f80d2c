//! Static torque analysis for a pair of payload-bearing planar robotic legs.
//!
//! The crate models each leg as a three-joint planar chain, maps hip
//! attachment loads to joint torques through the transpose Jacobian, and
//! compares squat strategies: an open-chain sagittal squat and a closed-chain
//! frontal squat whose internal wrench redistributes torque across joints.
//! It also sizes motors, differentials and gear reductions against the
//! resulting peaks, and ships a config-driven CLI (`xrl`) that writes CSV
//! sweeps and a reconciliation report.

pub mod actuation;
pub mod cli;
pub mod error;
pub mod kinematics;
pub mod model;
pub mod stairs;
pub mod statics;

pub use error::{Error, Result};
