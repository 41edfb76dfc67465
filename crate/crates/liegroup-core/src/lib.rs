//! Exact kinematics on SO(3), SO(n) and SE(2).
//!
//! Everything here is a pure function on small value types. The two
//! dynamics crates build their discrete maps out of the admissible
//! displacement parameterizations and coadjoint actions defined here.

mod error;
pub mod se2;
pub mod so3;
pub mod son;

pub use error::KinematicsError;
pub use se2::{
    coad_se2, exp_d_se2, helical_displacement, wrap_angle, HelicalDisplacement, PoseSE2,
};
pub use so3::{
    admissible_rotation_so3, coad_so3, hat3, log_admissible_so3, rotation_from_euler_rodrigues,
    vee3, AdmissibleRotationParam, EulerRodrigues, RotationSO3,
};
pub use son::{admissible_rotation_son, has_admissible_structure, UnitSpherePointN};

/// Tolerance on unit-norm and orthogonality invariants of values we build ourselves.
pub const CONSTRUCTION_TOL: f64 = 1e-12;
/// Tolerance for accepting matrices handed in from outside.
pub const INPUT_TOL: f64 = 1e-10;
/// How far a rotation may sit off the admissible variety before `log` refuses it.
pub const VARIETY_TOL: f64 = 1e-8;
