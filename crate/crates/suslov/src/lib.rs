//! The Suslov top: a rigid body whose angular velocity is constrained to
//! the plane orthogonal to a body-fixed vector.
//!
//! The continuous part integrates the reduced momentum equation on so*(3).
//! The discrete part implements the multivalued map on ℝP² obtained from
//! the trace-form discrete Lagrangian restricted to admissible rotations.

mod continuous;
mod error;
mod integrals;
mod lagrangian;
mod mass;
mod momentum;
mod step;

pub use continuous::{
    suslov_degenerate_integral, suslov_energy, suslov_reduced_energy, suslov_rhs, suslov_rk4_step,
    SuslovContinuousState,
};
pub use error::SuslovError;
pub use integrals::{
    cal_coords, cal_monotonicity_increment, classify_equilibrium, stability_form, stationarity_form,
    suslov_quadratic_integral, suslov_quartic_integral, CalCoords, EquilibriumClass,
    STATIONARY_TOL,
};
pub use lagrangian::{
    discrete_lagrangian_euler_angles, discrete_lagrangian_pair, discrete_lagrangian_so3,
    discrete_lagrangian_trace, euler_angle_rotation, kinetic_energy_euler_angles, EulerAngles,
};
pub use mass::{InertiaOperator, MassTensor};
pub use momentum::{
    coadjoint_momentum_from_q, momentum_from_matrix, momentum_from_q, steiner_residual,
    BodyMomentumSO3,
};
pub use step::{
    disk_seeds, solve_sys, solve_sys_with, suslov_step, suslov_step_backward, sys_config,
    sys_residual, BranchTag, StepReport, SuslovDiscreteState, SysRoots,
};
