//! The Chaplygin sleigh: a planar body on a knife edge that cannot slide
//! sideways.
//!
//! The continuous part integrates the momentum equation on se*(2). The
//! discrete part restricts one-step displacements to circular translations
//! and iterates the resulting multivalued map on body momenta.

mod asymptotics;
mod continuous;
mod discrete;
mod error;
mod params;
mod surface;

pub use asymptotics::{sleigh_asymptotics_check, AsymptoticsReport};
pub use continuous::{
    continuous_momenta, continuous_velocities, reconstruct_continuous_a0, sleigh_continuous_rhs,
    sleigh_energy, sleigh_lagrangian_quadratic_form, sleigh_reduced_lagrangian, sleigh_rk4_step,
    trace_form_matrix, SleighContinuousState,
};
pub use discrete::{
    constrained_preimages, discrete_lagrangian_se2, discrete_momentum_se2, displacement_from_momenta,
    free_displacement_from_momentum, group_constraint_residual, mid_angle_residuals, naive_step,
    reconstruct_discrete, similarity_center, sleigh_free_step, sleigh_step, sleigh_step_backward,
    step3_residual, turning_center,
    SleighBranch, SleighStepReport, STEP_RESIDUAL_TOL,
};
pub use error::SleighError;
pub use params::{
    constraint_residual, naive_constraint_v2, p_hat1, v2_from_constraint, HatCoords, SleighDisplacement,
    SleighMomentum, SleighParams, TANGENT_MARGIN,
};
pub use surface::{
    cubic_coefficients, cubic_discriminant, cubic_residual, discriminant_quartic, ellipse_residual,
    surface_classify, Sign, SurfaceClass,
};
