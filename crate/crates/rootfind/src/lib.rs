//! Numerical kernels shared by the discrete maps: closed-form real roots of
//! cubics and quartics, damped Newton in a few variables, multistart root
//! enumeration, and finite-difference helpers used by test oracles.

mod branch;
pub mod fd;
mod newton;
mod poly;

pub use branch::{select_branch, BranchPolicy, ParsePolicyError};
pub use newton::{
    multistart, multistart_with, newton, newton2, MultistartReport, NewtonConfig, NewtonFailure,
    NewtonRoot, SeedOutcome,
};
pub use poly::{
    real_roots, real_roots_cubic, real_roots_quadratic, real_roots_quartic, PolynomialRealCoeffs,
    PolynomialError, RealRoot,
};
