use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SleighError {
    #[error("mass and inertia must be positive (m = {m:e}, J = {j:e})")]
    NotPositive { m: f64, j: f64 },
    #[error("non-finite sleigh parameter or state")]
    NonFinite,
    #[error("rotation increment {0} is too close to ±π for the tangent chart")]
    NearSingularTangent(f64),
    #[error("displacement violates the constraint (residual {0:e})")]
    ConstraintViolated(f64),
    #[error("no admissible displacement for momenta ({p_theta:e}, {p1:e})")]
    NoAdmissibleRoot { p_theta: f64, p1: f64 },
    #[error("branch index {index} requested but only {available} roots exist")]
    BranchIndex { index: usize, available: usize },
    #[error("inversion residual {0:e} above tolerance")]
    SolverResidual(f64),
    #[error("operation needs b = 0, got b = {0}")]
    NeedsCenteredOffset(f64),
    #[error("operation needs a > 0, got a = {0}")]
    NeedsPositiveOffset(f64),
    #[error("energy {energy:e} is not below the single-valued bound {bound:e}")]
    EnergyBound { energy: f64, bound: f64 },
}
