use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SuslovError {
    #[error("mass tensor reduced form is not positive definite (det {det:e}, trace {trace:e})")]
    NotPositive { det: f64, trace: f64 },
    #[error("non-finite mass tensor entry")]
    NonFinite,
    #[error("inertia operator is not positive definite")]
    InertiaNotPositive,
    #[error("constraint vector is zero")]
    ZeroConstraint,
    #[error("surface coefficients are singular: {0}")]
    DegenerateSurface(&'static str),
    #[error("no real preimage for targets ({t1:e}, {t2:e}); {seeds} seeds tried")]
    NoRealRoot { t1: f64, t2: f64, seeds: usize },
    #[error("branch index {index} requested but only {available} roots exist")]
    BranchIndex { index: usize, available: usize },
}
