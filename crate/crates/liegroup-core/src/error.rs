use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KinematicsError {
    #[error("matrix is not skew-symmetric (max |m + mᵀ| = {0:e})")]
    NotSkew(f64),
    #[error("matrix is not a rotation (orthogonality defect {defect:e}, det {det})")]
    NotRotation { defect: f64, det: f64 },
    #[error("parameter vector is not unit length (norm {0})")]
    NotUnit(f64),
    #[error("rotation is off the admissible variety (structure defect {0:e})")]
    OffVariety(f64),
    #[error("dimension {0} is too small, need n >= 2")]
    DimensionTooSmall(usize),
    #[error("zero vector has no direction")]
    ZeroVector,
}
