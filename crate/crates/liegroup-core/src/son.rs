//! Admissible rotations in SO(n): rotations in a 2-plane containing e_n.

use nalgebra::{DMatrix, DVector};

use crate::{KinematicsError, CONSTRUCTION_TOL};

/// Point `(z0, ..., z_{n-1})` of the unit sphere S^{n-1}.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitSpherePointN {
    z: DVector<f64>,
}

impl UnitSpherePointN {
    pub fn new(z: Vec<f64>) -> Result<Self, KinematicsError> {
        if z.len() < 2 {
            return Err(KinematicsError::DimensionTooSmall(z.len()));
        }
        let z = DVector::from_vec(z);
        let n = z.norm();
        if (n - 1.0).abs() > CONSTRUCTION_TOL {
            return Err(KinematicsError::NotUnit(n));
        }
        Ok(Self { z })
    }

    pub fn normalized(z: Vec<f64>) -> Result<Self, KinematicsError> {
        if z.len() < 2 {
            return Err(KinematicsError::DimensionTooSmall(z.len()));
        }
        let z = DVector::from_vec(z);
        let n = z.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(KinematicsError::ZeroVector);
        }
        Ok(Self { z: z / n })
    }

    /// Matrix dimension n (the sphere lives in ℝⁿ).
    pub fn dim(&self) -> usize {
        self.z.len()
    }

    pub fn components(&self) -> &DVector<f64> {
        &self.z
    }
}

/// `Ω_ij = δ_ij − 2 z_i z_j`, `Ω_in = −Ω_ni = 2 z0 z_i`, `Ω_nn = 2 z0² − 1`
/// with i, j running over 1..n−1 (1-based, as in the usual statement).
pub fn admissible_rotation_son(z: &UnitSpherePointN) -> DMatrix<f64> {
    let n = z.dim();
    let zs = &z.z;
    let z0 = zs[0];
    DMatrix::from_fn(n, n, |r, c| {
        let (i, j) = (r + 1, c + 1);
        match (i == n, j == n) {
            (false, false) => {
                let d = if i == j { 1.0 } else { 0.0 };
                d - 2.0 * zs[i] * zs[j]
            }
            (false, true) => 2.0 * z0 * zs[i],
            (true, false) => -2.0 * z0 * zs[j],
            (true, true) => 2.0 * z0 * z0 - 1.0,
        }
    })
}

/// Checks symmetry of the leading (n−1)×(n−1) block and antisymmetry of
/// the last row against the last column, off the diagonal.
pub fn has_admissible_structure(m: &DMatrix<f64>, tol: f64) -> bool {
    let n = m.nrows();
    if m.ncols() != n {
        return false;
    }
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            if (m[(i, j)] - m[(j, i)]).abs() > tol {
                return false;
            }
        }
        if (m[(i, n - 1)] + m[(n - 1, i)]).abs() > tol {
            return false;
        }
    }
    true
}
