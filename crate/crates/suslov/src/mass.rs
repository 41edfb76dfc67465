use nalgebra::Matrix3;

use crate::SuslovError;

/// Symmetric mass tensor J of the body.
///
/// The binary form `(J22+J33) x² − 2 J12 x y + (J11+J33) y²` must be
/// positive definite; this is what bounds the number of real preimages of
/// the discrete map by two.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MassTensor {
    j11: f64,
    j22: f64,
    j33: f64,
    j12: f64,
    j13: f64,
    j23: f64,
}

impl MassTensor {
    pub fn new(j11: f64, j22: f64, j33: f64, j12: f64, j13: f64, j23: f64) -> Result<Self, SuslovError> {
        if ![j11, j22, j33, j12, j13, j23].iter().all(|x| x.is_finite()) {
            return Err(SuslovError::NonFinite);
        }
        let a = j22 + j33;
        let b = j11 + j33;
        let det = a * b - j12 * j12;
        if a <= 0.0 || det <= 0.0 {
            return Err(SuslovError::NotPositive { det, trace: a + b });
        }
        Ok(Self { j11, j22, j33, j12, j13, j23 })
    }

    pub fn diagonal(j1: f64, j2: f64, j3: f64) -> Result<Self, SuslovError> {
        Self::new(j1, j2, j3, 0.0, 0.0, 0.0)
    }

    pub fn j11(&self) -> f64 {
        self.j11
    }
    pub fn j22(&self) -> f64 {
        self.j22
    }
    pub fn j33(&self) -> f64 {
        self.j33
    }
    pub fn j12(&self) -> f64 {
        self.j12
    }
    pub fn j13(&self) -> f64 {
        self.j13
    }
    pub fn j23(&self) -> f64 {
        self.j23
    }

    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::new(
            self.j11, self.j12, self.j13, //
            self.j12, self.j22, self.j23, //
            self.j13, self.j23, self.j33,
        )
    }

    /// `J13 = J23 = 0`: every point of the discrete map is stationary.
    pub fn is_balanced(&self) -> bool {
        self.j13 == 0.0 && self.j23 == 0.0
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_balanced() && self.j12 == 0.0
    }

    /// `𝕀 = tr(J)·1 − J`, the inertia tensor of the body.
    pub fn inertia(&self) -> Result<InertiaOperator, SuslovError> {
        let j = self.matrix();
        InertiaOperator::new(Matrix3::identity() * j.trace() - j)
    }
}

/// Symmetric positive definite inertia tensor with its inverse cached.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InertiaOperator {
    m: Matrix3<f64>,
    inv: Matrix3<f64>,
}

impl InertiaOperator {
    pub fn new(m: Matrix3<f64>) -> Result<Self, SuslovError> {
        let m = 0.5 * (m + m.transpose());
        let chol = m.cholesky().ok_or(SuslovError::InertiaNotPositive)?;
        Ok(Self { m, inv: chol.inverse() })
    }

    pub fn principal(i1: f64, i2: f64, i3: f64) -> Result<Self, SuslovError> {
        Self::new(Matrix3::from_diagonal(&nalgebra::Vector3::new(i1, i2, i3)))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    pub fn inverse(&self) -> &Matrix3<f64> {
        &self.inv
    }
}
