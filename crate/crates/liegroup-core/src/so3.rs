//! SO(3): hat/vee, Euler–Rodrigues matrices and the ℝP² family of
//! rotations about axes in the (e1, e2) plane.

use nalgebra::{Matrix3, Vector3};

use crate::{KinematicsError, CONSTRUCTION_TOL, INPUT_TOL, VARIETY_TOL};

/// Skew matrix with `hat3(v) * w == v × w`.
pub fn hat3(v: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// Inverse of [`hat3`]. Reads `(m32, m13, m21)`, which for a skew matrix is
/// the same as `(-m23, m13, -m12)`.
pub fn vee3(m: &Matrix3<f64>) -> Result<Vector3<f64>, KinematicsError> {
    let asym = (m + m.transpose()).abs().max();
    if asym > INPUT_TOL {
        return Err(KinematicsError::NotSkew(asym));
    }
    Ok(Vector3::new(m[(2, 1)], m[(0, 2)], m[(1, 0)]))
}

fn orthogonality_defect(m: &Matrix3<f64>) -> f64 {
    (m.transpose() * m - Matrix3::identity()).abs().max()
}

/// A 3×3 rotation matrix. Construction from raw matrices is checked.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationSO3 {
    m: Matrix3<f64>,
}

impl RotationSO3 {
    pub fn identity() -> Self {
        Self { m: Matrix3::identity() }
    }

    pub fn from_matrix(m: Matrix3<f64>) -> Result<Self, KinematicsError> {
        let defect = orthogonality_defect(&m);
        let det = m.determinant();
        if defect > INPUT_TOL || (det - 1.0).abs() > INPUT_TOL {
            return Err(KinematicsError::NotRotation { defect, det });
        }
        Ok(Self { m })
    }

    pub(crate) fn from_matrix_unchecked(m: Matrix3<f64>) -> Self {
        debug_assert!(orthogonality_defect(&m) < 1e3 * CONSTRUCTION_TOL);
        Self { m }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    pub fn transpose(&self) -> Self {
        Self { m: self.m.transpose() }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self { m: self.m * other.m }
    }

    pub fn orthogonality_defect(&self) -> f64 {
        orthogonality_defect(&self.m)
    }
}

/// Unit quaternion-like parameters for the double cover S³ → SO(3).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerRodrigues {
    pub q0: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
}

impl EulerRodrigues {
    pub fn new(q0: f64, q1: f64, q2: f64, q3: f64) -> Result<Self, KinematicsError> {
        let n = (q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3).sqrt();
        if (n - 1.0).abs() > CONSTRUCTION_TOL {
            return Err(KinematicsError::NotUnit(n));
        }
        Ok(Self { q0, q1, q2, q3 })
    }

    pub fn normalized(q0: f64, q1: f64, q2: f64, q3: f64) -> Result<Self, KinematicsError> {
        let n = (q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(KinematicsError::ZeroVector);
        }
        Ok(Self { q0: q0 / n, q1: q1 / n, q2: q2 / n, q3: q3 / n })
    }
}

/// The Euler–Rodrigues rotation matrix, entry for entry.
pub fn rotation_from_euler_rodrigues(q: &EulerRodrigues) -> RotationSO3 {
    let EulerRodrigues { q0, q1, q2, q3 } = *q;
    let m = Matrix3::new(
        q0 * q0 + q1 * q1 - q2 * q2 - q3 * q3,
        2.0 * (q1 * q2 + q3 * q0),
        -2.0 * (q1 * q3 - q2 * q0),
        2.0 * (q1 * q2 - q3 * q0),
        q0 * q0 + q2 * q2 - q1 * q1 - q3 * q3,
        -2.0 * (q2 * q3 + q0 * q1),
        -2.0 * (q1 * q3 + q2 * q0),
        -2.0 * (q2 * q3 - q0 * q1),
        q0 * q0 + q3 * q3 - q1 * q1 - q2 * q2,
    );
    RotationSO3::from_matrix_unchecked(m)
}

/// A point of ℝP² stored as its canonical representative on S².
///
/// Canonical means `q0 >= 0`, and when `q0 == 0` the first nonzero of
/// `(q1, q2)` is positive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdmissibleRotationParam {
    q0: f64,
    q1: f64,
    q2: f64,
}

fn canonical(q0: f64, q1: f64, q2: f64) -> (f64, f64, f64) {
    let flip = q0 < 0.0 || (q0 == 0.0 && (q1 < 0.0 || (q1 == 0.0 && q2 < 0.0)));
    if flip {
        (-q0, -q1, -q2)
    } else {
        (q0, q1, q2)
    }
}

impl AdmissibleRotationParam {
    pub const IDENTITY: Self = Self { q0: 1.0, q1: 0.0, q2: 0.0 };

    /// Checked constructor; the sign is canonicalized.
    pub fn new(q0: f64, q1: f64, q2: f64) -> Result<Self, KinematicsError> {
        let n = (q0 * q0 + q1 * q1 + q2 * q2).sqrt();
        if (n - 1.0).abs() > CONSTRUCTION_TOL {
            return Err(KinematicsError::NotUnit(n));
        }
        let (q0, q1, q2) = canonical(q0, q1, q2);
        Ok(Self { q0, q1, q2 })
    }

    /// Projects any nonzero vector onto the sphere, then canonicalizes.
    pub fn normalized(q0: f64, q1: f64, q2: f64) -> Result<Self, KinematicsError> {
        let n = (q0 * q0 + q1 * q1 + q2 * q2).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(KinematicsError::ZeroVector);
        }
        let (q0, q1, q2) = canonical(q0 / n, q1 / n, q2 / n);
        Ok(Self { q0, q1, q2 })
    }

    /// Upper-hemisphere point over the disk `q1² + q2² <= 1`.
    pub fn from_disk(q1: f64, q2: f64) -> Result<Self, KinematicsError> {
        let r2 = q1 * q1 + q2 * q2;
        if r2 > 1.0 + CONSTRUCTION_TOL {
            return Err(KinematicsError::NotUnit(r2.sqrt()));
        }
        Self::normalized((1.0 - r2).max(0.0).sqrt(), q1, q2)
    }

    /// Exponential of the in-plane rotation vector `(w1, w2, 0)`.
    pub fn from_rotation_vector(w1: f64, w2: f64) -> Self {
        let angle = w1.hypot(w2);
        if angle < 1e-300 {
            return Self::IDENTITY;
        }
        let s = (0.5 * angle).sin() / angle;
        let (q0, q1, q2) = canonical((0.5 * angle).cos(), s * w1, s * w2);
        Self { q0, q1, q2 }
    }

    pub fn q0(&self) -> f64 {
        self.q0
    }
    pub fn q1(&self) -> f64 {
        self.q1
    }
    pub fn q2(&self) -> f64 {
        self.q2
    }

    pub fn as_vector(&self) -> Vector3<f64> {
        Vector3::new(self.q0, self.q1, self.q2)
    }

    /// Parameter of the inverse rotation `Ωᵀ`.
    pub fn inverse(&self) -> Self {
        let (q0, q1, q2) = canonical(self.q0, -self.q1, -self.q2);
        Self { q0, q1, q2 }
    }

    /// Chordal distance on ℝP²: `min(|p - p'|, |p + p'|)`.
    pub fn chordal_distance(&self, other: &Self) -> f64 {
        let a = self.as_vector();
        let b = other.as_vector();
        (a - b).norm().min((a + b).norm())
    }

    pub fn norm_sq_in_plane(&self) -> f64 {
        self.q1 * self.q1 + self.q2 * self.q2
    }
}

/// Rotation about the axis `(q1, q2, 0)`; the Euler–Rodrigues matrix with `q3 = 0`.
pub fn admissible_rotation_so3(p: &AdmissibleRotationParam) -> RotationSO3 {
    let (q0, q1, q2) = (p.q0, p.q1, p.q2);
    let m = Matrix3::new(
        2.0 * (q0 * q0 + q1 * q1) - 1.0,
        2.0 * q1 * q2,
        2.0 * q0 * q2,
        2.0 * q1 * q2,
        2.0 * (q0 * q0 + q2 * q2) - 1.0,
        -2.0 * q0 * q1,
        -2.0 * q0 * q2,
        2.0 * q0 * q1,
        2.0 * q0 * q0 - 1.0,
    );
    RotationSO3::from_matrix_unchecked(m)
}

/// Worst violation of "symmetric upper block, antisymmetric last row/column".
pub fn admissible_structure_defect(m: &Matrix3<f64>) -> f64 {
    [
        (m[(0, 1)] - m[(1, 0)]).abs(),
        (m[(0, 2)] + m[(2, 0)]).abs(),
        (m[(1, 2)] + m[(2, 1)]).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

/// Recovers the canonical parameter of an admissible rotation.
pub fn log_admissible_so3(r: &RotationSO3) -> Result<AdmissibleRotationParam, KinematicsError> {
    let m = r.matrix();
    let defect = admissible_structure_defect(m);
    if defect > VARIETY_TOL {
        return Err(KinematicsError::OffVariety(defect));
    }
    let sq0 = 0.5 * (m[(2, 2)] + 1.0);
    let sq1 = 0.5 * (m[(0, 0)] - m[(2, 2)]);
    let sq2 = 0.5 * (m[(1, 1)] - m[(2, 2)]);
    let p01 = 0.25 * (m[(2, 1)] - m[(1, 2)]);
    let p02 = 0.25 * (m[(0, 2)] - m[(2, 0)]);
    let p12 = 0.25 * (m[(0, 1)] + m[(1, 0)]);
    let (q0, q1, q2) = if sq0 >= sq1 && sq0 >= sq2 {
        let q0 = sq0.max(0.0).sqrt();
        (q0, p01 / q0, p02 / q0)
    } else if sq1 >= sq2 {
        let q1 = sq1.max(0.0).sqrt();
        (p01 / q1, q1, p12 / q1)
    } else {
        let q2 = sq2.max(0.0).sqrt();
        (p02 / q2, p12 / q2, q2)
    };
    AdmissibleRotationParam::normalized(q0, q1, q2)
}

/// Coadjoint transport `Ωᵀ M` of a body momentum by an admissible displacement.
pub fn coad_so3(p: &AdmissibleRotationParam, m: &Vector3<f64>) -> Vector3<f64> {
    admissible_rotation_so3(p).matrix().transpose() * m
}
