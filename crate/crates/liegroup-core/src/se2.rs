//! Planar rigid motions SE(2) and the coadjoint action on se*(2).
//!
//! Covectors in se*(2) are stored as `(p_θ, p_1, p_2)`, paired with
//! algebra elements `(ω, v_1, v_2)` by the dot product.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};

/// Maps an angle to (−π, π].
pub fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoseSE2 {
    pub theta: f64,
    pub x: f64,
    pub y: f64,
}

impl PoseSE2 {
    pub const IDENTITY: Self = Self { theta: 0.0, x: 0.0, y: 0.0 };

    pub fn new(theta: f64, x: f64, y: f64) -> Self {
        Self { theta: wrap_angle(theta), x, y }
    }

    /// Homogeneous 3×3 matrix.
    pub fn to_matrix(&self) -> Matrix3<f64> {
        let (s, c) = self.theta.sin_cos();
        Matrix3::new(c, -s, self.x, s, c, self.y, 0.0, 0.0, 1.0)
    }

    pub fn from_matrix(m: &Matrix3<f64>) -> Self {
        Self::new(m[(1, 0)].atan2(m[(0, 0)]), m[(0, 2)], m[(1, 2)])
    }

    /// `self · other`: apply `other` in the body frame of `self`.
    pub fn compose(&self, other: &PoseSE2) -> PoseSE2 {
        let (s, c) = self.theta.sin_cos();
        PoseSE2::new(
            self.theta + other.theta,
            self.x + c * other.x - s * other.y,
            self.y + s * other.x + c * other.y,
        )
    }

    pub fn inverse(&self) -> PoseSE2 {
        let (s, c) = self.theta.sin_cos();
        PoseSE2::new(-self.theta, -(c * self.x + s * self.y), s * self.x - c * self.y)
    }
}

/// Body-frame increment `X_a⁻¹ X_b`: rotation angle and translation column.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HelicalDisplacement {
    pub dtheta: f64,
    pub t1: f64,
    pub t2: f64,
}

impl HelicalDisplacement {
    pub fn as_pose(&self) -> PoseSE2 {
        PoseSE2::new(self.dtheta, self.t1, self.t2)
    }
}

pub fn helical_displacement(a: &PoseSE2, b: &PoseSE2) -> HelicalDisplacement {
    let (s, c) = a.theta.sin_cos();
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    HelicalDisplacement {
        dtheta: wrap_angle(b.theta - a.theta),
        t1: c * dx + s * dy,
        t2: -s * dx + c * dy,
    }
}

/// `exp(S t)` for `S` with angular rate ω and forward speed v along the blade.
pub fn exp_d_se2(omega: f64, v: f64, t: f64) -> PoseSE2 {
    let phi = omega * t;
    if phi.abs() < 1e-8 {
        // sin φ/φ ≈ 1 − φ²/6, (1 − cos φ)/φ ≈ φ/2
        let vt = v * t;
        return PoseSE2::new(phi, vt * (1.0 - phi * phi / 6.0), vt * 0.5 * phi);
    }
    let r = v / omega;
    let h = (0.5 * phi).sin();
    PoseSE2::new(phi, r * phi.sin(), 2.0 * r * h * h)
}

/// `Ad*_Ω P` for the displacement `(Δθ, V1, V2)`.
pub fn coad_se2(d: &HelicalDisplacement, p: &Vector3<f64>) -> Vector3<f64> {
    let (s, c) = d.dtheta.sin_cos();
    Vector3::new(
        p.x - p.z * d.t1 + p.y * d.t2,
        c * p.y + s * p.z,
        -s * p.y + c * p.z,
    )
}
