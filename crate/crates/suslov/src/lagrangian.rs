use liegroup_core::{admissible_rotation_so3, AdmissibleRotationParam};
use nalgebra::Matrix3;

use crate::MassTensor;

/// `½ tr(Ω J)`.
pub fn discrete_lagrangian_trace(omega: &Matrix3<f64>, j: &MassTensor) -> f64 {
    0.5 * (omega * j.matrix()).trace()
}

/// `½ tr(R_k J R_{k+1}ᵀ)`, which depends only on `R_kᵀ R_{k+1}`.
pub fn discrete_lagrangian_pair(rk: &Matrix3<f64>, rk1: &Matrix3<f64>, j: &MassTensor) -> f64 {
    0.5 * (rk * j.matrix() * rk1.transpose()).trace()
}

pub fn discrete_lagrangian_so3(p: &AdmissibleRotationParam, j: &MassTensor) -> f64 {
    discrete_lagrangian_trace(admissible_rotation_so3(p).matrix(), j)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerAngles {
    pub phi: f64,
    pub theta: f64,
    pub psi: f64,
}

/// Rotation with z-x-z Euler angles `(φ, θ, ψ)`.
pub fn euler_angle_rotation(e: &EulerAngles) -> Matrix3<f64> {
    let (sf, cf) = e.phi.sin_cos();
    let (st, ct) = e.theta.sin_cos();
    let (sp, cp) = e.psi.sin_cos();
    Matrix3::new(
        cf * cp - ct * sf * sp,
        -cf * sp - ct * sf * cp,
        st * sf,
        sf * cp + ct * cf * sp,
        -sf * sp + ct * cf * cp,
        -st * cf,
        st * sp,
        st * cp,
        ct,
    )
}

/// The Euler-angle expansion of the discrete Lagrangian for a body with
/// principal moments `a = (A1, A2, A3)`, term for term as published.
pub fn discrete_lagrangian_euler_angles(k: &EulerAngles, k1: &EulerAngles, a: [f64; 3]) -> f64 {
    let (ct0, ct1) = (k.theta.cos(), k1.theta.cos());
    let (st0, st1) = (k.theta.sin(), k1.theta.sin());
    let dphi = k1.phi - k.phi;
    let dpsi = k1.psi - k.psi;
    let spsi = k.psi + k1.psi;
    let sphi = k.phi + k1.phi;
    let (cdf, sdf) = (dphi.cos(), dphi.sin());
    let (cdp, sdp) = (dpsi.cos(), dpsi.sin());

    let t1 = ct0 * ct1 * (1.0 + cdf * spsi.cos())
        + spsi.cos() * st0 * st1
        + cdf * (st0 * st1 - spsi.cos())
        + 0.5 * (ct1 - ct0) * sdf * spsi.sin();
    let t2 = ct0 * ct1 + cdf * cdp - ct0 * ct1 * cdf * cdp + cdf * st0 * st1
        - cdp * st0 * st1
        - ct0 * sphi.sin() * sdp
        - ct1 * sdf * spsi.sin();
    let t3 = cdf * cdp + ct0 * ct1 * cdf * cdp - ct0 * ct1 + st0 * st1 * (cdp - cdf)
        - (ct0 + ct1) * sdf * sdp;
    0.5 * t1 * a[0] + 0.5 * t2 * a[1] - 0.5 * t3 * a[2]
}

/// Kinetic energy of the top in Euler angles and their rates.
pub fn kinetic_energy_euler_angles(e: &EulerAngles, rate: &EulerAngles, a: [f64; 3]) -> f64 {
    let (st, ct) = e.theta.sin_cos();
    let (sp, cp) = e.psi.sin_cos();
    let w1 = rate.phi * st * sp + rate.theta * cp;
    let w2 = rate.phi * st * cp - rate.theta * sp;
    let w3 = rate.psi + rate.phi * ct;
    0.5 * (w1 * w1 * a[0] + w2 * w2 * a[1] + w3 * w3 * a[2])
}
