use liegroup_core::{vee3, AdmissibleRotationParam};
use nalgebra::{Matrix3, Vector3};

use crate::{MassTensor, SuslovError};

/// Body angular momentum `(M1, M2, M3)`, identified with a skew matrix by
/// `M1 = −M23, M2 = M13, M3 = −M12`.
pub type BodyMomentumSO3 = Vector3<f64>;

/// `vee(Ω J − J Ωᵀ)` for an arbitrary rotation Ω.
pub fn momentum_from_matrix(omega: &Matrix3<f64>, j: &MassTensor) -> BodyMomentumSO3 {
    let jm = j.matrix();
    let s = omega * jm - jm * omega.transpose();
    // exactly skew up to rounding, so the checked vee cannot fail
    vee3(&(0.5 * (s - s.transpose()))).expect("skew by construction")
}

/// Momentum of the admissible displacement with parameter `p`.
pub fn momentum_from_q(p: &AdmissibleRotationParam, j: &MassTensor) -> BodyMomentumSO3 {
    let (q0, q1, q2) = (p.q0(), p.q1(), p.q2());
    let a = j.j22() + j.j33();
    let b = j.j11() + j.j33();
    let c = j.j13() * q1 + j.j23() * q2;
    2.0 * Vector3::new(
        a * q0 * q1 - j.j12() * q0 * q2 - c * q2,
        b * q0 * q2 - j.j12() * q0 * q1 + c * q1,
        (j.j11() - j.j22()) * q1 * q2 - j.j12() * (q1 * q1 - q2 * q2) - c * q0,
    )
}

/// `Ωᵀ M`, the momentum transported to the next body frame.
pub fn coadjoint_momentum_from_q(p: &AdmissibleRotationParam, j: &MassTensor) -> BodyMomentumSO3 {
    let (q0, q1, q2) = (p.q0(), p.q1(), p.q2());
    let a = j.j22() + j.j33();
    let b = j.j11() + j.j33();
    let c = j.j13() * q1 + j.j23() * q2;
    2.0 * Vector3::new(
        a * q0 * q1 - j.j12() * q0 * q2 + c * q2,
        b * q0 * q2 - j.j12() * q0 * q1 - c * q1,
        -(j.j11() - j.j22()) * q1 * q2 + j.j12() * (q1 * q1 - q2 * q2) - c * q0,
    )
}

/// Left side of the quartic surface equation satisfied by the momenta of a
/// body with principal mass tensor `(J1, J2, J3)`.
pub fn steiner_residual(m: &BodyMomentumSO3, jd: [f64; 3]) -> Result<f64, SuslovError> {
    let [j1, j2, j3] = jd;
    let d12 = j1 - j2;
    let s23 = j2 + j3;
    let s13 = j1 + j3;
    if d12 == 0.0 {
        return Err(SuslovError::DegenerateSurface("J1 = J2"));
    }
    if s23 == 0.0 || s13 == 0.0 {
        return Err(SuslovError::DegenerateSurface("Ji + Jj = 0"));
    }
    let (m1, m2, m3) = (m.x, m.y, m.z);
    let (a, b, c) = (m1 * m1, m2 * m2, m3 * m3);
    Ok(d12 / (s23 * s13) * a * b + s13 / (s23 * d12) * a * c + s23 / (s13 * d12) * b * c
        - 2.0 * m1 * m2 * m3)
}
