use liegroup_core::AdmissibleRotationParam;

use crate::{BodyMomentumSO3, MassTensor};

/// `|J13 q1 + J23 q2|` below this counts as stationary.
pub const STATIONARY_TOL: f64 = 1e-10;

/// `(J11+J33) M1² + 2 J12 M1 M2 + (J22+J33) M2²`.
pub fn suslov_quadratic_integral(m: &BodyMomentumSO3, j: &MassTensor) -> f64 {
    (j.j11() + j.j33()) * m.x * m.x + 2.0 * j.j12() * m.x * m.y + (j.j22() + j.j33()) * m.y * m.y
}

/// The quartic integral written directly in the parameters.
pub fn suslov_quartic_integral(p: &AdmissibleRotationParam, j: &MassTensor) -> f64 {
    let (q0, q1, q2) = (p.q0(), p.q1(), p.q2());
    let a = j.j22() + j.j33();
    let b = j.j11() + j.j33();
    let c = stationarity_form(p, j);
    let d = a * b - j.j12() * j.j12();
    (a * q1 * q1 - 2.0 * j.j12() * q1 * q2 + b * q2 * q2) * (c * c + d * q0 * q0)
}

/// `J13 q1 + J23 q2`; zero exactly on the stationary line.
pub fn stationarity_form(p: &AdmissibleRotationParam, j: &MassTensor) -> f64 {
    j.j13() * p.q1() + j.j23() * p.q2()
}

/// The linear form whose sign separates stable from unstable stationary points.
pub fn stability_form(p: &AdmissibleRotationParam, j: &MassTensor) -> f64 {
    let (j11, j22, j33, j12, j13, j23) = (j.j11(), j.j22(), j.j33(), j.j12(), j.j13(), j.j23());
    (j12 * j13 + j22 * j23 + j23 * j33) * p.q1() - (j11 * j13 + j12 * j23 + j13 * j33) * p.q2()
}

/// Linear coordinates in which the discrete dynamics is monotone.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CalCoords {
    pub cal_m1: f64,
    pub cal_m2: f64,
}

pub fn cal_coords(m: &BodyMomentumSO3, j: &MassTensor) -> CalCoords {
    let (j11, j22, j33, j12, j13, j23) = (j.j11(), j.j22(), j.j33(), j.j12(), j.j13(), j.j23());
    CalCoords {
        cal_m1: (j13 * (j11 + j33) + j12 * j23) * m.x + (j23 * (j22 + j33) + j12 * j13) * m.y,
        cal_m2: j23 * m.x - j13 * m.y,
    }
}

/// Change of `cal_m2` over one step from `p`: `4 (J13 q1 + J23 q2)²`.
pub fn cal_monotonicity_increment(p: &AdmissibleRotationParam, j: &MassTensor) -> f64 {
    let c = stationarity_form(p, j);
    4.0 * c * c
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquilibriumClass {
    Stable,
    Unstable,
    /// Stationary with a vanishing stability form, e.g. the origin.
    Neutral,
    NonEquilibrium,
}

pub fn classify_equilibrium(p: &AdmissibleRotationParam, j: &MassTensor) -> EquilibriumClass {
    if stationarity_form(p, j).abs() >= STATIONARY_TOL {
        return EquilibriumClass::NonEquilibrium;
    }
    let q = stability_form(p, j);
    if q > STATIONARY_TOL {
        EquilibriumClass::Stable
    } else if q < -STATIONARY_TOL {
        EquilibriumClass::Unstable
    } else {
        EquilibriumClass::Neutral
    }
}
