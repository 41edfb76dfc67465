use nalgebra::{Matrix3, Vector3};

use crate::{BodyMomentumSO3, InertiaOperator, SuslovError};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuslovContinuousState {
    pub m: BodyMomentumSO3,
    /// Unit covector of the constraint `(ω, γ) = 0`.
    pub gamma: Vector3<f64>,
}

impl SuslovContinuousState {
    pub fn new(m: BodyMomentumSO3, gamma: Vector3<f64>) -> Result<Self, SuslovError> {
        let n = gamma.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(SuslovError::ZeroConstraint);
        }
        Ok(Self { m, gamma: gamma / n })
    }

    /// `(ω, γ)` with `ω = 𝕀⁻¹M`.
    pub fn constraint_residual(&self, inertia: &InertiaOperator) -> f64 {
        (inertia.inverse() * self.m).dot(&self.gamma)
    }
}

/// `dM/dt = (M, γ) (𝕀⁻¹γ × ω) / (γ, 𝕀⁻¹γ)`.
///
/// This is `M × ω + λγ` with the multiplier that keeps `(ω, γ) = 0`.
pub fn suslov_rhs(
    m: &BodyMomentumSO3,
    inertia: &InertiaOperator,
    gamma: &Vector3<f64>,
) -> Result<BodyMomentumSO3, SuslovError> {
    if gamma.norm() == 0.0 {
        return Err(SuslovError::ZeroConstraint);
    }
    let omega = inertia.inverse() * m;
    let ig = inertia.inverse() * gamma;
    Ok(ig.cross(&omega) * (m.dot(gamma) / gamma.dot(&ig)))
}

/// One classical Runge–Kutta step.
pub fn suslov_rk4_step(
    state: &SuslovContinuousState,
    inertia: &InertiaOperator,
    dt: f64,
) -> SuslovContinuousState {
    let g = state.gamma;
    // the constructor guarantees a nonzero γ
    let f = |m: &Vector3<f64>| suslov_rhs(m, inertia, &g).expect("nonzero constraint");
    let m = state.m;
    let k1 = f(&m);
    let k2 = f(&(m + k1 * (0.5 * dt)));
    let k3 = f(&(m + k2 * (0.5 * dt)));
    let k4 = f(&(m + k3 * dt));
    SuslovContinuousState { m: m + (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (dt / 6.0), gamma: g }
}

/// `(M, 𝕀⁻¹M)`.
pub fn suslov_energy(m: &BodyMomentumSO3, inertia: &InertiaOperator) -> f64 {
    m.dot(&(inertia.inverse() * m))
}

/// `(M, Î M)` for principal moments `i` and constraint vector `γ`.
pub fn suslov_degenerate_integral(m: &BodyMomentumSO3, i: [f64; 3], gamma: &Vector3<f64>) -> f64 {
    let [i1, i2, i3] = i;
    let (g1, g2, g3) = (gamma.x, gamma.y, gamma.z);
    let hat = Matrix3::new(
        i2 * g3 * g3 + i3 * g2 * g2,
        -i3 * g1 * g2,
        -i2 * g1 * g3,
        -i3 * g1 * g2,
        i1 * g3 * g3 + i3 * g1 * g1,
        -i1 * g2 * g3,
        -i2 * g1 * g3,
        -i1 * g2 * g3,
        i1 * g2 * g2 + i2 * g1 * g1,
    );
    m.dot(&(hat * m))
}

/// `𝕀22 M1² − 2 𝕀12 M1 M2 + 𝕀11 M2²`, for the constraint `γ = e3`.
pub fn suslov_reduced_energy(m: &BodyMomentumSO3, inertia: &InertiaOperator) -> f64 {
    let i = inertia.matrix();
    i[(1, 1)] * m.x * m.x - 2.0 * i[(0, 1)] * m.x * m.y + i[(0, 0)] * m.y * m.y
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_momentum_is_fixed() {
        let i = InertiaOperator::principal(1.0, 2.0, 3.0).unwrap();
        let z = Vector3::zeros();
        assert_eq!(suslov_rhs(&z, &i, &Vector3::z()).unwrap(), z);
        assert!(matches!(suslov_rhs(&z, &i, &z), Err(SuslovError::ZeroConstraint)));
        assert_eq!(suslov_energy(&z, &i), 0.0);
        assert_eq!(suslov_reduced_energy(&z, &i), 0.0);
        assert_eq!(suslov_degenerate_integral(&z, [1.0, 2.0, 3.0], &Vector3::z()), 0.0);
    }
}
