use liegroup_core::PoseSE2;
use nalgebra::{Matrix3, Vector3};

use crate::SleighParams;

/// Reduced Lagrangian with the `−2mbωv1²` term exactly as printed in the
/// source; differs from [`sleigh_lagrangian_quadratic_form`] when `b ≠ 0`.
pub fn sleigh_reduced_lagrangian(omega: f64, v1: f64, v2: f64, params: &SleighParams) -> f64 {
    let (m, a, b) = (params.m(), params.a(), params.b());
    0.5 * (params.k() * omega * omega + m * (v1 * v1 + v2 * v2) - 2.0 * m * b * omega * v1 * v1
        + 2.0 * m * a * omega * v2)
}

/// Mass matrix of the trace form, `diag(J/2, J/2, 0) + m (a, b, 1)(a, b, 1)ᵀ`.
pub fn trace_form_matrix(params: &SleighParams) -> Matrix3<f64> {
    let c = Vector3::new(params.a(), params.b(), 1.0);
    let half = 0.5 * params.j();
    Matrix3::from_diagonal(&Vector3::new(half, half, 0.0)) + params.m() * c * c.transpose()
}

fn algebra_matrix(omega: f64, v1: f64, v2: f64) -> Matrix3<f64> {
    Matrix3::new(0.0, -omega, v1, omega, 0.0, v2, 0.0, 0.0, 0.0)
}

/// `½ tr(ξ 𝕁 ξᵀ)` for the algebra element `ξ = (ω, v1, v2)`.
pub fn sleigh_lagrangian_quadratic_form(omega: f64, v1: f64, v2: f64, params: &SleighParams) -> f64 {
    let xi = algebra_matrix(omega, v1, v2);
    0.5 * (xi * trace_form_matrix(params) * xi.transpose()).trace()
}

/// Body momenta `(p_θ, p1, p2)` of the quadratic form at `(ω, v1, v2)`.
pub fn continuous_momenta(omega: f64, v1: f64, v2: f64, params: &SleighParams) -> (f64, f64, f64) {
    let (m, a, b) = (params.m(), params.a(), params.b());
    (
        params.k() * omega + m * (a * v2 - b * v1),
        m * (v1 - b * omega),
        m * (v2 + a * omega),
    )
}

/// `(ω, v1)` on the constraint `v2 = 0` from `(p_θ, p1)`.
pub fn continuous_velocities(p_theta: f64, p1: f64, params: &SleighParams) -> (f64, f64) {
    let omega = (p_theta + params.b() * p1) / params.ja();
    (omega, p1 / params.m() + params.b() * omega)
}

pub fn sleigh_continuous_rhs(p_theta: f64, p1: f64, params: &SleighParams) -> (f64, f64) {
    let (m, a, b) = (params.m(), params.a(), params.b());
    let d = params.ja() * params.ja();
    let s = p_theta + b * p1;
    (-a / d * s * (m * b * p_theta + params.k() * p1), m * a / d * s * s)
}

/// `m p_θ² + 2bm p_θ p1 + (J + m(a² + b²)) p1²`.
pub fn sleigh_energy(p_theta: f64, p1: f64, params: &SleighParams) -> f64 {
    let (m, b) = (params.m(), params.b());
    m * p_theta * p_theta + 2.0 * b * m * p_theta * p1 + params.k() * p1 * p1
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SleighContinuousState {
    pub p_theta: f64,
    pub p1: f64,
    pub pose: PoseSE2,
}

type Augmented = [f64; 5];

fn augmented_rhs(u: &Augmented, params: &SleighParams) -> Augmented {
    let (dpt, dp1) = sleigh_continuous_rhs(u[0], u[1], params);
    let (omega, v1) = continuous_velocities(u[0], u[1], params);
    let (s, c) = u[2].sin_cos();
    [dpt, dp1, omega, v1 * c, v1 * s]
}

/// Classical RK4 on momenta and pose together.
pub fn sleigh_rk4_step(state: &SleighContinuousState, dt: f64, params: &SleighParams) -> SleighContinuousState {
    let u = [state.p_theta, state.p1, state.pose.theta, state.pose.x, state.pose.y];
    let add = |u: &Augmented, k: &Augmented, h: f64| -> Augmented {
        std::array::from_fn(|i| u[i] + h * k[i])
    };
    let k1 = augmented_rhs(&u, params);
    let k2 = augmented_rhs(&add(&u, &k1, 0.5 * dt), params);
    let k3 = augmented_rhs(&add(&u, &k2, 0.5 * dt), params);
    let k4 = augmented_rhs(&add(&u, &k3, dt), params);
    let n: Augmented = std::array::from_fn(|i| u[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    SleighContinuousState { p_theta: n[0], p1: n[1], pose: PoseSE2::new(n[2], n[3], n[4]) }
}

fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        1.0 - u * u / 6.0
    } else {
        u.sin() / u
    }
}

/// Exact pose for constant `(ω, v1)`: a circle of radius `|v1/ω|`, or a
/// straight line along the initial heading when `ω = 0`.
pub fn reconstruct_continuous_a0(initial: &PoseSE2, omega: f64, v1: f64, t: f64) -> PoseSE2 {
    let half = 0.5 * omega * t;
    let mid = initial.theta + half;
    let chord = v1 * t * sinc(half);
    PoseSE2::new(initial.theta + omega * t, initial.x + chord * mid.cos(), initial.y + chord * mid.sin())
}
