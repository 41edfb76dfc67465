use chaplygin_sleigh::*;
use liegroup_core::{exp_d_se2, PoseSE2};
use proptest::prelude::*;
use rootfind::fd::central_difference;

fn params(a: f64, b: f64) -> SleighParams {
    SleighParams::new(1.0, 1.5, a, b).unwrap()
}

#[test]
fn parameters_must_be_positive() {
    assert!(matches!(SleighParams::new(0.0, 1.0, 0.0, 0.0), Err(SleighError::NotPositive { .. })));
    assert!(matches!(SleighParams::new(1.0, -1.0, 0.0, 0.0), Err(SleighError::NotPositive { .. })));
    assert!(matches!(SleighParams::new(1.0, 1.0, f64::NAN, 0.0), Err(SleighError::NonFinite)));
}

#[test]
fn lagrangian_trivial_cases() {
    let p = params(0.7, -0.4);
    assert_eq!(sleigh_reduced_lagrangian(0.0, 0.0, 0.0, &p), 0.0);
    let c = params(0.0, 0.0);
    let (w, v1, v2) = (0.3, -1.2, 0.8);
    let want = 0.5 * (1.5 * w * w + (v1 * v1 + v2 * v2));
    assert!((sleigh_reduced_lagrangian(w, v1, v2, &c) - want).abs() < 1e-15);
    assert!((sleigh_lagrangian_quadratic_form(w, v1, v2, &c) - want).abs() < 1e-15);
}

#[test]
fn printed_lagrangian_differs_from_quadratic_form_by_the_squared_term() {
    let (m, j, a, b) = (1.3, 0.9, 0.6, -0.45);
    let p = SleighParams::new(m, j, a, b).unwrap();
    for (w, v1, v2) in [(0.3, -1.2, 0.8), (1.1, 0.4, -0.2), (-0.7, 2.0, 0.0)] {
        let k = j + m * (a * a + b * b);
        let quad = 0.5 * (k * w * w + m * (v1 * v1 + v2 * v2) - 2.0 * m * b * w * v1 + 2.0 * m * a * w * v2);
        assert!((sleigh_lagrangian_quadratic_form(w, v1, v2, &p) - quad).abs() < 1e-14);
        let gap = sleigh_reduced_lagrangian(w, v1, v2, &p) - sleigh_lagrangian_quadratic_form(w, v1, v2, &p);
        assert!((gap - m * b * w * v1 * (1.0 - v1)).abs() < 1e-14);
    }
    let c = params(0.6, 0.0);
    let (w, v1, v2) = (0.3, -1.2, 0.8);
    assert!((sleigh_reduced_lagrangian(w, v1, v2, &c) - sleigh_lagrangian_quadratic_form(w, v1, v2, &c)).abs() < 1e-15);
}

#[test]
fn momenta_are_gradients_of_the_quadratic_form() {
    let p = params(0.8, 0.35);
    let (w, v1, v2) = (0.4, -0.9, 0.6);
    let (pt, p1, p2) = continuous_momenta(w, v1, v2, &p);
    let h = 1e-4;
    let g0 = central_difference(|x| sleigh_lagrangian_quadratic_form(x, v1, v2, &p), w, h);
    let g1 = central_difference(|x| sleigh_lagrangian_quadratic_form(w, x, v2, &p), v1, h);
    let g2 = central_difference(|x| sleigh_lagrangian_quadratic_form(w, v1, x, &p), v2, h);
    assert!((pt - g0).abs() < 1e-10 && (p1 - g1).abs() < 1e-10 && (p2 - g2).abs() < 1e-10);
    let (w2, u1) = continuous_velocities(continuous_momenta(w, v1, 0.0, &p).0, continuous_momenta(w, v1, 0.0, &p).1, &p);
    assert!((w2 - w).abs() < 1e-14 && (u1 - v1).abs() < 1e-14);
}

#[test]
fn rhs_equilibria_and_centered_case() {
    let p = params(0.9, 0.4);
    for p1 in [-2.0, 0.0, 0.5, 3.0] {
        assert_eq!(sleigh_continuous_rhs(-0.4 * p1, p1, &p), (0.0, 0.0));
    }
    let z = params(0.0, 0.4);
    assert_eq!(sleigh_continuous_rhs(0.7, -1.1, &z), (0.0, 0.0));
    let c = SleighParams::new(1.2, 1.5, 0.8, 0.0).unwrap();
    let ja = 1.5 + 1.2 * 0.64;
    for (pt, p1) in [(0.3, -0.2), (1.7, 0.9), (-2.0, 0.1)] {
        let (dpt, dp1) = sleigh_continuous_rhs(pt, p1, &c);
        assert!((dpt + 0.8 * pt * p1 / ja).abs() < 1e-15 * (1.0 + dpt.abs()));
        assert!((dp1 - 1.2 * 0.8 * pt * pt / (ja * ja)).abs() < 1e-15 * (1.0 + dp1.abs()));
    }
}

#[test]
fn rk4_keeps_energy_and_approaches_the_stationary_line() {
    let p = params(1.0, 0.0);
    let mut s = SleighContinuousState { p_theta: 1.0, p1: -0.3, pose: PoseSE2::IDENTITY };
    let e0 = sleigh_energy(s.p_theta, s.p1, &p);
    for _ in 0..20000 {
        s = sleigh_rk4_step(&s, 0.01, &p);
    }
    assert!((sleigh_energy(s.p_theta, s.p1, &p) - e0).abs() < 1e-9 * e0);
    assert!(s.p_theta.abs() < 1e-6 && s.p1 > 0.0);
}

#[test]
fn circle_reconstruction() {
    let x0 = PoseSE2::new(0.4, 1.0, -2.0);
    assert_eq!(reconstruct_continuous_a0(&x0, 0.7, 1.3, 0.0), x0);
    let line = reconstruct_continuous_a0(&x0, 0.0, 1.3, 2.0);
    assert_eq!(line.theta, 0.4);
    assert!((line.x - (1.0 + 2.6 * 0.4f64.cos())).abs() < 1e-15);
    assert!((line.y - (-2.0 + 2.6 * 0.4f64.sin())).abs() < 1e-15);
    let (w, v1) = (0.7, 1.3);
    let r = v1 / w;
    let (cx, cy) = (x0.x - r * x0.theta.sin(), x0.y + r * x0.theta.cos());
    for k in 0..200 {
        let t = 0.05 * k as f64;
        let q = reconstruct_continuous_a0(&x0, w, v1, t);
        assert!(((q.x - cx).hypot(q.y - cy) - r.abs()).abs() < 1e-12);
        let g = x0.compose(&exp_d_se2(w, v1, t));
        assert!((q.x - g.x).abs() < 1e-12 && (q.y - g.y).abs() < 1e-12);
    }
    let near = reconstruct_continuous_a0(&x0, 1e-9, v1, 2.0);
    let at = reconstruct_continuous_a0(&x0, 0.0, v1, 2.0);
    assert!((near.x - at.x).abs() < 1e-8 && (near.y - at.y).abs() < 1e-8);
}

#[test]
fn rk4_pose_matches_circle_when_centered() {
    let p = params(0.0, 0.3);
    let x0 = PoseSE2::new(-0.2, 0.5, 0.1);
    let mut s = SleighContinuousState { p_theta: 0.6, p1: 0.9, pose: x0 };
    let (w, v1) = continuous_velocities(s.p_theta, s.p1, &p);
    for _ in 0..1000 {
        s = sleigh_rk4_step(&s, 0.005, &p);
    }
    let exact = reconstruct_continuous_a0(&x0, w, v1, 5.0);
    assert!((s.pose.x - exact.x).abs() < 1e-10 && (s.pose.y - exact.y).abs() < 1e-10);
}

proptest! {
    #[test]
    fn energy_is_constant_along_the_flow(
        pt in -3.0f64..3.0, p1 in -3.0f64..3.0,
        m in 0.2f64..3.0, j in 0.2f64..3.0, a in -2.0f64..2.0, b in -2.0f64..2.0,
    ) {
        let p = SleighParams::new(m, j, a, b).unwrap();
        let (dpt, dp1) = sleigh_continuous_rhs(pt, p1, &p);
        let rate = central_difference(|h| sleigh_energy(pt + h * dpt, p1 + h * dp1, &p), 0.0, 1e-3);
        let scale = (1.0 + pt * pt + p1 * p1) * (1.0 + dpt.abs() + dp1.abs());
        prop_assert!(rate.abs() < 1e-12 * scale);
    }

    #[test]
    fn energy_is_positive_definite(
        pt in -3.0f64..3.0, p1 in -3.0f64..3.0,
        m in 0.2f64..3.0, j in 0.2f64..3.0, a in -2.0f64..2.0, b in -2.0f64..2.0,
    ) {
        prop_assume!(pt.abs() + p1.abs() > 1e-6);
        let p = SleighParams::new(m, j, a, b).unwrap();
        prop_assert!(sleigh_energy(pt, p1, &p) > 0.0);
        // determinant of the form is m·(J + ma²) > 0
        prop_assert!(m * p.k() - (b * m).powi(2) > 0.0);
    }
}
