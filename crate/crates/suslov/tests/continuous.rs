use nalgebra::Vector3;
use proptest::prelude::*;
use suslov::*;

fn unbalanced() -> MassTensor {
    MassTensor::new(1.0, 2.0, 3.0, 0.1, 0.3, 0.2).unwrap()
}

/// `M × ω + λγ` with `λ = −(M × ω, 𝕀⁻¹γ) / (γ, 𝕀⁻¹γ)`.
fn rhs_with_multiplier(m: &Vector3<f64>, i: &InertiaOperator, g: &Vector3<f64>) -> Vector3<f64> {
    let w = i.inverse() * m;
    let ig = i.inverse() * g;
    let mw = m.cross(&w);
    let lambda = -mw.dot(&ig) / g.dot(&ig);
    mw + g * lambda
}

#[test]
fn two_codings_of_the_vector_field_agree() {
    let i = InertiaOperator::principal(1.0, 2.0, 3.0).unwrap();
    let g = Vector3::z();
    let m = i.matrix() * Vector3::new(1.0, 1.0, 0.0);
    let a = suslov_rhs(&m, &i, &g).unwrap();
    let b = rhs_with_multiplier(&m, &i, &g);
    assert!((a - b).norm() < 1e-12, "{a} vs {b}");
}

#[test]
fn equilibrium_line_is_fixed() {
    let i = unbalanced().inertia().unwrap();
    let g = Vector3::z();
    // ω ⟂ γ and 𝕀ω ⟂ γ
    let w = g.cross(&(i.matrix() * g));
    let m = i.matrix() * w;
    assert!(m.dot(&g).abs() < 1e-15 && w.dot(&g).abs() < 1e-15);
    assert!(suslov_rhs(&m, &i, &g).unwrap().norm() < 1e-15);
}

fn constrained_momentum(i: &InertiaOperator, g: &Vector3<f64>, w1: f64, w2: f64) -> Vector3<f64> {
    // ω in the plane orthogonal to γ
    let e1 = if g.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    let u = (e1 - g * g.dot(&e1)).normalize();
    let v = g.cross(&u);
    i.matrix() * (u * w1 + v * w2)
}

#[test]
fn rk4_vanishing_step_is_identity() {
    let i = unbalanced().inertia().unwrap();
    let s = SuslovContinuousState::new(constrained_momentum(&i, &Vector3::z(), 1.0, 0.5), Vector3::z()).unwrap();
    assert_eq!(suslov_rk4_step(&s, &i, 0.0), s);
}

#[test]
fn rk4_local_energy_error_is_fifth_order() {
    let i = unbalanced().inertia().unwrap();
    let g = Vector3::z();
    let s = SuslovContinuousState::new(constrained_momentum(&i, &g, 1.0, 0.5), g).unwrap();
    let e0 = suslov_energy(&s.m, &i);
    let drift = |dt: f64| (suslov_energy(&suslov_rk4_step(&s, &i, dt).m, &i) - e0).abs();
    let ratio = drift(0.1) / drift(0.05);
    // 2⁵ = 32 asymptotically
    assert!(ratio > 20.0 && ratio < 50.0, "ratio {ratio}");
}

#[test]
fn rk4_global_error_is_fourth_order() {
    let i = unbalanced().inertia().unwrap();
    let g = Vector3::z();
    let s0 = SuslovContinuousState::new(constrained_momentum(&i, &g, 1.0, 0.5), g).unwrap();
    let run = |n: usize| {
        let dt = 2.0 / n as f64;
        (0..n).fold(s0, |s, _| suslov_rk4_step(&s, &i, dt)).m
    };
    let reference = run(4096);
    let e1 = (run(40) - reference).norm();
    let e2 = (run(80) - reference).norm();
    let ratio = e1 / e2;
    assert!(ratio > 12.0 && ratio < 20.0, "ratio {ratio}");
}

#[test]
fn degenerate_form_is_energy_times_constant_on_constraint_plane() {
    let id = [1.0, 2.0, 3.0];
    let i = InertiaOperator::principal(id[0], id[1], id[2]).unwrap();
    let g = Vector3::new(0.3, -0.4, 0.5).normalize();
    let det = id[0] * id[1] * id[2];
    let k = det * g.dot(&(i.inverse() * g));
    for (w1, w2) in [(1.0, 0.0), (0.3, -2.0), (-1.5, 0.7)] {
        let m = constrained_momentum(&i, &g, w1, w2);
        assert!((i.inverse() * m).dot(&g).abs() < 1e-14);
        let lhs = suslov_degenerate_integral(&m, id, &g);
        let rhs = k * suslov_energy(&m, &i);
        assert!((lhs - rhs).abs() < 1e-12 * rhs, "{lhs} vs {rhs}");
    }
}

#[test]
fn integrals_are_conserved_along_rk4() {
    let i = unbalanced().inertia().unwrap();
    let g = Vector3::z();
    let mut s = SuslovContinuousState::new(constrained_momentum(&i, &g, 1.0, 0.5), g).unwrap();
    let e0 = suslov_energy(&s.m, &i);
    let r0 = suslov_reduced_energy(&s.m, &i);
    let (mut de, mut dr, mut dc): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..2000 {
        s = suslov_rk4_step(&s, &i, 0.005);
        de = de.max((suslov_energy(&s.m, &i) - e0).abs() / e0);
        dr = dr.max((suslov_reduced_energy(&s.m, &i) - r0).abs() / r0);
        dc = dc.max(s.constraint_residual(&i).abs());
    }
    assert!(de < 1e-10 && dr < 1e-10 && dc < 1e-10, "{de:e} {dr:e} {dc:e}");

    let id = [5.0, 4.0, 3.0];
    let ip = InertiaOperator::principal(id[0], id[1], id[2]).unwrap();
    let gp = Vector3::new(0.2, 0.3, 1.0).normalize();
    let mut s = SuslovContinuousState::new(constrained_momentum(&ip, &gp, 0.4, 1.1), gp).unwrap();
    let d0 = suslov_degenerate_integral(&s.m, id, &gp);
    let mut dd: f64 = 0.0;
    for _ in 0..2000 {
        s = suslov_rk4_step(&s, &ip, 0.005);
        dd = dd.max((suslov_degenerate_integral(&s.m, id, &gp) - d0).abs() / d0);
    }
    assert!(dd < 1e-10, "{dd:e}");
}

proptest! {
    #[test]
    fn vector_field_preserves_constraint(w1 in -2.0f64..2.0, w2 in -2.0f64..2.0,
                                         g in (-1.0f64..1.0, -1.0f64..1.0, 0.2f64..1.0)) {
        let i = unbalanced().inertia().unwrap();
        let g = Vector3::new(g.0, g.1, g.2).normalize();
        let m = constrained_momentum(&i, &g, w1, w2);
        let d = suslov_rhs(&m, &i, &g).unwrap();
        let scale = 1.0 + m.norm() * m.norm();
        prop_assert!((i.inverse() * d).dot(&g).abs() < 1e-12 * scale);
        prop_assert!((d - rhs_with_multiplier(&m, &i, &g)).norm() < 1e-12 * scale);
        // energy is stationary along the field
        prop_assert!((i.inverse() * m).dot(&d).abs() < 1e-12 * scale);
    }
}
