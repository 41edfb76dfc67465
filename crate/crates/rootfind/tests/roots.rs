use nalgebra::{DMatrix, Matrix2, SVector, Vector2};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rootfind::*;

/// Eigenvalues of the companion matrix of `c0 + c1 x + ... + cd x^d`.
fn companion_eigs(c: &[f64]) -> Vec<(f64, f64)> {
    let d = c.len() - 1;
    let lead = c[d];
    let m = DMatrix::from_fn(d, d, |i, j| {
        if j == d - 1 {
            -c[i] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    m.complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect()
}

fn random_coeffs(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    let mut c: Vec<f64> = (0..=d).map(|_| rng.random_range(-1.0..1.0)).collect();
    let s: f64 = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    c[d] = s * rng.random_range(0.1..1.0);
    c
}

/// Compares against the eigenvalue oracle, skipping draws whose complex
/// pair is too close to the real axis to classify.
fn check_against_oracle(c: &[f64], roots: &[RealRoot]) -> bool {
    let eigs = companion_eigs(c);
    let scale = eigs.iter().fold(1.0f64, |m, e| m.max(e.0.hypot(e.1)));
    if eigs.iter().any(|e| e.1.abs() > 0.0 && e.1.abs() < 1e-6 * scale) {
        return false;
    }
    let real: Vec<f64> = eigs.iter().filter(|e| e.1 == 0.0).map(|e| e.0).collect();
    let count: usize = roots.iter().map(|r| r.multiplicity).sum();
    assert_eq!(count, real.len(), "coeffs {c:?} roots {roots:?} eigs {eigs:?}");
    for r in roots {
        let near = real.iter().map(|e| (e - r.value).abs()).fold(f64::INFINITY, f64::min);
        assert!(near < 1e-9 * scale, "root {} off by {near:e} for {c:?}", r.value);
    }
    let p = PolynomialRealCoeffs::new(c).unwrap();
    for r in roots {
        let res = p.eval(r.value).abs();
        let bound = 1e-12 * p.max_coeff() * r.value.abs().max(1.0).powi(p.degree() as i32);
        assert!(res < bound, "residual {res:e} at {} for {c:?}", r.value);
    }
    true
}

#[test]
fn cubic_matches_companion_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for _ in 0..10_000 {
        let c = random_coeffs(&mut rng, 3);
        let roots = real_roots_cubic([c[0], c[1], c[2], c[3]]).unwrap();
        checked += check_against_oracle(&c, &roots) as usize;
    }
    assert!(checked > 9_900, "only {checked} draws classified");
}

#[test]
fn quartic_matches_companion_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut checked = 0;
    for _ in 0..10_000 {
        let c = random_coeffs(&mut rng, 4);
        let roots = real_roots_quartic([c[0], c[1], c[2], c[3], c[4]]).unwrap();
        checked += check_against_oracle(&c, &roots) as usize;
    }
    assert!(checked > 9_900, "only {checked} draws classified");
}

#[test]
fn constructed_cubics_from_known_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..2000 {
        let mut r = [
            rng.random_range(-3.0..3.0),
            rng.random_range(-3.0..3.0),
            rng.random_range(-3.0..3.0),
        ];
        r.sort_by(f64::total_cmp);
        if r[1] - r[0] < 1e-3 || r[2] - r[1] < 1e-3 {
            continue;
        }
        let c = [
            -r[0] * r[1] * r[2],
            r[0] * r[1] + r[1] * r[2] + r[0] * r[2],
            -(r[0] + r[1] + r[2]),
            1.0,
        ];
        let got = real_roots_cubic(c).unwrap();
        assert_eq!(got.len(), 3);
        for (g, w) in got.iter().zip(r) {
            assert!((g.value - w).abs() < 1e-9, "{g:?} vs {w}");
        }
    }
}

#[test]
fn lower_degrees_and_linear() {
    let r = real_roots(&[-6.0, 2.0]).unwrap();
    assert_eq!(r, vec![RealRoot { value: 3.0, multiplicity: 1 }]);
    let r = real_roots_quadratic([1.0, -2.0, 1.0]).unwrap();
    assert_eq!(r.len(), 1);
    assert_eq!(r[0].multiplicity, 2);
    assert!(real_roots(&[1.0, 0.0, 0.0, 0.0, 0.0, 1.0]).is_err());
    assert!(real_roots(&[f64::NAN, 1.0]).is_err());
}

fn circle_line(v: &Vector2<f64>) -> Vector2<f64> {
    Vector2::new(v.x * v.x + v.y * v.y - 1.0, v.y - 0.5 * v.x)
}

fn circle_line_jac(v: &Vector2<f64>) -> Matrix2<f64> {
    Matrix2::new(2.0 * v.x, 2.0 * v.y, -0.5, 1.0)
}

#[test]
fn circle_line_roots_from_nearby_seeds() {
    let cfg = NewtonConfig::default();
    let x = 2.0 / 5f64.sqrt();
    for sign in [1.0, -1.0] {
        let seed = Vector2::new(sign * 0.8, sign * 0.3);
        let root = newton(circle_line, Some(&circle_line_jac), seed, &cfg).unwrap();
        assert!((root.x - Vector2::new(sign * x, sign * 0.5 * x)).norm() < 1e-12);
        assert!(root.residual < cfg.residual_tol);
    }
}

#[test]
fn symmetric_system_both_roots_found() {
    let seeds: Vec<Vector2<f64>> =
        (0..16).map(|k| 0.9 * Vector2::new((k as f64 * 0.4).cos(), (k as f64 * 0.4).sin())).collect();
    let rep = multistart(circle_line, Some(&circle_line_jac), &seeds, &NewtonConfig::default());
    assert_eq!(rep.roots.len(), 2);
    assert!((rep.roots[0].x + rep.roots[1].x).norm() < 1e-12);
    assert!(rep.roots[0].x.x < 0.0);
    assert_eq!(rep.outcomes.len(), seeds.len());
}

#[test]
fn one_root_many_seeds() {
    let f = |v: &Vector2<f64>| Vector2::new(v.x.exp() - 2.0, v.y * v.y * v.y + v.y - 1.0);
    let seeds: Vec<Vector2<f64>> =
        (0..25).map(|k| Vector2::new((k % 5) as f64 - 2.0, (k / 5) as f64 - 2.0)).collect();
    let rep = multistart(f, None, &seeds, &NewtonConfig::default());
    assert_eq!(rep.roots.len(), 1);
    assert!((rep.roots[0].x.x - 2f64.ln()).abs() < 1e-10);
    assert!(rep.outcomes.iter().all(|o| *o == SeedOutcome::Converged(0)));
}

#[test]
fn fd_and_analytic_jacobians_agree_on_roots() {
    let f = |v: &Vector2<f64>| Vector2::new(v.x * v.x + 0.3 * v.x * v.y - 0.7, v.y * v.y - v.x + 0.1);
    let j = |v: &Vector2<f64>| Matrix2::new(2.0 * v.x + 0.3 * v.y, 0.3 * v.x, -1.0, 2.0 * v.y);
    let cfg = NewtonConfig::default();
    for seed in [Vector2::new(0.8, 0.8), Vector2::new(0.8, -0.8)] {
        let a = newton(f, Some(&j), seed, &cfg).unwrap();
        let b = newton(f, None, seed, &cfg).unwrap();
        assert!((a.x - b.x).norm() < 1e-9);
    }
}

#[test]
fn canonical_distance_dedupes_antipodes() {
    // roots ±p of an odd system collapse to one under the projective metric
    let f = |v: &SVector<f64, 2>| SVector::<f64, 2>::new(v.x * v.x + v.y * v.y - 1.0, v.x - v.y);
    let canon = |v: &SVector<f64, 2>| if v.x < 0.0 { -*v } else { *v };
    let dist = |a: &SVector<f64, 2>, b: &SVector<f64, 2>| (a - b).norm().min((a + b).norm());
    let seeds = [Vector2::new(1.0, 0.5), Vector2::new(-1.0, -0.5)];
    let rep = multistart_with(f, None, &seeds, &NewtonConfig::default(), canon, dist);
    assert_eq!(rep.roots.len(), 1);
    assert!(rep.roots[0].x.x > 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn multistart_is_deterministic_and_below_tolerance(
        a in 0.2f64..2.0, b in -1.0f64..1.0, shift in -0.5f64..0.5
    ) {
        let f = move |v: &Vector2<f64>| Vector2::new(a * v.x * v.x + v.y * v.y - 1.0, v.y - b * v.x - shift);
        let seeds: Vec<Vector2<f64>> = (0..12)
            .map(|k| 1.2 * Vector2::new((k as f64 * 0.52).cos(), (k as f64 * 0.52).sin()))
            .collect();
        let cfg = NewtonConfig::default();
        let r1 = multistart(f, None, &seeds, &cfg);
        let r2 = multistart(f, None, &seeds, &cfg);
        prop_assert_eq!(&r1, &r2);
        for r in &r1.roots {
            prop_assert!(r.residual < cfg.residual_tol);
        }
        for w in r1.roots.windows(2) {
            prop_assert!((w[0].x - w[1].x).norm() > cfg.dedupe_radius);
            prop_assert!(w[0].x.x <= w[1].x.x);
        }
    }
}
