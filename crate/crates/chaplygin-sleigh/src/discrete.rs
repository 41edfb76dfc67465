use liegroup_core::{coad_se2, wrap_angle, HelicalDisplacement, PoseSE2};
use rootfind::{real_roots, select_branch, BranchPolicy};

use crate::{SleighDisplacement, SleighError, SleighMomentum, SleighParams, TANGENT_MARGIN};

/// Relative tolerance on the inversion residual before a step is rejected.
pub const STEP_RESIDUAL_TOL: f64 = 1e-9;

/// Which root a step took and how many there were.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SleighBranch {
    pub index: usize,
    pub root_count: usize,
}

/// Discrete Lagrangian in world coordinates, up to an additive constant.
pub fn discrete_lagrangian_se2(xk: &PoseSE2, xk1: &PoseSE2, params: &SleighParams) -> f64 {
    let (m, a, b) = (params.m(), params.a(), params.b());
    let dx = xk1.x - xk.x;
    let dy = xk1.y - xk.y;
    let dth = xk1.theta - xk.theta;
    let ds = xk1.theta.sin() - xk.theta.sin();
    let dc = xk1.theta.cos() - xk.theta.cos();
    0.5 * m * (dx * dx + dy * dy)
        + params.k() * (1.0 - dth.cos())
        + a * m * (ds * dy + dc * dx)
        + b * m * (dc * dy - ds * dx)
}

/// Discrete body momentum of an arbitrary displacement triple.
pub fn discrete_momentum_se2(d: &HelicalDisplacement, params: &SleighParams) -> SleighMomentum {
    let (m, a, b) = (params.m(), params.a(), params.b());
    let (s, c) = d.dtheta.sin_cos();
    SleighMomentum::new(
        params.k() * s + a * m * d.t2 - b * m * d.t1,
        m * d.t1 - a * m * (1.0 - c) - b * m * s,
        m * d.t2 + a * m * s - b * m * (1.0 - c),
    )
}

/// Unconstrained update `P ↦ Ad*_Ω P`.
pub fn sleigh_free_step(d: &HelicalDisplacement, p: &SleighMomentum) -> SleighMomentum {
    SleighMomentum::from_vector(&coad_se2(d, &p.as_vector()))
}

/// Residual of the two inversion equations at a candidate displacement.
pub fn step3_residual(d: &SleighDisplacement, p_theta: f64, p1: f64, params: &SleighParams) -> [f64; 2] {
    let (m, a, b) = (params.m(), params.a(), params.b());
    let (s, c) = d.dtheta().sin_cos();
    let quotient = (0.5 * d.dtheta()).tan();
    [
        params.k() * s + (a * m * quotient - b * m) * d.v1() - p_theta,
        m * d.v1() - a * m * (1.0 - c) - b * m * s - p1,
    ]
}

/// Every admissible displacement whose first two momenta are `(p_θ, p1)`,
/// ordered by rotation increment.
///
/// With `w = tan(Δθ/2)` the inversion reduces to
/// `p̂1 w³ − σ w² + (2J + p̂1) w − σ = 0`, `σ = p_θ + b p1`, `p̂1 = a p1 + 2ma²`.
pub fn constrained_preimages(p_theta: f64, p1: f64, params: &SleighParams) -> Vec<SleighDisplacement> {
    let (m, a, b) = (params.m(), params.a(), params.b());
    let sigma = p_theta + b * p1;
    let ph = a * p1 + 2.0 * m * a * a;
    let Ok(roots) = real_roots(&[-sigma, 2.0 * params.j() + ph, -sigma, ph]) else {
        return Vec::new();
    };
    roots
        .iter()
        .filter_map(|r| {
            let dtheta = 2.0 * r.value.atan();
            let (s, c) = dtheta.sin_cos();
            let v1 = (p1 + a * m * (1.0 - c) + b * m * s) / m;
            SleighDisplacement::new(dtheta, v1).ok()
        })
        .collect()
}

fn choose(
    candidates: &[SleighDisplacement],
    reference_dtheta: f64,
    policy: BranchPolicy,
    p_theta: f64,
    p1: f64,
) -> Result<(SleighDisplacement, SleighBranch), SleighError> {
    if candidates.is_empty() {
        return Err(SleighError::NoAdmissibleRoot { p_theta, p1 });
    }
    let index = select_branch(
        candidates,
        policy,
        |c| (c.dtheta() - reference_dtheta).abs(),
        |c| c.dtheta().sin().abs(),
    )
    .ok_or(SleighError::BranchIndex { index: policy_index(policy), available: candidates.len() })?;
    Ok((candidates[index], SleighBranch { index, root_count: candidates.len() }))
}

fn policy_index(policy: BranchPolicy) -> usize {
    match policy {
        BranchPolicy::Index(i) => i,
        _ => 0,
    }
}

/// Inverts the Legendre map on the constraint variety, picking one root.
pub fn displacement_from_momenta(
    p_theta: f64,
    p1: f64,
    params: &SleighParams,
    reference_dtheta: f64,
    policy: BranchPolicy,
) -> Result<(SleighDisplacement, SleighBranch), SleighError> {
    let candidates = constrained_preimages(p_theta, p1, params);
    choose(&candidates, reference_dtheta, policy, p_theta, p1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SleighStepReport {
    pub next: SleighDisplacement,
    pub p_before: SleighMomentum,
    pub p_after: SleighMomentum,
    /// `Ad*_Ω P` before the multiplier acts.
    pub transported: SleighMomentum,
    /// Defect in the `p2` component absorbed by the constraint force.
    pub lambda: f64,
    /// Max-norm residual of the inversion equations, relative to `1 + |p|`.
    pub residual: f64,
    pub candidates: Vec<SleighDisplacement>,
    pub branch: SleighBranch,
}

/// One step of the constrained discrete map.
pub fn sleigh_step(
    d: &SleighDisplacement,
    params: &SleighParams,
    policy: BranchPolicy,
) -> Result<SleighStepReport, SleighError> {
    let h = d.as_helical();
    let p_before = discrete_momentum_se2(&h, params);
    let transported = sleigh_free_step(&h, &p_before);
    let (m, a) = (params.m(), params.a());
    if a == 0.0 {
        // every solution is stationary; the root solve would be 0/0 in hat coordinates
        return Ok(SleighStepReport {
            next: *d,
            p_before,
            p_after: p_before,
            transported,
            lambda: p_before.p2 - transported.p2,
            residual: 0.0,
            candidates: vec![*d],
            branch: SleighBranch { index: 0, root_count: 1 },
        });
    }
    let pt = p_before.p_theta - 2.0 * a * m * d.v2();
    let p1 = p_before.p1 + 2.0 * a * m * (1.0 - d.dtheta().cos());
    let candidates = constrained_preimages(pt, p1, params);
    let (next, branch) = choose(&candidates, d.dtheta(), policy, pt, p1)?;
    let r = step3_residual(&next, pt, p1, params);
    let residual = r[0].abs().max(r[1].abs()) / (1.0 + pt.abs().max(p1.abs()));
    if !(residual <= STEP_RESIDUAL_TOL) {
        return Err(SleighError::SolverResidual(residual));
    }
    let p_after = discrete_momentum_se2(&next.as_helical(), params);
    Ok(SleighStepReport {
        next,
        p_before,
        p_after,
        transported,
        lambda: p_after.p2 - transported.p2,
        residual,
        candidates,
        branch,
    })
}

/// Previous displacement of the orbit through `d`.
///
/// The forward momenta before inversion equal minus the Legendre image of
/// the inverse displacement, so stepping back is one more inversion.
pub fn sleigh_step_backward(
    d: &SleighDisplacement,
    params: &SleighParams,
    policy: BranchPolicy,
) -> Result<(SleighDisplacement, SleighBranch), SleighError> {
    if params.a() == 0.0 {
        return Ok((*d, SleighBranch { index: 0, root_count: 1 }));
    }
    let p = discrete_momentum_se2(&d.as_helical(), params);
    let candidates = constrained_preimages(-p.p_theta, -p.p1, params);
    let (inv, branch) = choose(&candidates, -d.dtheta(), policy, -p.p_theta, -p.p1)?;
    Ok((inv.inverse(), branch))
}

/// Step with the rejected constraint `V2 = 0`; input and output have `t2 = 0`.
pub fn naive_step(
    d: &HelicalDisplacement,
    params: &SleighParams,
    policy: BranchPolicy,
) -> Result<(HelicalDisplacement, SleighBranch), SleighError> {
    let (m, a, b) = (params.m(), params.a(), params.b());
    let p = discrete_momentum_se2(d, params);
    let t = sleigh_free_step(d, &p);
    let sigma = t.p_theta + b * t.p1;
    // (σ + 2abm) w² − 2(J + ma²) w + σ = 0 with w = tan(Δθ/2)
    let roots = real_roots(&[sigma, -2.0 * params.ja(), sigma + 2.0 * a * b * m]).unwrap_or_default();
    let candidates: Vec<HelicalDisplacement> = roots
        .iter()
        .map(|r| 2.0 * r.value.atan())
        .filter(|dt| dt.abs() < std::f64::consts::PI - TANGENT_MARGIN)
        .map(|dtheta| {
            let (s, c) = dtheta.sin_cos();
            HelicalDisplacement { dtheta, t1: (t.p1 + a * m * (1.0 - c) + b * m * s) / m, t2: 0.0 }
        })
        .collect();
    if candidates.is_empty() {
        return Err(SleighError::NoAdmissibleRoot { p_theta: t.p_theta, p1: t.p1 });
    }
    let index = select_branch(&candidates, policy, |c| (c.dtheta - d.dtheta).abs(), |c| c.dtheta.sin().abs())
        .ok_or(SleighError::BranchIndex { index: policy_index(policy), available: candidates.len() })?;
    Ok((candidates[index], SleighBranch { index, root_count: candidates.len() }))
}

/// Displacement of the unconstrained body whose momentum is `p`.
///
/// `sin Δθ = (p_θ − a p2 + b p1)/J`; the two cosine signs are the branches,
/// negative first.
pub fn free_displacement_from_momentum(
    p: &SleighMomentum,
    params: &SleighParams,
    reference_dtheta: f64,
    policy: BranchPolicy,
) -> Result<(HelicalDisplacement, SleighBranch), SleighError> {
    let (m, a, b) = (params.m(), params.a(), params.b());
    let s = (p.p_theta - a * p.p2 + b * p.p1) / params.j();
    if !(s.abs() <= 1.0) {
        return Err(SleighError::NoAdmissibleRoot { p_theta: p.p_theta, p1: p.p1 });
    }
    let mut angles = vec![std::f64::consts::PI - s.asin(), s.asin()];
    if s.abs() == 1.0 {
        angles.truncate(1);
    }
    let candidates: Vec<HelicalDisplacement> = angles
        .into_iter()
        .map(|raw| {
            let dtheta = wrap_angle(raw);
            let c = dtheta.cos();
            HelicalDisplacement {
                dtheta,
                t1: (p.p1 + a * m * (1.0 - c) + b * m * s) / m,
                t2: (p.p2 - a * m * s + b * m * (1.0 - c)) / m,
            }
        })
        .collect();
    let index = select_branch(
        &candidates,
        policy,
        |c| wrap_angle(c.dtheta - reference_dtheta).abs(),
        |c| c.dtheta.abs(),
    )
    .ok_or(SleighError::BranchIndex { index: policy_index(policy), available: candidates.len() })?;
    Ok((candidates[index], SleighBranch { index, root_count: candidates.len() }))
}

/// Poses `X_0, X_0 Ω_0, X_0 Ω_0 Ω_1, ...`.
pub fn reconstruct_discrete(initial: &PoseSE2, displacements: &[HelicalDisplacement]) -> Vec<PoseSE2> {
    let mut poses = Vec::with_capacity(displacements.len() + 1);
    poses.push(*initial);
    let mut x = *initial;
    for d in displacements {
        x = x.compose(&d.as_pose());
        poses.push(x);
    }
    poses
}

/// Constraint on consecutive world poses: `−sin θ̄ Δx + cos θ̄ Δy` with
/// `θ̄` the mid heading.
pub fn group_constraint_residual(xk: &PoseSE2, xk1: &PoseSE2) -> f64 {
    let mid = xk.theta + 0.5 * wrap_angle(xk1.theta - xk.theta);
    -mid.sin() * (xk1.x - xk.x) + mid.cos() * (xk1.y - xk.y)
}

/// Both mid-angle relations between the body velocities at the two headings.
pub fn mid_angle_residuals(xk: &PoseSE2, xk1: &PoseSE2) -> [f64; 2] {
    let dx = xk1.x - xk.x;
    let dy = xk1.y - xk.y;
    let (s0, c0) = xk.theta.sin_cos();
    let (s1, c1) = xk1.theta.sin_cos();
    [
        (dx * c0 + dy * s0) - (dx * c1 + dy * s1),
        (-dx * s0 + dy * c0) - (dx * s1 - dy * c1),
    ]
}

/// Center of the circle traced under a repeated admissible displacement:
/// radius `V1 / sin Δθ` along the body normal. `None` for pure translation.
pub fn turning_center(pose: &PoseSE2, d: &SleighDisplacement) -> Option<(f64, f64)> {
    let s = d.dtheta().sin();
    if s == 0.0 {
        return None;
    }
    let rho = d.v1() / s;
    Some((pose.x - rho * pose.theta.sin(), pose.y + rho * pose.theta.cos()))
}

/// Fixed point of the similarity taking `z0 → z1` and `z1 → z2`, the
/// natural center of a spiral through three consecutive points.
pub fn similarity_center(z0: (f64, f64), z1: (f64, f64), z2: (f64, f64)) -> Option<(f64, f64)> {
    // complex arithmetic on (re, im) pairs
    let sub = |p: (f64, f64), q: (f64, f64)| (p.0 - q.0, p.1 - q.1);
    let mul = |p: (f64, f64), q: (f64, f64)| (p.0 * q.0 - p.1 * q.1, p.0 * q.1 + p.1 * q.0);
    let div = |p: (f64, f64), q: (f64, f64)| {
        let n = q.0 * q.0 + q.1 * q.1;
        (n > 0.0).then(|| ((p.0 * q.0 + p.1 * q.1) / n, (p.1 * q.0 - p.0 * q.1) / n))
    };
    let w = div(sub(z2, z1), sub(z1, z0))?;
    div(sub(z1, mul(w, z0)), (1.0 - w.0, -w.1))
}
