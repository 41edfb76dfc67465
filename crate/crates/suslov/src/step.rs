use std::f64::consts::PI;

use liegroup_core::{admissible_rotation_so3, AdmissibleRotationParam, RotationSO3};
use nalgebra::{Matrix3, Vector3};
use rootfind::{multistart_with, select_branch, BranchPolicy, NewtonConfig, SeedOutcome};

use crate::{coadjoint_momentum_from_q, momentum_from_q, BodyMomentumSO3, MassTensor, SuslovError};

/// Which root a step took and how many there were.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BranchTag {
    pub index: usize,
    pub root_count: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuslovDiscreteState {
    pub p: AdmissibleRotationParam,
    /// Accumulated attitude, if reconstruction is wanted.
    pub pose: Option<RotationSO3>,
    pub branch_history: Vec<BranchTag>,
}

impl SuslovDiscreteState {
    pub fn new(p: AdmissibleRotationParam) -> Self {
        Self { p, pose: None, branch_history: Vec::new() }
    }

    pub fn with_pose(p: AdmissibleRotationParam, pose: RotationSO3) -> Self {
        Self { p, pose: Some(pose), branch_history: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepReport {
    pub m_before: BodyMomentumSO3,
    pub m_after: BodyMomentumSO3,
    /// `Ωᵀ M` before the multiplier acts.
    pub transported: BodyMomentumSO3,
    /// `M3` change produced by the constraint force.
    pub delta_m3: f64,
    /// Multiplier of the matrix-form momentum equation; equals `−delta_m3`.
    pub lambda: f64,
    pub residual: f64,
    pub roots: Vec<AdmissibleRotationParam>,
    pub branch: BranchTag,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SysRoots {
    /// Distinct roots with `q0 >= 0`, lexicographically ordered.
    pub roots: Vec<AdmissibleRotationParam>,
    pub residuals: Vec<f64>,
    pub iterations: Vec<usize>,
    pub seeds_tried: usize,
    pub seeds_failed: usize,
}

/// Center of the unit disk plus three rings of five points each.
pub fn disk_seeds() -> Vec<AdmissibleRotationParam> {
    let mut seeds = vec![AdmissibleRotationParam::IDENTITY];
    for r in [0.35, 0.7, 0.95] {
        for k in 0..5 {
            let a = 2.0 * PI * k as f64 / 5.0 + r;
            // r < 1, so the point lies strictly inside the disk
            seeds.push(AdmissibleRotationParam::from_disk(r * a.cos(), r * a.sin()).unwrap());
        }
    }
    seeds
}

pub fn sys_config() -> NewtonConfig {
    NewtonConfig { max_iter: 50, ..NewtonConfig::default() }
}

/// `(M1(p) − t1, M2(p) − t2)` for the momentum of `p`.
pub fn sys_residual(p: &AdmissibleRotationParam, t1: f64, t2: f64, j: &MassTensor) -> [f64; 2] {
    let m = momentum_from_q(p, j);
    [m.x - t1, m.y - t2]
}

/// The equations are solved on the sphere in `(q0, q1, q2)` so that roots
/// near the equator of the hemisphere do not hit the square-root branch point.
fn system(j: &MassTensor, t1: f64, t2: f64) -> (impl Fn(&Vector3<f64>) -> Vector3<f64>, impl Fn(&Vector3<f64>) -> Matrix3<f64>) {
    let (j11, j22, j33, j12, j13, j23) = (j.j11(), j.j22(), j.j33(), j.j12(), j.j13(), j.j23());
    let a = j22 + j33;
    let b = j11 + j33;
    let f = move |q: &Vector3<f64>| {
        let (q0, q1, q2) = (q.x, q.y, q.z);
        let c = j13 * q1 + j23 * q2;
        Vector3::new(
            2.0 * (a * q0 * q1 - j12 * q0 * q2 - c * q2) - t1,
            2.0 * (b * q0 * q2 - j12 * q0 * q1 + c * q1) - t2,
            q0 * q0 + q1 * q1 + q2 * q2 - 1.0,
        )
    };
    let jac = move |q: &Vector3<f64>| {
        let (q0, q1, q2) = (q.x, q.y, q.z);
        let c = j13 * q1 + j23 * q2;
        2.0 * Matrix3::new(
            a * q1 - j12 * q2,
            a * q0 - j13 * q2,
            -j12 * q0 - c - j23 * q2,
            b * q2 - j12 * q1,
            -j12 * q0 + c + j13 * q1,
            b * q0 + j23 * q1,
            q0,
            q1,
            q2,
        )
    };
    (f, jac)
}

fn flip(q: &Vector3<f64>) -> Vector3<f64> {
    if q.x < 0.0 || (q.x == 0.0 && (q.y < 0.0 || (q.y == 0.0 && q.z < 0.0))) {
        -q
    } else {
        *q
    }
}

/// All real `q` with `q0 >= 0` whose momentum has first two components
/// `(t1, t2)`. `extra` seeds are tried before the disk grid.
pub fn solve_sys(t1: f64, t2: f64, j: &MassTensor, extra: &[AdmissibleRotationParam]) -> SysRoots {
    let mut seeds = extra.to_vec();
    seeds.extend(disk_seeds());
    solve_sys_with(t1, t2, j, &seeds, &sys_config())
}

pub fn solve_sys_with(
    t1: f64,
    t2: f64,
    j: &MassTensor,
    seeds: &[AdmissibleRotationParam],
    cfg: &NewtonConfig,
) -> SysRoots {
    let (f, jac) = system(j, t1, t2);
    let starts: Vec<Vector3<f64>> = seeds.iter().map(|s| s.as_vector()).collect();
    let dist = |a: &Vector3<f64>, b: &Vector3<f64>| (a - b).norm().min((a + b).norm());
    let rep = multistart_with(&f, Some(&jac), &starts, cfg, flip, dist);
    let mut out = SysRoots {
        roots: Vec::new(),
        residuals: Vec::new(),
        iterations: Vec::new(),
        seeds_tried: seeds.len(),
        seeds_failed: rep.outcomes.iter().filter(|o| matches!(o, SeedOutcome::Failed(_))).count(),
    };
    for r in &rep.roots {
        // rescale only when Newton left the sphere, so a seed that already
        // solves the system comes back bit for bit
        let p = if (r.x.norm() - 1.0).abs() <= 4.0 * f64::EPSILON {
            AdmissibleRotationParam::new(r.x.x, r.x.y, r.x.z)
        } else {
            AdmissibleRotationParam::normalized(r.x.x, r.x.y, r.x.z)
        }
        .expect("converged root is nonzero");
        let res = sys_residual(&p, t1, t2, j);
        out.roots.push(p);
        out.residuals.push(res[0].abs().max(res[1].abs()));
        out.iterations.push(r.iterations);
    }
    out
}

/// One step of the discrete map.
pub fn suslov_step(
    state: &SuslovDiscreteState,
    j: &MassTensor,
    policy: BranchPolicy,
) -> Result<(SuslovDiscreteState, StepReport), SuslovError> {
    let p = state.p;
    let m_before = momentum_from_q(&p, j);
    let transported = coadjoint_momentum_from_q(&p, j);
    let sys = solve_sys(transported.x, transported.y, j, &[p]);
    let n = sys.roots.len();
    if n == 0 {
        return Err(SuslovError::NoRealRoot { t1: transported.x, t2: transported.y, seeds: sys.seeds_tried });
    }
    let pick = select_branch(&sys.roots, policy, |r| r.chordal_distance(&p), |r| r.norm_sq_in_plane())
        .ok_or(SuslovError::BranchIndex {
            index: match policy {
                BranchPolicy::Index(i) => i,
                _ => 0,
            },
            available: n,
        })?;
    let next = sys.roots[pick];
    let m_after = momentum_from_q(&next, j);
    let delta_m3 = m_after.z - transported.z;
    let branch = BranchTag { index: pick, root_count: n };
    let mut history = state.branch_history.clone();
    history.push(branch);
    let pose = state.pose.map(|r| r.compose(&admissible_rotation_so3(&p)));
    let report = StepReport {
        m_before,
        m_after,
        transported,
        delta_m3,
        lambda: -delta_m3,
        residual: sys.residuals[pick],
        roots: sys.roots,
        branch,
        iterations: sys.iterations[pick],
    };
    Ok((SuslovDiscreteState { p: next, pose, branch_history: history }, report))
}

/// Inverse step. Uses `Ω(q0, −q1, −q2) = Ω(q)ᵀ`: running the forward map on
/// the reversed displacement and reversing the result gives the predecessor.
pub fn suslov_step_backward(
    state: &SuslovDiscreteState,
    j: &MassTensor,
    policy: BranchPolicy,
) -> Result<(SuslovDiscreteState, StepReport), SuslovError> {
    let reversed = SuslovDiscreteState::new(state.p.inverse());
    let (fwd, rep) = suslov_step(&reversed, j, policy)?;
    let prev = fwd.p.inverse();
    let transported = coadjoint_momentum_from_q(&prev, j);
    let m_after = momentum_from_q(&prev, j);
    let m_before = momentum_from_q(&state.p, j);
    let mut history = state.branch_history.clone();
    history.push(rep.branch);
    let pose = state.pose.map(|r| r.compose(&admissible_rotation_so3(&prev).transpose()));
    let delta_m3 = m_before.z - transported.z;
    let report = StepReport {
        m_before,
        m_after,
        transported,
        delta_m3,
        lambda: -delta_m3,
        residual: rep.residual,
        roots: rep.roots.iter().map(|r| r.inverse()).collect(),
        branch: rep.branch,
        iterations: rep.iterations,
    };
    Ok((SuslovDiscreteState { p: prev, pose, branch_history: history }, report))
}
