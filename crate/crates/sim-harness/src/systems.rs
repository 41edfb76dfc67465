//! Step loops for the six systems, one record per step.

use chaplygin_sleigh::{
    constraint_residual, discrete_momentum_se2, free_displacement_from_momentum, naive_step, similarity_center,
    sleigh_energy, sleigh_free_step, sleigh_rk4_step, sleigh_step, sleigh_step_backward, turning_center,
    SleighContinuousState, SleighDisplacement, SleighMomentum, SleighParams,
};
use liegroup_core::{AdmissibleRotationParam, HelicalDisplacement, PoseSE2};
use nalgebra::Vector3;
use suslov::{
    momentum_from_q, suslov_energy, suslov_quadratic_integral, suslov_quartic_integral, suslov_reduced_energy,
    suslov_rk4_step, suslov_step, suslov_step_backward, MassTensor, SuslovContinuousState, SuslovDiscreteState,
};

use crate::config::{SimConfig, SystemKind};
use crate::trajectory::Trajectory;
use crate::HarnessError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// Step at which the map had no admissible continuation.
#[derive(Clone, Debug, PartialEq)]
pub struct Failure {
    pub step: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub trajectory: Trajectory,
    pub failure: Option<Failure>,
}

pub fn columns(system: SystemKind) -> &'static [&'static str] {
    match system {
        SystemKind::SuslovDisc => &[
            "k", "q0", "q1", "q2", "M1", "M2", "M3", "inv_quadratic", "inv_quartic", "inv_energy", "res_solver",
            "branch", "roots", "iters",
        ],
        SystemKind::SuslovCont => &["k", "t", "M1", "M2", "M3", "inv_energy", "inv_reduced", "res_constraint"],
        SystemKind::SleighCont => &["k", "t", "p_theta", "p1", "theta", "x", "y", "inv_energy"],
        SystemKind::SleighDisc | SystemKind::SleighNaive => &[
            "k", "dtheta", "V1", "V2", "p_theta", "p1", "p2", "theta", "x", "y", "inv_energy", "res_constraint",
            "lambda", "branch", "roots",
        ],
        SystemKind::SleighFree => &[
            "k", "dtheta", "V1", "V2", "p_theta", "p1", "p2", "theta", "x", "y", "inv_casimir", "res_constraint",
            "branch", "roots",
        ],
    }
}

fn sign(direction: Direction) -> f64 {
    match direction {
        Direction::Forward => 1.0,
        Direction::Backward => -1.0,
    }
}

pub fn run(cfg: &SimConfig) -> Result<RunOutcome, HarnessError> {
    run_directed(cfg, Direction::Forward)
}

/// Backward runs label records with negative `k`.
pub fn run_directed(cfg: &SimConfig, direction: Direction) -> Result<RunOutcome, HarnessError> {
    let mut out = match cfg.system {
        SystemKind::SuslovDisc => suslov_disc(cfg, direction)?,
        SystemKind::SuslovCont => suslov_cont(cfg, direction)?,
        SystemKind::SleighCont => sleigh_cont(cfg, direction),
        SystemKind::SleighDisc => sleigh_disc(cfg, direction)?,
        SystemKind::SleighNaive | SystemKind::SleighFree if direction == Direction::Backward => {
            return Err(HarnessError::Unsupported(format!("{} has no backward map", cfg.system)));
        }
        SystemKind::SleighNaive => sleigh_naive(cfg)?,
        SystemKind::SleighFree => sleigh_free(cfg)?,
    };
    let t = &mut out.trajectory;
    for (k, v) in cfg.resolved_pairs() {
        t.summary.insert(format!("config.{k}"), v);
    }
    t.summary.insert("run.direction".into(), if direction == Direction::Forward { "forward" } else { "backward" }.into());
    t.summary.insert("run.records".into(), t.rows.len().to_string());
    match &out.failure {
        None => {
            t.summary.insert("run.status".into(), "complete".into());
        }
        Some(f) => {
            t.summary.insert("run.status".into(), "branch-failure".into());
            t.summary.insert("failure.step".into(), f.step.to_string());
            t.summary.insert("failure.message".into(), f.message.clone());
        }
    }
    Ok(out)
}

fn suslov_state_row(k: f64, p: &AdmissibleRotationParam, j: &MassTensor) -> Result<Vec<f64>, HarnessError> {
    let inv = suslov_disc_invariants(p, j)?;
    let m = momentum_from_q(p, j);
    Ok(vec![k, p.q0(), p.q1(), p.q2(), m.x, m.y, m.z, inv[0], inv[1], inv[2]])
}

/// `[quadratic, quartic, energy]` at one point of the orbit.
pub fn suslov_disc_invariants(p: &AdmissibleRotationParam, j: &MassTensor) -> Result<[f64; 3], HarnessError> {
    let inertia = j.inertia().map_err(|e| HarnessError::Model(e.to_string()))?;
    let m = momentum_from_q(p, j);
    Ok([suslov_quadratic_integral(&m, j), suslov_quartic_integral(p, j), suslov_energy(&m, &inertia)])
}

fn suslov_disc(cfg: &SimConfig, dir: Direction) -> Result<RunOutcome, HarnessError> {
    let j = &cfg.suslov;
    let p0 = AdmissibleRotationParam::normalized(cfg.init("q0"), cfg.init("q1"), cfg.init("q2"))
        .map_err(|e| HarnessError::Model(format!("initial point: {e}")))?;
    let mut t = Trajectory::new(columns(SystemKind::SuslovDisc));
    let mut row = suslov_state_row(0.0, &p0, j)?;
    row.extend([0.0, -1.0, 0.0, 0.0]);
    t.push(row);
    let mut state = SuslovDiscreteState::new(p0);
    for k in 1..=cfg.steps {
        let step = match dir {
            Direction::Forward => suslov_step(&state, j, cfg.policy),
            Direction::Backward => suslov_step_backward(&state, j, cfg.policy),
        };
        let (next, rep) = match step {
            Ok(s) => s,
            Err(e) => return Ok(RunOutcome { trajectory: t, failure: Some(Failure { step: k, message: e.to_string() }) }),
        };
        let mut row = suslov_state_row(sign(dir) * k as f64, &next.p, j)?;
        row.extend([rep.residual, rep.branch.index as f64, rep.branch.root_count as f64, rep.iterations as f64]);
        t.push(row);
        state = SuslovDiscreteState::new(next.p);
    }
    Ok(RunOutcome { trajectory: t, failure: None })
}

fn suslov_cont(cfg: &SimConfig, dir: Direction) -> Result<RunOutcome, HarnessError> {
    let inertia = cfg.suslov.inertia().map_err(|e| HarnessError::Model(e.to_string()))?;
    let omega = Vector3::new(cfg.init("w1"), cfg.init("w2"), 0.0);
    let mut s = SuslovContinuousState::new(inertia.matrix() * omega, Vector3::z())
        .map_err(|e| HarnessError::Model(e.to_string()))?;
    let h = sign(dir) * cfg.dt;
    let mut t = Trajectory::new(columns(SystemKind::SuslovCont));
    for k in 0..=cfg.steps {
        if k > 0 {
            s = suslov_rk4_step(&s, &inertia, h);
        }
        let m = s.m;
        t.push(vec![
            sign(dir) * k as f64,
            h * k as f64,
            m.x,
            m.y,
            m.z,
            suslov_energy(&m, &inertia),
            suslov_reduced_energy(&m, &inertia),
            s.constraint_residual(&inertia),
        ]);
    }
    Ok(RunOutcome { trajectory: t, failure: None })
}

fn initial_pose(cfg: &SimConfig) -> PoseSE2 {
    PoseSE2::new(cfg.init("theta"), cfg.init("x"), cfg.init("y"))
}

fn sleigh_cont(cfg: &SimConfig, dir: Direction) -> RunOutcome {
    let p = &cfg.sleigh;
    let mut s = SleighContinuousState { p_theta: cfg.init("p_theta"), p1: cfg.init("p1"), pose: initial_pose(cfg) };
    let h = sign(dir) * cfg.dt;
    let mut t = Trajectory::new(columns(SystemKind::SleighCont));
    for k in 0..=cfg.steps {
        if k > 0 {
            s = sleigh_rk4_step(&s, h, p);
        }
        t.push(vec![
            sign(dir) * k as f64,
            h * k as f64,
            s.p_theta,
            s.p1,
            s.pose.theta,
            s.pose.x,
            s.pose.y,
            sleigh_energy(s.p_theta, s.p1, p),
        ]);
    }
    RunOutcome { trajectory: t, failure: None }
}

fn sleigh_row(k: f64, d: &HelicalDisplacement, pose: &PoseSE2, params: &SleighParams) -> Vec<f64> {
    let p = discrete_momentum_se2(d, params);
    vec![
        k,
        d.dtheta,
        d.t1,
        d.t2,
        p.p_theta,
        p.p1,
        p.p2,
        pose.theta,
        pose.x,
        pose.y,
        sleigh_energy(p.p_theta, p.p1, params),
    ]
}

fn model(e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Model(e.to_string())
}

fn sleigh_disc(cfg: &SimConfig, dir: Direction) -> Result<RunOutcome, HarnessError> {
    let params = &cfg.sleigh;
    let mut d = SleighDisplacement::new(cfg.init("dtheta"), cfg.init("v1")).map_err(model)?;
    let mut pose = initial_pose(cfg);
    let mut t = Trajectory::new(columns(SystemKind::SleighDisc));
    let mut row = sleigh_row(0.0, &d.as_helical(), &pose, params);
    row.extend([constraint_residual(&d.as_helical()), 0.0, -1.0, 0.0]);
    t.push(row);
    let start = (pose, d);
    for k in 1..=cfg.steps {
        let step = match dir {
            Direction::Forward => sleigh_step(&d, params, cfg.policy).map(|r| {
                let lambda = r.lambda;
                (r.next, r.branch, lambda)
            }),
            Direction::Backward => sleigh_step_backward(&d, params, cfg.policy).map(|(prev, b)| (prev, b, 0.0)),
        };
        let (next, branch, lambda) = match step {
            Ok(s) => s,
            Err(e) => return Ok(RunOutcome { trajectory: t, failure: Some(Failure { step: k, message: e.to_string() }) }),
        };
        pose = match dir {
            // record k carries the pose at which displacement k starts
            Direction::Forward => pose.compose(&d.as_helical().as_pose()),
            Direction::Backward => pose.compose(&next.inverse().as_helical().as_pose()),
        };
        d = next;
        let mut row = sleigh_row(sign(dir) * k as f64, &d.as_helical(), &pose, params);
        row.extend([constraint_residual(&d.as_helical()), lambda, branch.index as f64, branch.root_count as f64]);
        t.push(row);
    }
    if params.a() == 0.0 && dir == Direction::Forward {
        circle_summary(&mut t, &start.0, &start.1);
    }
    Ok(RunOutcome { trajectory: t, failure: None })
}

/// With a centered blade every step repeats the first, so the contact point
/// runs on the circle through the initial turning center.
fn circle_summary(t: &mut Trajectory, pose0: &PoseSE2, d0: &SleighDisplacement) {
    let Some(c) = turning_center(pose0, d0) else {
        t.summary.insert("geometry.circle".into(), "straight line".into());
        return;
    };
    let rho = (d0.v1() / d0.dtheta().sin()).abs();
    let (xi, yi) = (t.index("x").unwrap(), t.index("y").unwrap());
    let dev = t.rows.iter().map(|r| ((r[xi] - c.0).hypot(r[yi] - c.1) - rho).abs()).fold(0.0, f64::max);
    t.summary.insert("geometry.circle_center".into(), format!("{:?},{:?}", c.0, c.1));
    t.summary.insert("geometry.circle_radius".into(), format!("{rho:?}"));
    t.summary.insert("geometry.radius_deviation".into(), format!("{dev:?}"));
}

fn sleigh_naive(cfg: &SimConfig) -> Result<RunOutcome, HarnessError> {
    let params = &cfg.sleigh;
    let mut d = HelicalDisplacement { dtheta: cfg.init("dtheta"), t1: cfg.init("v1"), t2: 0.0 };
    let mut pose = initial_pose(cfg);
    let mut t = Trajectory::new(columns(SystemKind::SleighNaive));
    let mut row = sleigh_row(0.0, &d, &pose, params);
    row.extend([constraint_residual(&d), 0.0, -1.0, 0.0]);
    t.push(row);
    let mut failure = None;
    for k in 1..=cfg.steps {
        let (next, branch) = match naive_step(&d, params, cfg.policy) {
            Ok(s) => s,
            Err(e) => {
                failure = Some(Failure { step: k, message: e.to_string() });
                break;
            }
        };
        pose = pose.compose(&d.as_pose());
        let p_before = discrete_momentum_se2(&d, params);
        let transported = sleigh_free_step(&d, &p_before);
        d = next;
        let p = discrete_momentum_se2(&d, params);
        let mut row = sleigh_row(k as f64, &d, &pose, params);
        row.extend([constraint_residual(&d), p.p2 - transported.p2, branch.index as f64, branch.root_count as f64]);
        t.push(row);
    }
    spiral_summary(&mut t);
    Ok(RunOutcome { trajectory: t, failure })
}

/// Distances to the similarity center of the first three contact points.
fn spiral_summary(t: &mut Trajectory) {
    if t.rows.len() < 3 {
        return;
    }
    let (xi, yi) = (t.index("x").unwrap(), t.index("y").unwrap());
    let pt = |k: usize| (t.rows[k][xi], t.rows[k][yi]);
    let Some(c) = similarity_center(pt(0), pt(1), pt(2)) else {
        return;
    };
    let r: Vec<f64> = t.rows.iter().map(|row| (row[xi] - c.0).hypot(row[yi] - c.1)).collect();
    let shrinking = r.windows(2).all(|w| w[1] < w[0]);
    let growing = r.windows(2).all(|w| w[1] > w[0]);
    let monotone = if shrinking {
        "decreasing"
    } else if growing {
        "increasing"
    } else {
        "no"
    };
    t.summary.insert("geometry.spiral_center".into(), format!("{:?},{:?}", c.0, c.1));
    t.summary.insert("geometry.spiral_monotone".into(), monotone.into());
    t.summary.insert("geometry.spiral_radius_first".into(), format!("{:?}", r[0]));
    t.summary.insert("geometry.spiral_radius_last".into(), format!("{:?}", r[r.len() - 1]));
}

fn sleigh_free(cfg: &SimConfig) -> Result<RunOutcome, HarnessError> {
    let params = &cfg.sleigh;
    let mut d = HelicalDisplacement { dtheta: cfg.init("dtheta"), t1: cfg.init("v1"), t2: cfg.init("v2") };
    let mut pose = initial_pose(cfg);
    let mut t = Trajectory::new(columns(SystemKind::SleighFree));
    let free_row = |k: f64, d: &HelicalDisplacement, pose: &PoseSE2, branch: f64, roots: f64| {
        let mut row = sleigh_row(k, d, pose, params);
        row.pop();
        let p = discrete_momentum_se2(d, params);
        row.extend([casimir(&p), constraint_residual(d), branch, roots]);
        row
    };
    t.push(free_row(0.0, &d, &pose, -1.0, 0.0));
    let mut failure = None;
    for k in 1..=cfg.steps {
        let p = sleigh_free_step(&d, &discrete_momentum_se2(&d, params));
        let (next, branch) = match free_displacement_from_momentum(&p, params, d.dtheta, cfg.policy) {
            Ok(s) => s,
            Err(e) => {
                failure = Some(Failure { step: k, message: e.to_string() });
                break;
            }
        };
        pose = pose.compose(&d.as_pose());
        d = next;
        t.push(free_row(k as f64, &d, &pose, branch.index as f64, branch.root_count as f64));
    }
    Ok(RunOutcome { trajectory: t, failure })
}

/// `p1² + p2²`, constant on coadjoint orbits of SE(2).
pub fn casimir(p: &SleighMomentum) -> f64 {
    p.p1 * p.p1 + p.p2 * p.p2
}

/// Invariant columns rebuilt from the state columns of one record.
pub fn recompute_invariants(cfg: &SimConfig, t: &Trajectory, row: &[f64]) -> Result<Vec<(String, f64)>, HarnessError> {
    let col = |name: &str| -> Result<f64, HarnessError> {
        t.index(name).map(|i| row[i]).ok_or_else(|| HarnessError::Model(format!("missing column `{name}`")))
    };
    let named = |names: &[&str], vals: &[f64]| names.iter().zip(vals).map(|(n, v)| (n.to_string(), *v)).collect();
    Ok(match cfg.system {
        SystemKind::SuslovDisc => {
            let p = AdmissibleRotationParam::new(col("q0")?, col("q1")?, col("q2")?).map_err(model)?;
            named(&["inv_quadratic", "inv_quartic", "inv_energy"], &suslov_disc_invariants(&p, &cfg.suslov)?)
        }
        SystemKind::SuslovCont => {
            let inertia = cfg.suslov.inertia().map_err(model)?;
            let m = Vector3::new(col("M1")?, col("M2")?, col("M3")?);
            named(&["inv_energy", "inv_reduced"], &[suslov_energy(&m, &inertia), suslov_reduced_energy(&m, &inertia)])
        }
        SystemKind::SleighCont => named(&["inv_energy"], &[sleigh_energy(col("p_theta")?, col("p1")?, &cfg.sleigh)]),
        SystemKind::SleighDisc | SystemKind::SleighNaive | SystemKind::SleighFree => {
            let d = HelicalDisplacement { dtheta: col("dtheta")?, t1: col("V1")?, t2: col("V2")? };
            let p = discrete_momentum_se2(&d, &cfg.sleigh);
            if cfg.system == SystemKind::SleighFree {
                named(&["inv_casimir"], &[casimir(&p)])
            } else {
                named(&["inv_energy"], &[sleigh_energy(p.p_theta, p.p1, &cfg.sleigh)])
            }
        }
    })
}
