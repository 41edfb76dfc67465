use rootfind::BranchPolicy;

use crate::{
    discrete_momentum_se2, displacement_from_momenta, sleigh_energy, sleigh_step, sleigh_step_backward,
    SleighError, SleighParams,
};

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticsReport {
    pub energy_bound: f64,
    pub forward_end: (f64, f64),
    pub backward_end: (f64, f64),
    /// Smallest forward-time `p1` increment seen in either direction.
    pub min_p1_increment: f64,
    pub sign_constant: bool,
    pub max_energy_drift: f64,
    pub max_root_count: usize,
    pub forward_on_stable: bool,
    pub backward_on_unstable: bool,
}

impl AsymptoticsReport {
    pub fn holds(&self) -> bool {
        self.min_p1_increment >= 0.0 && self.sign_constant && self.forward_on_stable && self.backward_on_unstable
    }
}

/// Runs `steps` iterations each way from `(p_θ, p1)` and checks the
/// two-sided limit on the stationary line `p_θ = 0`.
pub fn sleigh_asymptotics_check(
    p_theta: f64,
    p1: f64,
    params: &SleighParams,
    steps: usize,
    tol: f64,
) -> Result<AsymptoticsReport, SleighError> {
    if params.b() != 0.0 {
        return Err(SleighError::NeedsCenteredOffset(params.b()));
    }
    if !(params.a() > 0.0) {
        return Err(SleighError::NeedsPositiveOffset(params.a()));
    }
    let (m, a) = (params.m(), params.a());
    let bound = m * m * a * a * params.ja();
    let e0 = sleigh_energy(p_theta, p1, params);
    if !(e0 < bound) {
        return Err(SleighError::EnergyBound { energy: e0, bound });
    }
    let policy = BranchPolicy::Continuity;
    let (start, branch) = displacement_from_momenta(p_theta, p1, params, 0.0, policy)?;
    let sign = p_theta.signum();
    let mut min_inc = f64::INFINITY;
    let mut sign_constant = true;
    let mut drift: f64 = 0.0;
    let mut roots = branch.root_count;
    let mut track = |pt: f64, p1: f64| {
        sign_constant &= pt.signum() == sign || pt == 0.0;
        drift = drift.max((sleigh_energy(pt, p1, params) - e0).abs() / e0);
    };

    let mut d = start;
    let mut last = (p_theta, p1);
    for _ in 0..steps {
        let r = sleigh_step(&d, params, policy)?;
        roots = roots.max(r.branch.root_count);
        min_inc = min_inc.min(r.p_after.p1 - last.1);
        last = (r.p_after.p_theta, r.p_after.p1);
        track(last.0, last.1);
        d = r.next;
    }
    let forward_end = last;

    let mut d = start;
    let mut last = (p_theta, p1);
    for _ in 0..steps {
        let (prev, b) = sleigh_step_backward(&d, params, policy)?;
        roots = roots.max(b.root_count);
        let p = discrete_momentum_se2(&prev.as_helical(), params);
        min_inc = min_inc.min(last.1 - p.p1);
        last = (p.p_theta, p.p1);
        track(last.0, last.1);
        d = prev;
    }
    let backward_end = last;

    let ma = m * a;
    Ok(AsymptoticsReport {
        energy_bound: bound,
        forward_end,
        backward_end,
        min_p1_increment: min_inc,
        sign_constant,
        max_energy_drift: drift,
        max_root_count: roots,
        forward_on_stable: forward_end.0.abs() < tol && forward_end.1 > 0.0 && forward_end.1 < ma,
        backward_on_unstable: backward_end.0.abs() < tol && backward_end.1 < 0.0 && backward_end.1 > -ma,
    })
}
