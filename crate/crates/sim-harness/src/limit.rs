//! Discrete orbits with initial data of size ε against RK4 references.

use chaplygin_sleigh::{
    discrete_momentum_se2, displacement_from_momenta, sleigh_rk4_step, sleigh_step, SleighContinuousState,
    SleighParams,
};
use liegroup_core::{AdmissibleRotationParam, PoseSE2};
use nalgebra::Vector3;
use rootfind::BranchPolicy;
use suslov::{momentum_from_q, suslov_rk4_step, suslov_step, MassTensor, SuslovContinuousState, SuslovDiscreteState};

use crate::config::{LimitSpec, SimConfig, SystemKind};
use crate::HarnessError;

/// Errors below this are treated as exact agreement.
pub const EXACT_FLOOR: f64 = 1e-12;

/// Default reference data when the config describes a discrete system.
pub const SUSLOV_OMEGA: (f64, f64) = (1.0, 0.5);
pub const SLEIGH_MOMENTUM: (f64, f64) = (1.0, 0.2);

#[derive(Clone, Debug, PartialEq)]
pub struct LimitRow {
    pub eps: f64,
    /// Sup-norm deviation over the arc.
    pub error: f64,
    /// `log2(err_prev / err)`; absent on the first row.
    pub order: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitTable {
    pub rows: Vec<LimitRow>,
    pub min_order: f64,
}

impl LimitTable {
    fn from_errors(spec: &LimitSpec, errors: Vec<f64>) -> Self {
        let rows = errors
            .iter()
            .enumerate()
            .map(|(i, &error)| LimitRow {
                eps: spec.eps[i],
                error,
                order: (i > 0 && errors[i - 1] >= EXACT_FLOOR && error >= EXACT_FLOOR)
                    .then(|| (errors[i - 1] / error).log2()),
            })
            .collect();
        Self { rows, min_order: spec.min_order }
    }

    pub fn exact(&self) -> bool {
        self.rows.iter().all(|r| r.error < EXACT_FLOOR)
    }

    pub fn observed_order(&self) -> Option<f64> {
        self.rows.iter().filter_map(|r| r.order).fold(None, |m, o| Some(m.map_or(o, |m: f64| m.min(o))))
    }

    pub fn passes(&self) -> bool {
        self.exact() || self.observed_order().is_some_and(|o| o >= self.min_order)
    }

    pub fn render(&self) -> String {
        let mut s = format!("{:>12} {:>24} {:>10}\n", "eps", "sup_error", "order");
        for r in &self.rows {
            let o = r.order.map_or("-".to_string(), |o| format!("{o:.4}"));
            s += &format!("{:>12.4e} {:>24.16e} {:>10}\n", r.eps, r.error, o);
        }
        s += &format!(
            "observed order {} (minimum {}) {}\n",
            self.observed_order().map_or("-".into(), |o| format!("{o:.4}")),
            self.min_order,
            if self.passes() { "ok" } else { "FAILED" }
        );
        s
    }
}

fn steps_for(spec: &LimitSpec, eps: f64) -> usize {
    (spec.time / eps).round() as usize
}

/// `full(q)/ε` against `M(kε)` in the two unconstrained components.
pub fn suslov_limit_error(j: &MassTensor, omega: (f64, f64), eps: f64, spec: &LimitSpec) -> Result<f64, HarnessError> {
    let inertia = j.inertia().map_err(|e| HarnessError::Model(e.to_string()))?;
    let w = Vector3::new(omega.0, omega.1, 0.0);
    let mut cont = SuslovContinuousState::new(inertia.matrix() * w, Vector3::z())
        .map_err(|e| HarnessError::Model(e.to_string()))?;
    let mut disc = SuslovDiscreteState::new(AdmissibleRotationParam::from_rotation_vector(eps * omega.0, eps * omega.1));
    let h = eps / spec.substeps as f64;
    let mut err: f64 = 0.0;
    for _ in 0..steps_for(spec, eps) {
        let md = momentum_from_q(&disc.p, j) / eps;
        err = err.max((md.x - cont.m.x).hypot(md.y - cont.m.y));
        let (next, _) = suslov_step(&disc, j, BranchPolicy::Continuity).map_err(|e| HarnessError::Model(e.to_string()))?;
        disc = SuslovDiscreteState::new(next.p);
        for _ in 0..spec.substeps {
            cont = suslov_rk4_step(&cont, &inertia, h);
        }
    }
    Ok(err)
}

/// First two discrete momenta over ε against the continuous `(p_θ, p1)`.
pub fn sleigh_limit_error(params: &SleighParams, p0: (f64, f64), eps: f64, spec: &LimitSpec) -> Result<f64, HarnessError> {
    let model = |e: chaplygin_sleigh::SleighError| HarnessError::Model(e.to_string());
    let (mut d, _) =
        displacement_from_momenta(eps * p0.0, eps * p0.1, params, 0.0, BranchPolicy::Continuity).map_err(model)?;
    let mut cont = SleighContinuousState { p_theta: p0.0, p1: p0.1, pose: PoseSE2::IDENTITY };
    let h = eps / spec.substeps as f64;
    let mut err: f64 = 0.0;
    for _ in 0..steps_for(spec, eps) {
        let p = discrete_momentum_se2(&d.as_helical(), params);
        err = err.max((p.p_theta / eps - cont.p_theta).hypot(p.p1 / eps - cont.p1));
        d = sleigh_step(&d, params, BranchPolicy::Continuity).map_err(model)?.next;
        for _ in 0..spec.substeps {
            cont = sleigh_rk4_step(&cont, h, params);
        }
    }
    Ok(err)
}

pub fn compare_limit_suslov(j: &MassTensor, omega: (f64, f64), spec: &LimitSpec) -> Result<LimitTable, HarnessError> {
    let errors = spec.eps.iter().map(|&e| suslov_limit_error(j, omega, e, spec)).collect::<Result<_, _>>()?;
    Ok(LimitTable::from_errors(spec, errors))
}

pub fn compare_limit_sleigh(params: &SleighParams, p0: (f64, f64), spec: &LimitSpec) -> Result<LimitTable, HarnessError> {
    let errors = spec.eps.iter().map(|&e| sleigh_limit_error(params, p0, e, spec)).collect::<Result<_, _>>()?;
    Ok(LimitTable::from_errors(spec, errors))
}

/// Continuous configs supply the reference initial data; discrete ones use the defaults.
pub fn compare_limit(cfg: &SimConfig) -> Result<LimitTable, HarnessError> {
    match cfg.system {
        SystemKind::SuslovCont => compare_limit_suslov(&cfg.suslov, (cfg.init("w1"), cfg.init("w2")), &cfg.limit),
        SystemKind::SuslovDisc => compare_limit_suslov(&cfg.suslov, SUSLOV_OMEGA, &cfg.limit),
        SystemKind::SleighCont => {
            compare_limit_sleigh(&cfg.sleigh, (cfg.init("p_theta"), cfg.init("p1")), &cfg.limit)
        }
        SystemKind::SleighDisc => compare_limit_sleigh(&cfg.sleigh, SLEIGH_MOMENTUM, &cfg.limit),
        SystemKind::SleighFree | SystemKind::SleighNaive => {
            Err(HarnessError::Unsupported(format!("{} has no continuous reference", cfg.system)))
        }
    }
}
