//! Orbits from a grid of initial conditions, each tagged by the
//! equilibrium class of its records.

use std::str::FromStr;

use liegroup_core::AdmissibleRotationParam;
use suslov::{classify_equilibrium, EquilibriumClass};

use crate::config::{ConfigError, SimConfig, SystemKind};
use crate::systems::{run_directed, Direction, Failure};
use crate::trajectory::Trajectory;
use crate::HarnessError;

/// Distance to the sleigh stationary line below which a record is tagged.
pub const LINE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct GridAxis {
    pub key: String,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl GridAxis {
    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let h = (self.hi - self.lo) / (self.n - 1) as f64;
        (0..self.n).map(|i| self.lo + h * i as f64).collect()
    }
}

/// `key=lo:hi:n[,key=lo:hi:n]` over initial-condition keys.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    pub axes: Vec<GridAxis>,
}

impl FromStr for GridSpec {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: String| ConfigError::Invalid { field: "grid".into(), message: m };
        let mut axes = Vec::new();
        for part in s.split(',') {
            let (key, range) = part.split_once('=').ok_or_else(|| bad(format!("`{part}` is not key=lo:hi:n")))?;
            let f: Vec<&str> = range.split(':').collect();
            let [lo, hi, n] = f[..] else {
                return Err(bad(format!("`{range}` is not lo:hi:n")));
            };
            let num = |v: &str| v.trim().parse::<f64>().ok().filter(|x| x.is_finite());
            let axis = GridAxis {
                key: key.trim().to_string(),
                lo: num(lo).ok_or_else(|| bad(format!("`{lo}` is not a number")))?,
                hi: num(hi).ok_or_else(|| bad(format!("`{hi}` is not a number")))?,
                n: n.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| bad(format!("`{n}` is not a positive count")))?,
            };
            axes.push(axis);
        }
        if axes.len() > 2 {
            return Err(bad("at most two axes".into()));
        }
        Ok(Self { axes })
    }
}

impl GridSpec {
    pub fn points(&self) -> Vec<Vec<(String, f64)>> {
        let mut pts: Vec<Vec<(String, f64)>> = vec![Vec::new()];
        for a in &self.axes {
            pts = pts
                .into_iter()
                .flat_map(|p| {
                    a.values().into_iter().map(move |v| {
                        let mut q = p.clone();
                        q.push((a.key.clone(), v));
                        q
                    })
                })
                .collect();
        }
        pts
    }
}

/// `1` stable, `-1` unstable, `0` otherwise.
pub fn equilibrium_tag(cfg: &SimConfig, t: &Trajectory, row: &[f64]) -> f64 {
    let col = |n: &str| t.index(n).map(|i| row[i]);
    match cfg.system {
        SystemKind::SuslovDisc => {
            let (Some(q0), Some(q1), Some(q2)) = (col("q0"), col("q1"), col("q2")) else {
                return 0.0;
            };
            match AdmissibleRotationParam::new(q0, q1, q2).map(|p| classify_equilibrium(&p, &cfg.suslov)) {
                Ok(EquilibriumClass::Stable) => 1.0,
                Ok(EquilibriumClass::Unstable) => -1.0,
                _ => 0.0,
            }
        }
        SystemKind::SuslovCont => 0.0,
        _ => {
            let (Some(pt), Some(p1)) = (col("p_theta"), col("p1")) else {
                return 0.0;
            };
            let sigma = pt + cfg.sleigh.b() * p1;
            if sigma.abs() > LINE_TOL * (1.0 + pt.abs().max(p1.abs())) {
                0.0
            } else {
                p1.signum() * (cfg.sleigh.a() != 0.0) as i32 as f64
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Portrait {
    pub trajectory: Trajectory,
    pub failures: Vec<(usize, Failure)>,
}

/// Forward orbits, plus backward halves with negative `k` where the map is invertible.
pub fn phase_portrait(cfg: &SimConfig, grid: &GridSpec) -> Result<Portrait, HarnessError> {
    for a in &grid.axes {
        if !cfg.initial.contains_key(&a.key) {
            return Err(ConfigError::Invalid {
                field: "grid".into(),
                message: format!("`{}` is not an initial-condition key of {}", a.key, cfg.system),
            }
            .into());
        }
    }
    let backward = !matches!(cfg.system, SystemKind::SleighFree | SystemKind::SleighNaive);
    let mut out: Option<Trajectory> = None;
    let mut failures = Vec::new();
    for (orbit, point) in grid.points().into_iter().enumerate() {
        let mut c = cfg.clone();
        for (k, v) in &point {
            c.initial.insert(k.clone(), *v);
        }
        let fwd = run_directed(&c, Direction::Forward)?;
        let mut parts = vec![(fwd.trajectory, 0usize)];
        if let Some(f) = fwd.failure {
            failures.push((orbit, f));
        }
        if backward {
            let bwd = run_directed(&c, Direction::Backward)?;
            if let Some(f) = bwd.failure {
                failures.push((orbit, f));
            }
            parts.push((bwd.trajectory, 1));
        }
        let t = out.get_or_insert_with(|| {
            let mut cols = vec!["orbit".to_string(), "tag".to_string()];
            cols.extend(parts[0].0.columns.iter().cloned());
            Trajectory { columns: cols, ..Trajectory::default() }
        });
        for (part, skip) in &parts {
            for row in part.rows.iter().skip(*skip) {
                let mut r = vec![orbit as f64, equilibrium_tag(&c, part, row)];
                r.extend_from_slice(row);
                t.rows.push(r);
            }
        }
        let key = |k: &str| format!("orbit.{orbit}.{k}");
        for (k, v) in &point {
            t.summary.insert(key(k), format!("{v:?}"));
        }
    }
    let mut t = out.unwrap_or_default();
    for (k, v) in cfg.resolved_pairs() {
        t.summary.insert(format!("config.{k}"), v);
    }
    t.summary.insert("portrait.orbits".into(), grid.points().len().to_string());
    t.summary.insert("portrait.failures".into(), failures.len().to_string());
    Ok(Portrait { trajectory: t, failures })
}
