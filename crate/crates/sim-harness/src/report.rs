//! Drift statistics and file self-consistency.

use std::collections::BTreeMap;
use std::path::Path;

use crate::config::SimConfig;
use crate::systems::recompute_invariants;
use crate::trajectory::Trajectory;
use crate::HarnessError;

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantReport {
    pub name: String,
    pub initial: f64,
    pub max_abs_drift: f64,
    pub max_rel_drift: f64,
    /// `k` of the first record attaining the maximum.
    pub step_of_max: i64,
}

/// Largest relative mismatch between stored and recomputed invariants.
#[derive(Clone, Debug, PartialEq)]
pub struct Consistency {
    pub max_rel_error: f64,
    pub worst_column: Option<String>,
    pub worst_k: i64,
    pub tolerance: f64,
}

impl Consistency {
    pub fn holds(&self) -> bool {
        self.max_rel_error <= self.tolerance
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FileReport {
    pub invariants: Vec<InvariantReport>,
    pub consistency: Consistency,
}

pub fn invariant_report(t: &Trajectory) -> Vec<InvariantReport> {
    let ki = t.index("k");
    t.invariant_columns()
        .into_iter()
        .map(|name| {
            let i = t.index(name).unwrap();
            let initial = t.rows.first().map_or(0.0, |r| r[i]);
            let mut worst = 0.0;
            let mut at = 0;
            for (n, r) in t.rows.iter().enumerate() {
                let d = (r[i] - initial).abs();
                if d > worst {
                    worst = d;
                    at = n;
                }
            }
            let step_of_max = match (ki, t.rows.get(at)) {
                (Some(ki), Some(r)) => r[ki] as i64,
                _ => at as i64,
            };
            InvariantReport {
                name: name.to_string(),
                initial,
                max_abs_drift: worst,
                max_rel_drift: if initial == 0.0 { worst } else { worst / initial.abs() },
                step_of_max,
            }
        })
        .collect()
}

fn relative(stored: f64, fresh: f64) -> f64 {
    let d = (stored - fresh).abs();
    if fresh == 0.0 {
        d
    } else {
        d / fresh.abs()
    }
}

pub fn self_consistency(cfg: &SimConfig, t: &Trajectory) -> Result<Consistency, HarnessError> {
    let ki = t.index("k");
    let mut out = Consistency {
        max_rel_error: 0.0,
        worst_column: None,
        worst_k: 0,
        tolerance: cfg.tolerances.self_consistency,
    };
    for row in &t.rows {
        for (name, fresh) in recompute_invariants(cfg, t, row)? {
            let Some(i) = t.index(&name) else {
                return Err(HarnessError::Model(format!("missing column `{name}`")));
            };
            let e = relative(row[i], fresh);
            if e > out.max_rel_error || e.is_nan() {
                out.max_rel_error = if e.is_nan() { f64::INFINITY } else { e };
                out.worst_column = Some(name);
                out.worst_k = ki.map_or(0, |k| row[k] as i64);
            }
        }
    }
    Ok(out)
}

/// The config that produced a trajectory, recovered from its summary.
pub fn embedded_config(t: &Trajectory) -> Result<SimConfig, HarnessError> {
    let pairs: BTreeMap<String, String> = t
        .summary
        .iter()
        .filter_map(|(k, v)| k.strip_prefix("config.").map(|k| (k.to_string(), v.clone())))
        .collect();
    if pairs.is_empty() {
        return Err(HarnessError::Model("trajectory carries no `config.*` summary".into()));
    }
    Ok(SimConfig::from_pairs(&pairs)?)
}

pub fn report_trajectory(t: &Trajectory) -> Result<FileReport, HarnessError> {
    let cfg = embedded_config(t)?;
    Ok(FileReport { invariants: invariant_report(t), consistency: self_consistency(&cfg, t)? })
}

pub fn report_file(path: &Path) -> Result<FileReport, HarnessError> {
    report_trajectory(&Trajectory::read(path)?)
}

/// `report.<name>.<field>` entries for a summary block.
pub fn summary_entries(r: &FileReport) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    for inv in &r.invariants {
        let p = format!("report.{}", inv.name);
        m.insert(format!("{p}.initial"), format!("{:?}", inv.initial));
        m.insert(format!("{p}.max_abs_drift"), format!("{:?}", inv.max_abs_drift));
        m.insert(format!("{p}.max_rel_drift"), format!("{:?}", inv.max_rel_drift));
        m.insert(format!("{p}.step_of_max"), inv.step_of_max.to_string());
    }
    m.insert("report.self_consistency".into(), format!("{:?}", r.consistency.max_rel_error));
    m
}

pub fn render(r: &FileReport) -> String {
    let mut s = format!("{:<16} {:>24} {:>24} {:>24} {:>8}\n", "invariant", "initial", "max_abs_drift", "max_rel_drift", "at_k");
    for inv in &r.invariants {
        s += &format!(
            "{:<16} {:>24.16e} {:>24.6e} {:>24.6e} {:>8}\n",
            inv.name, inv.initial, inv.max_abs_drift, inv.max_rel_drift, inv.step_of_max
        );
    }
    let c = &r.consistency;
    s += &format!(
        "self-consistency: max relative error {:.3e} (tolerance {:.0e}) {}\n",
        c.max_rel_error,
        c.tolerance,
        if c.holds() { "ok" } else { "FAILED" }
    );
    s
}
