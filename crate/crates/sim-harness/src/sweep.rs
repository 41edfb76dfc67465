//! Parameter sweeps: members run concurrently, one file each.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::thread;

use crate::config::{parse_pairs, SimConfig, SweepSpec};
use crate::report::{invariant_report, summary_entries, FileReport, self_consistency};
use crate::systems::{run, RunOutcome};
use crate::trajectory::{write_summary, Trajectory};
use crate::HarnessError;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepMember {
    pub value: f64,
    pub path: PathBuf,
    pub failed_step: Option<usize>,
    pub consistent: bool,
}

/// `out.csv` becomes `out.0.csv`, `out.1.csv`, ...
pub fn member_path(base: &Path, index: usize) -> PathBuf {
    let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match base.extension() {
        Some(ext) => format!("{stem}.{index}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{index}"),
    };
    base.with_file_name(name)
}

/// Config for one member: the swept key overridden, the sweep block dropped.
pub fn member_config(base: &SimConfig, spec: &SweepSpec, value: f64) -> Result<SimConfig, HarnessError> {
    let mut pairs = parse_pairs(&base.to_text())?;
    pairs.retain(|k, _| !k.starts_with("sweep."));
    pairs.insert(spec.param.clone(), format!("{value:?}"));
    Ok(SimConfig::from_pairs(&pairs)?)
}

/// Runs, reports and writes a single trajectory.
pub fn run_and_write(cfg: &SimConfig, path: &Path) -> Result<(RunOutcome, FileReport), HarnessError> {
    let mut out = run(cfg)?;
    let report = FileReport {
        invariants: invariant_report(&out.trajectory),
        consistency: self_consistency(cfg, &out.trajectory)?,
    };
    out.trajectory.summary.extend(summary_entries(&report));
    out.trajectory.write(path, cfg.format)?;
    Ok((out, report))
}

pub fn run_sweep(cfg: &SimConfig, spec: &SweepSpec, base: &Path) -> Result<Vec<SweepMember>, HarnessError> {
    let values = spec.values();
    let configs = values.iter().map(|&v| member_config(cfg, spec, v)).collect::<Result<Vec<_>, _>>()?;
    let results: Vec<Result<SweepMember, HarnessError>> = thread::scope(|s| {
        let handles: Vec<_> = configs
            .iter()
            .zip(&values)
            .enumerate()
            .map(|(i, (c, &value))| {
                s.spawn(move || {
                    let path = member_path(base, i);
                    let (out, report) = run_and_write(c, &path)?;
                    Ok(SweepMember {
                        value,
                        path,
                        failed_step: out.failure.map(|f| f.step),
                        consistent: report.consistency.holds(),
                    })
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep member panicked")).collect()
    });
    let members = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut summary = BTreeMap::new();
    summary.insert("sweep.param".to_string(), spec.param.clone());
    summary.insert("sweep.count".to_string(), members.len().to_string());
    for (i, m) in members.iter().enumerate() {
        summary.insert(format!("member.{i}.value"), format!("{:?}", m.value));
        summary.insert(format!("member.{i}.path"), m.path.display().to_string());
        summary.insert(
            format!("member.{i}.status"),
            m.failed_step.map_or("complete".to_string(), |k| format!("branch-failure at {k}")),
        );
        summary.insert(format!("member.{i}.consistent"), m.consistent.to_string());
    }
    let mut p = base.as_os_str().to_owned();
    p.push(".sweep");
    write_summary(Path::new(&p), &summary)?;
    Ok(members)
}

/// Reads every member back, in order.
pub fn read_members(members: &[SweepMember]) -> Result<Vec<Trajectory>, HarnessError> {
    members.iter().map(|m| Ok(Trajectory::read(&m.path)?)).collect()
}
