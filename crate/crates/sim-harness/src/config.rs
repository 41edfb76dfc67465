//! Flat `key = value` configuration with one level of dotted sections.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use chaplygin_sleigh::SleighParams;
use rootfind::BranchPolicy;
use suslov::MassTensor;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: `{key}` is set twice")]
    Duplicate { line: usize, key: String },
    #[error("unknown field `{0}`")]
    UnknownField(String),
    #[error("missing field `{0}`")]
    Missing(String),
    #[error("field `{field}`: {message}")]
    Invalid { field: String, message: String },
    #[error("cannot read config: {0}")]
    Io(String),
}

fn invalid(field: &str, message: impl fmt::Display) -> ConfigError {
    ConfigError::Invalid { field: field.to_string(), message: message.to_string() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SystemKind {
    SuslovCont,
    SuslovDisc,
    SleighCont,
    SleighDisc,
    SleighFree,
    SleighNaive,
}

impl SystemKind {
    pub const ALL: [SystemKind; 6] = [
        Self::SuslovCont,
        Self::SuslovDisc,
        Self::SleighCont,
        Self::SleighDisc,
        Self::SleighFree,
        Self::SleighNaive,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::SuslovCont => "suslov-cont",
            Self::SuslovDisc => "suslov-disc",
            Self::SleighCont => "sleigh-cont",
            Self::SleighDisc => "sleigh-disc",
            Self::SleighFree => "sleigh-free",
            Self::SleighNaive => "sleigh-naive",
        }
    }

    pub fn is_suslov(&self) -> bool {
        matches!(self, Self::SuslovCont | Self::SuslovDisc)
    }

    pub fn is_continuous(&self) -> bool {
        matches!(self, Self::SuslovCont | Self::SleighCont)
    }

    /// Initial-condition keys and their defaults.
    pub fn initial_defaults(&self) -> &'static [(&'static str, f64)] {
        match self {
            Self::SuslovCont => &[("w1", 1.0), ("w2", 0.5)],
            Self::SuslovDisc => &[("q0", 1.0), ("q1", 0.05), ("q2", 0.02)],
            Self::SleighCont => &[("p_theta", 0.1), ("p1", 0.0), ("theta", 0.0), ("x", 0.0), ("y", 0.0)],
            Self::SleighDisc | Self::SleighNaive => {
                &[("dtheta", 0.1), ("v1", 0.2), ("theta", 0.0), ("x", 0.0), ("y", 0.0)]
            }
            Self::SleighFree => {
                &[("dtheta", 0.1), ("v1", 0.2), ("v2", 0.0), ("theta", 0.0), ("x", 0.0), ("y", 0.0)]
            }
        }
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SystemKind {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| invalid("system", format!("unknown system `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(invalid("output.format", format!("expected csv or json, got `{s}`"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::Json => "json",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    /// Any numeric config key, e.g. `sleigh.a`.
    pub param: String,
    pub from: f64,
    pub to: f64,
    pub count: usize,
}

impl SweepSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.from];
        }
        let h = (self.to - self.from) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.from + h * i as f64).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitSpec {
    pub eps: Vec<f64>,
    /// Arc of continuous time over which deviations are measured.
    pub time: f64,
    /// RK4 substeps per discrete step.
    pub substeps: usize,
    pub min_order: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub self_consistency: f64,
}

const SLEIGH_KEYS: [(&str, f64); 4] = [("m", 1.0), ("J", 1.5), ("a", 1.0), ("b", 0.0)];
const SUSLOV_KEYS: [(&str, f64); 6] =
    [("J11", 1.0), ("J22", 2.0), ("J33", 3.0), ("J12", 0.1), ("J13", 0.3), ("J23", 0.2)];

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub system: SystemKind,
    pub steps: usize,
    pub dt: f64,
    pub policy: BranchPolicy,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
    pub sleigh: SleighParams,
    pub suslov: MassTensor,
    pub initial: BTreeMap<String, f64>,
    pub tolerances: Tolerances,
    pub sweep: Option<SweepSpec>,
    pub limit: LimitSpec,
}

/// `key = value` pairs in file order; `#` starts a comment.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(ConfigError::Syntax { line: i + 1, text: raw.to_string() });
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || k.split('.').count() > 2 || k.split('.').any(str::is_empty) {
            return Err(ConfigError::Syntax { line: i + 1, text: raw.to_string() });
        }
        if out.insert(k.to_string(), v.to_string()).is_some() {
            return Err(ConfigError::Duplicate { line: i + 1, key: k.to_string() });
        }
    }
    Ok(out)
}

fn number(field: &str, v: &str) -> Result<f64, ConfigError> {
    let x: f64 = v.parse().map_err(|_| invalid(field, format!("`{v}` is not a number")))?;
    if !x.is_finite() {
        return Err(invalid(field, "must be finite"));
    }
    Ok(x)
}

fn count(field: &str, v: &str) -> Result<usize, ConfigError> {
    v.parse().map_err(|_| invalid(field, format!("`{v}` is not a non-negative integer")))
}

fn number_list(field: &str, v: &str) -> Result<Vec<f64>, ConfigError> {
    v.split(',').map(|s| number(field, s.trim())).collect()
}

impl SimConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Self::from_pairs(&parse_pairs(text)?)
    }

    pub fn from_pairs(pairs: &BTreeMap<String, String>) -> Result<Self, ConfigError> {
        let get = |k: &str| pairs.get(k).map(String::as_str);
        let system: SystemKind = get("system").ok_or(ConfigError::Missing("system".into()))?.parse()?;

        let allowed: Vec<String> = [
            "system", "steps", "dt", "policy", "output.path", "output.format", "tol.self_consistency",
            "sweep.param", "sweep.from", "sweep.to", "sweep.count", "limit.eps", "limit.time",
            "limit.substeps", "limit.min_order",
        ]
        .iter()
        .map(|s| s.to_string())
        .chain(SLEIGH_KEYS.iter().map(|(k, _)| format!("sleigh.{k}")))
        .chain(SUSLOV_KEYS.iter().map(|(k, _)| format!("suslov.{k}")))
        .chain(system.initial_defaults().iter().map(|(k, _)| format!("initial.{k}")))
        .collect();
        if let Some(k) = pairs.keys().find(|k| !allowed.contains(k)) {
            return Err(ConfigError::UnknownField(k.clone()));
        }

        let num = |k: &str, default: f64| get(k).map_or(Ok(default), |v| number(k, v));
        let steps = get("steps").map_or(Ok(100), |v| count("steps", v))?;
        let dt = num("dt", 0.01)?;
        if !(dt > 0.0) {
            return Err(invalid("dt", "must be positive"));
        }
        let policy = match get("policy") {
            Some(v) => v.parse::<BranchPolicy>().map_err(|e| invalid("policy", e))?,
            None => BranchPolicy::Continuity,
        };
        let format = get("output.format").map_or(Ok(OutputFormat::Csv), str::parse)?;
        let output = get("output.path").map(PathBuf::from);

        let sv = |k: &str| num(&format!("sleigh.{k}"), SLEIGH_KEYS.iter().find(|p| p.0 == k).unwrap().1);
        let sleigh = SleighParams::new(sv("m")?, sv("J")?, sv("a")?, sv("b")?).map_err(|e| invalid("sleigh", e))?;
        let uv = |k: &str| num(&format!("suslov.{k}"), SUSLOV_KEYS.iter().find(|p| p.0 == k).unwrap().1);
        let suslov = MassTensor::new(uv("J11")?, uv("J22")?, uv("J33")?, uv("J12")?, uv("J13")?, uv("J23")?)
            .map_err(|e| invalid("suslov", e))?;

        let mut initial = BTreeMap::new();
        for (k, d) in system.initial_defaults() {
            initial.insert(k.to_string(), num(&format!("initial.{k}"), *d)?);
        }

        let self_consistency = num("tol.self_consistency", 1e-12)?;
        if !(self_consistency > 0.0) {
            return Err(invalid("tol.self_consistency", "must be positive"));
        }

        let sweep = match get("sweep.param") {
            None => None,
            Some(p) => {
                if !pairs.contains_key(p) && !allowed.iter().any(|k| k == p) || p.starts_with("sweep.") {
                    return Err(invalid("sweep.param", format!("`{p}` is not a sweepable field")));
                }
                let spec = SweepSpec {
                    param: p.to_string(),
                    from: get("sweep.from").ok_or(ConfigError::Missing("sweep.from".into())).and_then(|v| number("sweep.from", v))?,
                    to: get("sweep.to").ok_or(ConfigError::Missing("sweep.to".into())).and_then(|v| number("sweep.to", v))?,
                    count: get("sweep.count").ok_or(ConfigError::Missing("sweep.count".into())).and_then(|v| count("sweep.count", v))?,
                };
                if spec.count == 0 {
                    return Err(invalid("sweep.count", "must be at least 1"));
                }
                Some(spec)
            }
        };

        let eps = get("limit.eps").map_or(Ok(vec![1e-2, 5e-3, 2.5e-3]), |v| number_list("limit.eps", v))?;
        let limit = LimitSpec {
            eps,
            time: num("limit.time", if system.is_suslov() { 6.0 } else { 8.0 })?,
            substeps: get("limit.substeps").map_or(Ok(20), |v| count("limit.substeps", v))?,
            min_order: num("limit.min_order", 0.9)?,
        };
        validate_limit(&limit)?;

        Ok(Self {
            system,
            steps,
            dt,
            policy,
            output,
            format,
            sleigh,
            suslov,
            initial,
            tolerances: Tolerances { self_consistency },
            sweep,
            limit,
        })
    }

    /// Overrides `key=value` pairs on top of the text of a config.
    pub fn parse_with_overrides(text: &str, overrides: &[String]) -> Result<Self, ConfigError> {
        let mut pairs = parse_pairs(text)?;
        for o in overrides {
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| ConfigError::Syntax { line: 0, text: o.clone() })?;
            pairs.insert(k.trim().to_string(), v.trim().to_string());
        }
        Self::from_pairs(&pairs)
    }

    pub fn init(&self, key: &str) -> f64 {
        self.initial[key]
    }

    /// Every resolved field as `key = value` text, sorted by key.
    pub fn resolved_pairs(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            m.insert(k.to_string(), v);
        };
        put("system", self.system.to_string());
        put("steps", self.steps.to_string());
        put("dt", format!("{:?}", self.dt));
        put("policy", self.policy.to_string());
        put("output.format", self.format.to_string());
        if let Some(p) = &self.output {
            put("output.path", p.display().to_string());
        }
        let s = &self.sleigh;
        for (k, v) in [("m", s.m()), ("J", s.j()), ("a", s.a()), ("b", s.b())] {
            put(&format!("sleigh.{k}"), format!("{v:?}"));
        }
        let j = &self.suslov;
        for (k, v) in [
            ("J11", j.j11()),
            ("J22", j.j22()),
            ("J33", j.j33()),
            ("J12", j.j12()),
            ("J13", j.j13()),
            ("J23", j.j23()),
        ] {
            put(&format!("suslov.{k}"), format!("{v:?}"));
        }
        for (k, v) in &self.initial {
            put(&format!("initial.{k}"), format!("{v:?}"));
        }
        put("tol.self_consistency", format!("{:?}", self.tolerances.self_consistency));
        if let Some(sw) = &self.sweep {
            put("sweep.param", sw.param.clone());
            put("sweep.from", format!("{:?}", sw.from));
            put("sweep.to", format!("{:?}", sw.to));
            put("sweep.count", sw.count.to_string());
        }
        let eps: Vec<String> = self.limit.eps.iter().map(|e| format!("{e:?}")).collect();
        put("limit.eps", eps.join(","));
        put("limit.time", format!("{:?}", self.limit.time));
        put("limit.substeps", self.limit.substeps.to_string());
        put("limit.min_order", format!("{:?}", self.limit.min_order));
        m
    }

    pub fn to_text(&self) -> String {
        self.resolved_pairs().iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}

pub fn validate_limit(l: &LimitSpec) -> Result<(), ConfigError> {
    if l.eps.len() < 2 {
        return Err(invalid("limit.eps", "need at least two values"));
    }
    if l.eps.iter().any(|e| !(*e > 0.0)) {
        return Err(invalid("limit.eps", "values must be positive"));
    }
    for w in l.eps.windows(2) {
        if ((w[0] / w[1]) - 2.0).abs() > 1e-9 {
            return Err(invalid("limit.eps", "each value must halve the previous one"));
        }
    }
    if !(l.time > 0.0) {
        return Err(invalid("limit.time", "must be positive"));
    }
    if l.substeps == 0 {
        return Err(invalid("limit.substeps", "must be at least 1"));
    }
    Ok(())
}
