use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Rule for picking one root when a discrete step has several.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BranchPolicy {
    /// Closest to the current state.
    #[default]
    Continuity,
    SmallestNorm,
    LargestNorm,
    /// Position in the canonically ordered candidate list.
    Index(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown branch policy `{0}` (expected continuity, smallest, largest or index:N)")]
pub struct ParsePolicyError(pub String);

impl FromStr for BranchPolicy {
    type Err = ParsePolicyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "continuity" => Ok(Self::Continuity),
            "smallest" | "smallest-norm" => Ok(Self::SmallestNorm),
            "largest" | "largest-norm" => Ok(Self::LargestNorm),
            _ => t
                .strip_prefix("index:")
                .and_then(|n| n.parse().ok())
                .map(Self::Index)
                .ok_or_else(|| ParsePolicyError(s.to_string())),
        }
    }
}

impl fmt::Display for BranchPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Continuity => f.write_str("continuity"),
            Self::SmallestNorm => f.write_str("smallest"),
            Self::LargestNorm => f.write_str("largest"),
            Self::Index(i) => write!(f, "index:{i}"),
        }
    }
}

/// Index of the selected candidate. Ties go to the earlier candidate.
pub fn select_branch<T>(
    candidates: &[T],
    policy: BranchPolicy,
    distance_to_current: impl Fn(&T) -> f64,
    norm: impl Fn(&T) -> f64,
) -> Option<usize> {
    let argmin = |key: &dyn Fn(&T) -> f64| {
        candidates
            .iter()
            .enumerate()
            .map(|(i, c)| (i, key(c)))
            .fold(None, |best: Option<(usize, f64)>, (i, k)| match best {
                Some((_, bk)) if bk <= k => best,
                _ => Some((i, k)),
            })
            .map(|(i, _)| i)
    };
    match policy {
        BranchPolicy::Continuity => argmin(&distance_to_current),
        BranchPolicy::SmallestNorm => argmin(&norm),
        BranchPolicy::LargestNorm => argmin(&|c| -norm(c)),
        BranchPolicy::Index(i) => (i < candidates.len()).then_some(i),
    }
}
