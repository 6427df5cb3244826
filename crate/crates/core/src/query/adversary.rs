use std::fmt;
use std::str::FromStr;

use super::QueryLedger;
use crate::error::Error;

/// Deterministic rule answering a `delta`-distribution query.
///
/// Reports must stay within `delta` of the truth and inside `[0, 1]`; the
/// ledger rejects anything else.
pub trait PerturbationAdversary: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;

    fn report(&self, truth: &[f64], delta: f64, ledger: &QueryLedger) -> Vec<f64>;
}

/// The shipped adversaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedAdversary {
    /// Reports the truth.
    Zero,
    /// Reports `max(u - delta, 0)`.
    Truncation,
    /// Rounds to the nearest multiple of `2 delta`, clamped to `[0, 1]`.
    RoundToGrid,
}

impl NamedAdversary {
    pub fn all() -> [NamedAdversary; 3] {
        [NamedAdversary::Zero, NamedAdversary::Truncation, NamedAdversary::RoundToGrid]
    }
}

impl PerturbationAdversary for NamedAdversary {
    fn name(&self) -> &str {
        match self {
            NamedAdversary::Zero => "zero",
            NamedAdversary::Truncation => "truncation",
            NamedAdversary::RoundToGrid => "round-to-grid",
        }
    }

    fn report(&self, truth: &[f64], delta: f64, _ledger: &QueryLedger) -> Vec<f64> {
        match self {
            NamedAdversary::Zero => truth.to_vec(),
            NamedAdversary::Truncation => truth.iter().map(|u| (u - delta).max(0.0)).collect(),
            NamedAdversary::RoundToGrid if delta == 0.0 => truth.to_vec(),
            NamedAdversary::RoundToGrid => {
                let step = 2.0 * delta;
                truth
                    .iter()
                    .map(|u| ((u / step).round() * step).clamp(0.0, 1.0))
                    .collect()
            }
        }
    }
}

impl FromStr for NamedAdversary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "zero" | "exact" => Ok(NamedAdversary::Zero),
            "truncation" => Ok(NamedAdversary::Truncation),
            "round-to-grid" | "rounding" => Ok(NamedAdversary::RoundToGrid),
            other => Err(Error::Parse(format!("unknown adversary {other:?}"))),
        }
    }
}
