//! Charged query access to games.
//!
//! Algorithms under test never see a [`Game`](crate::game::Game) directly:
//! they receive a [`ProfileOracle`], and every answer they get is charged to
//! a [`QueryLedger`]. Distribution queries come in two flavours: answered by
//! a deterministic [`PerturbationAdversary`] inside the `delta` envelope, or
//! simulated by sampling pure profiles.

mod adversary;
mod ledger;
mod oracle;
mod sampling;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::MixedProfile;

pub use adversary::{NamedAdversary, PerturbationAdversary};
pub use ledger::{DistRecord, LoggedQuery, QueryLedger, QueryLog};
pub use oracle::{
    run_charged, wrap_profile_algorithm_as_distribution, AdversarialBackend, ChargedOracle,
    DistributionBackend, DistributionWrapped, ProfileOracle, QueryAlgorithm, SamplingBackend,
    WrappedRun,
};
pub use sampling::{
    batch_sample_count, estimate_payoffs, sample_count, simple_sample_count,
    simulate_distribution_query,
};

/// Logarithm used in the sample-count formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Natural,
    Two,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Two => x.log2(),
        }
    }
}

/// Parameters of a `(delta, gamma)`-distribution query.
///
/// `delta` bounds the sup-norm error of the answer, `gamma` is the minimum
/// probability of any supported action, and `eta` is the failure
/// probability allowed when the query is simulated by sampling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistQuerySpec {
    delta: f64,
    gamma: f64,
    eta: f64,
    log_base: LogBase,
}

impl DistQuerySpec {
    pub fn new(delta: f64, gamma: f64, eta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&delta) {
            return Err(Error::InvalidParameter(format!("delta {delta} outside [0, 1)")));
        }
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::InvalidParameter(format!("gamma {gamma} outside (0, 1]")));
        }
        if !(eta > 0.0 && eta < 1.0) {
            return Err(Error::InvalidParameter(format!("eta {eta} outside (0, 1)")));
        }
        Ok(DistQuerySpec {
            delta,
            gamma,
            eta,
            log_base: LogBase::Natural,
        })
    }

    /// A plain `delta`-distribution query: no support promise, no sampling.
    pub fn adversarial(delta: f64) -> Result<Self> {
        Self::new(delta, f64::MIN_POSITIVE, 0.5)
    }

    pub fn with_log_base(mut self, base: LogBase) -> Self {
        self.log_base = base;
        self
    }

    /// Same query with the support promise relaxed to `gamma`.
    pub fn with_gamma(self, gamma: f64) -> Result<Self> {
        Ok(DistQuerySpec {
            log_base: self.log_base,
            ..Self::new(self.delta, gamma, self.eta)?
        })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn log_base(&self) -> LogBase {
        self.log_base
    }

    /// Every supported action of every player must carry at least `gamma`.
    pub fn check_promise(&self, p: &MixedProfile) -> Result<()> {
        for (player, row) in p.rows().iter().enumerate() {
            for (action, &prob) in row.iter().enumerate() {
                if prob > 0.0 && prob < self.gamma - crate::TOL {
                    return Err(Error::PromiseViolation {
                        player,
                        action,
                        prob,
                        gamma: self.gamma,
                    });
                }
            }
        }
        Ok(())
    }
}
