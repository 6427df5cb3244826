use serde::Serialize;

use super::matching_pennies::{build_perturbed_game, rho, target_epsilon, MatchingPennies, PerturbedMatchingPennies};
use crate::error::{Error, Result};
use crate::game::{
    deviation_regret, regret_correlated, scale_game, CorrelatedDistribution, DeviationMap, Game,
    GameRef,
};
use crate::query::{run_charged, QueryAlgorithm, QueryLedger, QueryLog};
use crate::TOL;
use std::sync::Arc;

/// Parameters of one adversary run: `G_{k,m}`, the slack `alpha`, and an
/// optional payoff scale `lambda` (1 for the unscaled family).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdversaryConfig {
    pub k: usize,
    pub m: usize,
    pub alpha: f64,
    pub scale: f64,
}

impl AdversaryConfig {
    pub fn new(k: usize, m: usize, alpha: f64) -> Result<Self> {
        MatchingPennies::new(k, m)?;
        rho(alpha, m)?;
        Ok(AdversaryConfig { k, m, alpha, scale: 1.0 })
    }

    /// Run against `scale * G_{k,m}`, a `scale`-Lipschitz game.
    pub fn with_scale(mut self, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale <= 1.0) {
            return Err(Error::InvalidParameter(format!("scale {scale} outside (0, 1]")));
        }
        self.scale = scale;
        Ok(self)
    }

    pub fn players(&self) -> usize {
        2 * self.k
    }

    pub fn rho(&self) -> f64 {
        rho(self.alpha, self.m).expect("alpha validated at construction")
    }

    /// `rho^{n/2}`, the single-profile cap.
    pub fn profile_cap(&self) -> f64 {
        self.rho().powi(self.k as i32)
    }

    /// Target approximation, `scale * ((m-1)/m - alpha)`.
    pub fn epsilon(&self) -> f64 {
        self.scale * target_epsilon(self.alpha, self.m)
    }

    /// Query budget below which the lower bound applies: `(alpha/2) rho^{-n/2}`.
    pub fn bound_q(&self) -> f64 {
        self.alpha / 2.0 / self.profile_cap()
    }
}

/// How an adversary run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Output is an eps-ACE of `G_{k,m}` but not of the perturbed game.
    LowerBoundConfirmed,
    /// Output is not an eps-ACE of `G_{k,m}` to begin with.
    FailedOnBase,
    /// The algorithm used `bound_q` queries or more; nothing is asserted.
    HypothesisUnmet,
    /// Within budget, an eps-ACE of both games. Should never happen.
    Contradiction,
}

impl Verdict {
    /// Whether the run is consistent with the lower bound.
    pub fn passed(self) -> bool {
        self != Verdict::Contradiction
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::LowerBoundConfirmed => "lower_bound_confirmed",
            Verdict::FailedOnBase => "failed_on_base",
            Verdict::HypothesisUnmet => "hypothesis_unmet",
            Verdict::Contradiction => "contradiction",
        }
    }
}

/// The two payoff bounds for player 0 under the perturbation, evaluated with
/// the measured query count `q` and largest profile probability `p_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PayoffBounds {
    /// `u'^(phi)_0(X)`, player 0's payoff when always switching to `j*`.
    pub deviation_payoff: f64,
    /// `u'_0(X)`.
    pub payoff: f64,
    /// `scale * (1 - q p_max)`, the stated floor on `deviation_payoff`.
    pub deviation_floor: f64,
    /// `scale * (1 - m q p_max)`: a logged profile `b` with `b_0 = j*` can
    /// be reached from `m` profiles, so this is the floor that always holds.
    pub deviation_floor_safe: f64,
    /// `scale * (1/m + q p_max)`.
    pub payoff_ceiling: f64,
    pub deviation_floor_holds: bool,
    pub deviation_floor_safe_holds: bool,
    pub payoff_ceiling_holds: bool,
}

impl PayoffBounds {
    pub fn holds(&self) -> bool {
        self.deviation_floor_holds && self.payoff_ceiling_holds
    }
}

/// Everything one adversary run produced.
#[derive(Debug, Clone, Serialize)]
pub struct AdversaryOutcome {
    pub algorithm: String,
    pub config: AdversaryConfig,
    pub n: usize,
    pub algorithm_output: CorrelatedDistribution,
    pub query_log: QueryLog,
    pub q: u64,
    pub epsilon: f64,
    pub rho: f64,
    pub bound_q: f64,
    pub hypothesis_met: bool,
    /// Largest regret of the output on the unperturbed game.
    pub base_regret: f64,
    pub base_is_ace: bool,
    pub j_star: usize,
    pub deviation: DeviationMap,
    /// `reg'^(phi)_0(X)` on the perturbed game.
    pub regret_achieved: f64,
    pub max_profile_prob: f64,
    pub bounds: PayoffBounds,
    /// Rerunning the algorithm on the perturbed game reproduced the same
    /// queries, answers and output.
    pub indistinguishable: bool,
    pub verdict: Verdict,
    #[serde(skip)]
    pub perturbed_game: Option<PerturbedMatchingPennies>,
}

impl AdversaryOutcome {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("outcome serializes")
    }
}

/// Smallest action whose marginal for player 0 is at most `1/m`.
pub fn low_marginal_action(x: &CorrelatedDistribution, m: usize) -> usize {
    let marginal = x.marginal(0, m);
    let cap = 1.0 / m as f64 + TOL;
    marginal
        .iter()
        .position(|&p| p <= cap)
        .expect("some marginal is at most 1/m")
}

/// Whether every logged answer is what `game` returns at that profile.
pub fn replays_identically(game: &dyn Game, log: &QueryLog) -> bool {
    log.entries()
        .iter()
        .all(|e| game.payoffs(e.profile.actions()) == e.reported)
}

fn expected_player0(game: &dyn Game, x: &CorrelatedDistribution, phi: Option<&DeviationMap>) -> f64 {
    x.iter()
        .map(|(a, p)| match phi {
            Some(phi) => p * game.payoff(0, a.with_action(0, phi.apply(a.action(0))).actions()),
            None => p * game.payoff(0, a.actions()),
        })
        .sum()
}

/// Run a deterministic algorithm against `G_{k,m}` and then against the
/// perturbed game built from its own queries.
pub fn run_deterministic_adversary(
    algorithm: &mut dyn QueryAlgorithm<Output = CorrelatedDistribution>,
    config: &AdversaryConfig,
) -> Result<AdversaryOutcome> {
    let (k, m, s) = (config.k, config.m, config.scale);
    let n = config.players();
    let base: GameRef = Arc::new(MatchingPennies::new(k, m)?);
    let game = scale_game(base, s)?;

    let mut ledger = QueryLedger::new();
    let output = run_charged(algorithm, &game, &mut ledger)?;
    output.validate(n, m)?;
    let q = ledger.profile_count();
    let log = ledger.log().clone();
    let epsilon = config.epsilon();
    let bound_q = config.bound_q();
    let hypothesis_met = (q as f64) < bound_q;

    let base_report = regret_correlated(&game, &output)?;
    let base_is_ace = base_report.within(epsilon);

    let j_star = low_marginal_action(&output, m);
    let deviation = DeviationMap::constant(j_star, m);
    let perturbed = build_perturbed_game(&log, k, m, j_star)?;
    let perturbed_ref: GameRef = Arc::new(perturbed.clone());
    let scaled_perturbed = scale_game(perturbed_ref, s)?;
    let regret_achieved = deviation_regret(&scaled_perturbed, &output, 0, &deviation)?;

    let (_, max_profile_prob) = output.max_profile();
    let deviation_payoff = expected_player0(&scaled_perturbed, &output, Some(&deviation));
    let payoff = expected_player0(&scaled_perturbed, &output, None);
    let qp = q as f64 * max_profile_prob;
    let deviation_floor = s * (1.0 - qp);
    let deviation_floor_safe = s * (1.0 - m as f64 * qp);
    let payoff_ceiling = s * (1.0 / m as f64 + qp);
    let bounds = PayoffBounds {
        deviation_payoff,
        payoff,
        deviation_floor,
        deviation_floor_safe,
        payoff_ceiling,
        deviation_floor_holds: deviation_payoff >= deviation_floor - TOL,
        deviation_floor_safe_holds: deviation_payoff >= deviation_floor_safe - TOL,
        payoff_ceiling_holds: payoff <= payoff_ceiling + TOL,
    };

    let mut replay = QueryLedger::new();
    let replay_output = run_charged(algorithm, &scaled_perturbed, &mut replay)?;
    let indistinguishable =
        replays_identically(&game, &log) && replay.log() == &log && replay_output == output;

    let verdict = if !hypothesis_met {
        Verdict::HypothesisUnmet
    } else if !base_is_ace {
        Verdict::FailedOnBase
    } else if regret_achieved > epsilon + TOL {
        Verdict::LowerBoundConfirmed
    } else {
        Verdict::Contradiction
    };

    Ok(AdversaryOutcome {
        algorithm: algorithm.name(),
        config: *config,
        n,
        algorithm_output: output,
        query_log: log,
        q,
        epsilon,
        rho: config.rho(),
        bound_q,
        hypothesis_met,
        base_regret: base_report.max_regret(),
        base_is_ace,
        j_star,
        deviation,
        regret_achieved,
        max_profile_prob,
        bounds,
        indistinguishable,
        verdict,
        perturbed_game: Some(perturbed),
    })
}
