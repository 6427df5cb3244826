use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::game::{regret_correlated, validate_shape, CorrelatedDistribution, Game, GameKind, PureProfile};
use crate::query::QueryLog;

/// `k` independent Matching Pennies pairs over `m` actions.
///
/// In pair `t`, player `2t` (the matcher) earns 1 iff both play the same
/// action and player `2t + 1` (the mismatcher) earns 1 iff they differ.
/// Nobody's payoff depends on other pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchingPennies {
    k: usize,
    m: usize,
}

impl MatchingPennies {
    pub fn new(k: usize, m: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("need at least one pair".into()));
        }
        validate_shape(2 * k, m)?;
        Ok(MatchingPennies { k, m })
    }

    pub fn pairs(&self) -> usize {
        self.k
    }

    /// Payoff rule shared with the perturbed game.
    fn rule(player: usize, actions: &[usize]) -> f64 {
        let (matcher, mismatcher) = (player & !1, player | 1);
        let matched = actions[matcher] == actions[mismatcher];
        if matched == (player == matcher) {
            1.0
        } else {
            0.0
        }
    }
}

impl Game for MatchingPennies {
    fn players(&self) -> usize {
        2 * self.k
    }
    fn actions(&self) -> usize {
        self.m
    }
    fn payoff(&self, player: usize, actions: &[usize]) -> f64 {
        Self::rule(player, actions)
    }
    fn declared_lambda(&self) -> Option<f64> {
        Some(1.0)
    }
    fn kind(&self) -> GameKind {
        GameKind::StructuredRule
    }
}

/// Matching Pennies agreeing with the base game on every logged profile;
/// elsewhere player 0 earns 1 iff it plays `j_star` and everyone else earns 0.
///
/// Evaluated lazily over the log, never materialized.
#[derive(Debug, Clone)]
pub struct PerturbedMatchingPennies {
    base: MatchingPennies,
    logged: HashSet<Vec<usize>>,
    j_star: usize,
}

impl PerturbedMatchingPennies {
    pub fn j_star(&self) -> usize {
        self.j_star
    }

    pub fn is_logged(&self, actions: &[usize]) -> bool {
        self.logged.contains(actions)
    }

    /// Logged profiles in lexicographic order.
    pub fn logged_profiles(&self) -> Vec<PureProfile> {
        let mut out: Vec<_> = self.logged.iter().cloned().map(PureProfile::new).collect();
        out.sort();
        out
    }
}

impl Game for PerturbedMatchingPennies {
    fn players(&self) -> usize {
        self.base.players()
    }
    fn actions(&self) -> usize {
        self.base.actions()
    }
    fn payoff(&self, player: usize, actions: &[usize]) -> f64 {
        if self.logged.contains(actions) {
            self.base.payoff(player, actions)
        } else if player == 0 && actions[0] == self.j_star {
            1.0
        } else {
            0.0
        }
    }
    fn kind(&self) -> GameKind {
        GameKind::StructuredRule
    }
}

pub fn make_matching_pennies(k: usize, m: usize) -> Result<MatchingPennies> {
    MatchingPennies::new(k, m)
}

/// Single-profile probability cap `((2 - alpha) m - 1) / (2m)`, defined for
/// `0 < alpha < (m - 1) / m`.
pub fn rho(alpha: f64, m: usize) -> Result<f64> {
    let mf = m as f64;
    if m < 2 || !(alpha > 0.0 && alpha < (mf - 1.0) / mf) {
        return Err(Error::InvalidParameter(format!(
            "alpha {alpha} outside (0, (m-1)/m) for m = {m}"
        )));
    }
    Ok(((2.0 - alpha) * mf - 1.0) / (2.0 * mf))
}

/// Target approximation `(m - 1)/m - alpha`.
pub fn target_epsilon(alpha: f64, m: usize) -> f64 {
    (m as f64 - 1.0) / m as f64 - alpha
}

/// Result of checking the single-profile cap on an approximate CE.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCapCheck {
    /// Every profile strictly below the cap.
    pub holds: bool,
    /// Every profile at most the cap (within tolerance).
    pub at_most: bool,
    pub worst_profile: PureProfile,
    pub max_prob: f64,
    pub cap: f64,
}

/// Check that no profile of an `((m-1)/m - alpha)`-ACE `x` of `G_{k,m}` has
/// probability `rho^{n/2}` or more.
pub fn check_lemma3_bound(
    x: &CorrelatedDistribution,
    k: usize,
    m: usize,
    alpha: f64,
) -> Result<ProfileCapCheck> {
    let game = MatchingPennies::new(k, m)?;
    let r = rho(alpha, m)?;
    let eps = target_epsilon(alpha, m);
    let report = regret_correlated(&game, x)?;
    if !report.within(eps) {
        return Err(Error::Precondition(format!(
            "distribution is not a {eps}-ACE of G_{{{k},{m}}}: max regret {}",
            report.max_regret()
        )));
    }
    let cap = r.powi(k as i32);
    let (worst_profile, max_prob) = x.max_profile();
    Ok(ProfileCapCheck {
        holds: max_prob < cap,
        at_most: max_prob <= cap + crate::TOL,
        worst_profile,
        max_prob,
        cap,
    })
}

/// The perturbed game for a query log and low-marginal action `j_star`.
pub fn build_perturbed_game(
    log: &QueryLog,
    k: usize,
    m: usize,
    j_star: usize,
) -> Result<PerturbedMatchingPennies> {
    let base = MatchingPennies::new(k, m)?;
    if j_star >= m {
        return Err(Error::InvalidParameter(format!("j* = {j_star} out of range")));
    }
    let mut logged = HashSet::with_capacity(log.len());
    for entry in log.entries() {
        entry.profile.validate(2 * k, m)?;
        logged.insert(entry.profile.actions().to_vec());
    }
    Ok(PerturbedMatchingPennies {
        base,
        logged,
        j_star,
    })
}
