use std::fmt;
use std::str::FromStr;

use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use super::profile::advance_mixed_radix;
use super::{check_enumerable, enumeration_limit, Game};
use super::{CorrelatedDistribution, DeviationMap, MixedProfile, PureProfile, StrategyProfile};
use crate::error::{Error, Result};
use crate::TOL;

/// The four approximate equilibrium notions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Concept {
    #[serde(rename = "PNE")]
    Pne,
    #[serde(rename = "WSNE")]
    Wsne,
    #[serde(rename = "ANE")]
    Ane,
    #[serde(rename = "ACE")]
    Ace,
}

impl Concept {
    pub fn name(self) -> &'static str {
        match self {
            Concept::Pne => "PNE",
            Concept::Wsne => "WSNE",
            Concept::Ane => "ANE",
            Concept::Ace => "ACE",
        }
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Concept {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "PNE" => Ok(Concept::Pne),
            "WSNE" => Ok(Concept::Wsne),
            "ANE" => Ok(Concept::Ane),
            "ACE" => Ok(Concept::Ace),
            other => Err(Error::Parse(format!("unknown equilibrium concept {other:?}"))),
        }
    }
}

/// The deviation attaining a player's regret.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// Best-response action (pure and mixed concepts).
    Action(usize),
    /// Best swap deviation (correlated concept).
    Deviation(DeviationMap),
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Witness::Action(j) => s.serialize_u64(*j as u64 + 1),
            Witness::Deviation(phi) => phi.serialize(s),
        }
    }
}

/// Per-player regret with the witnessing deviation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegretReport {
    pub concept: Concept,
    pub per_player_regret: Vec<f64>,
    pub witnesses: Vec<Witness>,
}

impl RegretReport {
    pub fn max_regret(&self) -> f64 {
        self.per_player_regret
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// True iff every regret is at most `eps` (with the global tolerance).
    pub fn within(&self, eps: f64) -> bool {
        self.per_player_regret.iter().all(|&r| r <= eps + TOL)
    }
}

/// Raw payoff evaluation at a validated pure profile. Never charged.
pub fn eval_payoffs(game: &dyn Game, a: &PureProfile) -> Result<Vec<f64>> {
    a.validate(game.players(), game.actions())?;
    Ok(game.payoffs(a.actions()))
}

/// `u_i(j, p_{-i})` for every action `j`, by exact enumeration of the
/// support of `p_{-i}`.
pub fn expected_payoffs_for_player(
    game: &dyn Game,
    p: &MixedProfile,
    player: usize,
) -> Result<Vec<f64>> {
    let n = game.players();
    let m = game.actions();
    p.validate(n, m)?;
    check_enumerable(n, m)?;
    if player >= n {
        return Err(Error::InvalidParameter(format!("player {player} out of range")));
    }
    let supports: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|i| {
            if i == player {
                vec![(0, 1.0)]
            } else {
                p.support(i)
            }
        })
        .collect();
    let sizes: Vec<usize> = supports.iter().map(Vec::len).collect();
    let mut cursor = vec![0usize; n];
    let mut actions = vec![0usize; n];
    let mut values = vec![0.0; m];
    loop {
        let mut weight = 1.0;
        for (i, &c) in cursor.iter().enumerate() {
            let (a, w) = supports[i][c];
            actions[i] = a;
            weight *= w;
        }
        for (j, v) in values.iter_mut().enumerate() {
            actions[player] = j;
            *v += weight * game.payoff(player, &actions);
        }
        if !advance_mixed_radix(&mut cursor, &sizes) {
            break;
        }
    }
    Ok(values)
}

/// `u_i(j, p_{-i}) = E_{a_{-i} ~ p_{-i}}[u_i(j, a_{-i})]`.
pub fn expected_payoff_mixed(
    game: &dyn Game,
    p: &MixedProfile,
    player: usize,
    action: usize,
) -> Result<f64> {
    if action >= game.actions() {
        return Err(Error::InvalidParameter(format!("action {action} out of range")));
    }
    Ok(expected_payoffs_for_player(game, p, player)?[action])
}

/// `u(p)`: every player's expected payoff under the product distribution.
pub fn expected_payoff_vector(game: &dyn Game, p: &MixedProfile) -> Result<Vec<f64>> {
    let n = game.players();
    p.validate(n, game.actions())?;
    check_enumerable(n, game.actions())?;
    let supports: Vec<Vec<(usize, f64)>> = (0..n).map(|i| p.support(i)).collect();
    let sizes: Vec<usize> = supports.iter().map(Vec::len).collect();
    let mut cursor = vec![0usize; n];
    let mut actions = vec![0usize; n];
    let mut totals = vec![0.0; n];
    loop {
        let mut weight = 1.0;
        for (i, &c) in cursor.iter().enumerate() {
            let (a, w) = supports[i][c];
            actions[i] = a;
            weight *= w;
        }
        for (t, u) in totals.iter_mut().zip(game.payoffs(&actions)) {
            *t += weight * u;
        }
        if !advance_mixed_radix(&mut cursor, &sizes) {
            break;
        }
    }
    Ok(totals)
}

fn argmax(values: &[f64]) -> (usize, f64) {
    values
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (j, v)| if v > best.1 { (j, v) } else { best })
}

/// Regret of a pure profile: best unilateral deviation gain per player.
pub fn regret_pure(game: &dyn Game, a: &PureProfile) -> Result<RegretReport> {
    a.validate(game.players(), game.actions())?;
    let m = game.actions();
    let mut actions = a.actions().to_vec();
    let mut per_player_regret = Vec::with_capacity(a.len());
    let mut witnesses = Vec::with_capacity(a.len());
    for i in 0..a.len() {
        let current = game.payoff(i, a.actions());
        let values: Vec<f64> = (0..m)
            .map(|j| {
                actions[i] = j;
                game.payoff(i, &actions)
            })
            .collect();
        actions[i] = a.action(i);
        let (best, value) = argmax(&values);
        per_player_regret.push(value - current);
        witnesses.push(Witness::Action(best));
    }
    Ok(RegretReport {
        concept: Concept::Pne,
        per_player_regret,
        witnesses,
    })
}

/// `reg_i(p) = max_j u_i(j, p_{-i}) - u_i(p)`.
pub fn regret_mixed(game: &dyn Game, p: &MixedProfile) -> Result<RegretReport> {
    let n = game.players();
    let mut per_player_regret = Vec::with_capacity(n);
    let mut witnesses = Vec::with_capacity(n);
    for i in 0..n {
        let values = expected_payoffs_for_player(game, p, i)?;
        let current: f64 = values.iter().zip(p.row(i)).map(|(v, w)| v * w).sum();
        let (best, value) = argmax(&values);
        per_player_regret.push((value - current).max(0.0));
        witnesses.push(Witness::Action(best));
    }
    Ok(RegretReport {
        concept: Concept::Ane,
        per_player_regret,
        witnesses,
    })
}

/// Well-supported regret: worst gap between the best response and any
/// action in the player's support.
pub fn regret_wsne(game: &dyn Game, p: &MixedProfile) -> Result<RegretReport> {
    let n = game.players();
    let mut per_player_regret = Vec::with_capacity(n);
    let mut witnesses = Vec::with_capacity(n);
    for i in 0..n {
        let values = expected_payoffs_for_player(game, p, i)?;
        let (best, value) = argmax(&values);
        let worst_supported = p
            .support(i)
            .into_iter()
            .map(|(j, _)| values[j])
            .fold(f64::INFINITY, f64::min);
        per_player_regret.push(value - worst_supported);
        witnesses.push(Witness::Action(best));
    }
    Ok(RegretReport {
        concept: Concept::Wsne,
        per_player_regret,
        witnesses,
    })
}

fn check_support_size(game: &dyn Game, x: &CorrelatedDistribution) -> Result<()> {
    x.validate(game.players(), game.actions())?;
    let work = (x.support_size() as u128) * (game.actions() as u128);
    let limit = enumeration_limit();
    if work > limit as u128 {
        return Err(Error::TooLarge { size: work, limit });
    }
    Ok(())
}

/// Swap regret per player via the per-action decomposition
/// `sum_j max_j' sum_{a: a_i = j} X(a) (u_i(j', a_{-i}) - u_i(a))`.
pub fn regret_correlated(game: &dyn Game, x: &CorrelatedDistribution) -> Result<RegretReport> {
    check_support_size(game, x)?;
    let n = game.players();
    let m = game.actions();
    let mut per_player_regret = Vec::with_capacity(n);
    let mut witnesses = Vec::with_capacity(n);
    for i in 0..n {
        // gains[j][j'] = expected gain from playing j' whenever told j
        let mut gains = vec![vec![0.0; m]; m];
        for (a, prob) in x.iter() {
            let told = a.action(i);
            let base = game.payoff(i, a.actions());
            let mut actions = a.actions().to_vec();
            for (target, gain) in gains[told].iter_mut().enumerate() {
                if target != told {
                    actions[i] = target;
                    *gain += prob * (game.payoff(i, &actions) - base);
                }
            }
        }
        let mut phi = Vec::with_capacity(m);
        let mut total = 0.0;
        for (told, row) in gains.iter().enumerate() {
            let mut best = (told, 0.0);
            for (target, &g) in row.iter().enumerate() {
                if g > best.1 {
                    best = (target, g);
                }
            }
            phi.push(best.0);
            total += best.1;
        }
        per_player_regret.push(total);
        witnesses.push(Witness::Deviation(DeviationMap::new(phi)?));
    }
    Ok(RegretReport {
        concept: Concept::Ace,
        per_player_regret,
        witnesses,
    })
}

/// `reg_i^(phi)(X) = u_i^(phi)(X) - u_i(X)` for one explicit deviation map.
pub fn deviation_regret(
    game: &dyn Game,
    x: &CorrelatedDistribution,
    player: usize,
    phi: &DeviationMap,
) -> Result<f64> {
    check_support_size(game, x)?;
    if phi.as_slice().len() != game.actions() {
        return Err(Error::InvalidParameter("deviation map has the wrong arity".into()));
    }
    let mut total = 0.0;
    for (a, prob) in x.iter() {
        let deviated = a.with_action(player, phi.apply(a.action(player)));
        total += prob * (game.payoff(player, deviated.actions()) - game.payoff(player, a.actions()));
    }
    Ok(total)
}

/// Decide whether `profile` is an `eps`-equilibrium of the given concept.
pub fn is_equilibrium(
    game: &dyn Game,
    profile: &StrategyProfile,
    eps: f64,
    concept: Concept,
) -> Result<(bool, RegretReport)> {
    let report = match (concept, profile) {
        (Concept::Pne, StrategyProfile::Pure(a)) => regret_pure(game, a)?,
        (Concept::Wsne, StrategyProfile::Mixed(p)) => regret_wsne(game, p)?,
        (Concept::Ane, StrategyProfile::Mixed(p)) => regret_mixed(game, p)?,
        (Concept::Ace, StrategyProfile::Correlated(x)) => regret_correlated(game, x)?,
        (concept, other) => {
            return Err(Error::KindMismatch {
                concept: concept.name(),
                kind: other.kind_name(),
            })
        }
    };
    Ok((report.within(eps), report))
}
