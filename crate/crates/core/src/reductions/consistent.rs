use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::game::{Game, GameKind, GameRef};
use crate::query::QueryLog;
use crate::TOL;

/// A game that reports the logged answers on queried profiles and the
/// ground truth everywhere else.
#[derive(Debug, Clone)]
pub struct ConsistentGame {
    base: GameRef,
    overrides: HashMap<Vec<usize>, Vec<f64>>,
    delta: f64,
    max_envelope: f64,
}

impl ConsistentGame {
    pub fn base(&self) -> &GameRef {
        &self.base
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn overridden(&self) -> usize {
        self.overrides.len()
    }

    /// Largest `|reported - truth|` over the logged profiles.
    pub fn max_envelope(&self) -> f64 {
        self.max_envelope
    }

    /// If the base game is `lambda_prime`-Lipschitz, this game is
    /// `1.5 lambda_prime`-Lipschitz provided `delta < lambda_prime / 4`.
    /// Returns that bound, or `None` when the hypothesis fails.
    pub fn lipschitz_certificate(&self, lambda_prime: f64) -> Option<f64> {
        (self.delta < lambda_prime / 4.0).then_some(1.5 * lambda_prime)
    }

    /// Whether every `eps/2`-PNE of this game is guaranteed to be an
    /// `eps`-PNE of the base (`delta <= eps / 4`).
    pub fn transfers_equilibria(&self, eps: f64) -> bool {
        self.delta <= eps / 4.0 + TOL
    }
}

impl Game for ConsistentGame {
    fn players(&self) -> usize {
        self.base.players()
    }

    fn actions(&self) -> usize {
        self.base.actions()
    }

    fn payoff(&self, player: usize, actions: &[usize]) -> f64 {
        match self.overrides.get(actions) {
            Some(u) => u[player],
            None => self.base.payoff(player, actions),
        }
    }

    fn payoffs(&self, actions: &[usize]) -> Vec<f64> {
        match self.overrides.get(actions) {
            Some(u) => u.clone(),
            None => self.base.payoffs(actions),
        }
    }

    fn declared_lambda(&self) -> Option<f64> {
        self.base
            .declared_lambda()
            .and_then(|l| self.lipschitz_certificate(l))
    }

    fn kind(&self) -> GameKind {
        GameKind::StructuredRule
    }
}

/// Complete `log` to a full game: logged profiles take their reported
/// vectors, all other profiles keep the payoffs of `base`.
///
/// Every report must lie within `delta` of the truth and inside `[0, 1]`,
/// and a profile logged twice must carry the same report both times.
pub fn build_consistent_game(base: GameRef, log: &QueryLog, delta: f64) -> Result<ConsistentGame> {
    if !(0.0..1.0).contains(&delta) {
        return Err(Error::InvalidParameter(format!("delta {delta} outside [0, 1)")));
    }
    let (n, m) = (base.players(), base.actions());
    let mut overrides: HashMap<Vec<usize>, Vec<f64>> = HashMap::new();
    let mut max_envelope = 0.0f64;
    for entry in log.entries() {
        entry.profile.validate(n, m)?;
        if entry.reported.len() != n {
            return Err(Error::InconsistentLog(format!(
                "report at {:?} has {} entries, expected {n}",
                entry.profile.labels(),
                entry.reported.len()
            )));
        }
        let truth = base.payoffs(entry.profile.actions());
        for (&r, &u) in entry.reported.iter().zip(&truth) {
            let gap = (r - u).abs();
            if !(gap <= delta + TOL) || !(0.0..=1.0).contains(&r) {
                return Err(Error::InconsistentLog(format!(
                    "report {r} at {:?} is outside the {delta}-envelope of {u}",
                    entry.profile.labels()
                )));
            }
            max_envelope = max_envelope.max(gap);
        }
        let key = entry.profile.actions().to_vec();
        if let Some(previous) = overrides.get(&key) {
            if previous != &entry.reported {
                return Err(Error::InconsistentLog(format!(
                    "profile {:?} reported two different answers",
                    entry.profile.labels()
                )));
            }
        } else {
            overrides.insert(key, entry.reported.clone());
        }
    }
    Ok(ConsistentGame {
        base,
        overrides,
        delta,
        max_envelope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{for_each_profile, PureProfile, TensorGame};
    use std::sync::Arc;

    fn base() -> GameRef {
        Arc::new(
            TensorGame::from_fn(2, 2, |i, a| 0.25 + 0.5 * ((i + a[0] + a[1]) % 2) as f64)
                .unwrap()
                .with_declared_lambda(0.5)
                .unwrap(),
        )
    }

    #[test]
    fn empty_log_is_base() {
        let g = build_consistent_game(base(), &QueryLog::new(), 0.1).unwrap();
        for_each_profile(2, 2, |a| assert_eq!(g.payoffs(a), g.base().payoffs(a)));
        assert_eq!(g.max_envelope(), 0.0);
    }

    #[test]
    fn overrides_logged_profiles() {
        let mut log = QueryLog::new();
        log.push(PureProfile::new(vec![0, 1]), vec![0.7, 0.2]);
        let g = build_consistent_game(base(), &log, 0.1).unwrap();
        assert_eq!(g.payoffs(&[0, 1]), vec![0.7, 0.2]);
        assert_eq!(g.payoff(1, &[0, 1]), 0.2);
        assert_eq!(g.payoffs(&[1, 1]), vec![0.25, 0.75]);
        assert!((g.max_envelope() - 0.05).abs() < 1e-12);
        assert_eq!(g.declared_lambda(), Some(0.75));
        assert!(g.transfers_equilibria(0.4));
        assert!(!g.transfers_equilibria(0.3));
    }

    #[test]
    fn certificate_void_outside_hypothesis() {
        let g = build_consistent_game(base(), &QueryLog::new(), 0.2).unwrap();
        assert_eq!(g.lipschitz_certificate(0.5), None);
        assert_eq!(g.declared_lambda(), None);
    }

    #[test]
    fn rejects_bad_logs() {
        let mut far = QueryLog::new();
        far.push(PureProfile::new(vec![0, 0]), vec![0.9, 0.75]);
        assert!(matches!(
            build_consistent_game(base(), &far, 0.1),
            Err(Error::InconsistentLog(_))
        ));
        let mut twice = QueryLog::new();
        twice.push(PureProfile::new(vec![0, 0]), vec![0.2, 0.75]);
        twice.push(PureProfile::new(vec![0, 0]), vec![0.25, 0.75]);
        assert!(matches!(
            build_consistent_game(base(), &twice, 0.1),
            Err(Error::InconsistentLog(_))
        ));
    }
}
