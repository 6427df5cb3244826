use crate::error::{Error, Result};
use crate::game::{Game, MixedProfile, PureProfile};
use crate::query::{DistQuerySpec, DistributionBackend, QueryLedger};

/// Every player mixes uniformly. Needs no queries and is always an
/// `(m-1)/m`-ANE.
pub fn uniform_profile(n: usize, m: usize) -> MixedProfile {
    MixedProfile::uniform(n, m)
}

/// Each player's best response to everyone else mixing uniformly, found
/// with `2n` distribution queries of a binary-action game.
///
/// Ties go to the first action.
pub fn best_response_to_uniform(
    ledger: &mut QueryLedger,
    game: &dyn Game,
    spec: &DistQuerySpec,
    backend: &mut dyn DistributionBackend,
) -> Result<PureProfile> {
    let n = game.players();
    if game.actions() != 2 {
        return Err(Error::InvalidParameter(format!(
            "best response to uniform needs 2 actions, got {}",
            game.actions()
        )));
    }
    ledger.reserve_distributions(2 * n as u64)?;
    let uniform = uniform_profile(n, 2);
    let mut actions = Vec::with_capacity(n);
    for i in 0..n {
        let first = backend.query(ledger, game, &uniform.with_pure(i, 0), spec)?[i];
        let second = backend.query(ledger, game, &uniform.with_pure(i, 1), spec)?[i];
        actions.push(usize::from(second > first));
    }
    Ok(PureProfile::new(actions))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{regret_mixed, ConstantGame};
    use crate::hard::MatchingPennies;
    use crate::query::{AdversarialBackend, NamedAdversary};
    use crate::solvers::dominant_action_game;

    #[test]
    fn uniform_regret_examples() {
        let mp = MatchingPennies::new(1, 2).unwrap();
        assert_eq!(regret_mixed(&mp, &uniform_profile(2, 2)).unwrap().max_regret(), 0.0);
        let dom = dominant_action_game(2, 3).unwrap();
        let r = regret_mixed(&dom, &uniform_profile(2, 3)).unwrap();
        assert!((r.max_regret() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn best_response_charges_two_per_player() {
        let g = ConstantGame::new(4, 2, 0.5).unwrap();
        let mut ledger = QueryLedger::new();
        let spec = DistQuerySpec::adversarial(0.0).unwrap();
        let mut backend = AdversarialBackend(NamedAdversary::Zero);
        let a = best_response_to_uniform(&mut ledger, &g, &spec, &mut backend).unwrap();
        assert_eq!(ledger.dist_count(), 8);
        assert_eq!(regret_mixed(&g, &a.to_mixed(2)).unwrap().max_regret(), 0.0);
        let g3 = ConstantGame::new(2, 3, 0.5).unwrap();
        assert!(best_response_to_uniform(&mut ledger, &g3, &spec, &mut backend).is_err());
    }
}
