use rayon::prelude::*;
use serde::Serialize;

use super::brute::min_pure_regret;
use super::generator::{derived_rng, random_lipschitz_game_with};
use crate::error::{Error, Result};
use crate::game::PureProfile;
use crate::TOL;

/// Largest `lambda` for which every binary-action `n`-player
/// `lambda`-Lipschitz game has an `eps`-PNE: `eps / sqrt(8 n ln(4n))`.
pub fn existence_lambda(n: usize, eps: f64) -> f64 {
    let nf = n as f64;
    eps / (8.0 * nf * (4.0 * nf).ln()).sqrt()
}

/// The same threshold written for `m` actions: `eps / sqrt(8 n ln(2mn))`.
/// Equal to [`existence_lambda`] when `m = 2`.
pub fn existence_lambda_general(n: usize, m: usize, eps: f64) -> f64 {
    let nf = n as f64;
    eps / (8.0 * nf * (2.0 * m as f64 * nf).ln()).sqrt()
}

/// Outcome of one random instance in an existence scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExistenceRecord {
    pub trial: u64,
    pub found: bool,
    /// Smallest eps at which the instance has an eps-PNE.
    pub min_epsilon: f64,
    /// A profile attaining `min_epsilon`.
    pub profile: PureProfile,
}

/// Draw `trials` random `lambda`-Lipschitz binary games (trial `t` from the
/// derived stream `(seed, t)`) and find each one's best pure profile.
/// Trials run in parallel; records come back in trial order.
pub fn existence_scan(
    n: usize,
    eps: f64,
    lambda: f64,
    seed: u64,
    trials: u64,
) -> Result<Vec<ExistenceRecord>> {
    if !(eps >= 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon {eps} must be non-negative")));
    }
    crate::game::check_enumerable(n, 2)?;
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = derived_rng(seed, trial);
            let game = random_lipschitz_game_with(n, 2, lambda, &mut rng)?;
            let (min_epsilon, profile) = min_pure_regret(&game)?;
            Ok(ExistenceRecord {
                trial,
                found: min_epsilon <= eps + TOL,
                min_epsilon,
                profile,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds_agree_for_two_actions() {
        for n in [2, 8, 12] {
            assert!((existence_lambda(n, 0.3) - existence_lambda_general(n, 2, 0.3)).abs() < 1e-15);
        }
        // 8 * 8 * ln 32 = 221.8...
        assert!((existence_lambda(8, 0.3) - 0.3 / 221.807_097_779_182_3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn scan_is_ordered_and_reproducible() {
        let a = existence_scan(6, 0.3, existence_lambda(6, 0.3), 4, 8).unwrap();
        assert_eq!(a, existence_scan(6, 0.3, existence_lambda(6, 0.3), 4, 8).unwrap());
        assert!(a.iter().enumerate().all(|(t, r)| r.trial == t as u64 && r.found));
    }

    #[test]
    fn no_interaction_means_exact_equilibria() {
        let recs = existence_scan(5, 0.0, 0.0, 1, 3).unwrap();
        assert!(recs.iter().all(|r| r.found && r.min_epsilon == 0.0));
    }
}
