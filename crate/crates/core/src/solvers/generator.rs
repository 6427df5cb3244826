use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{validate_shape, Game, GameKind, TensorGame};
use crate::reductions::MultiLipschitzGame;

/// The generator for trial `trial` of an experiment seeded with `seed`.
pub fn derived_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// How random Lipschitz games are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// `u_i(a) = 1/(n-1) sum_{t != i} h_{i,t}(a_i, a_t)`.
    #[default]
    Pairwise,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub n: usize,
    pub m: usize,
    pub lambda: f64,
    pub seed: u64,
    #[serde(default)]
    pub scheme: Scheme,
}

impl GeneratorConfig {
    pub fn new(n: usize, m: usize, lambda: f64, seed: u64) -> Self {
        GeneratorConfig {
            n,
            m,
            lambda,
            seed,
            scheme: Scheme::Pairwise,
        }
    }
}

/// A game built from an own-action term plus pairwise interaction terms:
/// `u_i(a) = own_i(a_i) + sum_{t != i} h_{i,t}(a_i, a_t)`.
///
/// Player `t` moves player `i`'s payoff by at most the range of `h_{i,t}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseGame {
    n: usize,
    m: usize,
    own: Vec<f64>,
    pair: Vec<f64>,
    lambda: Option<f64>,
}

impl PairwiseGame {
    fn pair_index(&self, i: usize, t: usize, ai: usize, at: usize) -> usize {
        ((i * self.n + t) * self.m + ai) * self.m + at
    }
}

impl Game for PairwiseGame {
    fn players(&self) -> usize {
        self.n
    }

    fn actions(&self) -> usize {
        self.m
    }

    fn payoff(&self, player: usize, actions: &[usize]) -> f64 {
        let ai = actions[player];
        let mut u = self.own[player * self.m + ai];
        for (t, &at) in actions.iter().enumerate() {
            if t != player {
                u += self.pair[self.pair_index(player, t, ai, at)];
            }
        }
        u.clamp(0.0, 1.0)
    }

    fn declared_lambda(&self) -> Option<f64> {
        self.lambda
    }

    fn kind(&self) -> GameKind {
        GameKind::StructuredRule
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidParameter(format!("lambda {lambda} outside [0, 1]")));
    }
    Ok(())
}

/// A random `lambda`-Lipschitz game, reproducible from the seed.
///
/// Each `h_{i,t}` is uniform on `[0, min(1, (n-1) lambda)]` and the sum is
/// averaged over the `n - 1` opponents, so one opponent moves a payoff by at
/// most `lambda`. A one-player game gets a uniform payoff table.
pub fn random_lipschitz_game(config: &GeneratorConfig) -> Result<PairwiseGame> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    random_lipschitz_game_with(config.n, config.m, config.lambda, &mut rng)
}

pub fn random_lipschitz_game_with<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    lambda: f64,
    rng: &mut R,
) -> Result<PairwiseGame> {
    validate_shape(n, m)?;
    check_lambda(lambda)?;
    let mut own = vec![0.0; n * m];
    let mut pair = vec![0.0; n * n * m * m];
    if n == 1 {
        own.iter_mut().for_each(|x| *x = rng.gen::<f64>());
    } else {
        let others = (n - 1) as f64;
        let range = (others * lambda).min(1.0);
        for i in 0..n {
            for t in (0..n).filter(|&t| t != i) {
                let start = (i * n + t) * m * m;
                for x in &mut pair[start..start + m * m] {
                    *x = rng.gen::<f64>() * range / others;
                }
            }
        }
    }
    Ok(PairwiseGame {
        n,
        m,
        own,
        pair,
        lambda: Some(lambda),
    })
}

/// A random game in which player `t` alone moves anyone else's payoff by at
/// most `lambdas[t]`.
///
/// Interaction terms `h_{i,t}` are uniform on `[0, c_t]` with
/// `c_t = lambdas[t] * min(1, 1/Lambda)`; the budget left over goes to a
/// random own-action term, so payoffs stay in `[0, 1]`.
pub fn random_multi_lipschitz_game<R: Rng + ?Sized>(
    lambdas: &[f64],
    m: usize,
    rng: &mut R,
) -> Result<MultiLipschitzGame> {
    let n = lambdas.len();
    validate_shape(n, m)?;
    for &l in lambdas {
        check_lambda(l)?;
    }
    let total: f64 = lambdas.iter().sum();
    let shrink = if total > 1.0 { 1.0 / total } else { 1.0 };
    let caps: Vec<f64> = lambdas.iter().map(|l| l * shrink).collect();
    let mut own = vec![0.0; n * m];
    let mut pair = vec![0.0; n * n * m * m];
    for i in 0..n {
        let used: f64 = (0..n).filter(|&t| t != i).map(|t| caps[t]).sum();
        let left = (1.0 - used).max(0.0);
        for x in &mut own[i * m..(i + 1) * m] {
            *x = rng.gen::<f64>() * left;
        }
        for t in (0..n).filter(|&t| t != i) {
            let start = (i * n + t) * m * m;
            for x in &mut pair[start..start + m * m] {
                *x = rng.gen::<f64>() * caps[t];
            }
        }
    }
    let game = PairwiseGame {
        n,
        m,
        own,
        pair,
        lambda: lambdas.iter().copied().reduce(f64::max),
    };
    MultiLipschitzGame::new(Arc::new(game), lambdas.to_vec())
}

/// A game with independent uniform payoffs (no Lipschitz promise).
pub fn random_tensor_game<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<TensorGame> {
    validate_shape(n, m)?;
    let size = crate::game::check_enumerable(n, m)?;
    let payoffs = (0..n)
        .map(|_| (0..size).map(|_| rng.gen::<f64>()).collect())
        .collect();
    TensorGame::new(n, m, payoffs)
}

/// Every player earns 1 for playing action 0 and 0 otherwise.
pub fn dominant_action_game(n: usize, m: usize) -> Result<TensorGame> {
    TensorGame::from_fn(n, m, |i, a| if a[i] == 0 { 1.0 } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{for_each_profile, measure_lipschitz};

    #[test]
    fn seeded_games_are_reproducible() {
        let cfg = GeneratorConfig::new(3, 2, 0.2, 11);
        assert_eq!(random_lipschitz_game(&cfg).unwrap(), random_lipschitz_game(&cfg).unwrap());
        let other = GeneratorConfig { seed: 12, ..cfg };
        assert_ne!(random_lipschitz_game(&cfg).unwrap(), random_lipschitz_game(&other).unwrap());
    }

    #[test]
    fn measured_lipschitz_within_declared() {
        for seed in 0..20 {
            for (n, m, lambda) in [(2, 2, 1.0), (3, 3, 0.3), (4, 2, 0.05)] {
                let g = random_lipschitz_game(&GeneratorConfig::new(n, m, lambda, seed)).unwrap();
                assert!(measure_lipschitz(&g).unwrap() <= lambda + 1e-12);
                for_each_profile(n, m, |a| {
                    assert!(g.payoffs(a).iter().all(|u| (0.0..=1.0).contains(u)))
                });
            }
        }
    }

    #[test]
    fn multi_lipschitz_game_respects_bounds() {
        let mut rng = derived_rng(3, 0);
        for lambdas in [vec![0.1, 0.3, 0.6, 1.0], vec![0.01, 0.02, 0.02]] {
            let g = random_multi_lipschitz_game(&lambdas, 2, &mut rng).unwrap();
            assert!(g.verify().unwrap());
        }
    }

    #[test]
    fn streams_differ_by_trial() {
        let a: u64 = derived_rng(5, 0).gen();
        let b: u64 = derived_rng(5, 1).gen();
        assert_ne!(a, b);
        assert_eq!(a, derived_rng(5, 0).gen::<u64>());
    }

    #[test]
    fn dominant_game_payoffs() {
        let g = dominant_action_game(2, 3).unwrap();
        assert_eq!(g.payoffs(&[0, 2]), vec![1.0, 0.0]);
        assert_eq!(measure_lipschitz(&g).unwrap(), 0.0);
    }
}
