//! Game representations and exact evaluation.
//!
//! A [`Game`] is a payoff evaluator for an `n`-player, `m`-action game with
//! payoffs in `[0, 1]`. Everything that needs the full profile space goes
//! through [`check_enumerable`], which refuses instances larger than the
//! process-wide enumeration limit (`2^24` profiles by default).

mod lipschitz;
mod profile;
mod regret;
mod tensor;

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use lipschitz::{measure_influence, measure_lipschitz};
pub use profile::{
    CorrelatedDistribution, DeviationMap, MixedProfile, PureProfile, StrategyProfile,
};
pub use regret::{
    deviation_regret, eval_payoffs, expected_payoff_mixed, expected_payoff_vector,
    expected_payoffs_for_player,
    is_equilibrium, regret_correlated, regret_mixed, regret_pure, regret_wsne, Concept,
    RegretReport, Witness,
};
pub use tensor::{scale_game, ConstantGame, ScaledGame, TensorGame};

/// Whether a game stores its payoffs explicitly or computes them from a rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GameKind {
    ExplicitTensor,
    StructuredRule,
}

/// Payoff oracle for an `n`-player, `m`-action game.
///
/// `payoff` is unchecked: callers pass a slice of `players()` actions, each
/// below `actions()`. Use [`eval_payoffs`] for validated evaluation.
pub trait Game: Send + Sync + fmt::Debug {
    fn players(&self) -> usize;

    fn actions(&self) -> usize;

    fn payoff(&self, player: usize, actions: &[usize]) -> f64;

    fn payoffs(&self, actions: &[usize]) -> Vec<f64> {
        (0..self.players()).map(|i| self.payoff(i, actions)).collect()
    }

    /// Declared Lipschitz parameter, if the construction certifies one.
    fn declared_lambda(&self) -> Option<f64> {
        None
    }

    fn kind(&self) -> GameKind;
}

pub type GameRef = Arc<dyn Game>;

impl<G: Game + ?Sized> Game for Arc<G> {
    fn players(&self) -> usize {
        (**self).players()
    }
    fn actions(&self) -> usize {
        (**self).actions()
    }
    fn payoff(&self, player: usize, actions: &[usize]) -> f64 {
        (**self).payoff(player, actions)
    }
    fn payoffs(&self, actions: &[usize]) -> Vec<f64> {
        (**self).payoffs(actions)
    }
    fn declared_lambda(&self) -> Option<f64> {
        (**self).declared_lambda()
    }
    fn kind(&self) -> GameKind {
        (**self).kind()
    }
}

const DEFAULT_ENUMERATION_LIMIT: u64 = 1 << 24;

static ENUMERATION_LIMIT: AtomicU64 = AtomicU64::new(DEFAULT_ENUMERATION_LIMIT);

/// Current cap on the number of profiles an exhaustive operation may visit.
pub fn enumeration_limit() -> u64 {
    ENUMERATION_LIMIT.load(Ordering::Relaxed)
}

/// Override the enumeration cap (the CLI wires `LIPLAB_MAX_ENUM` here).
pub fn set_enumeration_limit(limit: u64) {
    ENUMERATION_LIMIT.store(limit, Ordering::Relaxed);
}

/// `m^n` as a wide integer, saturating instead of overflowing.
pub fn profile_count(n: usize, m: usize) -> u128 {
    let mut total: u128 = 1;
    for _ in 0..n {
        total = total.saturating_mul(m as u128);
    }
    total
}

/// Returns `m^n` if it is within the enumeration limit.
pub fn check_enumerable(n: usize, m: usize) -> Result<usize> {
    check_enumerable_with(n, m, enumeration_limit())
}

pub(crate) fn check_enumerable_with(n: usize, m: usize, limit: u64) -> Result<usize> {
    let size = profile_count(n, m);
    if size > limit as u128 {
        return Err(Error::TooLarge { size, limit });
    }
    Ok(size as usize)
}

/// Row-major index of a profile, player 0 most significant.
pub fn profile_index(actions: &[usize], m: usize) -> usize {
    actions.iter().fold(0, |idx, &a| idx * m + a)
}

/// Inverse of [`profile_index`].
pub fn profile_from_index(mut idx: usize, n: usize, m: usize) -> Vec<usize> {
    let mut actions = vec![0; n];
    for slot in actions.iter_mut().rev() {
        *slot = idx % m;
        idx /= m;
    }
    actions
}

/// Advance `actions` to the next profile in lexicographic order.
/// Returns `false` after the last profile (and leaves `actions` all zero).
pub fn next_profile(actions: &mut [usize], m: usize) -> bool {
    for slot in actions.iter_mut().rev() {
        *slot += 1;
        if *slot < m {
            return true;
        }
        *slot = 0;
    }
    false
}

/// Visit every pure profile of `[m]^n` in lexicographic order.
pub fn for_each_profile(n: usize, m: usize, mut f: impl FnMut(&[usize])) {
    let mut actions = vec![0; n];
    loop {
        f(&actions);
        if !next_profile(&mut actions, m) {
            break;
        }
    }
}

pub(crate) fn validate_shape(n: usize, m: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("a game needs at least one player".into()));
    }
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "a game needs at least two actions, got {m}"
        )));
    }
    Ok(())
}
