use std::sync::Arc;

use super::{check_enumerable, for_each_profile, profile_index, validate_shape, Game, GameKind, GameRef};
use crate::error::{Error, Result};

/// Explicit payoff tensor: `payoffs[i][idx]` with `idx` the row-major
/// profile index (player 0 most significant).
#[derive(Debug, Clone, PartialEq)]
pub struct TensorGame {
    n: usize,
    m: usize,
    payoffs: Vec<Vec<f64>>,
    lambda: Option<f64>,
}

impl TensorGame {
    pub fn new(n: usize, m: usize, payoffs: Vec<Vec<f64>>) -> Result<Self> {
        validate_shape(n, m)?;
        let size = check_enumerable(n, m)?;
        if payoffs.len() != n {
            return Err(Error::InvalidParameter(format!(
                "expected payoff tables for {n} players, got {}",
                payoffs.len()
            )));
        }
        for (i, table) in payoffs.iter().enumerate() {
            if table.len() != size {
                return Err(Error::InvalidParameter(format!(
                    "player {i} has {} payoff entries, expected {size}",
                    table.len()
                )));
            }
            if let Some(v) = table.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                return Err(Error::InvalidParameter(format!(
                    "player {i} has payoff {v} outside [0, 1]"
                )));
            }
        }
        Ok(TensorGame {
            n,
            m,
            payoffs,
            lambda: None,
        })
    }

    /// Tabulate a payoff rule over the whole profile space.
    pub fn from_fn(n: usize, m: usize, f: impl Fn(usize, &[usize]) -> f64) -> Result<Self> {
        validate_shape(n, m)?;
        let size = check_enumerable(n, m)?;
        let mut payoffs = vec![Vec::with_capacity(size); n];
        for_each_profile(n, m, |a| {
            for (i, table) in payoffs.iter_mut().enumerate() {
                table.push(f(i, a));
            }
        });
        Self::new(n, m, payoffs)
    }

    /// Explicit copy of any enumerable game.
    pub fn tabulate(game: &dyn Game) -> Result<Self> {
        let n = game.players();
        let m = game.actions();
        let size = check_enumerable(n, m)?;
        let mut payoffs = vec![Vec::with_capacity(size); n];
        for_each_profile(n, m, |a| {
            for (table, u) in payoffs.iter_mut().zip(game.payoffs(a)) {
                table.push(u);
            }
        });
        let mut tensor = Self::new(n, m, payoffs)?;
        tensor.lambda = game.declared_lambda();
        Ok(tensor)
    }

    pub fn with_declared_lambda(mut self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "declared lambda {lambda} outside (0, 1]"
            )));
        }
        self.lambda = Some(lambda);
        Ok(self)
    }

    pub fn table(&self, player: usize) -> &[f64] {
        &self.payoffs[player]
    }

    pub fn tables(&self) -> &[Vec<f64>] {
        &self.payoffs
    }
}

impl Game for TensorGame {
    fn players(&self) -> usize {
        self.n
    }
    fn actions(&self) -> usize {
        self.m
    }
    fn payoff(&self, player: usize, actions: &[usize]) -> f64 {
        self.payoffs[player][profile_index(actions, self.m)]
    }
    fn declared_lambda(&self) -> Option<f64> {
        self.lambda
    }
    fn kind(&self) -> GameKind {
        GameKind::ExplicitTensor
    }
}

/// Every payoff equal to one value.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantGame {
    n: usize,
    m: usize,
    value: f64,
}

impl ConstantGame {
    pub fn new(n: usize, m: usize, value: f64) -> Result<Self> {
        validate_shape(n, m)?;
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::InvalidParameter(format!(
                "constant payoff {value} outside [0, 1]"
            )));
        }
        Ok(ConstantGame { n, m, value })
    }
}

impl Game for ConstantGame {
    fn players(&self) -> usize {
        self.n
    }
    fn actions(&self) -> usize {
        self.m
    }
    fn payoff(&self, _player: usize, _actions: &[usize]) -> f64 {
        self.value
    }
    fn kind(&self) -> GameKind {
        GameKind::StructuredRule
    }
}

/// Every payoff of `inner` multiplied by `factor`.
#[derive(Debug, Clone)]
pub struct ScaledGame {
    inner: GameRef,
    factor: f64,
}

impl ScaledGame {
    pub fn factor(&self) -> f64 {
        self.factor
    }

    pub fn inner(&self) -> &GameRef {
        &self.inner
    }
}

impl Game for ScaledGame {
    fn players(&self) -> usize {
        self.inner.players()
    }
    fn actions(&self) -> usize {
        self.inner.actions()
    }
    fn payoff(&self, player: usize, actions: &[usize]) -> f64 {
        self.factor * self.inner.payoff(player, actions)
    }
    fn payoffs(&self, actions: &[usize]) -> Vec<f64> {
        let mut u = self.inner.payoffs(actions);
        u.iter_mut().for_each(|v| *v *= self.factor);
        u
    }
    fn declared_lambda(&self) -> Option<f64> {
        self.inner.declared_lambda().map(|l| l * self.factor)
    }
    fn kind(&self) -> GameKind {
        self.inner.kind()
    }
}

/// Multiply every payoff (and the declared Lipschitz parameter) by `c`.
///
/// `c` must lie in `(0, 1]`; larger factors could push payoffs above one.
pub fn scale_game(game: GameRef, c: f64) -> Result<ScaledGame> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "scale factor {c} outside (0, 1]"
        )));
    }
    Ok(ScaledGame {
        inner: game,
        factor: c,
    })
}

impl From<TensorGame> for GameRef {
    fn from(g: TensorGame) -> Self {
        Arc::new(g)
    }
}
