use crate::error::{Error, Result};
use crate::game::{measure_influence, Game, GameKind, GameRef};
use crate::TOL;

/// A game with a separate influence bound `lambdas[i]` for each player:
/// when player `i` alone deviates, nobody else's payoff moves by more than
/// `lambdas[i]`.
#[derive(Debug, Clone)]
pub struct MultiLipschitzGame {
    base: GameRef,
    lambdas: Vec<f64>,
}

impl MultiLipschitzGame {
    pub fn new(base: GameRef, lambdas: Vec<f64>) -> Result<Self> {
        if lambdas.len() != base.players() {
            return Err(Error::InvalidParameter(format!(
                "{} influence bounds for a {}-player game",
                lambdas.len(),
                base.players()
            )));
        }
        if let Some(l) = lambdas.iter().find(|l| !(0.0..=1.0).contains(*l)) {
            return Err(Error::InvalidParameter(format!("influence bound {l} outside [0, 1]")));
        }
        Ok(MultiLipschitzGame { base, lambdas })
    }

    pub fn base(&self) -> &GameRef {
        &self.base
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    /// `Lambda`, the sum of the per-player bounds.
    pub fn total(&self) -> f64 {
        self.lambdas.iter().sum()
    }

    /// Exhaustively confirm every measured influence is within its bound.
    pub fn verify(&self) -> Result<bool> {
        let measured = measure_influence(self.base.as_ref())?;
        Ok(measured
            .iter()
            .zip(&self.lambdas)
            .all(|(got, bound)| *got <= bound + TOL))
    }
}

impl Game for MultiLipschitzGame {
    fn players(&self) -> usize {
        self.base.players()
    }

    fn actions(&self) -> usize {
        self.base.actions()
    }

    fn payoff(&self, player: usize, actions: &[usize]) -> f64 {
        self.base.payoff(player, actions)
    }

    fn payoffs(&self, actions: &[usize]) -> Vec<f64> {
        self.base.payoffs(actions)
    }

    fn declared_lambda(&self) -> Option<f64> {
        self.lambdas.iter().copied().reduce(f64::max)
    }

    fn kind(&self) -> GameKind {
        self.base.kind()
    }
}

/// Population sizes `L_i = ceil(max(n lambda_i / Lambda, 1))`.
///
/// The raw values sum to at most `2n`; rounding up adds less than one per
/// player, so the sizes sum to at most `3n`.
pub fn multi_lipschitz_population_sizes(lambdas: &[f64]) -> Result<Vec<usize>> {
    if lambdas.is_empty() {
        return Err(Error::InvalidParameter("no influence bounds given".into()));
    }
    if lambdas.iter().any(|l| !l.is_finite() || *l < 0.0) {
        return Err(Error::InvalidParameter("influence bounds must be non-negative".into()));
    }
    let total: f64 = lambdas.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidParameter(format!("Lambda = {total} must be positive")));
    }
    let n = lambdas.len() as f64;
    Ok(lambdas
        .iter()
        .map(|l| {
            // absorb float noise so that exact integers do not round up
            (n * l / total).max(1.0) - 1e-9
        })
        .map(|raw| raw.ceil() as usize)
        .collect())
}

/// Whether `Lambda < eps / n`, where any best response to the uniform
/// profile is already an `eps`-ANE.
pub fn trivial_regime(total: f64, eps: f64, n: usize) -> bool {
    total < eps / n as f64
}
