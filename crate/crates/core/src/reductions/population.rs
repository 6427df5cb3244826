use crate::error::{Error, Result};
use crate::game::{
    check_enumerable, expected_payoffs_for_player, Game, GameKind, GameRef, MixedProfile, PureProfile,
};
use crate::query::{DistQuerySpec, DistributionBackend, QueryLedger};

/// The population game induced by a base game.
///
/// Base player `i` is replaced by `sizes[i]` players. Each member plays the
/// base game, in base player `i`'s seat, against the empirical action
/// distributions of the other populations. Flat player indices list
/// population 0 first, then population 1, and so on.
#[derive(Debug, Clone)]
pub struct PopulationGame {
    base: GameRef,
    sizes: Vec<usize>,
    offsets: Vec<usize>,
    owner: Vec<usize>,
}

impl PopulationGame {
    pub fn base(&self) -> &GameRef {
        &self.base
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Flat index of member `member` of population `population`.
    pub fn flat_index(&self, population: usize, member: usize) -> usize {
        self.offsets[population] + member
    }

    /// `(population, member)` of a flat player index.
    pub fn member(&self, player: usize) -> (usize, usize) {
        let population = self.owner[player];
        (population, player - self.offsets[population])
    }

    /// Empirical action distribution of each population.
    fn empirical(&self, actions: &[usize]) -> MixedProfile {
        let m = self.base.actions();
        let rows = self
            .sizes
            .iter()
            .enumerate()
            .map(|(i, &size)| {
                let mut row = vec![0.0; m];
                for &a in &actions[self.offsets[i]..self.offsets[i] + size] {
                    row[a] += 1.0;
                }
                row.iter_mut().for_each(|c| *c /= size as f64);
                row
            })
            .collect();
        MixedProfile::from_rows_unchecked(rows)
    }

    fn population_values(&self, aggregate: &MixedProfile, population: usize) -> Vec<f64> {
        expected_payoffs_for_player(self.base.as_ref(), aggregate, population)
            .expect("base game was checked enumerable at construction")
    }
}

impl Game for PopulationGame {
    fn players(&self) -> usize {
        self.owner.len()
    }

    fn actions(&self) -> usize {
        self.base.actions()
    }

    fn payoff(&self, player: usize, actions: &[usize]) -> f64 {
        let aggregate = self.empirical(actions);
        let population = self.owner[player];
        self.population_values(&aggregate, population)[actions[player]]
    }

    fn payoffs(&self, actions: &[usize]) -> Vec<f64> {
        let aggregate = self.empirical(actions);
        let values: Vec<Vec<f64>> = (0..self.sizes.len())
            .map(|i| self.population_values(&aggregate, i))
            .collect();
        actions
            .iter()
            .enumerate()
            .map(|(v, &a)| values[self.owner[v]][a])
            .collect()
    }

    fn declared_lambda(&self) -> Option<f64> {
        let smallest = *self.sizes.iter().min()? as f64;
        self.base.declared_lambda().map(|l| l / smallest)
    }

    fn kind(&self) -> GameKind {
        GameKind::StructuredRule
    }
}

/// Build `g_G(L_1, ..., L_n)`.
pub fn induce_population_game(base: GameRef, sizes: Vec<usize>) -> Result<PopulationGame> {
    let n = base.players();
    if sizes.len() != n {
        return Err(Error::InvalidParameter(format!(
            "{} population sizes for a {n}-player game",
            sizes.len()
        )));
    }
    if sizes.iter().any(|&l| l == 0) {
        return Err(Error::InvalidParameter("population sizes must be positive".into()));
    }
    check_enumerable(n, base.actions())?;
    let mut offsets = Vec::with_capacity(n);
    let mut owner = Vec::new();
    for (i, &size) in sizes.iter().enumerate() {
        offsets.push(owner.len());
        owner.extend(std::iter::repeat(i).take(size));
    }
    Ok(PopulationGame {
        base,
        sizes,
        offsets,
        owner,
    })
}

/// Each base player plays the empirical strategy of its population.
pub fn aggregate_profile(game: &PopulationGame, a: &PureProfile) -> Result<MixedProfile> {
    a.validate(game.players(), game.actions())?;
    Ok(game.empirical(a.actions()))
}

/// Average mixed strategy of each population.
pub fn aggregate_mixed(game: &PopulationGame, p: &MixedProfile) -> Result<MixedProfile> {
    p.validate(game.players(), game.actions())?;
    let m = game.actions();
    let rows = game
        .sizes
        .iter()
        .enumerate()
        .map(|(i, &size)| {
            let mut row = vec![0.0; m];
            for member in 0..size {
                for (acc, &q) in row.iter_mut().zip(p.row(game.flat_index(i, member))) {
                    *acc += q;
                }
            }
            row.iter_mut().for_each(|x| *x /= size as f64);
            row
        })
        .collect();
    Ok(MixedProfile::from_rows_unchecked(rows))
}

/// Answer a distribution query of the population game with exactly `n * m`
/// distribution queries of the base game.
///
/// For each base player `i` and action `j`, the base game is queried at the
/// profile where `i` plays `j` and everyone else plays their population
/// aggregate; each member's payoff is then the mixture of the answers under
/// its own strategy. The base queries carry the promise `gamma / max L_i`.
pub fn simulate_population_distribution_query(
    base_ledger: &mut QueryLedger,
    game: &PopulationGame,
    p: &MixedProfile,
    spec: &DistQuerySpec,
    backend: &mut dyn DistributionBackend,
) -> Result<Vec<f64>> {
    let aggregate = aggregate_mixed(game, p)?;
    let n = game.sizes.len();
    let m = game.actions();
    let largest = *game.sizes.iter().max().expect("at least one population") as f64;
    let base_spec = spec.with_gamma(spec.gamma() / largest)?;
    base_ledger.reserve_distributions((n * m) as u64)?;
    let mut answers = vec![vec![0.0; m]; n];
    for (i, row) in answers.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            let query = aggregate.with_pure(i, j);
            let reported = backend.query(base_ledger, game.base.as_ref(), &query, &base_spec)?;
            *slot = reported[i];
        }
    }
    Ok((0..game.players())
        .map(|v| {
            let values = &answers[game.owner[v]];
            let mix: f64 = p.row(v).iter().zip(values).map(|(q, u)| q * u).sum();
            mix.clamp(0.0, 1.0)
        })
        .collect())
}
