//! Reductions between games: the induced population game and its
//! query-efficient simulation, population sizes for Multi-Lipschitz games,
//! and the completion of a game from perturbed query answers.

mod consistent;
mod multi;
mod population;

pub use consistent::{build_consistent_game, ConsistentGame};
pub use multi::{multi_lipschitz_population_sizes, trivial_regime, MultiLipschitzGame};
pub use population::{
    aggregate_mixed, aggregate_profile, induce_population_game,
    simulate_population_distribution_query,
    PopulationGame,
};
