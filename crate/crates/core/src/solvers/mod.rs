//! Certifying machinery: an exact/float simplex solver and the correlated
//! equilibrium LP built on it, brute-force pure equilibrium search, seeded
//! random game generators, and the zero- and few-query baselines.

mod ace;
mod brute;
mod existence;
mod generator;
pub mod lp;
mod uniform;

pub use ace::{
    max_profile_prob_ace, max_profile_prob_ace_fraction, max_profile_prob_ace_with, region_trace, AceOptimum, AcePolytope,
    RegionPoint, ACE_PROFILE_LIMIT, WITNESS_TOL,
};
pub use brute::{all_pure_equilibria, brute_force_pure, brute_force_pure_charged, min_pure_regret};
pub use existence::{existence_lambda, existence_lambda_general, existence_scan, ExistenceRecord};
pub use generator::{
    derived_rng, dominant_action_game, random_lipschitz_game, random_lipschitz_game_with,
    random_multi_lipschitz_game, random_tensor_game, GeneratorConfig, PairwiseGame, Scheme,
};
pub use lp::{solve_lp, solve_lp_with, Arithmetic, Constraint, LinearProgram, LpSolution, Relation};
pub use uniform::{best_response_to_uniform, uniform_profile};
