//! The generalized Matching Pennies family, its adversarial perturbation,
//! and the harness that runs deterministic query algorithms against both.

mod baselines;
mod harness;
mod matching_pennies;

pub use baselines::Baseline;
pub use harness::{
    low_marginal_action, replays_identically, run_deterministic_adversary, AdversaryConfig,
    AdversaryOutcome, PayoffBounds, Verdict,
};
pub use matching_pennies::{
    build_perturbed_game, check_lemma3_bound, make_matching_pennies, rho, target_epsilon,
    MatchingPennies, PerturbedMatchingPennies, ProfileCapCheck,
};
