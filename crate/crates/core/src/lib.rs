//! `liplab` is a query-complexity laboratory for Lipschitz games.
//!
//! It provides exact payoff and regret evaluation for pure, mixed and
//! correlated strategy profiles, charged query access (profile queries,
//! adversarial and sampled distribution queries), the induced population
//! game reduction, the generalized Matching Pennies family together with an
//! adversary that defeats deterministic query algorithms, and the LP and
//! brute-force machinery used to certify all of it.
//!
//! Actions and players are 0-based throughout the Rust API. The JSON file
//! formats label actions `1..=m`.

pub mod error;
pub mod game;
pub mod hard;
pub mod io;
pub mod query;
pub mod reductions;
pub mod solvers;

pub use error::{Error, Result};
pub use game::{
    enumeration_limit, set_enumeration_limit, Concept, CorrelatedDistribution, DeviationMap,
    Game, GameKind, GameRef, MixedProfile, PureProfile, RegretReport, StrategyProfile, Witness,
};
pub use query::{DistQuerySpec, QueryLedger, QueryLog};

/// Absolute tolerance used for every exact-arithmetic comparison.
pub const TOL: f64 = 1e-12;
