use thiserror::Error;

/// Errors produced by game evaluation, query accounting and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("instance too large to enumerate: {size} profiles exceeds the limit of {limit}")]
    TooLarge { size: u128, limit: u64 },

    #[error("profile kind does not match concept {concept}: got a {kind} profile")]
    KindMismatch { concept: &'static str, kind: &'static str },

    #[error("query budget exceeded: {used} {kind} queries used, {requested} more requested, limit {limit}")]
    BudgetExceeded {
        kind: &'static str,
        used: u64,
        requested: u64,
        limit: u64,
    },

    #[error("(delta, gamma) promise violated: player {player} action {action} has probability {prob} < gamma {gamma}")]
    PromiseViolation {
        player: usize,
        action: usize,
        prob: f64,
        gamma: f64,
    },

    #[error("adversary {adversary} broke the delta envelope: reported {reported} vs true {truth} (delta {delta})")]
    EnvelopeViolation {
        adversary: String,
        reported: f64,
        truth: f64,
        delta: f64,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("query log inconsistent with the delta envelope: {0}")]
    InconsistentLog(String),

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
