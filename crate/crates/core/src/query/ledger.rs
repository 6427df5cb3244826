use serde::{Deserialize, Serialize};

use super::{DistQuerySpec, PerturbationAdversary};
use crate::error::{Error, Result};
use crate::game::{eval_payoffs, expected_payoff_vector, Game, MixedProfile, PureProfile};
use crate::TOL;

/// One answered profile query.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoggedQuery {
    pub profile: PureProfile,
    pub reported: Vec<f64>,
}

/// Ordered `(profile, reported payoff vector)` pairs an algorithm has seen.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QueryLog(Vec<LoggedQuery>);

impl QueryLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, profile: PureProfile, reported: Vec<f64>) {
        self.0.push(LoggedQuery { profile, reported });
    }

    pub fn entries(&self) -> &[LoggedQuery] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn profiles(&self) -> impl Iterator<Item = &PureProfile> + '_ {
        self.0.iter().map(|e| &e.profile)
    }
}

/// One answered distribution query.
#[derive(Debug, Clone, PartialEq)]
pub struct DistRecord {
    pub profile: MixedProfile,
    pub reported: Vec<f64>,
}

/// Accounting of the queries charged against a game during one run.
///
/// Counts only ever grow, and each equals the length of its log.
#[derive(Debug, Clone, Default)]
pub struct QueryLedger {
    profile_count: u64,
    dist_count: u64,
    log: QueryLog,
    dist_log: Vec<DistRecord>,
    profile_budget: Option<u64>,
    dist_budget: Option<u64>,
}

#[derive(Serialize)]
struct LedgerDump<'a> {
    profile_count: u64,
    dist_count: u64,
    log: &'a QueryLog,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_profile_budget(mut self, limit: u64) -> Self {
        self.profile_budget = Some(limit);
        self
    }

    pub fn with_dist_budget(mut self, limit: u64) -> Self {
        self.dist_budget = Some(limit);
        self
    }

    pub fn profile_count(&self) -> u64 {
        self.profile_count
    }

    pub fn dist_count(&self) -> u64 {
        self.dist_count
    }

    pub fn log(&self) -> &QueryLog {
        &self.log
    }

    pub fn dist_log(&self) -> &[DistRecord] {
        &self.dist_log
    }

    /// Fails without charging anything if `count` more profile queries
    /// would exceed the budget.
    pub fn reserve_profiles(&self, count: u64) -> Result<()> {
        check_budget("profile", self.profile_count, count, self.profile_budget)
    }

    pub fn reserve_distributions(&self, count: u64) -> Result<()> {
        check_budget("distribution", self.dist_count, count, self.dist_budget)
    }

    /// Exact payoffs at `a`; charges one profile query and logs the answer.
    pub fn query_profile(&mut self, game: &dyn Game, a: &PureProfile) -> Result<Vec<f64>> {
        self.reserve_profiles(1)?;
        let u = eval_payoffs(game, a)?;
        self.profile_count += 1;
        self.log.push(a.clone(), u.clone());
        Ok(u)
    }

    /// A `delta`-distribution query answered by `adversary`. The adversary's
    /// report is checked against the envelope before anything is charged.
    pub fn query_distribution_adversarial(
        &mut self,
        game: &dyn Game,
        p: &MixedProfile,
        spec: &DistQuerySpec,
        adversary: &dyn PerturbationAdversary,
    ) -> Result<Vec<f64>> {
        self.reserve_distributions(1)?;
        spec.check_promise(p)?;
        let truth = expected_payoff_vector(game, p)?;
        let reported = adversary.report(&truth, spec.delta(), self);
        if reported.len() != truth.len() {
            return Err(Error::EnvelopeViolation {
                adversary: adversary.name().to_string(),
                reported: f64::NAN,
                truth: f64::NAN,
                delta: spec.delta(),
            });
        }
        for (&r, &u) in reported.iter().zip(&truth) {
            if !((r - u).abs() <= spec.delta() + TOL) || !(0.0..=1.0).contains(&r) {
                return Err(Error::EnvelopeViolation {
                    adversary: adversary.name().to_string(),
                    reported: r,
                    truth: u,
                    delta: spec.delta(),
                });
            }
        }
        self.dist_count += 1;
        self.dist_log.push(DistRecord {
            profile: p.clone(),
            reported: reported.clone(),
        });
        Ok(reported)
    }

    /// JSON dump: `{"profile_count", "dist_count", "log"}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&LedgerDump {
            profile_count: self.profile_count,
            dist_count: self.dist_count,
            log: &self.log,
        })
        .expect("ledger serializes")
    }
}

fn check_budget(kind: &'static str, used: u64, requested: u64, limit: Option<u64>) -> Result<()> {
    match limit {
        Some(limit) if used.saturating_add(requested) > limit => Err(Error::BudgetExceeded {
            kind,
            used,
            requested,
            limit,
        }),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hard::MatchingPennies;
    use crate::query::NamedAdversary;

    fn pure(a: &[usize]) -> PureProfile {
        PureProfile::new(a.to_vec())
    }

    #[test]
    fn profile_queries_are_charged_and_logged() {
        let g = MatchingPennies::new(1, 2).unwrap();
        let mut ledger = QueryLedger::new();
        assert_eq!(ledger.query_profile(&g, &pure(&[1, 0])).unwrap(), vec![0.0, 1.0]);
        assert_eq!(ledger.profile_count(), 1);
        let again = ledger.query_profile(&g, &pure(&[1, 0])).unwrap();
        assert_eq!(again, vec![0.0, 1.0]);
        assert_eq!(ledger.profile_count(), 2);
        assert_eq!(ledger.log().len(), 2);
        assert!(ledger.query_profile(&g, &pure(&[2, 0])).is_err());
        assert_eq!(ledger.profile_count(), 2);
    }

    #[test]
    fn budget_is_enforced() {
        let g = MatchingPennies::new(1, 2).unwrap();
        let mut ledger = QueryLedger::new().with_profile_budget(1);
        ledger.query_profile(&g, &pure(&[0, 0])).unwrap();
        assert!(matches!(
            ledger.query_profile(&g, &pure(&[0, 0])),
            Err(Error::BudgetExceeded { .. })
        ));
        assert_eq!(ledger.profile_count(), 1);
    }

    #[test]
    fn zero_delta_reports_truth() {
        let g = MatchingPennies::new(1, 2).unwrap();
        let mut ledger = QueryLedger::new();
        let p = MixedProfile::from_binary(&[0.3, 0.8]).unwrap();
        let spec = DistQuerySpec::adversarial(0.0).unwrap();
        for adv in [NamedAdversary::Zero, NamedAdversary::Truncation, NamedAdversary::RoundToGrid] {
            let u = ledger.query_distribution_adversarial(&g, &p, &spec, &adv).unwrap();
            assert_eq!(u, expected_payoff_vector(&g, &p).unwrap());
        }
        assert_eq!(ledger.dist_count(), 3);
        assert_eq!(ledger.profile_count(), 0);
    }

    #[derive(Debug)]
    struct Liar;

    impl PerturbationAdversary for Liar {
        fn name(&self) -> &str {
            "liar"
        }
        fn report(&self, truth: &[f64], _delta: f64, _ledger: &QueryLedger) -> Vec<f64> {
            truth.iter().map(|u| 1.0 - u).collect()
        }
    }

    #[test]
    fn envelope_violation_is_a_contract_error() {
        let g = MatchingPennies::new(1, 2).unwrap();
        let mut ledger = QueryLedger::new();
        let spec = DistQuerySpec::adversarial(0.1).unwrap();
        let p = pure(&[0, 0]).to_mixed(2);
        assert!(matches!(
            ledger.query_distribution_adversarial(&g, &p, &spec, &Liar),
            Err(Error::EnvelopeViolation { .. })
        ));
        assert_eq!(ledger.dist_count(), 0);
    }

    #[test]
    fn dump_format() {
        let g = MatchingPennies::new(1, 2).unwrap();
        let mut ledger = QueryLedger::new();
        ledger.query_profile(&g, &pure(&[1, 0])).unwrap();
        assert_eq!(
            ledger.to_json(),
            r#"{"profile_count":1,"dist_count":0,"log":[{"profile":[2,1],"reported":[0.0,1.0]}]}"#
        );
    }
}
