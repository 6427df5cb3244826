use rand::Rng;

use super::{simulate_distribution_query, DistQuerySpec, PerturbationAdversary, QueryLedger, QueryLog};
use crate::error::Result;
use crate::game::{Game, MixedProfile, PureProfile};

/// The only view of a game an algorithm under test gets.
pub trait ProfileOracle {
    fn players(&self) -> usize;

    fn actions(&self) -> usize;

    fn query(&mut self, a: &PureProfile) -> Result<Vec<f64>>;
}

/// Profile queries answered exactly and charged to a ledger.
pub struct ChargedOracle<'a> {
    game: &'a dyn Game,
    ledger: &'a mut QueryLedger,
}

impl<'a> ChargedOracle<'a> {
    pub fn new(game: &'a dyn Game, ledger: &'a mut QueryLedger) -> Self {
        ChargedOracle { game, ledger }
    }
}

impl ProfileOracle for ChargedOracle<'_> {
    fn players(&self) -> usize {
        self.game.players()
    }

    fn actions(&self) -> usize {
        self.game.actions()
    }

    fn query(&mut self, a: &PureProfile) -> Result<Vec<f64>> {
        self.ledger.query_profile(self.game, a)
    }
}

/// A query algorithm: it learns about a game only through its oracle.
pub trait QueryAlgorithm {
    type Output;

    fn name(&self) -> String;

    fn run(&mut self, oracle: &mut dyn ProfileOracle) -> Result<Self::Output>;
}

/// Run `algorithm` against `game` with every query charged to `ledger`.
pub fn run_charged<A: QueryAlgorithm + ?Sized>(
    algorithm: &mut A,
    game: &dyn Game,
    ledger: &mut QueryLedger,
) -> Result<A::Output> {
    let mut oracle = ChargedOracle::new(game, ledger);
    algorithm.run(&mut oracle)
}

/// How a distribution query gets answered.
pub trait DistributionBackend {
    fn query(
        &mut self,
        ledger: &mut QueryLedger,
        game: &dyn Game,
        p: &MixedProfile,
        spec: &DistQuerySpec,
    ) -> Result<Vec<f64>>;
}

/// Answered by a perturbation adversary; charges one distribution query.
#[derive(Debug, Clone)]
pub struct AdversarialBackend<V>(pub V);

impl<V: PerturbationAdversary> DistributionBackend for AdversarialBackend<V> {
    fn query(
        &mut self,
        ledger: &mut QueryLedger,
        game: &dyn Game,
        p: &MixedProfile,
        spec: &DistQuerySpec,
    ) -> Result<Vec<f64>> {
        ledger.query_distribution_adversarial(game, p, spec, &self.0)
    }
}

/// Simulated by sampling; charges the sampled profile queries.
#[derive(Debug, Clone)]
pub struct SamplingBackend<R>(pub R);

impl<R: Rng> DistributionBackend for SamplingBackend<R> {
    fn query(
        &mut self,
        ledger: &mut QueryLedger,
        game: &dyn Game,
        p: &MixedProfile,
        spec: &DistQuerySpec,
    ) -> Result<Vec<f64>> {
        simulate_distribution_query(ledger, game, p, spec, &mut self.0)
    }
}

/// A profile-query algorithm whose queries are forwarded as
/// `delta`-distribution queries of the matching degenerate mixed profiles.
#[derive(Debug, Clone)]
pub struct DistributionWrapped<A, V> {
    inner: A,
    adversary: V,
    spec: DistQuerySpec,
}

/// Output of a wrapped run plus the answers the inner algorithm saw.
#[derive(Debug, Clone)]
pub struct WrappedRun<O> {
    pub output: O,
    pub view: QueryLog,
}

pub fn wrap_profile_algorithm_as_distribution<A, V>(
    inner: A,
    adversary: V,
    delta: f64,
) -> Result<DistributionWrapped<A, V>> {
    Ok(DistributionWrapped {
        inner,
        adversary,
        spec: DistQuerySpec::adversarial(delta)?,
    })
}

struct ForwardingOracle<'a> {
    game: &'a dyn Game,
    ledger: &'a mut QueryLedger,
    adversary: &'a dyn PerturbationAdversary,
    spec: DistQuerySpec,
    view: QueryLog,
}

impl ProfileOracle for ForwardingOracle<'_> {
    fn players(&self) -> usize {
        self.game.players()
    }

    fn actions(&self) -> usize {
        self.game.actions()
    }

    fn query(&mut self, a: &PureProfile) -> Result<Vec<f64>> {
        a.validate(self.game.players(), self.game.actions())?;
        let p = a.to_mixed(self.game.actions());
        let reported =
            self.ledger
                .query_distribution_adversarial(self.game, &p, &self.spec, self.adversary)?;
        self.view.push(a.clone(), reported.clone());
        Ok(reported)
    }
}

impl<A: QueryAlgorithm, V: PerturbationAdversary> DistributionWrapped<A, V> {
    pub fn inner(&self) -> &A {
        &self.inner
    }

    pub fn delta(&self) -> f64 {
        self.spec.delta()
    }

    pub fn run(&mut self, game: &dyn Game, ledger: &mut QueryLedger) -> Result<WrappedRun<A::Output>> {
        let mut oracle = ForwardingOracle {
            game,
            ledger,
            adversary: &self.adversary,
            spec: self.spec,
            view: QueryLog::new(),
        };
        let output = self.inner.run(&mut oracle)?;
        Ok(WrappedRun {
            output,
            view: oracle.view,
        })
    }
}
