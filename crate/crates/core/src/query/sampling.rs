use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use super::{DistQuerySpec, QueryLedger};
use crate::error::{Error, Result};
use crate::game::{Game, MixedProfile, PureProfile};

fn require_positive_delta(spec: &DistQuerySpec) -> Result<()> {
    if spec.delta() <= 0.0 {
        return Err(Error::InvalidParameter(
            "sampling needs delta > 0 (zero error cannot be simulated)".into(),
        ));
    }
    Ok(())
}

fn ceil_count(x: f64) -> Result<u64> {
    if !x.is_finite() || x > u64::MAX as f64 {
        return Err(Error::InvalidParameter(format!("sample count {x} is not representable")));
    }
    Ok(x.ceil().max(1.0) as u64)
}

/// Profile queries needed to simulate one `(delta, gamma)`-distribution
/// query of an `n`-player game with failure probability `eta`:
/// `ceil(max{ log(8n/eta) / (gamma delta^2), (8/gamma) log(4n/eta) })`.
pub fn sample_count(n: usize, spec: &DistQuerySpec) -> Result<u64> {
    require_positive_delta(spec)?;
    let (d, g, eta) = (spec.delta(), spec.gamma(), spec.eta());
    let nf = n as f64;
    let log = |x: f64| spec.log_base().log(x);
    let hoeffding = log(8.0 * nf / eta) / (g * d * d);
    let coverage = 8.0 / g * log(4.0 * nf / eta);
    ceil_count(hoeffding.max(coverage))
}

/// The simpler single-query bound `8 log^2(8n/eta) / (gamma^2 delta^2)`.
pub fn simple_sample_count(n: usize, spec: &DistQuerySpec) -> Result<u64> {
    require_positive_delta(spec)?;
    let (d, g) = (spec.delta(), spec.gamma());
    let l = spec.log_base().log(8.0 * n as f64 / spec.eta());
    ceil_count(8.0 * l * l / (g * g * d * d))
}

/// Total profile queries to simulate `q` distribution queries with overall
/// failure probability `eta` (union bound): `8q log^2(8nq/eta) / (gamma^2 delta^2)`.
pub fn batch_sample_count(n: usize, q: u64, spec: &DistQuerySpec) -> Result<u64> {
    require_positive_delta(spec)?;
    let (d, g) = (spec.delta(), spec.gamma());
    let qf = q as f64;
    let l = spec.log_base().log(8.0 * n as f64 * qf.max(1.0) / spec.eta());
    ceil_count(8.0 * qf * l * l / (g * g * d * d))
}

/// Draw `samples` profiles from `p`, charge one profile query per draw, and
/// return the empirical mean payoff vector.
pub fn estimate_payoffs<R: Rng + ?Sized>(
    ledger: &mut QueryLedger,
    game: &dyn Game,
    p: &MixedProfile,
    samples: u64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let n = game.players();
    p.validate(n, game.actions())?;
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    ledger.reserve_profiles(samples)?;
    let samplers = p
        .rows()
        .iter()
        .map(|row| WeightedIndex::new(row).map_err(|e| Error::InvalidProfile(e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    let mut totals = vec![0.0; n];
    for _ in 0..samples {
        let a = PureProfile::new(samplers.iter().map(|s| s.sample(rng)).collect());
        let u = ledger.query_profile(game, &a)?;
        for (t, v) in totals.iter_mut().zip(u) {
            *t += v;
        }
    }
    Ok(totals
        .into_iter()
        .map(|t| (t / samples as f64).clamp(0.0, 1.0))
        .collect())
}

/// Simulate a `(delta, gamma)`-distribution query by sampling, succeeding
/// (sup-norm error at most `delta`) with probability at least `1 - eta`.
pub fn simulate_distribution_query<R: Rng + ?Sized>(
    ledger: &mut QueryLedger,
    game: &dyn Game,
    p: &MixedProfile,
    spec: &DistQuerySpec,
    rng: &mut R,
) -> Result<Vec<f64>> {
    p.validate(game.players(), game.actions())?;
    spec.check_promise(p)?;
    let samples = sample_count(game.players(), spec)?;
    estimate_payoffs(ledger, game, p, samples, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{eval_payoffs, TensorGame};
    use crate::query::LogBase;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sample_count_for_four_players() {
        // 100 ln 640 = 646.15..., 8 ln 320 = 46.1...
        let spec = DistQuerySpec::new(0.1, 1.0, 0.05).unwrap();
        assert_eq!(sample_count(4, &spec).unwrap(), 647);
        let base2 = spec.with_log_base(LogBase::Two);
        assert_eq!(sample_count(4, &base2).unwrap(), 933); // 100 log2 640 = 932.19...
    }

    #[test]
    fn zero_delta_cannot_be_sampled() {
        let spec = DistQuerySpec::new(0.0, 1.0, 0.05).unwrap();
        assert!(sample_count(4, &spec).is_err());
    }

    #[test]
    fn pure_profiles_are_answered_exactly() {
        let g = TensorGame::from_fn(3, 2, |i, a| ((i + 1) * (a[0] + 2 * a[1] + 1)) as f64 / 24.0)
            .unwrap();
        let a = PureProfile::new(vec![1, 0, 1]);
        let spec = DistQuerySpec::new(0.3, 1.0, 0.2).unwrap();
        let mut ledger = QueryLedger::new();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = simulate_distribution_query(&mut ledger, &g, &a.to_mixed(2), &spec, &mut rng)
            .unwrap();
        let truth = eval_payoffs(&g, &a).unwrap();
        for (x, y) in u.iter().zip(&truth) {
            assert!((x - y).abs() < 1e-12);
        }
        assert_eq!(ledger.profile_count(), sample_count(3, &spec).unwrap());
        assert_eq!(ledger.dist_count(), 0);
    }

    #[test]
    fn promise_and_budget_errors() {
        let g = TensorGame::from_fn(2, 2, |_, _| 0.5).unwrap();
        let spec = DistQuerySpec::new(0.1, 0.5, 0.05).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let skewed = MixedProfile::from_binary(&[0.2, 0.5]).unwrap();
        let mut ledger = QueryLedger::new();
        assert!(matches!(
            simulate_distribution_query(&mut ledger, &g, &skewed, &spec, &mut rng),
            Err(Error::PromiseViolation { .. })
        ));
        let mut capped = QueryLedger::new().with_profile_budget(10);
        let uniform = MixedProfile::uniform(2, 2);
        assert!(matches!(
            simulate_distribution_query(&mut capped, &g, &uniform, &spec, &mut rng),
            Err(Error::BudgetExceeded { .. })
        ));
        assert_eq!(capped.profile_count(), 0);
    }

    proptest! {
        #[test]
        fn sample_count_monotone(
            d1 in 0.01f64..0.9, d2 in 0.01f64..0.9,
            g1 in 0.01f64..1.0, g2 in 0.01f64..1.0,
            e1 in 0.01f64..0.9, e2 in 0.01f64..0.9,
            n in 1usize..20,
        ) {
            let lo = DistQuerySpec::new(d1.min(d2), g1.min(g2), e1.min(e2)).unwrap();
            let hi = DistQuerySpec::new(d1.max(d2), g1.max(g2), e1.max(e2)).unwrap();
            prop_assert!(sample_count(n, &hi).unwrap() <= sample_count(n, &lo).unwrap());
        }
    }
}
