mod common;

use common::{all_profiles, influence, lipschitz, pure_regrets, swap_regret_brute};
use liplab::game::{regret_correlated, regret_mixed};
use liplab::hard::MatchingPennies;
use liplab::query::{AdversarialBackend, NamedAdversary};
use liplab::solvers::lp::{solve_lp_with, Arithmetic, Constraint, LinearProgram, Relation};
use liplab::solvers::{
    all_pure_equilibria, best_response_to_uniform, brute_force_pure, brute_force_pure_charged,
    derived_rng, dominant_action_game, existence_lambda, existence_scan, max_profile_prob_ace,
    min_pure_regret, random_lipschitz_game, random_lipschitz_game_with,
    random_multi_lipschitz_game, random_tensor_game, region_trace, uniform_profile,
    GeneratorConfig,
};
use liplab::{CorrelatedDistribution, DistQuerySpec, Error, Game, PureProfile, QueryLedger};
use rand::Rng;

fn pure(a: &[usize]) -> PureProfile {
    PureProfile::new(a.to_vec())
}

#[test]
fn small_lp_in_both_arithmetics() {
    // max 3x + 2y s.t. x + y <= 4, x + 3y <= 6, x <= 3: optimum 11 at (3, 1)
    let mut lp = LinearProgram::new(2).maximize(vec![3.0, 2.0]);
    lp.push(Constraint::new(vec![(0, 1.0), (1, 1.0)], Relation::Le, 4.0));
    lp.push(Constraint::new(vec![(0, 1.0), (1, 3.0)], Relation::Le, 6.0));
    lp.push(Constraint::new(vec![(0, 1.0)], Relation::Le, 3.0));
    for arithmetic in [Arithmetic::Float, Arithmetic::Exact] {
        let s = solve_lp_with(&lp, arithmetic).unwrap();
        assert!((s.value - 11.0).abs() < 1e-9);
        assert!((s.x[0] - 3.0).abs() < 1e-9 && (s.x[1] - 1.0).abs() < 1e-9);
    }
    let exact = solve_lp_with(&lp, Arithmetic::Exact).unwrap();
    assert_eq!(exact.exact_value.unwrap().to_string(), "11");
}

#[test]
fn infeasible_and_unbounded() {
    let mut lp = LinearProgram::new(1).maximize(vec![1.0]);
    lp.push(Constraint::new(vec![(0, 1.0)], Relation::Ge, 2.0));
    lp.push(Constraint::new(vec![(0, 1.0)], Relation::Le, 1.0));
    assert!(matches!(solve_lp_with(&lp, Arithmetic::Exact), Err(Error::Infeasible)));
    let mut lp = LinearProgram::new(2).maximize(vec![1.0, 0.0]);
    lp.push(Constraint::new(vec![(0, 1.0), (1, -1.0)], Relation::Eq, 0.0));
    assert!(matches!(solve_lp_with(&lp, Arithmetic::Float), Err(Error::Unbounded)));
}

#[test]
fn lp_agrees_with_regret_decomposition() {
    for t in 0..15 {
        let mut rng = derived_rng(11, t);
        let n = 2;
        let m = 2 + (t % 2) as usize;
        let g = random_tensor_game(n, m, &mut rng).unwrap();
        let weights: Vec<(PureProfile, f64)> = all_profiles(n, m)
            .into_iter()
            .map(|a| (PureProfile::new(a), rng.gen::<f64>()))
            .collect();
        let x = CorrelatedDistribution::from_weights(weights).unwrap();
        let eps = regret_correlated(&g, &x).unwrap().max_regret();
        // x lies in the eps-ACE polytope, so no target can be capped below it
        for a in all_profiles(n, m) {
            let target = PureProfile::new(a);
            let opt = max_profile_prob_ace(&g, eps, &target).unwrap();
            assert!(opt.value >= x.prob(&target) - 1e-9);
            let support: Vec<(Vec<usize>, f64)> =
                opt.witness.iter().map(|(b, p)| (b.actions().to_vec(), p)).collect();
            for i in 0..n {
                assert!(swap_regret_brute(&g, &support, i) <= eps + 1e-9);
            }
        }
        let fixed = pure(&vec![0; n]);
        let target = pure(&vec![1; n]);
        let trace = region_trace(&g, eps, &target, &fixed, &[x.prob(&fixed)]).unwrap();
        let (lo, hi) = (trace[0].min.unwrap(), trace[0].max.unwrap());
        assert!(lo - 1e-9 <= x.prob(&target) && x.prob(&target) <= hi + 1e-9);
    }
}

#[test]
fn pure_equilibrium_carries_all_mass() {
    let g = dominant_action_game(2, 3).unwrap();
    let opt = max_profile_prob_ace(&g, 0.0, &pure(&[0, 0])).unwrap();
    assert!((opt.value - 1.0).abs() < 1e-9);
    let none = max_profile_prob_ace(&g, 0.0, &pure(&[1, 1])).unwrap();
    assert!(none.value.abs() < 1e-9);
}

#[test]
fn region_levels_out_of_reach_are_reported() {
    let g = MatchingPennies::new(1, 2).unwrap();
    let trace = region_trace(&g, 0.0, &pure(&[1, 1]), &pure(&[0, 0]), &[0.25, 0.9]).unwrap();
    assert!((trace[0].max.unwrap() - 0.25).abs() < 1e-9);
    assert_eq!(trace[1].max, None);
}

#[test]
fn brute_force_matches_reference() {
    for t in 0..30 {
        let mut rng = derived_rng(12, t);
        let n = 1 + (t % 4) as usize;
        let m = 2 + (t % 2) as usize;
        let g = random_tensor_game(n, m, &mut rng).unwrap();
        let eps = rng.gen_range(0.0..0.5);
        let reference: Vec<Vec<usize>> = all_profiles(n, m)
            .into_iter()
            .filter(|a| pure_regrets(&g, a).iter().all(|&r| r <= eps + 1e-12))
            .collect();
        let found: Vec<Vec<usize>> = all_pure_equilibria(&g, eps)
            .unwrap()
            .into_iter()
            .map(|a| a.actions().to_vec())
            .collect();
        assert_eq!(found, reference);
        assert_eq!(
            brute_force_pure(&g, eps).unwrap().map(|a| a.actions().to_vec()),
            reference.first().cloned()
        );
        let (best, at) = min_pure_regret(&g).unwrap();
        let reference_best = all_profiles(n, m)
            .iter()
            .map(|a| pure_regrets(&g, a).into_iter().fold(0.0, f64::max))
            .fold(f64::INFINITY, f64::min);
        assert!((best - reference_best).abs() < 1e-15);
        assert!((pure_regrets(&g, at.actions()).into_iter().fold(0.0, f64::max) - best).abs() < 1e-15);
    }
}

#[test]
fn charged_brute_force_queries_every_profile() {
    let g = random_tensor_game(3, 2, &mut derived_rng(13, 0)).unwrap();
    let mut ledger = QueryLedger::new();
    brute_force_pure_charged(&mut ledger, &g, 0.2).unwrap();
    assert_eq!(ledger.profile_count(), 8);
    let mut tight = QueryLedger::new().with_profile_budget(7);
    assert!(matches!(brute_force_pure_charged(&mut tight, &g, 0.2), Err(Error::BudgetExceeded { .. })));
}

#[test]
fn generated_games_keep_their_promises() {
    for t in 0..40 {
        let mut rng = derived_rng(14, t);
        let n = 1 + (t % 5) as usize;
        let m = 2 + (t % 2) as usize;
        let lambda = rng.gen_range(0.0..=1.0);
        let g = random_lipschitz_game_with(n, m, lambda, &mut rng).unwrap();
        assert!(lipschitz(&g) <= lambda + 1e-12);
        assert_eq!(g.declared_lambda(), Some(lambda));
        for a in all_profiles(n, m) {
            assert!(g.payoffs(&a).iter().all(|u| (0.0..=1.0).contains(u)));
        }
        let lambdas: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let multi = random_multi_lipschitz_game(&lambdas, m, &mut rng).unwrap();
        assert!(influence(&multi).iter().zip(&lambdas).all(|(a, b)| *a <= b + 1e-12));
        assert!(multi.verify().unwrap());
        for a in all_profiles(n, m) {
            assert!(multi.payoffs(&a).iter().all(|u| (0.0..=1.0).contains(u)));
        }
    }
    assert!(random_lipschitz_game_with(2, 2, 1.5, &mut derived_rng(0, 0)).is_err());
}

#[test]
fn generator_is_seeded() {
    let a = random_lipschitz_game(&GeneratorConfig::new(3, 2, 0.3, 5)).unwrap();
    let b = random_lipschitz_game(&GeneratorConfig::new(3, 2, 0.3, 5)).unwrap();
    let c = random_lipschitz_game(&GeneratorConfig::new(3, 2, 0.3, 6)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
    let x: f64 = derived_rng(1, 2).gen();
    let y: f64 = derived_rng(1, 3).gen();
    assert_ne!(x, y);
}

#[test]
fn uniform_profile_regret_bound() {
    for n in 1..=3 {
        for m in 2..=4 {
            let g = dominant_action_game(n, m).unwrap();
            let r = regret_mixed(&g, &uniform_profile(n, m)).unwrap();
            assert!((r.max_regret() - (m as f64 - 1.0) / m as f64).abs() < 1e-12);
        }
    }
}

#[test]
fn best_response_to_uniform_picks_the_better_action() {
    let g = liplab::game::TensorGame::from_fn(3, 2, |i, a| {
        let own = if a[i] == i % 2 { 0.6 } else { 0.2 };
        own + 0.1 * a.iter().sum::<usize>() as f64 / 3.0
    })
    .unwrap();
    let mut ledger = QueryLedger::new();
    let spec = DistQuerySpec::adversarial(0.0).unwrap();
    let mut backend = AdversarialBackend(NamedAdversary::Zero);
    let br = best_response_to_uniform(&mut ledger, &g, &spec, &mut backend).unwrap();
    assert_eq!(br.actions(), &[0, 1, 0]);
    assert_eq!(ledger.dist_count(), 6);
    let three = dominant_action_game(2, 3).unwrap();
    assert!(best_response_to_uniform(&mut ledger, &three, &spec, &mut backend).is_err());
}

#[test]
fn existence_scan_is_ordered_and_verified() {
    let eps = 0.3;
    let lambda = existence_lambda(6, eps);
    let records = existence_scan(6, eps, lambda, 21, 12).unwrap();
    assert_eq!(records, existence_scan(6, eps, lambda, 21, 12).unwrap());
    for (t, r) in records.iter().enumerate() {
        assert_eq!(r.trial, t as u64);
        let g = random_lipschitz_game_with(6, 2, lambda, &mut derived_rng(21, t as u64)).unwrap();
        let regret = pure_regrets(&g, r.profile.actions()).into_iter().fold(0.0, f64::max);
        assert!((regret - r.min_epsilon).abs() < 1e-15);
        assert_eq!(r.found, r.min_epsilon <= eps + 1e-12);
    }
}
