use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use liplab::game::{
    expected_payoff_vector, is_equilibrium, measure_lipschitz, next_profile, regret_mixed,
    regret_pure, regret_wsne, Game,
};
use liplab::hard::{
    rho, run_deterministic_adversary, target_epsilon, AdversaryConfig, AdversaryOutcome, Baseline,
    MatchingPennies,
};
use liplab::io::{load_game, load_profile};
use liplab::query::{
    sample_count, wrap_profile_algorithm_as_distribution, AdversarialBackend, DistQuerySpec,
    DistributionBackend, NamedAdversary, ProfileOracle, QueryAlgorithm, SamplingBackend,
};
use liplab::reductions::{
    aggregate_profile, build_consistent_game, induce_population_game,
    multi_lipschitz_population_sizes, simulate_population_distribution_query, trivial_regime,
    PopulationGame,
};
use liplab::solvers::{
    all_pure_equilibria, best_response_to_uniform, derived_rng, existence_lambda,
    existence_lambda_general, existence_scan, max_profile_prob_ace, random_multi_lipschitz_game,
    region_trace,
};
use liplab::{Concept, GameRef, MixedProfile, PureProfile, QueryLedger, StrategyProfile, TOL};

use crate::output::{csv_string, format_for, usage, write_output, CliError, CliResult};
use crate::{AdversaryArgs, ExistenceArgs, Format, ReduceArgs, RegionArgs, VerifyArgs};

/// Honour `LIPLAB_MAX_ENUM` if set.
pub fn apply_enumeration_limit() -> CliResult<()> {
    if let Ok(raw) = std::env::var("LIPLAB_MAX_ENUM") {
        let limit: u64 = raw
            .trim()
            .parse()
            .map_err(|_| CliError(format!("LIPLAB_MAX_ENUM={raw:?} is not a positive integer")))?;
        if limit == 0 {
            return usage("LIPLAB_MAX_ENUM must be positive");
        }
        liplab::set_enumeration_limit(limit);
    }
    Ok(())
}

/// A decimal or a fraction `p/q`.
fn number(raw: &str, what: &str) -> CliResult<f64> {
    let raw = raw.trim();
    let value = match raw.split_once('/') {
        Some((p, q)) => match (p.trim().parse::<f64>(), q.trim().parse::<f64>()) {
            (Ok(p), Ok(q)) if q != 0.0 => Ok(p / q),
            _ => Err(()),
        },
        None => raw.parse::<f64>().map_err(|_| ()),
    };
    match value {
        Ok(v) if v.is_finite() => Ok(v),
        _ => usage(format!("{what}: {raw:?} is not a number")),
    }
}

fn numbers(raw: &str, what: &str) -> CliResult<Vec<f64>> {
    raw.split(',').map(|x| number(x, what)).collect()
}

fn integers<T: FromStr>(raw: &str, what: &str) -> CliResult<Vec<T>> {
    raw.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| CliError(format!("{what}: {x:?} is not a non-negative integer")))
        })
        .collect()
}

fn non_negative(v: f64, what: &str) -> CliResult<f64> {
    if v < 0.0 {
        return usage(format!("{what} must be non-negative, got {v}"));
    }
    Ok(v)
}

fn labels(a: &PureProfile) -> String {
    a.labels()
        .iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn verify(args: &VerifyArgs) -> CliResult<bool> {
    let eps = non_negative(number(&args.epsilon, "--epsilon")?, "--epsilon")?;
    let concept = args.concept.as_deref().map(Concept::from_str).transpose()?;
    let format = format_for(&args.output, Format::Json, true)?;
    let game = load_game(&args.game)?;
    let profile = load_profile(&args.profile, game.players(), game.actions())?;
    let concept = concept.unwrap_or(match profile {
        StrategyProfile::Pure(_) => Concept::Pne,
        StrategyProfile::Mixed(_) => Concept::Ane,
        StrategyProfile::Correlated(_) => Concept::Ace,
    });
    let (holds, report) = is_equilibrium(game.as_ref(), &profile, eps, concept)?;
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&json!({
            "concept": concept,
            "epsilon": eps,
            "holds": holds,
            "max_regret": report.max_regret(),
            "per_player_regret": report.per_player_regret,
            "witnesses": report.witnesses,
        }))?,
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                player: usize,
                regret: f64,
                witness: String,
            }
            let rows: Vec<Row> = report
                .per_player_regret
                .iter()
                .zip(&report.witnesses)
                .enumerate()
                .map(|(i, (r, w))| Row {
                    player: i + 1,
                    regret: *r,
                    witness: serde_json::to_string(w).unwrap_or_default(),
                })
                .collect();
            csv_string(&rows)?
        }
    };
    write_output(args.output.out.as_deref(), text)?;
    Ok(holds)
}

#[derive(Serialize)]
struct AdversaryRow<'a> {
    algorithm: &'a str,
    n: usize,
    k: usize,
    m: usize,
    alpha: f64,
    scale: f64,
    q: u64,
    epsilon: f64,
    bound_q: f64,
    regret_achieved: f64,
    verdict: &'static str,
}

pub fn adversary(args: &AdversaryArgs) -> CliResult<bool> {
    let format = format_for(&args.output, Format::Json, true)?;
    let alpha = number(&args.alpha, "--alpha")?;
    let scale = number(&args.lambda, "--lambda")?;
    let ks: Vec<usize> = integers(&args.k, "--k")?;
    let mut algorithms = Vec::new();
    for name in args.algorithm.split(',') {
        let mut alg: Baseline = name.trim().parse()?;
        if let Baseline::RandomSampler { seed, .. } = &mut alg {
            if name.split(':').count() < 3 {
                *seed = args.seed;
            }
        }
        algorithms.push(alg);
    }
    let mut jobs = Vec::new();
    for &k in &ks {
        let config = AdversaryConfig::new(k, args.m, alpha)?.with_scale(scale)?;
        for alg in &algorithms {
            jobs.push((alg.clone(), config));
        }
    }
    let outcomes = jobs
        .into_par_iter()
        .map(|(mut alg, config)| run_deterministic_adversary(&mut alg, &config))
        .collect::<Result<Vec<AdversaryOutcome>, _>>()?;
    for o in &outcomes {
        eprintln!(
            "{} k={} m={}: q={} bound_q={:.4} regret={:.6} eps={:.6} -> {}",
            o.algorithm,
            o.config.k,
            o.config.m,
            o.q,
            o.bound_q,
            o.regret_achieved,
            o.epsilon,
            o.verdict.name()
        );
    }
    let text = match format {
        Format::Json if outcomes.len() == 1 => outcomes[0].to_json(),
        Format::Json => serde_json::to_string_pretty(&outcomes)?,
        Format::Csv => {
            let rows: Vec<AdversaryRow> = outcomes
                .iter()
                .map(|o| AdversaryRow {
                    algorithm: &o.algorithm,
                    n: o.n,
                    k: o.config.k,
                    m: o.config.m,
                    alpha: o.config.alpha,
                    scale: o.config.scale,
                    q: o.q,
                    epsilon: o.epsilon,
                    bound_q: o.bound_q,
                    regret_achieved: o.regret_achieved,
                    verdict: o.verdict.name(),
                })
                .collect();
            csv_string(&rows)?
        }
    };
    write_output(args.output.out.as_deref(), text)?;
    Ok(outcomes.iter().all(|o| o.verdict.passed()))
}

#[derive(Serialize)]
struct RegionRow {
    alpha: f64,
    epsilon: f64,
    level: f64,
    max: Option<f64>,
    min: Option<f64>,
    support: usize,
}

#[derive(Serialize)]
struct RegionSummary {
    alpha: f64,
    epsilon: f64,
    max_probability: f64,
    rho: Option<f64>,
    below_rho: Option<bool>,
}

pub fn region(args: &RegionArgs) -> CliResult<bool> {
    let format = format_for(&args.output, Format::Csv, true)?;
    if args.k != 1 {
        return usage("region traces are for two players (--k 1)");
    }
    if args.grid < 2 {
        return usage("--grid needs at least 2 levels");
    }
    let m = args.m;
    let game = MatchingPennies::new(1, m)?;
    let top = (m as f64 - 1.0) / m as f64;
    let alphas = numbers(&args.alpha, "--alpha")?;
    for &alpha in &alphas {
        if !(alpha > 0.0 && alpha <= top + TOL) {
            return usage(format!("alpha {alpha} outside (0, {top}]"));
        }
    }
    let levels: Vec<f64> = (0..args.grid)
        .map(|i| i as f64 / (args.grid - 1) as f64)
        .collect();
    let target = PureProfile::new(vec![0, 0]);
    let fixed = PureProfile::new(vec![m - 1, m - 1]);
    let traced = alphas
        .par_iter()
        .map(|&alpha| {
            let eps = target_epsilon(alpha, m).max(0.0);
            let trace = region_trace(&game, eps, &target, &fixed, &levels)?;
            let best = max_profile_prob_ace(&game, eps, &target)?;
            Ok((alpha, eps, trace, best.value))
        })
        .collect::<Result<Vec<_>, liplab::Error>>()?;
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for (alpha, eps, trace, best) in traced {
        let cap = rho(alpha, m).ok();
        let summary = RegionSummary {
            alpha,
            epsilon: eps,
            max_probability: best,
            rho: cap,
            below_rho: cap.map(|r| best < r),
        };
        eprintln!(
            "alpha={alpha:.6} eps={eps:.6}: max Pr(1,1) = {best:.9}{}",
            cap.map(|r| format!(" (rho = {r:.9})")).unwrap_or_default()
        );
        summaries.push(summary);
        rows.extend(trace.into_iter().map(|p| RegionRow {
            alpha,
            epsilon: eps,
            level: p.level,
            max: p.max,
            min: p.min,
            support: p.support,
        }));
    }
    let holds = summaries.iter().all(|s| s.below_rho != Some(false));
    let text = match format {
        Format::Csv => csv_string(&rows)?,
        Format::Json => serde_json::to_string_pretty(&json!({
            "m": m,
            "summaries": summaries,
            "trace": rows,
        }))?,
    };
    write_output(args.output.out.as_deref(), text)?;
    Ok(holds)
}

/// Queries every profile in lexicographic order and returns nothing.
struct ExhaustiveScan;

impl QueryAlgorithm for ExhaustiveScan {
    type Output = ();

    fn name(&self) -> String {
        "exhaustive-scan".into()
    }

    fn run(&mut self, oracle: &mut dyn ProfileOracle) -> liplab::Result<()> {
        let mut a = vec![0; oracle.players()];
        loop {
            oracle.query(&PureProfile::new(a.clone()))?;
            if !next_profile(&mut a, oracle.actions()) {
                return Ok(());
            }
        }
    }
}

/// Counts calls on the way to another backend.
struct Counting<B> {
    inner: B,
    calls: u64,
}

impl<B: DistributionBackend> DistributionBackend for Counting<B> {
    fn query(
        &mut self,
        ledger: &mut QueryLedger,
        game: &dyn Game,
        p: &MixedProfile,
        spec: &DistQuerySpec,
    ) -> liplab::Result<Vec<f64>> {
        self.calls += 1;
        self.inner.query(ledger, game, p, spec)
    }
}

/// Largest population the reduction command will enumerate.
const MAX_REDUCE_PLAYERS: usize = 16;

pub fn reduce(args: &ReduceArgs) -> CliResult<bool> {
    format_for(&args.output, Format::Json, false)?;
    let eps = non_negative(number(&args.epsilon, "--epsilon")?, "--epsilon")?;
    let delta = non_negative(number(&args.delta, "--delta")?, "--delta")?;
    let eta = number(&args.eta, "--eta")?;
    let gamma = args.gamma.as_deref().map(|g| number(g, "--gamma")).transpose()?;
    DistQuerySpec::new(delta, gamma.unwrap_or(0.5), eta)?;
    if args.lambda.is_some() && args.sizes.is_some() {
        return usage("give either --sizes or --lambda, not both");
    }
    let lambdas = args.lambda.as_deref().map(|l| numbers(l, "--lambda")).transpose()?;
    let sizes_flag: Option<Vec<usize>> = args.sizes.as_deref().map(|s| integers(s, "--sizes")).transpose()?;
    if let (Some(total), Some(ls)) = (&args.total_lambda, &lambdas) {
        let total = number(total, "--Lambda")?;
        let sum: f64 = ls.iter().sum();
        if (total - sum).abs() > 1e-9 {
            return usage(format!("--Lambda {total} differs from the sum of --lambda ({sum})"));
        }
    }
    let file_game = args.game.as_deref().map(load_game).transpose()?;

    let mut report = serde_json::Map::new();
    let mut holds = true;
    let (base, sizes): (GameRef, Vec<usize>) = match lambdas {
        Some(ls) => {
            let sizes = multi_lipschitz_population_sizes(&ls)?;
            let n = ls.len();
            let total: f64 = ls.iter().sum();
            let base: GameRef = match file_game {
                Some(g) if g.players() != n => {
                    return usage(format!("--lambda has {n} entries for a {}-player game", g.players()))
                }
                Some(g) => g,
                None => Arc::new(random_multi_lipschitz_game(&ls, 2, &mut derived_rng(args.seed, 0))?),
            };
            let sum: usize = sizes.iter().sum();
            let within_budget = sum <= 3 * n;
            holds &= within_budget;
            report.insert(
                "multi_lipschitz".into(),
                json!({
                    "lambdas": ls,
                    "Lambda": total,
                    "sizes": sizes,
                    "total_players": sum,
                    "size_bound": 3 * n,
                    "within_bound": within_budget,
                    "trivial_regime": trivial_regime(total, eps, n),
                }),
            );
            if trivial_regime(total, eps, n) && base.actions() == 2 {
                let mut ledger = QueryLedger::new();
                let spec = DistQuerySpec::adversarial(0.0)?;
                let mut backend = AdversarialBackend(NamedAdversary::Zero);
                let a = best_response_to_uniform(&mut ledger, base.as_ref(), &spec, &mut backend)?;
                let regret = regret_mixed(base.as_ref(), &a.to_mixed(2))?.max_regret();
                holds &= regret <= eps + TOL;
                report.insert(
                    "best_response_to_uniform".into(),
                    json!({
                        "profile": a,
                        "distribution_queries": ledger.dist_count(),
                        "regret": regret,
                        "is_ane": regret <= eps + TOL,
                    }),
                );
            }
            (base, sizes)
        }
        None => {
            let base = match file_game {
                Some(g) => g,
                None => Arc::new(MatchingPennies::new(1, 2)?),
            };
            let sizes = sizes_flag.unwrap_or_else(|| vec![2; base.players()]);
            (base, sizes)
        }
    };
    let pop = induce_population_game(base.clone(), sizes.clone())?;
    let (n, m, big_n) = (base.players(), base.actions(), pop.players());
    if big_n > MAX_REDUCE_PLAYERS {
        return usage(format!(
            "population game has {big_n} players; at most {MAX_REDUCE_PLAYERS} can be enumerated"
        ));
    }
    liplab::game::check_enumerable(big_n, m)?;
    let gamma = gamma.unwrap_or(1.0 / m as f64);
    let gamma_ok = 1.0 / m as f64 >= gamma - TOL;
    if !gamma_ok {
        return usage(format!("--gamma {gamma} exceeds 1/m; the uniform query profile breaks the promise"));
    }

    if let Some(ls) = report.get_mut("multi_lipschitz") {
        let total: f64 = ls["Lambda"].as_f64().unwrap_or(0.0);
        let measured = measure_lipschitz(&pop)?;
        let ok = measured <= total / n as f64 + 1e-12;
        holds &= ok;
        ls["induced_lipschitz"] = json!(measured);
        ls["induced_bound"] = json!(total / n as f64);
    }

    // one population query, answered through n*m base queries
    let spec = DistQuerySpec::new(delta, gamma, eta)?;
    let uniform = MixedProfile::uniform(big_n, m);
    let mut base_ledger = QueryLedger::new();
    let (answer, base_calls) = if delta > 0.0 {
        let mut backend = Counting {
            inner: SamplingBackend(derived_rng(args.seed, 1)),
            calls: 0,
        };
        let u = simulate_population_distribution_query(&mut base_ledger, &pop, &uniform, &spec, &mut backend)?;
        (u, backend.calls)
    } else {
        let mut backend = Counting {
            inner: AdversarialBackend(NamedAdversary::Zero),
            calls: 0,
        };
        let u = simulate_population_distribution_query(&mut base_ledger, &pop, &uniform, &spec, &mut backend)?;
        (u, backend.calls)
    };
    let truth = expected_payoff_vector(&pop, &uniform)?;
    let error = answer
        .iter()
        .zip(&truth)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let largest = *sizes.iter().max().unwrap_or(&1) as f64;
    let per_query_samples = if delta > 0.0 {
        Some(sample_count(n, &spec.with_gamma(gamma / largest)?)?)
    } else {
        None
    };
    let accounting = base_calls == (n * m) as u64
        && per_query_samples.map_or(true, |t| base_ledger.profile_count() == t * (n * m) as u64);
    holds &= accounting;
    report.insert(
        "accounting".into(),
        json!({
            "population_queries": 1,
            "base_distribution_queries": base_calls,
            "expected_base_queries": n * m,
            "samples_per_base_query": per_query_samples,
            "base_profile_queries": base_ledger.profile_count(),
            "max_answer_error": error,
            "identity_holds": accounting,
        }),
    );

    let equilibria = all_pure_equilibria(&pop, eps)?;
    let transfer = transfer_report(&pop, &base, &equilibria, eps)?;
    holds &= transfer.0;
    report.insert("transfer".into(), transfer.1);

    if delta > 0.0 {
        let mut wrapped = wrap_profile_algorithm_as_distribution(ExhaustiveScan, NamedAdversary::Truncation, delta)?;
        let mut ledger = QueryLedger::new();
        let run = wrapped.run(&pop, &mut ledger)?;
        let pop_ref: GameRef = Arc::new(pop.clone());
        let consistent = build_consistent_game(pop_ref, &run.view, delta)?;
        let half = all_pure_equilibria(&consistent, eps / 2.0)?;
        let guaranteed = consistent.transfers_equilibria(eps);
        let mut all_pne = true;
        for a in &half {
            all_pne &= regret_pure(&pop, a)?.within(eps);
        }
        let (aggregated, detail) = transfer_report(&pop, &base, &half, eps)?;
        if guaranteed {
            holds &= all_pne && aggregated;
        }
        report.insert(
            "consistent_game".into(),
            json!({
                "delta": delta,
                "distribution_queries": ledger.dist_count(),
                "max_envelope": consistent.max_envelope(),
                "half_eps_equilibria": half.len(),
                "guaranteed": guaranteed,
                "all_eps_pne_of_population_game": all_pne,
                "aggregates": detail,
            }),
        );
    }

    report.insert("sizes".into(), json!(sizes));
    report.insert("epsilon".into(), json!(eps));
    report.insert("holds".into(), json!(holds));
    let text = serde_json::to_string_pretty(&serde_json::Value::Object(report))?;
    write_output(args.output.out.as_deref(), text)?;
    Ok(holds)
}

fn transfer_report(
    pop: &PopulationGame,
    base: &GameRef,
    equilibria: &[PureProfile],
    eps: f64,
) -> CliResult<(bool, serde_json::Value)> {
    let mut worst = 0.0f64;
    let mut all = true;
    for a in equilibria {
        let aggregate = aggregate_profile(pop, a)?;
        let r = regret_wsne(base.as_ref(), &aggregate)?;
        worst = worst.max(r.max_regret());
        all &= r.within(eps);
    }
    Ok((
        all,
        json!({
            "equilibria": equilibria.len(),
            "all_aggregates_wsne": all,
            "worst_wsne_regret": worst,
            "first": equilibria.first().map(labels),
        }),
    ))
}

#[derive(Serialize)]
struct ExistenceRow {
    seed: u64,
    trial: u64,
    min_epsilon: f64,
    found: bool,
    profile: String,
}

/// Largest player count the existence scan accepts.
const MAX_EXISTENCE_PLAYERS: usize = 12;

pub fn existence(args: &ExistenceArgs) -> CliResult<bool> {
    let format = format_for(&args.output, Format::Json, true)?;
    if args.n == 0 || args.n > MAX_EXISTENCE_PLAYERS {
        return usage(format!("--n must be in 1..={MAX_EXISTENCE_PLAYERS}"));
    }
    let eps = non_negative(number(&args.epsilon, "--epsilon")?, "--epsilon")?;
    let lambda = match &args.lambda {
        Some(l) => number(l, "--lambda")?,
        None => existence_lambda(args.n, eps),
    };
    if !(0.0..=1.0).contains(&lambda) {
        return usage(format!("--lambda {lambda} outside [0, 1]"));
    }
    let records = existence_scan(args.n, eps, lambda, args.seed, args.trials)?;
    let found = records.iter().filter(|r| r.found).count();
    eprintln!("{found}/{} instances have an eps-PNE", records.len());
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&json!({
            "n": args.n,
            "epsilon": eps,
            "lambda": lambda,
            "threshold_lambda": existence_lambda(args.n, eps),
            "threshold_lambda_2mn": existence_lambda_general(args.n, 2, eps),
            "seed": args.seed,
            "trials": args.trials,
            "found": found,
            "fraction": if records.is_empty() { 1.0 } else { found as f64 / records.len() as f64 },
            "records": records,
        }))?,
        Format::Csv => {
            let rows: Vec<ExistenceRow> = records
                .iter()
                .map(|r| ExistenceRow {
                    seed: args.seed,
                    trial: r.trial,
                    min_epsilon: r.min_epsilon,
                    found: r.found,
                    profile: labels(&r.profile),
                })
                .collect();
            csv_string(&rows)?
        }
    };
    write_output(args.output.out.as_deref(), text)?;
    Ok(found == records.len())
}
