use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{next_profile, CorrelatedDistribution, PureProfile};
use crate::query::{ProfileOracle, QueryAlgorithm};

/// Shipped query algorithms that output a correlated distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Baseline {
    /// No queries; uniform over all profiles.
    UniformOutput,
    /// No queries; all mass on the all-first-action profile.
    PointMass,
    /// No queries; uniform over the `m` profiles where everybody plays the
    /// same action.
    Diagonal,
    /// Queries the first `probes` profiles in lexicographic order, then
    /// outputs the uniform distribution anyway.
    ProbeThenUniform { probes: u64 },
    /// Queries profiles in lexicographic order (at most `budget`) and
    /// outputs the uniform distribution over those with the largest total
    /// payoff.
    ScanThenEmpirical { budget: u64 },
    /// Queries `queries` profiles drawn from a seeded generator and outputs
    /// their empirical distribution. Deterministic for a fixed seed.
    RandomSampler { queries: u64, seed: u64 },
}

impl Baseline {
    /// The zero-query baselines.
    pub fn zero_query() -> Vec<Baseline> {
        vec![Baseline::UniformOutput, Baseline::PointMass, Baseline::Diagonal]
    }

    fn scan(oracle: &mut dyn ProfileOracle, limit: u64) -> Result<Vec<(PureProfile, f64)>> {
        let mut a = vec![0; oracle.players()];
        let mut seen = Vec::new();
        for _ in 0..limit {
            let p = PureProfile::new(a.clone());
            let total = oracle.query(&p)?.iter().sum();
            seen.push((p, total));
            if !next_profile(&mut a, oracle.actions()) {
                break;
            }
        }
        Ok(seen)
    }
}

impl QueryAlgorithm for Baseline {
    type Output = CorrelatedDistribution;

    fn name(&self) -> String {
        self.to_string()
    }

    fn run(&mut self, oracle: &mut dyn ProfileOracle) -> Result<CorrelatedDistribution> {
        let (n, m) = (oracle.players(), oracle.actions());
        match *self {
            Baseline::UniformOutput => CorrelatedDistribution::uniform(n, m),
            Baseline::PointMass => Ok(CorrelatedDistribution::point_mass(PureProfile::new(vec![0; n]))),
            Baseline::Diagonal => CorrelatedDistribution::from_weights(
                (0..m).map(|j| (PureProfile::new(vec![j; n]), 1.0)),
            ),
            Baseline::ProbeThenUniform { probes } => {
                Self::scan(oracle, probes)?;
                CorrelatedDistribution::uniform(n, m)
            }
            Baseline::ScanThenEmpirical { budget } => {
                let seen = Self::scan(oracle, budget)?;
                let best = seen.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
                if seen.is_empty() {
                    return CorrelatedDistribution::uniform(n, m);
                }
                CorrelatedDistribution::from_weights(
                    seen.into_iter()
                        .filter(|s| s.1 >= best - crate::TOL)
                        .map(|s| (s.0, 1.0)),
                )
            }
            Baseline::RandomSampler { queries, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut drawn = Vec::with_capacity(queries as usize);
                for _ in 0..queries {
                    let a = PureProfile::new((0..n).map(|_| rng.gen_range(0..m)).collect());
                    oracle.query(&a)?;
                    drawn.push((a, 1.0));
                }
                if drawn.is_empty() {
                    return CorrelatedDistribution::uniform(n, m);
                }
                CorrelatedDistribution::from_weights(drawn)
            }
        }
    }
}

impl fmt::Display for Baseline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Baseline::UniformOutput => write!(f, "uniform-output"),
            Baseline::PointMass => write!(f, "point-mass"),
            Baseline::Diagonal => write!(f, "diagonal"),
            Baseline::ProbeThenUniform { probes } => write!(f, "probe-then-uniform:{probes}"),
            Baseline::ScanThenEmpirical { budget: u64::MAX } => write!(f, "scan-then-empirical"),
            Baseline::ScanThenEmpirical { budget } => write!(f, "scan-then-empirical:{budget}"),
            Baseline::RandomSampler { queries, seed } => write!(f, "random-sampler:{queries}:{seed}"),
        }
    }
}

/// Parses `name[:param[:param]]`, e.g. `uniform-output`,
/// `scan-then-empirical:64` or `random-sampler:8:42`. Parameters default to
/// 16 queries and seed 0.
impl FromStr for Baseline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let name = parts.next().unwrap_or_default();
        let mut number = |default: u64| -> Result<u64> {
            match parts.next() {
                None => Ok(default),
                Some(x) => x
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad parameter {x:?} in algorithm {s:?}"))),
            }
        };
        let parsed = match name {
            "uniform-output" => Baseline::UniformOutput,
            "point-mass" => Baseline::PointMass,
            "diagonal" => Baseline::Diagonal,
            "probe-then-uniform" => Baseline::ProbeThenUniform { probes: number(16)? },
            "scan-then-empirical" => Baseline::ScanThenEmpirical { budget: number(u64::MAX)? },
            "random-sampler" => {
                let queries = number(16)?;
                Baseline::RandomSampler { queries, seed: number(0)? }
            }
            other => return Err(Error::Parse(format!("unknown algorithm {other:?}"))),
        };
        if parts.next().is_some() {
            return Err(Error::Parse(format!("too many parameters in algorithm {s:?}")));
        }
        Ok(parsed)
    }
}
