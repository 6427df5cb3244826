use num_rational::BigRational;

use super::lp::{solve_lp_with, Arithmetic, Constraint, LinearProgram, Relation};
use crate::error::{Error, Result};
use crate::game::{
    check_enumerable_with, for_each_profile, profile_index, regret_correlated, CorrelatedDistribution, Game,
    PureProfile, RegretReport,
};

/// Largest number of profiles the correlated-equilibrium LP accepts.
pub const ACE_PROFILE_LIMIT: u64 = 1 << 12;

/// Slack allowed when rechecking an LP witness from scratch.
pub const WITNESS_TOL: f64 = 1e-9;

/// The eps-ACE polytope of a game in epigraph form.
///
/// Variables are `X(a)` for every profile `a` in lexicographic order,
/// followed by `t_ij` for every player `i` and action `j`. For each
/// recommended action `j` and alternative `j'`, `t_ij` bounds the gain of
/// switching `j -> j'`; the `t_ij` of each player sum to at most `eps`.
#[derive(Debug, Clone)]
pub struct AcePolytope {
    pub lp: LinearProgram,
    pub players: usize,
    pub actions: usize,
    pub profiles: usize,
}

impl AcePolytope {
    pub fn new(game: &dyn Game, eps: f64) -> Result<Self> {
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(Error::InvalidParameter(format!("epsilon {eps} must be non-negative")));
        }
        Self::build(game, 1.0, eps)
    }

    /// The polytope for `eps = num / den`, written as `den * sum_j t_ij <= num`
    /// so that exact arithmetic sees the exact fraction.
    pub fn with_fraction(game: &dyn Game, num: u32, den: u32) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        Self::build(game, den as f64, num as f64)
    }

    fn build(game: &dyn Game, scale: f64, bound: f64) -> Result<Self> {
        let (n, m) = (game.players(), game.actions());
        let profiles = check_enumerable_with(n, m, ACE_PROFILE_LIMIT)?;
        let t = |i: usize, j: usize| profiles + i * m + j;
        let mut lp = LinearProgram::new(profiles + n * m);
        let mut gains: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n * m * m];
        let mut idx = 0;
        for_each_profile(n, m, |a| {
            let mut dev = a.to_vec();
            for i in 0..n {
                let base = game.payoff(i, a);
                for alt in 0..m {
                    if alt == a[i] {
                        continue;
                    }
                    dev[i] = alt;
                    let g = game.payoff(i, &dev) - base;
                    if g != 0.0 {
                        gains[(i * m + a[i]) * m + alt].push((idx, g));
                    }
                }
                dev[i] = a[i];
            }
            idx += 1;
        });
        for i in 0..n {
            for j in 0..m {
                for alt in (0..m).filter(|&alt| alt != j) {
                    let mut coeffs = std::mem::take(&mut gains[(i * m + j) * m + alt]);
                    coeffs.push((t(i, j), -1.0));
                    lp.push(Constraint::new(coeffs, Relation::Le, 0.0));
                }
            }
            let budget = (0..m).map(|j| (t(i, j), scale)).collect();
            lp.push(Constraint::new(budget, Relation::Le, bound));
        }
        lp.push(Constraint::new((0..profiles).map(|v| (v, 1.0)).collect(), Relation::Eq, 1.0));
        Ok(AcePolytope {
            lp,
            players: n,
            actions: m,
            profiles,
        })
    }

    fn variable(&self, a: &PureProfile) -> Result<usize> {
        a.validate(self.players, self.actions)?;
        Ok(profile_index(a.actions(), self.actions))
    }

    /// Pin `Pr(a) = value`.
    pub fn fix_probability(&mut self, a: &PureProfile, value: f64) -> Result<()> {
        let v = self.variable(a)?;
        self.lp.push(Constraint::new(vec![(v, 1.0)], Relation::Eq, value));
        Ok(())
    }

    fn distribution(&self, x: &[f64]) -> Result<CorrelatedDistribution> {
        let n = self.players;
        let m = self.actions;
        CorrelatedDistribution::from_weights(
            x[..self.profiles]
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0.0)
                .map(|(v, &p)| (PureProfile::new(crate::game::profile_from_index(v, n, m)), p)),
        )
    }
}

/// Optimum of a profile-probability LP with its certified witness.
#[derive(Debug, Clone)]
pub struct AceOptimum {
    pub value: f64,
    pub exact_value: Option<BigRational>,
    pub witness: CorrelatedDistribution,
    /// Regret of the witness, recomputed without the LP.
    pub witness_regret: RegretReport,
}

fn optimize(
    game: &dyn Game,
    eps: f64,
    polytope: &AcePolytope,
    target: &PureProfile,
    sign: f64,
    arithmetic: Arithmetic,
) -> Result<AceOptimum> {
    let v = polytope.variable(target)?;
    let mut lp = polytope.lp.clone();
    lp.objective[v] = sign;
    let solution = solve_lp_with(&lp, arithmetic)?;
    let witness = polytope.distribution(&solution.x)?;
    let witness_regret = regret_correlated(game, &witness)?;
    if !witness_regret.within(eps + WITNESS_TOL) {
        return Err(Error::Precondition(format!(
            "LP witness has regret {} above {eps}",
            witness_regret.max_regret()
        )));
    }
    Ok(AceOptimum {
        value: sign * solution.value,
        exact_value: solution.exact_value.map(|q| if sign < 0.0 { -q } else { q }),
        witness,
        witness_regret,
    })
}

/// Largest probability any eps-ACE puts on `target`.
pub fn max_profile_prob_ace(game: &dyn Game, eps: f64, target: &PureProfile) -> Result<AceOptimum> {
    max_profile_prob_ace_with(game, eps, target, Arithmetic::Auto)
}

pub fn max_profile_prob_ace_with(
    game: &dyn Game,
    eps: f64,
    target: &PureProfile,
    arithmetic: Arithmetic,
) -> Result<AceOptimum> {
    let polytope = AcePolytope::new(game, eps)?;
    optimize(game, eps, &polytope, target, 1.0, arithmetic)
}

/// [`max_profile_prob_ace`] for `eps = num / den`, solved in exact
/// arithmetic.
pub fn max_profile_prob_ace_fraction(
    game: &dyn Game,
    num: u32,
    den: u32,
    target: &PureProfile,
) -> Result<AceOptimum> {
    let polytope = AcePolytope::with_fraction(game, num, den)?;
    optimize(game, num as f64 / den as f64, &polytope, target, 1.0, Arithmetic::Exact)
}

/// One column of a region sweep: with `Pr(fixed) = level`, the range of
/// `Pr(target)` over the eps-ACE polytope, or `None` if the level is
/// unattainable.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionPoint {
    pub level: f64,
    pub max: Option<f64>,
    pub min: Option<f64>,
    pub support: usize,
}

/// Sweep `Pr(fixed)` over `levels`, maximizing and minimizing `Pr(target)`.
pub fn region_trace(
    game: &dyn Game,
    eps: f64,
    target: &PureProfile,
    fixed: &PureProfile,
    levels: &[f64],
) -> Result<Vec<RegionPoint>> {
    let base = AcePolytope::new(game, eps)?;
    let mut out = Vec::with_capacity(levels.len());
    for &level in levels {
        let mut polytope = base.clone();
        polytope.fix_probability(fixed, level)?;
        let hi = optimize(game, eps, &polytope, target, 1.0, Arithmetic::Auto);
        let lo = optimize(game, eps, &polytope, target, -1.0, Arithmetic::Auto);
        match (hi, lo) {
            (Ok(hi), Ok(lo)) => out.push(RegionPoint {
                level,
                max: Some(hi.value),
                min: Some(lo.value),
                support: hi.witness.support_size(),
            }),
            (Err(Error::Infeasible), _) | (_, Err(Error::Infeasible)) => out.push(RegionPoint {
                level,
                max: None,
                min: None,
                support: 0,
            }),
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    Ok(out)
}
