use crate::error::Result;
use crate::game::{check_enumerable, for_each_profile, profile_from_index, Game, PureProfile};
use crate::query::QueryLedger;
use crate::TOL;

/// Every payoff of a game, row-major by profile, with the per-profile
/// maximum regret.
struct RegretTable {
    n: usize,
    m: usize,
    regrets: Vec<f64>,
}

impl RegretTable {
    fn from_payoffs(n: usize, m: usize, payoffs: &[f64]) -> Self {
        let strides: Vec<usize> = (0..n).map(|t| m.pow((n - 1 - t) as u32)).collect();
        let size = payoffs.len() / n;
        let mut regrets = Vec::with_capacity(size);
        let mut idx = 0;
        for_each_profile(n, m, |a| {
            let mut worst = 0.0f64;
            for i in 0..n {
                let own = payoffs[idx * n + i];
                let row = idx - a[i] * strides[i];
                for j in 0..m {
                    let gain = payoffs[(row + j * strides[i]) * n + i] - own;
                    worst = worst.max(gain);
                }
            }
            regrets.push(worst);
            idx += 1;
        });
        RegretTable { n, m, regrets }
    }

    fn build(game: &dyn Game) -> Result<Self> {
        let (n, m) = (game.players(), game.actions());
        let size = check_enumerable(n, m)?;
        let mut payoffs = Vec::with_capacity(size * n);
        for_each_profile(n, m, |a| payoffs.extend(game.payoffs(a)));
        Ok(Self::from_payoffs(n, m, &payoffs))
    }

    fn profile(&self, idx: usize) -> PureProfile {
        PureProfile::new(profile_from_index(idx, self.n, self.m))
    }

    fn first_within(&self, eps: f64) -> Option<PureProfile> {
        self.regrets
            .iter()
            .position(|&r| r <= eps + TOL)
            .map(|idx| self.profile(idx))
    }
}

/// The lexicographically first eps-PNE, if any. Charges nothing.
pub fn brute_force_pure(game: &dyn Game, eps: f64) -> Result<Option<PureProfile>> {
    Ok(RegretTable::build(game)?.first_within(eps))
}

/// Every eps-PNE in lexicographic order.
pub fn all_pure_equilibria(game: &dyn Game, eps: f64) -> Result<Vec<PureProfile>> {
    let table = RegretTable::build(game)?;
    Ok(table
        .regrets
        .iter()
        .enumerate()
        .filter(|(_, &r)| r <= eps + TOL)
        .map(|(idx, _)| table.profile(idx))
        .collect())
}

/// Smallest eps at which the game has an eps-PNE, and the first profile
/// attaining it.
pub fn min_pure_regret(game: &dyn Game) -> Result<(f64, PureProfile)> {
    let table = RegretTable::build(game)?;
    let (idx, &best) = table
        .regrets
        .iter()
        .enumerate()
        .fold(None, |acc: Option<(usize, &f64)>, (i, r)| match acc {
            Some((_, b)) if b <= r => acc,
            _ => Some((i, r)),
        })
        .expect("at least one profile");
    Ok((best, table.profile(idx)))
}

/// Same search as [`brute_force_pure`], but every payoff is read through
/// profile queries charged to `ledger` (`m^n` of them).
pub fn brute_force_pure_charged(
    ledger: &mut QueryLedger,
    game: &dyn Game,
    eps: f64,
) -> Result<Option<PureProfile>> {
    let (n, m) = (game.players(), game.actions());
    let size = check_enumerable(n, m)?;
    ledger.reserve_profiles(size as u64)?;
    let mut payoffs = Vec::with_capacity(size * n);
    for idx in 0..size {
        let a = PureProfile::new(profile_from_index(idx, n, m));
        payoffs.extend(ledger.query_profile(game, &a)?);
    }
    Ok(RegretTable::from_payoffs(n, m, &payoffs).first_within(eps))
}
