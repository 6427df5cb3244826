use super::{check_enumerable, for_each_profile, Game};
use crate::error::Result;

/// Largest payoff change any other player suffers when player `t` alone
/// switches action, for every `t`.
///
/// Profiles are compared at Hamming distance one, which is the
/// single-deviation reading of the Lipschitz condition for any `m`.
pub fn measure_influence(game: &dyn Game) -> Result<Vec<f64>> {
    let n = game.players();
    let m = game.actions();
    let size = check_enumerable(n, m)?;
    let mut table = Vec::with_capacity(size * n);
    for_each_profile(n, m, |a| table.extend(game.payoffs(a)));

    let strides: Vec<usize> = (0..n).map(|t| m.pow((n - 1 - t) as u32)).collect();
    let mut influence = vec![0.0f64; n];
    let mut idx = 0usize;
    for_each_profile(n, m, |a| {
        for t in 0..n {
            for b in a[t] + 1..m {
                let other = idx + (b - a[t]) * strides[t];
                for i in (0..n).filter(|&i| i != t) {
                    let diff = (table[idx * n + i] - table[other * n + i]).abs();
                    if diff > influence[t] {
                        influence[t] = diff;
                    }
                }
            }
        }
        idx += 1;
    });
    Ok(influence)
}

/// Smallest `lambda` such that no single opponent deviation moves any
/// player's payoff by more than `lambda`.
pub fn measure_lipschitz(game: &dyn Game) -> Result<f64> {
    Ok(measure_influence(game)?.into_iter().fold(0.0, f64::max))
}
