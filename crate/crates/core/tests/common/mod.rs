//! Brute-force reference computations shared by the integration tests.
//!
//! Everything here is written from the definitions, with no shortcuts and
//! none of the library's evaluation helpers, so the library can be checked
//! against it.
#![allow(dead_code)]

use liplab::Game;

pub fn all_profiles(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..m).map(move |j| {
                    let mut q = p.clone();
                    q.push(j);
                    q
                })
            })
            .collect();
    }
    out
}

fn product_prob(dists: &[Vec<f64>], a: &[usize], skip: Option<usize>) -> f64 {
    a.iter()
        .enumerate()
        .filter(|(t, _)| Some(*t) != skip)
        .map(|(t, &j)| dists[t][j])
        .product()
}

/// `u_i(j, p_{-i})`, or `u_i(p)` when `j` is `None`.
pub fn expected(game: &dyn Game, dists: &[Vec<f64>], i: usize, j: Option<usize>) -> f64 {
    let (n, m) = (game.players(), game.actions());
    let mut total = 0.0;
    for a in all_profiles(n, m) {
        match j {
            Some(j) if a[i] != j => continue,
            Some(_) => total += product_prob(dists, &a, Some(i)) * game.payoff(i, &a),
            None => total += product_prob(dists, &a, None) * game.payoff(i, &a),
        }
    }
    total
}

pub fn uniform(n: usize, m: usize) -> Vec<Vec<f64>> {
    vec![vec![1.0 / m as f64; m]; n]
}

pub fn pure_regrets(game: &dyn Game, a: &[usize]) -> Vec<f64> {
    (0..game.players())
        .map(|i| {
            let own = game.payoff(i, a);
            (0..game.actions())
                .map(|j| {
                    let mut b = a.to_vec();
                    b[i] = j;
                    game.payoff(i, &b) - own
                })
                .fold(0.0, f64::max)
        })
        .collect()
}

pub fn mixed_regrets(game: &dyn Game, dists: &[Vec<f64>]) -> Vec<f64> {
    (0..game.players())
        .map(|i| {
            let now = expected(game, dists, i, None);
            (0..game.actions())
                .map(|j| expected(game, dists, i, Some(j)) - now)
                .fold(0.0, f64::max)
        })
        .collect()
}

/// Worst regret of any supported action against its best alternative.
pub fn wsne_regrets(game: &dyn Game, dists: &[Vec<f64>]) -> Vec<f64> {
    (0..game.players())
        .map(|i| {
            let values: Vec<f64> = (0..game.actions())
                .map(|j| expected(game, dists, i, Some(j)))
                .collect();
            let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (0..game.actions())
                .filter(|&j| dists[i][j] > 0.0)
                .map(|j| best - values[j])
                .fold(0.0, f64::max)
        })
        .collect()
}

/// Swap regret of player `i` as the maximum over every map `[m] -> [m]`.
pub fn swap_regret_brute(game: &dyn Game, x: &[(Vec<usize>, f64)], i: usize) -> f64 {
    let m = game.actions();
    let mut best = f64::NEG_INFINITY;
    for phi in all_profiles(m, m) {
        let mut gain = 0.0;
        for (a, p) in x {
            let mut b = a.clone();
            b[i] = phi[a[i]];
            gain += p * (game.payoff(i, &b) - game.payoff(i, a));
        }
        best = best.max(gain);
    }
    best
}

/// Largest change in anyone's payoff caused by another player's unilateral
/// deviation.
pub fn lipschitz(game: &dyn Game) -> f64 {
    let (n, m) = (game.players(), game.actions());
    let mut worst = 0.0f64;
    for a in all_profiles(n, m) {
        for t in 0..n {
            for j in 0..m {
                let mut b = a.clone();
                b[t] = j;
                for i in (0..n).filter(|&i| i != t) {
                    worst = worst.max((game.payoff(i, &a) - game.payoff(i, &b)).abs());
                }
            }
        }
    }
    worst
}

/// Per-deviator influence, as in the multi-parameter Lipschitz condition.
pub fn influence(game: &dyn Game) -> Vec<f64> {
    let (n, m) = (game.players(), game.actions());
    let mut out = vec![0.0f64; n];
    for a in all_profiles(n, m) {
        for t in 0..n {
            for j in 0..m {
                let mut b = a.clone();
                b[t] = j;
                for i in (0..n).filter(|&i| i != t) {
                    out[t] = out[t].max((game.payoff(i, &a) - game.payoff(i, &b)).abs());
                }
            }
        }
    }
    out
}

/// Empirical action frequencies of consecutive blocks of players.
pub fn block_frequencies(a: &[usize], sizes: &[usize], m: usize) -> Vec<Vec<f64>> {
    let mut start = 0;
    sizes
        .iter()
        .map(|&l| {
            let mut row = vec![0.0; m];
            for &j in &a[start..start + l] {
                row[j] += 1.0 / l as f64;
            }
            start += l;
            row
        })
        .collect()
}

/// Matching Pennies payoffs straight from the tables: the even player of a
/// pair wants to match, the odd player to mismatch.
pub fn matching_pennies_payoff(i: usize, a: &[usize]) -> f64 {
    let partner = i ^ 1;
    let matched = a[i] == a[partner];
    if (i % 2 == 0) == matched {
        1.0
    } else {
        0.0
    }
}
