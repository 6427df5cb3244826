use std::collections::BTreeMap;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use super::{check_enumerable, next_profile};
use crate::error::{Error, Result};
use crate::TOL;

/// One action per player. Serialized with 1-based action labels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PureProfile(Vec<usize>);

impl PureProfile {
    pub fn new(actions: Vec<usize>) -> Self {
        PureProfile(actions)
    }

    /// Build from 1-based action labels.
    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        labels
            .iter()
            .map(|&l| {
                l.checked_sub(1)
                    .ok_or_else(|| Error::InvalidProfile("action labels start at 1".into()))
            })
            .collect::<Result<Vec<_>>>()
            .map(PureProfile)
    }

    pub fn labels(&self) -> Vec<usize> {
        self.0.iter().map(|a| a + 1).collect()
    }

    pub fn actions(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn action(&self, player: usize) -> usize {
        self.0[player]
    }

    pub fn validate(&self, n: usize, m: usize) -> Result<()> {
        if self.0.len() != n {
            return Err(Error::InvalidProfile(format!(
                "profile has {} entries, game has {n} players",
                self.0.len()
            )));
        }
        if let Some((i, &a)) = self.0.iter().enumerate().find(|(_, &a)| a >= m) {
            return Err(Error::InvalidProfile(format!(
                "player {i} plays action index {a}, game has {m} actions"
            )));
        }
        Ok(())
    }

    /// The same profile with `player` switched to `action`.
    pub fn with_action(&self, player: usize, action: usize) -> Self {
        let mut actions = self.0.clone();
        actions[player] = action;
        PureProfile(actions)
    }

    /// Degenerate mixed profile placing all mass on this profile.
    pub fn to_mixed(&self, m: usize) -> MixedProfile {
        let dists = self
            .0
            .iter()
            .map(|&a| {
                let mut row = vec![0.0; m];
                row[a] = 1.0;
                row
            })
            .collect();
        MixedProfile { dists }
    }
}

impl From<Vec<usize>> for PureProfile {
    fn from(actions: Vec<usize>) -> Self {
        PureProfile(actions)
    }
}

impl Serialize for PureProfile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.labels().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PureProfile {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let labels = Vec::<usize>::deserialize(d)?;
        PureProfile::from_labels(&labels).map_err(de::Error::custom)
    }
}

/// Independent mixed strategies, one probability vector per player.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixedProfile {
    dists: Vec<Vec<f64>>,
}

impl MixedProfile {
    pub fn new(dists: Vec<Vec<f64>>) -> Result<Self> {
        if dists.is_empty() {
            return Err(Error::InvalidProfile("mixed profile has no players".into()));
        }
        let m = dists[0].len();
        for (i, row) in dists.iter().enumerate() {
            if row.len() != m {
                return Err(Error::InvalidProfile(format!(
                    "player {i} has {} probabilities, expected {m}",
                    row.len()
                )));
            }
            if row.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
                return Err(Error::InvalidProfile(format!(
                    "player {i} has a negative or non-finite probability"
                )));
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > TOL {
                return Err(Error::InvalidProfile(format!(
                    "player {i} probabilities sum to {total}"
                )));
            }
        }
        Ok(MixedProfile { dists })
    }

    /// Rows already known to be distributions (e.g. empirical frequencies).
    pub(crate) fn from_rows_unchecked(dists: Vec<Vec<f64>>) -> Self {
        MixedProfile { dists }
    }

    pub fn uniform(n: usize, m: usize) -> Self {
        MixedProfile {
            dists: vec![vec![1.0 / m as f64; m]; n],
        }
    }

    /// Binary-action view: `probs[i]` is the probability that player `i`
    /// plays the first action.
    pub fn from_binary(probs: &[f64]) -> Result<Self> {
        Self::new(probs.iter().map(|&p| vec![p, 1.0 - p]).collect())
    }

    /// Probability of the first action per player, for binary-action profiles.
    pub fn binary_view(&self) -> Option<Vec<f64>> {
        (self.actions() == 2).then(|| self.dists.iter().map(|row| row[0]).collect())
    }

    pub fn players(&self) -> usize {
        self.dists.len()
    }

    pub fn actions(&self) -> usize {
        self.dists[0].len()
    }

    pub fn prob(&self, player: usize, action: usize) -> f64 {
        self.dists[player][action]
    }

    pub fn row(&self, player: usize) -> &[f64] {
        &self.dists[player]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.dists
    }

    /// Actions with positive probability for `player`, with their weights.
    pub fn support(&self, player: usize) -> Vec<(usize, f64)> {
        self.dists[player]
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(j, &p)| (j, p))
            .collect()
    }

    /// Smallest positive probability across all players.
    pub fn min_support_prob(&self) -> f64 {
        self.dists
            .iter()
            .flatten()
            .copied()
            .filter(|&p| p > 0.0)
            .fold(f64::INFINITY, f64::min)
    }

    /// Copy with `player` switched to the pure strategy `action`.
    pub fn with_pure(&self, player: usize, action: usize) -> Self {
        let mut dists = self.dists.clone();
        let row = &mut dists[player];
        row.iter_mut().for_each(|p| *p = 0.0);
        row[action] = 1.0;
        MixedProfile { dists }
    }

    /// The pure profile this represents, if every row is a point mass.
    pub fn as_pure(&self) -> Option<PureProfile> {
        self.dists
            .iter()
            .map(|row| row.iter().position(|&p| p == 1.0))
            .collect::<Option<Vec<_>>>()
            .map(PureProfile)
    }

    pub fn validate(&self, n: usize, m: usize) -> Result<()> {
        if self.players() != n || self.actions() != m {
            return Err(Error::InvalidProfile(format!(
                "mixed profile is {}x{}, game is {n}x{m}",
                self.players(),
                self.actions()
            )));
        }
        Ok(())
    }

    /// Product distribution over pure profiles.
    pub fn to_correlated(&self) -> Result<CorrelatedDistribution> {
        check_enumerable(self.players(), self.actions())?;
        let supports: Vec<_> = (0..self.players()).map(|i| self.support(i)).collect();
        let mut support = BTreeMap::new();
        let mut cursor = vec![0usize; supports.len()];
        let sizes: Vec<usize> = supports.iter().map(Vec::len).collect();
        loop {
            let mut prob = 1.0;
            let actions: Vec<usize> = cursor
                .iter()
                .enumerate()
                .map(|(i, &c)| {
                    prob *= supports[i][c].1;
                    supports[i][c].0
                })
                .collect();
            if prob > 0.0 {
                support.insert(PureProfile(actions), prob);
            }
            if !advance_mixed_radix(&mut cursor, &sizes) {
                break;
            }
        }
        CorrelatedDistribution::from_weights(support)
    }
}

impl<'de> Deserialize<'de> for MixedProfile {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            dists: Vec<Vec<f64>>,
        }
        let raw = Raw::deserialize(d)?;
        MixedProfile::new(raw.dists).map_err(de::Error::custom)
    }
}

pub(crate) fn advance_mixed_radix(cursor: &mut [usize], sizes: &[usize]) -> bool {
    for (slot, &size) in cursor.iter_mut().zip(sizes).rev() {
        *slot += 1;
        if *slot < size {
            return true;
        }
        *slot = 0;
    }
    false
}

/// A joint distribution over pure profiles, stored sparsely.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatedDistribution {
    support: BTreeMap<PureProfile, f64>,
}

#[derive(Serialize, Deserialize)]
struct SupportEntry {
    profile: PureProfile,
    prob: f64,
}

impl CorrelatedDistribution {
    /// Probabilities must be non-negative and sum to one within `TOL`.
    /// Zero-probability entries are dropped.
    pub fn new(entries: impl IntoIterator<Item = (PureProfile, f64)>) -> Result<Self> {
        let mut support = BTreeMap::new();
        for (a, p) in entries {
            if !(p >= 0.0) || !p.is_finite() {
                return Err(Error::InvalidProfile(format!(
                    "profile {:?} has probability {p}",
                    a.labels()
                )));
            }
            if p > 0.0 {
                *support.entry(a).or_insert(0.0) += p;
            }
        }
        let dist = CorrelatedDistribution { support };
        dist.check_shape()?;
        let total = dist.total();
        if (total - 1.0).abs() > TOL {
            return Err(Error::InvalidProfile(format!(
                "correlated probabilities sum to {total}"
            )));
        }
        Ok(dist)
    }

    /// Normalizes non-negative weights into a distribution.
    pub fn from_weights(entries: impl IntoIterator<Item = (PureProfile, f64)>) -> Result<Self> {
        let mut support = BTreeMap::new();
        for (a, w) in entries {
            if !(w >= 0.0) || !w.is_finite() {
                return Err(Error::InvalidProfile(format!("weight {w} is not non-negative")));
            }
            if w > 0.0 {
                *support.entry(a).or_insert(0.0) += w;
            }
        }
        let dist = CorrelatedDistribution { support };
        dist.check_shape()?;
        let total = dist.total();
        if total <= 0.0 {
            return Err(Error::InvalidProfile("all weights are zero".into()));
        }
        Ok(CorrelatedDistribution {
            support: dist
                .support
                .into_iter()
                .map(|(a, w)| (a, w / total))
                .collect(),
        })
    }

    pub fn point_mass(a: PureProfile) -> Self {
        CorrelatedDistribution {
            support: BTreeMap::from([(a, 1.0)]),
        }
    }

    pub fn uniform(n: usize, m: usize) -> Result<Self> {
        MixedProfile::uniform(n, m).to_correlated()
    }

    fn check_shape(&self) -> Result<()> {
        let mut lens = self.support.keys().map(PureProfile::len);
        match lens.next() {
            None => Err(Error::InvalidProfile("empty correlated distribution".into())),
            Some(n) if lens.all(|l| l == n) => Ok(()),
            Some(_) => Err(Error::InvalidProfile(
                "support profiles have different lengths".into(),
            )),
        }
    }

    fn total(&self) -> f64 {
        self.support.values().sum()
    }

    pub fn players(&self) -> usize {
        self.support.keys().next().map_or(0, PureProfile::len)
    }

    pub fn support_size(&self) -> usize {
        self.support.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PureProfile, f64)> + '_ {
        self.support.iter().map(|(a, &p)| (a, p))
    }

    pub fn prob(&self, a: &PureProfile) -> f64 {
        self.support.get(a).copied().unwrap_or(0.0)
    }

    pub fn validate(&self, n: usize, m: usize) -> Result<()> {
        self.support.keys().try_for_each(|a| a.validate(n, m))
    }

    /// Marginal distribution of one player's action.
    pub fn marginal(&self, player: usize, m: usize) -> Vec<f64> {
        let mut marginal = vec![0.0; m];
        for (a, p) in self.iter() {
            marginal[a.action(player)] += p;
        }
        marginal
    }

    /// The most likely profile (first in lexicographic order on ties).
    pub fn max_profile(&self) -> (PureProfile, f64) {
        let mut best: Option<(&PureProfile, f64)> = None;
        for (a, p) in self.iter() {
            if best.map_or(true, |(_, bp)| p > bp) {
                best = Some((a, p));
            }
        }
        let (a, p) = best.expect("distribution has non-empty support");
        (a.clone(), p)
    }
}

impl Serialize for CorrelatedDistribution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            support: Vec<SupportEntryRef<'a>>,
        }
        #[derive(Serialize)]
        struct SupportEntryRef<'a> {
            profile: &'a PureProfile,
            prob: f64,
        }
        Out {
            support: self
                .iter()
                .map(|(profile, prob)| SupportEntryRef { profile, prob })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CorrelatedDistribution {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            support: Vec<SupportEntry>,
        }
        let raw = Raw::deserialize(d)?;
        CorrelatedDistribution::new(raw.support.into_iter().map(|e| (e.profile, e.prob)))
            .map_err(de::Error::custom)
    }
}

/// A deviation function `phi: [m] -> [m]` for swap regret.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeviationMap(Vec<usize>);

impl DeviationMap {
    pub fn new(phi: Vec<usize>) -> Result<Self> {
        let m = phi.len();
        if phi.iter().any(|&j| j >= m) {
            return Err(Error::InvalidParameter(format!(
                "deviation map {phi:?} leaves [0, {m})"
            )));
        }
        Ok(DeviationMap(phi))
    }

    pub fn identity(m: usize) -> Self {
        DeviationMap((0..m).collect())
    }

    /// The map sending every action to `target`.
    pub fn constant(target: usize, m: usize) -> Self {
        DeviationMap(vec![target; m])
    }

    pub fn apply(&self, action: usize) -> usize {
        self.0[action]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// All `m^m` deviation maps, in lexicographic order.
    pub fn all(m: usize) -> impl Iterator<Item = DeviationMap> {
        let mut cursor = Some(vec![0usize; m]);
        std::iter::from_fn(move || {
            let current = cursor.take()?;
            let mut next = current.clone();
            if next_profile(&mut next, m) {
                cursor = Some(next);
            }
            Some(DeviationMap(current))
        })
    }
}

impl Serialize for DeviationMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.iter().map(|j| j + 1).collect::<Vec<_>>().serialize(s)
    }
}

/// A strategy profile of any of the three kinds.
#[derive(Debug, Clone, PartialEq)]
pub enum StrategyProfile {
    Pure(PureProfile),
    Mixed(MixedProfile),
    Correlated(CorrelatedDistribution),
}

impl StrategyProfile {
    pub fn kind_name(&self) -> &'static str {
        match self {
            StrategyProfile::Pure(_) => "pure",
            StrategyProfile::Mixed(_) => "mixed",
            StrategyProfile::Correlated(_) => "correlated",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_rows_must_sum_to_one() {
        assert!(MixedProfile::new(vec![vec![0.5, 0.5]]).is_ok());
        assert!(MixedProfile::new(vec![vec![0.5, 0.4]]).is_err());
        assert!(MixedProfile::new(vec![vec![1.5, -0.5]]).is_err());
        assert!(MixedProfile::new(vec![vec![0.5, 0.5], vec![1.0]]).is_err());
    }

    #[test]
    fn binary_view_is_probability_of_first_action() {
        let p = MixedProfile::from_binary(&[0.25, 1.0]).unwrap();
        assert_eq!(p.row(0), &[0.25, 0.75]);
        assert_eq!(p.binary_view().unwrap(), vec![0.25, 1.0]);
        assert!(MixedProfile::uniform(2, 3).binary_view().is_none());
    }

    #[test]
    fn product_distribution_of_uniform() {
        let x = MixedProfile::uniform(2, 3).to_correlated().unwrap();
        assert_eq!(x.support_size(), 9);
        for (_, p) in x.iter() {
            assert!((p - 1.0 / 9.0).abs() < 1e-15);
        }
        assert_eq!(x.marginal(1, 3).len(), 3);
    }

    #[test]
    fn correlated_rejects_bad_totals() {
        let a = PureProfile::new(vec![0, 0]);
        let b = PureProfile::new(vec![1, 1]);
        assert!(CorrelatedDistribution::new([(a.clone(), 0.5), (b.clone(), 0.4)]).is_err());
        assert!(CorrelatedDistribution::new([(a.clone(), 0.5), (b.clone(), 0.5)]).is_ok());
        let x = CorrelatedDistribution::from_weights([(a, 2.0), (b, 6.0)]).unwrap();
        assert_eq!(x.max_profile().1, 0.75);
    }

    #[test]
    fn labels_are_one_based_on_the_wire() {
        let a = PureProfile::new(vec![0, 2]);
        assert_eq!(serde_json::to_string(&a).unwrap(), "[1,3]");
        let back: PureProfile = serde_json::from_str("[1,3]").unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<PureProfile>("[0,1]").is_err());
    }

    #[test]
    fn all_deviation_maps_enumerated() {
        let maps: Vec<_> = DeviationMap::all(3).collect();
        assert_eq!(maps.len(), 27);
        assert_eq!(maps[0], DeviationMap::constant(0, 3));
        assert!(maps.contains(&DeviationMap::identity(3)));
    }

    #[test]
    fn as_pure_detects_point_masses() {
        let a = PureProfile::new(vec![1, 0, 1]);
        assert_eq!(a.to_mixed(2).as_pure(), Some(a));
        assert_eq!(MixedProfile::uniform(2, 2).as_pure(), None);
    }
}
