//! JSON formats for games and strategy profiles.
//!
//! Games are either explicit tables, `{"n": 2, "m": 2, "payoffs": [[..], [..]]}`
//! with `payoffs[i][idx]` and `idx = sum_t (a_t - 1) m^(n - t)` over 1-based
//! labels, or structured descriptions tagged by `"type"`:
//!
//! * `{"type": "matching_pennies", "k": 1, "m": 2}`
//! * `{"type": "random_lipschitz", "n": 4, "m": 2, "lambda": 0.1, "seed": 7}`
//! * `{"type": "constant", "n": 3, "m": 2, "value": 0.5}`
//! * `{"type": "dominant", "n": 3, "m": 2}`
//! * `{"type": "scaled", "game": {..}, "factor": 0.5}`
//! * `{"base": {..}, "sizes": [2, 2]}` (a population game)
//!
//! Profiles are `{"kind": "pure", "actions": [1, 2]}`,
//! `{"kind": "mixed", "dists": [[0.5, 0.5], ..]}` (or `"p": [..]` giving the
//! probability of action 1 per player in a binary game),
//! `{"kind": "correlated", "support": [{"profile": [1, 1], "prob": 0.5}, ..]}`
//! and `{"kind": "uniform"}`.

use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::game::{
    scale_game, ConstantGame, CorrelatedDistribution, GameRef, MixedProfile, PureProfile,
    StrategyProfile, TensorGame,
};
use crate::hard::MatchingPennies;
use crate::reductions::induce_population_game;
use crate::solvers::{dominant_action_game, random_lipschitz_game, GeneratorConfig};

fn field<T: for<'de> Deserialize<'de>>(v: &Value, name: &str) -> Result<T> {
    let raw = v
        .get(name)
        .ok_or_else(|| Error::Parse(format!("missing field {name:?}")))?;
    T::deserialize(raw).map_err(|e| Error::Parse(format!("field {name:?}: {e}")))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn parse_value(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Build a game from its JSON description.
pub fn game_from_value(v: &Value) -> Result<GameRef> {
    if !v.is_object() {
        return Err(Error::Parse("a game must be a JSON object".into()));
    }
    if let Some(kind) = v.get("type") {
        let kind = kind
            .as_str()
            .ok_or_else(|| Error::Parse("\"type\" must be a string".into()))?;
        return Ok(match kind {
            "matching_pennies" => Arc::new(MatchingPennies::new(field(v, "k")?, field(v, "m")?)?),
            "random_lipschitz" => {
                let config = GeneratorConfig::new(
                    field(v, "n")?,
                    field(v, "m")?,
                    field(v, "lambda")?,
                    field(v, "seed")?,
                );
                Arc::new(random_lipschitz_game(&config)?)
            }
            "constant" => Arc::new(ConstantGame::new(field(v, "n")?, field(v, "m")?, field(v, "value")?)?),
            "dominant" => Arc::new(dominant_action_game(field(v, "n")?, field(v, "m")?)?),
            "scaled" => {
                let inner = game_from_value(v.get("game").ok_or_else(|| Error::Parse("missing field \"game\"".into()))?)?;
                Arc::new(scale_game(inner, field(v, "factor")?)?)
            }
            "population" => population(v)?,
            "explicit" => explicit(v)?,
            other => return Err(Error::Parse(format!("unknown game type {other:?}"))),
        });
    }
    if v.get("base").is_some() {
        return population(v);
    }
    explicit(v)
}

fn population(v: &Value) -> Result<GameRef> {
    let base = game_from_value(v.get("base").ok_or_else(|| Error::Parse("missing field \"base\"".into()))?)?;
    Ok(Arc::new(induce_population_game(base, field(v, "sizes")?)?))
}

fn explicit(v: &Value) -> Result<GameRef> {
    let game = TensorGame::new(field(v, "n")?, field(v, "m")?, field(v, "payoffs")?)?;
    let game = match v.get("lambda") {
        Some(_) => game.with_declared_lambda(field(v, "lambda")?)?,
        None => game,
    };
    Ok(Arc::new(game))
}

pub fn parse_game(text: &str) -> Result<GameRef> {
    game_from_value(&parse_value(text)?)
}

pub fn load_game(path: &Path) -> Result<GameRef> {
    parse_game(&read(path)?)
}

/// Explicit-table JSON for a tabulated game.
pub fn game_to_json(game: &TensorGame) -> String {
    use crate::game::Game;
    let mut v = serde_json::json!({
        "n": game.players(),
        "m": game.actions(),
        "payoffs": game.tables(),
    });
    if let Some(l) = game.declared_lambda() {
        v["lambda"] = serde_json::json!(l);
    }
    v.to_string()
}

/// Read a strategy profile for an `n`-player, `m`-action game.
pub fn profile_from_value(v: &Value, n: usize, m: usize) -> Result<StrategyProfile> {
    let kind: String = field(v, "kind")?;
    let profile = match kind.as_str() {
        "pure" => {
            let labels: Vec<usize> = field(v, "actions")?;
            StrategyProfile::Pure(PureProfile::from_labels(&labels)?)
        }
        "mixed" => {
            let p = if v.get("p").is_some() {
                MixedProfile::from_binary(&field::<Vec<f64>>(v, "p")?)?
            } else {
                MixedProfile::new(field(v, "dists")?)?
            };
            StrategyProfile::Mixed(p)
        }
        "correlated" => StrategyProfile::Correlated(
            CorrelatedDistribution::deserialize(v).map_err(|e| Error::Parse(e.to_string()))?,
        ),
        "uniform" => StrategyProfile::Mixed(MixedProfile::uniform(n, m)),
        other => return Err(Error::Parse(format!("unknown profile kind {other:?}"))),
    };
    match &profile {
        StrategyProfile::Pure(a) => a.validate(n, m)?,
        StrategyProfile::Mixed(p) => p.validate(n, m)?,
        StrategyProfile::Correlated(x) => x.validate(n, m)?,
    }
    Ok(profile)
}

pub fn parse_profile(text: &str, n: usize, m: usize) -> Result<StrategyProfile> {
    profile_from_value(&parse_value(text)?, n, m)
}

pub fn load_profile(path: &Path, n: usize, m: usize) -> Result<StrategyProfile> {
    parse_profile(&read(path)?, n, m)
}
