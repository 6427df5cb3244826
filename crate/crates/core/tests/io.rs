use liplab::game::{eval_payoffs, TensorGame};
use liplab::io::{game_to_json, load_game, parse_game, parse_profile};
use liplab::{Error, Game, PureProfile, StrategyProfile};

#[test]
fn explicit_table_uses_one_based_layout() {
    let g = parse_game(r#"{"n": 2, "m": 2, "payoffs": [[1, 0, 0, 1], [0, 1, 1, 0]]}"#).unwrap();
    assert_eq!(g.payoffs(&[0, 1]), vec![0.0, 1.0]);
    assert_eq!(g.payoffs(&[1, 1]), vec![1.0, 0.0]);
}

#[test]
fn structured_games() {
    let mp = parse_game(r#"{"type": "matching_pennies", "k": 2, "m": 3}"#).unwrap();
    assert_eq!((mp.players(), mp.actions()), (4, 3));
    let c = parse_game(r#"{"type": "constant", "n": 3, "m": 2, "value": 0.25}"#).unwrap();
    assert_eq!(c.payoffs(&[1, 0, 1]), vec![0.25; 3]);
    let scaled = parse_game(r#"{"type": "scaled", "factor": 0.5, "game": {"type": "dominant", "n": 2, "m": 2}}"#).unwrap();
    assert_eq!(scaled.payoffs(&[0, 1]), vec![0.5, 0.0]);
    let pop = parse_game(r#"{"base": {"type": "matching_pennies", "k": 1, "m": 2}, "sizes": [2, 3]}"#).unwrap();
    assert_eq!(pop.players(), 5);
    let a = parse_game(r#"{"type": "random_lipschitz", "n": 3, "m": 2, "lambda": 0.2, "seed": 4}"#).unwrap();
    let b = parse_game(r#"{"type": "random_lipschitz", "n": 3, "m": 2, "lambda": 0.2, "seed": 4}"#).unwrap();
    assert_eq!(a.payoffs(&[1, 0, 1]), b.payoffs(&[1, 0, 1]));
}

#[test]
fn table_round_trip() {
    let g = TensorGame::from_fn(3, 2, |i, a| (i + a[0] + a[2]) as f64 / 4.0)
        .unwrap()
        .with_declared_lambda(0.25)
        .unwrap();
    let back = parse_game(&game_to_json(&g)).unwrap();
    assert_eq!(back.declared_lambda(), Some(0.25));
    for idx in 0..8 {
        let a = liplab::game::profile_from_index(idx, 3, 2);
        assert_eq!(back.payoffs(&a), g.payoffs(&a));
    }
}

#[test]
fn profiles() {
    match parse_profile(r#"{"kind": "pure", "actions": [1, 2]}"#, 2, 2).unwrap() {
        StrategyProfile::Pure(a) => assert_eq!(a, PureProfile::new(vec![0, 1])),
        other => panic!("{other:?}"),
    }
    match parse_profile(r#"{"kind": "mixed", "p": [0.25, 1]}"#, 2, 2).unwrap() {
        StrategyProfile::Mixed(p) => assert_eq!(p.row(0), &[0.25, 0.75]),
        other => panic!("{other:?}"),
    }
    let corr = r#"{"kind": "correlated", "support": [{"profile": [1, 1], "prob": 0.5}, {"profile": [2, 2], "prob": 0.5}]}"#;
    match parse_profile(corr, 2, 2).unwrap() {
        StrategyProfile::Correlated(x) => assert_eq!(x.prob(&PureProfile::new(vec![1, 1])), 0.5),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_profile(r#"{"kind": "uniform"}"#, 3, 2).unwrap(), StrategyProfile::Mixed(_)));
}

#[test]
fn malformed_input() {
    for bad in [
        "not json",
        "[]",
        r#"{"type": "unknown"}"#,
        r#"{"n": 2, "m": 2}"#,
        r#"{"n": 2, "m": 2, "payoffs": [[1, 0, 0], [0, 1, 1, 0]]}"#,
        r#"{"n": 1, "m": 2, "payoffs": [[2, 0]]}"#,
        r#"{"type": "matching_pennies", "k": 0, "m": 2}"#,
    ] {
        assert!(parse_game(bad).is_err(), "{bad}");
    }
    for bad in [
        r#"{"kind": "pure", "actions": [0, 1]}"#,
        r#"{"kind": "pure", "actions": [1, 3]}"#,
        r#"{"kind": "pure", "actions": [1]}"#,
        r#"{"kind": "mixed", "dists": [[0.5, 0.6], [1, 0]]}"#,
        r#"{"kind": "correlated", "support": [{"profile": [1, 1], "prob": 0.4}]}"#,
        r#"{"kind": "other"}"#,
    ] {
        assert!(parse_profile(bad, 2, 2).is_err(), "{bad}");
    }
    assert!(matches!(load_game(std::path::Path::new("/nonexistent/game.json")), Err(Error::Parse(_))));
    let g = parse_game(r#"{"type": "dominant", "n": 2, "m": 2}"#).unwrap();
    assert!(eval_payoffs(g.as_ref(), &PureProfile::new(vec![0, 5])).is_err());
}
