mod common;

use common::*;
use fournet::{io, DecisionNetwork};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #[test]
    fn match_state_round_trips(seed in any::<u64>()) {
        let state = match_state(&mut ChaCha8Rng::seed_from_u64(seed));
        let text = io::serialize_match_state(&state);
        let back = io::parse_match_state(text.as_bytes()).unwrap();
        prop_assert_eq!(&back, &state);
        prop_assert_eq!(io::serialize_match_state(&back), text);
    }

    #[test]
    fn sequence_logs_round_trip(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let seqs: Vec<_> = (0..n).map(|k| sequence(&mut rng, 1 + k * 3)).collect();
        let text = io::serialize_sequence_log(&seqs);
        let back = io::parse_sequence_log(text.as_bytes()).unwrap();
        prop_assert_eq!(&back, &seqs);
        prop_assert_eq!(io::serialize_sequence_log(&back), text);
    }

    #[test]
    fn network_json_round_trips(seed in any::<u64>()) {
        let net = network(&mut ChaCha8Rng::seed_from_u64(seed));
        let text = serde_json::to_string(&net).unwrap();
        let back: DecisionNetwork = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, net);
    }
}

fn log_with(edit: impl FnOnce(&mut serde_json::Value)) -> Result<(), String> {
    let mut v: serde_json::Value =
        serde_json::from_slice(&std::fs::read(golden_dir().join("simulate_seed42.json")).unwrap())
            .unwrap();
    edit(&mut v);
    io::parse_sequence_log(v.to_string().as_bytes())
        .map(|_| ())
        .map_err(|e| e.to_string())
}

#[test]
fn malformed_logs_are_rejected() {
    assert!(log_with(|_| {}).is_ok());
    let err = log_with(|v| v[0][0]["outcome"] = "teleport".into()).unwrap_err();
    assert!(err.contains("teleport"), "{err}");
    // first step of a two-step sequence no longer reaches the second holder
    let err = log_with(|v| v[0][0]["decision"]["target"] = 1.into()).unwrap_err();
    assert!(err.contains("$[0]"), "{err}");
    let err = log_with(|v| v[0][1]["outcome"] = "pass_completed".into()).unwrap_err();
    assert!(err.contains("final step"), "{err}");
    let err = log_with(|v| v[0][0]["network"]["edges"][0]["p"] = 1.5.into()).unwrap_err();
    assert!(err.contains('p'), "{err}");
    let err = log_with(|v| v[0][0]["network"]["edges"][0]["r"] = (-1).into()).unwrap_err();
    assert!(!err.is_empty());
    let err = log_with(|v| {
        v[0][0]["network"]["edges"].as_array_mut().unwrap().pop();
    })
    .unwrap_err();
    assert!(err.contains("missing teammate"), "{err}");
    assert!(log_with(|v| *v = serde_json::json!([])).is_err());
    assert!(io::parse_sequence_log(b"not json").is_err());
}

#[test]
fn state_diagnostics_name_the_field() {
    let base: serde_json::Value =
        serde_json::from_slice(&std::fs::read(data_dir().join("test_state.json")).unwrap())
            .unwrap();
    let parse = |edit: &dyn Fn(&mut serde_json::Value)| {
        let mut v = base.clone();
        edit(&mut v);
        io::parse_match_state(v.to_string().as_bytes())
            .unwrap_err()
            .to_string()
    };
    let e = parse(&|v| {
        v["team"].as_array_mut().unwrap().pop();
    });
    assert!(e.contains("team") && e.contains("expected 11"), "{e}");
    let e = parse(&|v| v["holder"] = 12.into());
    assert!(e.contains("holder"), "{e}");
    let e = parse(&|v| v["team"][2]["y"] = 80.0.into());
    assert!(e.contains("$.team[2].y"), "{e}");
    let e = parse(&|v| v["weather"] = "rain".into());
    assert!(e.contains("weather"), "{e}");
    let e = parse(&|v| v["team"][1]["id"] = 1.into());
    assert!(e.contains("duplicate"), "{e}");
}
