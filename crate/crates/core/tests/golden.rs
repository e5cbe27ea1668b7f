//! Recorded outputs on the shipped test state. The network and analysis
//! expectations come from a separate straight-line implementation of the
//! estimator and metric formulas, not from this crate.

mod common;

use common::*;
use fournet::{decide, estimate_network, io, DecisionPolicy, DefaultEstimators, LinearStyle};
use serde_json::Value;

fn expected() -> Value {
    serde_json::from_slice(&std::fs::read(golden_dir().join("test_state_expected.json")).unwrap())
        .unwrap()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12
}

#[test]
fn test_state_network_matches_reference() {
    let state =
        io::parse_match_state(&std::fs::read(data_dir().join("test_state.json")).unwrap()).unwrap();
    let net = estimate_network(&state, &DefaultEstimators::default()).unwrap();
    let want = &expected()["network"];
    assert_eq!(
        net.holder().index() as u64,
        want["holder"].as_u64().unwrap()
    );
    assert!(close(net.s(), want["s"].as_f64().unwrap()));
    assert!(close(net.tau(), want["tau"].as_f64().unwrap()));
    for e in want["edges"].as_array().unwrap() {
        let j = id(e["to"].as_u64().unwrap() as u8);
        let got = net.edge(j).unwrap();
        assert!(
            close(got.p(), e["p"].as_f64().unwrap()),
            "p to {j}: {}",
            got.p()
        );
        assert_eq!(u64::from(got.r()), e["r"].as_u64().unwrap(), "r to {j}");
    }
}

#[test]
fn test_state_has_marked_and_offside_teammates() {
    let state =
        io::parse_match_state(&std::fs::read(data_dir().join("test_state.json")).unwrap()).unwrap();
    assert!(state.is_offside(id(11)));
    let net = estimate_network(&state, &DefaultEstimators::default()).unwrap();
    assert_eq!(
        (net.edge(id(11)).unwrap().p(), net.edge(id(11)).unwrap().r()),
        (0.0, 0)
    );
    assert!(net.edge(id(4)).unwrap().r() <= 1);
}

#[test]
fn test_state_decisions_match_reference() {
    let state =
        io::parse_match_state(&std::fs::read(data_dir().join("test_state.json")).unwrap()).unwrap();
    let net = estimate_network(&state, &DefaultEstimators::default()).unwrap();
    for (key, x, y) in [("decide_2_1", 2, 1), ("decide_1_2", 1, 2)] {
        let want = &expected()[key];
        let d = decide(
            &net,
            &DecisionPolicy::new(LinearStyle::new(x, y).unwrap(), 0.5).unwrap(),
        );
        assert_eq!(want["type"], "pass");
        assert_eq!(
            d.target().map(|t| u64::from(t.index())),
            want["target"].as_u64(),
            "{key}"
        );
    }
}

#[test]
fn dot_export_is_stable() {
    let state =
        io::parse_match_state(&std::fs::read(data_dir().join("test_state.json")).unwrap()).unwrap();
    let net = estimate_network(&state, &DefaultEstimators::default()).unwrap();
    let want = std::fs::read_to_string(golden_dir().join("test_state.dot")).unwrap();
    assert_eq!(io::export_network_dot(&net), want);
}

#[test]
fn recorded_log_metrics_match_reference() {
    let seqs =
        io::parse_sequence_log(&std::fs::read(golden_dir().join("simulate_seed42.json")).unwrap())
            .unwrap();
    let want: Value =
        serde_json::from_slice(&std::fs::read(golden_dir().join("analyze_expected.json")).unwrap())
            .unwrap();
    let want = want.as_array().unwrap();
    assert_eq!(seqs.len(), want.len());
    for (q, w) in seqs.iter().zip(want) {
        assert_eq!(fournet::efficiency(q), w["efficiency"].as_f64().unwrap());
        assert_eq!(fournet::security(q), w["security"].as_f64().unwrap());
        assert_eq!(q.len() as u64, w["steps"].as_u64().unwrap());
        assert_eq!(
            q.terminal_outcome().as_str(),
            w["terminal"].as_str().unwrap()
        );
    }
}

#[test]
fn recorded_log_round_trips_byte_for_byte() {
    let bytes = std::fs::read(golden_dir().join("simulate_seed42.json")).unwrap();
    let seqs = io::parse_sequence_log(&bytes).unwrap();
    assert_eq!(io::serialize_sequence_log(&seqs).as_bytes(), &bytes[..]);
}
