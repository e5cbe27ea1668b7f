//! Random generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use fournet::{
    Decision, DecisionNetwork, LinearStyle, MatchState, Pitch, Placement, PlayerId,
    PossessionSequence, PossessionStep, StepOutcome,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn id(i: u8) -> PlayerId {
    PlayerId::new(i).unwrap()
}

pub fn style(rng: &mut ChaCha8Rng) -> LinearStyle {
    loop {
        let (x, y) = (rng.gen_range(0..=20), rng.gen_range(0..=20));
        if let Ok(s) = LinearStyle::new(x, y) {
            return s;
        }
    }
}

/// Coarse grids for p and r so that ties between teammates are common.
pub fn network(rng: &mut ChaCha8Rng) -> DecisionNetwork {
    let holder = id(rng.gen_range(1..=11));
    let coarse = rng.gen_bool(0.5);
    let edges: BTreeMap<PlayerId, (f64, u8)> = PlayerId::all()
        .filter(|&j| j != holder)
        .map(|j| {
            let p = if coarse {
                f64::from(rng.gen_range(0..=4u8)) / 4.0
            } else {
                rng.gen::<f64>()
            };
            (j, (p, rng.gen_range(0..=10)))
        })
        .collect();
    DecisionNetwork::build(holder, rng.gen(), rng.gen_range(0.0..4.0), &edges).unwrap()
}

pub fn network_with_holder(rng: &mut ChaCha8Rng, holder: PlayerId, s: f64) -> DecisionNetwork {
    let edges: BTreeMap<PlayerId, (f64, u8)> = PlayerId::all()
        .filter(|&j| j != holder)
        .map(|j| (j, (rng.gen::<f64>(), rng.gen_range(0..=10))))
        .collect();
    DecisionNetwork::build(holder, s, rng.gen_range(0.0..4.0), &edges).unwrap()
}

/// A well-chained sequence of `len` steps. Interior steps are completed
/// passes; the last step is a shot or a failed pass.
pub fn sequence(rng: &mut ChaCha8Rng, len: usize) -> PossessionSequence {
    let mut holder = id(rng.gen_range(1..=11));
    let mut steps = Vec::with_capacity(len);
    for k in 0..len {
        let last = k + 1 == len;
        let s = rng.gen();
        let net = network_with_holder(rng, holder, s);
        if last && rng.gen_bool(0.4) {
            let outcome = StepOutcome::ShotTaken {
                scored: rng.gen_bool(0.3),
            };
            steps.push(PossessionStep::new(net, Decision::Shoot, outcome).unwrap());
            break;
        }
        let target = loop {
            let t = id(rng.gen_range(1..=11));
            if t != holder {
                break t;
            }
        };
        let outcome = if !last {
            StepOutcome::PassCompleted
        } else if rng.gen_bool(0.8) {
            StepOutcome::PassIntercepted
        } else {
            StepOutcome::ForcedLoss
        };
        let decision = Decision::Pass {
            target,
            score: 0.0,
            degenerate: false,
        };
        steps.push(PossessionStep::new(net, decision, outcome).unwrap());
        holder = target;
    }
    PossessionSequence::new(steps).unwrap()
}

/// A random legal match state; some players may be off the field.
pub fn match_state(rng: &mut ChaCha8Rng) -> MatchState {
    let pitch = Pitch::default();
    let spot = |rng: &mut ChaCha8Rng| {
        let (x, y) = (
            rng.gen_range(0.0..=pitch.length),
            rng.gen_range(0.0..=pitch.width),
        );
        if rng.gen_bool(0.03) {
            Placement::outside(x, y)
        } else {
            Placement::on_pitch(x, y)
        }
    };
    let holder = id(rng.gen_range(1..=11));
    let team = PlayerId::all()
        .map(|j| {
            let mut pl = spot(rng);
            if j == holder {
                pl.outside = false;
            }
            (j, pl)
        })
        .collect();
    let opponents = (0..11).map(|_| spot(rng)).collect();
    MatchState::new(pitch, team, opponents, holder).unwrap()
}

// ---- oracles: plain arithmetic, no library scoring code ----

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Exhaustive scan over the ten teammates in id order, strict improvement
/// only. Weights are divided by their gcd first: that ranks identically in
/// exact arithmetic and keeps float rounding independent of the scale.
pub fn oracle_decide(net: &DecisionNetwork, x: u32, y: u32, threshold: f64) -> Option<PlayerId> {
    if net.s() >= threshold {
        return None;
    }
    let g = gcd(x, y);
    let (x, y) = (x / g, y / g);
    let mut best: Option<(PlayerId, f64)> = None;
    for j in 1..=11u8 {
        let j = id(j);
        if j == net.holder() {
            continue;
        }
        let e = net.edge(j).unwrap();
        let v = f64::from(x) * 10.0 * e.p() + f64::from(y) * f64::from(e.r());
        match best {
            Some((_, b)) if v <= b => {}
            _ => best = Some((j, v)),
        }
    }
    best.map(|b| b.0)
}

pub fn oracle_efficiency(q: &PossessionSequence) -> f64 {
    let mut m = f64::NEG_INFINITY;
    for st in q.steps() {
        if st.network().s() > m {
            m = st.network().s();
        }
    }
    m
}

pub fn oracle_security(q: &PossessionSequence) -> f64 {
    let mut m = 1.0;
    for st in q.steps() {
        // forced losses count too: the pass was chosen, its risk taken
        if let Decision::Pass { target, .. } = st.decision() {
            let p = st.network().edge(*target).unwrap().p();
            if p < m {
                m = p;
            }
        }
    }
    m
}

/// O(n^2) pairwise dominance; returns the sorted indices of the survivors.
pub fn brute_frontier(points: &[(f64, f64)]) -> Vec<usize> {
    let mut out: Vec<usize> = (0..points.len())
        .filter(|&i| {
            !points.iter().any(|&(s, p)| {
                let (si, pi) = points[i];
                s >= si && p >= pi && (s > si || p > pi)
            })
        })
        .collect();
    out.sort_unstable();
    out
}
