//! The shoot-or-pass decision function.

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::network::{is_probability, DecisionNetwork, PlayerId};
use crate::style::{LinearStyle, StyleFunction};

/// Threshold used when none is configured.
pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// How equal-scoring pass options are ordered.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreak {
    #[default]
    LowestId,
    HighestId,
}

impl TieBreak {
    fn order(self, network: &DecisionNetwork) -> Vec<PlayerId> {
        let mut ids: Vec<PlayerId> = network.edges().map(|(j, _)| j).collect();
        if self == TieBreak::HighestId {
            ids.reverse();
        }
        ids
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionPolicy<S = LinearStyle> {
    style: S,
    threshold: f64,
    tie_break: TieBreak,
}

impl<S: StyleFunction> DecisionPolicy<S> {
    pub fn new(style: S, threshold: f64) -> Result<Self> {
        if !is_probability(threshold) {
            return Err(ModelError::ValueOutOfRange {
                field: "threshold",
                value: threshold,
            });
        }
        Ok(Self {
            style,
            threshold,
            tie_break: TieBreak::default(),
        })
    }

    pub fn with_tie_break(mut self, tie_break: TieBreak) -> Self {
        self.tie_break = tie_break;
        self
    }

    pub fn style(&self) -> &S {
        &self.style
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn tie_break(&self) -> TieBreak {
        self.tie_break
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decision {
    Shoot,
    /// `degenerate` is set when the best available score is zero, e.g. when
    /// every teammate is offside.
    Pass {
        target: PlayerId,
        score: f64,
        degenerate: bool,
    },
}

impl Decision {
    pub fn target(&self) -> Option<PlayerId> {
        match self {
            Decision::Shoot => None,
            Decision::Pass { target, .. } => Some(*target),
        }
    }

    pub fn is_shoot(&self) -> bool {
        matches!(self, Decision::Shoot)
    }
}

/// Shoot when the holder's scoring probability reaches the threshold,
/// otherwise pass to the teammate with the highest style score.
pub fn decide<S: StyleFunction>(network: &DecisionNetwork, policy: &DecisionPolicy<S>) -> Decision {
    if network.s() >= policy.threshold {
        return Decision::Shoot;
    }
    let mut best: Option<(PlayerId, f64)> = None;
    for j in policy.tie_break.order(network) {
        let e = network.edge(j).expect("ordered ids are teammates");
        let key = policy.style.ranking_key(e.p(), e.r());
        if best.is_none_or(|(_, k)| key > k) {
            best = Some((j, key));
        }
    }
    let (target, _) = best.expect("a network has ten teammates");
    let e = network.edge(target).expect("target is a teammate");
    let score = policy.style.score(e.p(), e.r());
    Decision::Pass {
        target,
        score,
        degenerate: score == 0.0,
    }
}

/// Every teammate with its style score, best first.
pub fn ranked_options<S: StyleFunction>(
    network: &DecisionNetwork,
    policy: &DecisionPolicy<S>,
) -> Vec<(PlayerId, f64)> {
    let mut keyed: Vec<(PlayerId, f64, f64)> = policy
        .tie_break
        .order(network)
        .into_iter()
        .map(|j| {
            let e = network.edge(j).expect("ordered ids are teammates");
            (
                j,
                policy.style.ranking_key(e.p(), e.r()),
                policy.style.score(e.p(), e.r()),
            )
        })
        .collect();
    // stable: equal keys keep tie-break order
    keyed.sort_by(|a, b| b.1.total_cmp(&a.1));
    keyed.into_iter().map(|(j, _, score)| (j, score)).collect()
}
