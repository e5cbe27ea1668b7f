//! Possession sequences and their efficiency / security metrics.
//!
//! A possession is a chain of 4-networks: each completed pass from `i` to `j`
//! turns `N(i)` into `N(j)`. A sequence is *s-efficient* when some network in
//! it offers a scoring probability of at least `s`, and *p-secure* when every
//! attempted pass had completion probability at least `p`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::decision::Decision;
use crate::error::{ModelError, Result};
use crate::network::{is_probability, DecisionNetwork, PlayerId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepOutcome {
    PassCompleted,
    PassIntercepted,
    ShotTaken { scored: bool },
    ForcedLoss,
}

impl StepOutcome {
    pub fn is_terminal(&self) -> bool {
        !matches!(self, StepOutcome::PassCompleted)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            StepOutcome::PassCompleted => "pass_completed",
            StepOutcome::PassIntercepted => "pass_intercepted",
            StepOutcome::ShotTaken { scored: true } => "shot_scored",
            StepOutcome::ShotTaken { scored: false } => "shot_missed",
            StepOutcome::ForcedLoss => "forced_loss",
        }
    }
}

impl fmt::Display for StepOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StepOutcome {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "pass_completed" => StepOutcome::PassCompleted,
            "pass_intercepted" => StepOutcome::PassIntercepted,
            "shot_scored" => StepOutcome::ShotTaken { scored: true },
            "shot_missed" => StepOutcome::ShotTaken { scored: false },
            "forced_loss" => StepOutcome::ForcedLoss,
            other => {
                return Err(ModelError::MalformedSequence(format!(
                    "unknown outcome {other:?}"
                )))
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PossessionStep {
    network: DecisionNetwork,
    decision: Decision,
    outcome: StepOutcome,
}

impl PossessionStep {
    /// Shots must end in `ShotTaken`; passes in a pass outcome or a forced loss.
    pub fn new(network: DecisionNetwork, decision: Decision, outcome: StepOutcome) -> Result<Self> {
        let consistent = match decision {
            Decision::Shoot => matches!(outcome, StepOutcome::ShotTaken { .. }),
            Decision::Pass { target, .. } => {
                if target == network.holder() {
                    return Err(ModelError::MalformedSequence(
                        "pass target is the holder".into(),
                    ));
                }
                !matches!(outcome, StepOutcome::ShotTaken { .. })
            }
        };
        if !consistent {
            return Err(ModelError::MalformedSequence(format!(
                "outcome {outcome} does not follow decision {decision:?}"
            )));
        }
        Ok(Self {
            network,
            decision,
            outcome,
        })
    }

    pub fn network(&self) -> &DecisionNetwork {
        &self.network
    }

    pub fn decision(&self) -> &Decision {
        &self.decision
    }

    pub fn outcome(&self) -> StepOutcome {
        self.outcome
    }

    /// Completion probability of the pass attempted at this step, if any.
    pub fn attempted_pass_p(&self) -> Option<f64> {
        self.decision
            .target()
            .map(|j| self.network.edge(j).expect("target is a teammate").p())
    }
}

/// A nonempty, well-chained list of steps ending in a terminal outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct PossessionSequence {
    steps: Vec<PossessionStep>,
}

impl PossessionSequence {
    pub fn new(steps: Vec<PossessionStep>) -> Result<Self> {
        let malformed = |msg: String| Err(ModelError::MalformedSequence(msg));
        let Some((last, interior)) = steps.split_last() else {
            return malformed("sequence has no steps".into());
        };
        for (k, step) in interior.iter().enumerate() {
            if step.outcome != StepOutcome::PassCompleted {
                return malformed(format!(
                    "step {k} ends with {} but is not the final step",
                    step.outcome
                ));
            }
            let next = steps[k + 1].network.holder();
            if step.decision.target() != Some(next) {
                return malformed(format!(
                    "step {k} passes to {:?} but step {} is held by {next}",
                    step.decision.target(),
                    k + 1
                ));
            }
        }
        if !last.outcome.is_terminal() {
            return malformed("final step must end the possession".into());
        }
        Ok(Self { steps })
    }

    pub fn steps(&self) -> &[PossessionStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn terminal_outcome(&self) -> StepOutcome {
        self.steps.last().expect("nonempty").outcome
    }

    pub fn scored(&self) -> bool {
        self.terminal_outcome() == StepOutcome::ShotTaken { scored: true }
    }
}

/// Largest scoring probability reached by any network in the sequence.
pub fn efficiency(seq: &PossessionSequence) -> f64 {
    seq.steps
        .iter()
        .map(|st| st.network.s())
        .fold(0.0, f64::max)
}

/// Smallest completion probability among the attempted passes; 1 when the
/// sequence attempts no pass.
pub fn security(seq: &PossessionSequence) -> f64 {
    seq.steps
        .iter()
        .filter_map(PossessionStep::attempted_pass_p)
        .fold(1.0, f64::min)
}

pub fn is_s_efficient(seq: &PossessionSequence, s: f64) -> Result<bool> {
    if !is_probability(s) {
        return Err(ModelError::ValueOutOfRange {
            field: "s",
            value: s,
        });
    }
    Ok(efficiency(seq) >= s)
}

pub fn is_p_secure(seq: &PossessionSequence, p: f64) -> Result<bool> {
    if !is_probability(p) {
        return Err(ModelError::ValueOutOfRange {
            field: "p",
            value: p,
        });
    }
    Ok(security(seq) >= p)
}

/// Efficiency and security maintained step by step while a possession is
/// being built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunningMetrics {
    pub efficiency: f64,
    pub security: f64,
}

impl Default for RunningMetrics {
    fn default() -> Self {
        Self {
            efficiency: 0.0,
            security: 1.0,
        }
    }
}

impl RunningMetrics {
    pub fn observe(&mut self, step: &PossessionStep) {
        self.efficiency = self.efficiency.max(step.network.s());
        if let Some(p) = step.attempted_pass_p() {
            self.security = self.security.min(p);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrontierPoint {
    pub s: f64,
    pub p: f64,
    pub index: usize,
}

/// Indices of the non-dominated points, sorted by `s` descending, then `p`
/// descending, then index. A point is dominated when another is at least as
/// good in both coordinates and strictly better in one; exact duplicates are
/// all kept.
pub fn pareto_indices(points: &[(f64, f64)]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[b]
            .0
            .total_cmp(&points[a].0)
            .then(points[b].1.total_cmp(&points[a].1))
            .then(a.cmp(&b))
    });
    let mut kept = Vec::new();
    // best p among points with strictly larger s
    let mut best_p_above = f64::NEG_INFINITY;
    let mut k = 0;
    while k < order.len() {
        let s = points[order[k]].0;
        let group_end = order[k..]
            .iter()
            .position(|&i| points[i].0 != s)
            .map_or(order.len(), |off| k + off);
        let group_top = points[order[k]].1;
        if group_top > best_p_above {
            kept.extend(
                order[k..group_end]
                    .iter()
                    .copied()
                    .take_while(|&i| points[i].1 == group_top),
            );
        }
        best_p_above = best_p_above.max(group_top);
        k = group_end;
    }
    kept
}

/// The efficiency/security Pareto frontier over a set of sequences.
pub fn pareto_frontier(seqs: &[PossessionSequence]) -> Result<Vec<FrontierPoint>> {
    if seqs.is_empty() {
        return Err(ModelError::Empty("sequence collection"));
    }
    let points: Vec<(f64, f64)> = seqs.iter().map(|q| (efficiency(q), security(q))).collect();
    Ok(pareto_indices(&points)
        .into_iter()
        .map(|index| FrontierPoint {
            s: points[index].0,
            p: points[index].1,
            index,
        })
        .collect())
}

/// `min(s / s_target, p / p_target)`: how far a point gets toward both
/// targets at once. A ranking convenience, not part of the dominance order.
pub fn balanced_score(s: f64, p: f64, s_target: f64, p_target: f64) -> Result<f64> {
    for (field, v) in [("s_target", s_target), ("p_target", p_target)] {
        if !(v > 0.0 && v <= 1.0) {
            return Err(ModelError::ValueOutOfRange { field, value: v });
        }
    }
    Ok((s / s_target).min(p / p_target))
}

/// Index of the sequence maximising [`balanced_score`]; lowest index on ties.
pub fn most_balanced(seqs: &[PossessionSequence], s_target: f64, p_target: f64) -> Result<usize> {
    if seqs.is_empty() {
        return Err(ModelError::Empty("sequence collection"));
    }
    let mut best = (0, f64::NEG_INFINITY);
    for (i, q) in seqs.iter().enumerate() {
        let v = balanced_score(efficiency(q), security(q), s_target, p_target)?;
        if v > best.1 {
            best = (i, v);
        }
    }
    Ok(best.0)
}

// ---- log format -----------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepWire {
    network: DecisionNetwork,
    decision: DecisionWire,
    outcome: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DecisionWire {
    #[serde(rename = "type")]
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    target: Option<PlayerId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    score: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    degenerate: Option<bool>,
}

impl From<&PossessionStep> for StepWire {
    fn from(step: &PossessionStep) -> Self {
        let decision = match step.decision {
            Decision::Shoot => DecisionWire {
                kind: "shoot".into(),
                target: None,
                score: None,
                degenerate: None,
            },
            Decision::Pass {
                target,
                score,
                degenerate,
            } => DecisionWire {
                kind: "pass".into(),
                target: Some(target),
                score: Some(score),
                degenerate: Some(degenerate),
            },
        };
        StepWire {
            network: step.network.clone(),
            decision,
            outcome: step.outcome.to_string(),
        }
    }
}

impl TryFrom<StepWire> for PossessionStep {
    type Error = ModelError;

    fn try_from(w: StepWire) -> Result<Self> {
        let decision = match (w.decision.kind.as_str(), w.decision.target) {
            ("shoot", None) => Decision::Shoot,
            ("pass", Some(target)) => {
                let score = w.decision.score.unwrap_or(0.0);
                Decision::Pass {
                    target,
                    score,
                    degenerate: w.decision.degenerate.unwrap_or(score == 0.0),
                }
            }
            ("shoot", Some(_)) => {
                return Err(ModelError::MalformedSequence("shoot with a target".into()))
            }
            ("pass", None) => {
                return Err(ModelError::MalformedSequence(
                    "pass without a target".into(),
                ))
            }
            (other, _) => {
                return Err(ModelError::MalformedSequence(format!(
                    "unknown decision type {other:?}"
                )))
            }
        };
        PossessionStep::new(w.network, decision, w.outcome.parse()?)
    }
}

impl Serialize for PossessionSequence {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.steps.iter().map(StepWire::from))
    }
}

impl<'de> Deserialize<'de> for PossessionSequence {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let wires = Vec::<StepWire>::deserialize(deserializer)?;
        let steps = wires
            .into_iter()
            .map(PossessionStep::try_from)
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        PossessionSequence::new(steps).map_err(serde::de::Error::custom)
    }
}
