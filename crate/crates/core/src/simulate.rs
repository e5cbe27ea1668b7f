//! Stochastic possession rollouts and Monte Carlo style comparison.
//!
//! Every trial draws from its own ChaCha8 stream seeded by
//! [`derive_trial_seed`], so results depend only on the base seed and the
//! (style index, trial index) pair, never on thread scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decision::{decide, Decision, DecisionPolicy};
use crate::error::{ModelError, Result};
use crate::estimators::{estimate_network, DefaultEstimators, EstimatorSuite};
use crate::network::PlayerId;
use crate::sequence::{PossessionSequence, PossessionStep, RunningMetrics, StepOutcome};
use crate::state::MatchState;
use crate::style::{LinearStyle, StyleClass};

pub const DEFAULT_MAX_STEPS: u32 = 30;

/// Drift applied after every completed pass: teammates other than the
/// receiver step toward the goal centre, opponents step toward the ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MovementModel {
    pub drift_m: f64,
}

impl Default for MovementModel {
    fn default() -> Self {
        Self { drift_m: 2.0 }
    }
}

impl MovementModel {
    /// State after a completed pass to `receiver`. Outside players stay put.
    pub fn advance(&self, state: &MatchState, receiver: PlayerId) -> Result<MatchState> {
        let mut next = state.with_holder(receiver)?;
        let pitch = *next.pitch();
        let goal = pitch.goal_center();
        let ball = next.ball();
        for (id, pl) in next.team_mut().iter_mut() {
            if *id != receiver && !pl.outside {
                pl.pos = pitch.clamp(pl.pos.toward(goal, self.drift_m));
            }
        }
        for pl in next.opponents_mut().iter_mut().filter(|o| !o.outside) {
            pl.pos = pitch.clamp(pl.pos.toward(ball, self.drift_m));
        }
        Ok(next)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig<E = DefaultEstimators> {
    pub policy: DecisionPolicy,
    pub estimators: E,
    pub max_steps: u32,
    pub seed: u64,
    pub movement: MovementModel,
}

impl<E: EstimatorSuite> SimulationConfig<E> {
    pub fn new(policy: DecisionPolicy, estimators: E, seed: u64) -> Self {
        Self {
            policy,
            estimators,
            max_steps: DEFAULT_MAX_STEPS,
            seed,
            movement: MovementModel::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.max_steps == 0 {
            return Err(ModelError::ValueOutOfRange {
                field: "max_steps",
                value: 0.0,
            });
        }
        if !(self.movement.drift_m.is_finite() && self.movement.drift_m >= 0.0) {
            return Err(ModelError::ValueOutOfRange {
                field: "drift_m",
                value: self.movement.drift_m,
            });
        }
        Ok(())
    }
}

/// A rollout together with the metrics tracked while it was built.
#[derive(Debug, Clone, PartialEq)]
pub struct Rollout {
    pub sequence: PossessionSequence,
    pub metrics: RunningMetrics,
}

/// Plays out one possession from `state`, seeded by `cfg.seed`.
pub fn simulate_possession<E: EstimatorSuite>(
    state: &MatchState,
    cfg: &SimulationConfig<E>,
) -> Result<PossessionSequence> {
    simulate_tracked(state, cfg).map(|r| r.sequence)
}

/// Like [`simulate_possession`] but also returns the running metrics.
///
/// Shots score with probability `s`. A pass completes with probability `p`;
/// failure ends the possession as an interception. A degenerate pass (no
/// teammate scores above zero) ends it as a forced loss without a draw, as
/// does a pass decision on the last allowed step.
pub fn simulate_tracked<E: EstimatorSuite>(
    state: &MatchState,
    cfg: &SimulationConfig<E>,
) -> Result<Rollout> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut state = state.clone();
    let mut steps = Vec::new();
    let mut metrics = RunningMetrics::default();
    for k in 0..cfg.max_steps {
        let network = estimate_network(&state, &cfg.estimators)?;
        let decision = decide(&network, &cfg.policy);
        let outcome = match decision {
            Decision::Shoot => StepOutcome::ShotTaken {
                scored: draw(&mut rng, network.s()),
            },
            Decision::Pass {
                degenerate: true, ..
            } => StepOutcome::ForcedLoss,
            Decision::Pass { .. } if k + 1 == cfg.max_steps => StepOutcome::ForcedLoss,
            Decision::Pass { target, .. } => {
                let p = network.edge(target)?.p();
                if draw(&mut rng, p) {
                    StepOutcome::PassCompleted
                } else {
                    StepOutcome::PassIntercepted
                }
            }
        };
        let step = PossessionStep::new(network, decision, outcome)?;
        metrics.observe(&step);
        steps.push(step);
        match (outcome, decision) {
            (StepOutcome::PassCompleted, Decision::Pass { target, .. }) => {
                state = cfg.movement.advance(&state, target)?;
            }
            _ => break,
        }
    }
    Ok(Rollout {
        sequence: PossessionSequence::new(steps)?,
        metrics,
    })
}

fn draw(rng: &mut ChaCha8Rng, probability: f64) -> bool {
    rng.gen::<f64>() < probability
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of one trial: SplitMix64 folded over the base seed, the style index
/// and the trial index.
pub fn derive_trial_seed(base: u64, style_index: u64, trial_index: u64) -> u64 {
    let h = splitmix64(base);
    let h = splitmix64(h ^ style_index);
    splitmix64(h ^ trial_index)
}

/// How many worker threads Monte Carlo runs may use.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    /// Rayon's global pool.
    #[default]
    Global,
    Threads(usize),
}

/// Runs `trials` rollouts for one style slot. Result order is trial order.
pub fn run_trials<E: EstimatorSuite>(
    state: &MatchState,
    cfg: &SimulationConfig<E>,
    style_index: u64,
    trials: u32,
    parallelism: Parallelism,
) -> Result<Vec<Rollout>> {
    let one = |t: u32| {
        let seed = derive_trial_seed(cfg.seed, style_index, u64::from(t));
        simulate_tracked(state, &with_seed(cfg, seed))
    };
    match parallelism {
        Parallelism::Sequential => (0..trials).map(one).collect(),
        Parallelism::Global => (0..trials).into_par_iter().map(one).collect(),
        Parallelism::Threads(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| ModelError::InvalidState(format!("thread pool: {e}")))?;
            pool.install(|| (0..trials).into_par_iter().map(one).collect())
        }
    }
}

fn with_seed<E: EstimatorSuite>(cfg: &SimulationConfig<E>, seed: u64) -> SimulationConfig<&E> {
    SimulationConfig {
        policy: cfg.policy.clone(),
        estimators: &cfg.estimators,
        max_steps: cfg.max_steps,
        seed,
        movement: cfg.movement,
    }
}

impl<E: EstimatorSuite + ?Sized> EstimatorSuite for &E {
    fn score_prob(&self, state: &MatchState) -> f64 {
        (**self).score_prob(state)
    }
    fn decision_time(&self, state: &MatchState) -> f64 {
        (**self).decision_time(state)
    }
    fn pass_prob(&self, state: &MatchState, target: PlayerId, tau: f64) -> Result<f64> {
        (**self).pass_prob(state, target, tau)
    }
    fn risk(&self, state: &MatchState, target: PlayerId) -> Result<i64> {
        (**self).risk(state, target)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StyleReport {
    pub style: LinearStyle,
    pub class: StyleClass,
    pub trials: u32,
    pub mean_efficiency: f64,
    pub mean_security: f64,
    pub goal_rate: f64,
    pub mean_length: f64,
}

impl StyleReport {
    /// Aggregates rollouts in the given (trial) order.
    pub fn from_rollouts(style: LinearStyle, rollouts: &[Rollout]) -> Self {
        let n = rollouts.len() as f64;
        let mut sum = (0.0, 0.0, 0u64, 0u64);
        for r in rollouts {
            sum.0 += r.metrics.efficiency;
            sum.1 += r.metrics.security;
            sum.2 += u64::from(r.sequence.scored());
            sum.3 += r.sequence.len() as u64;
        }
        Self {
            style,
            class: style.classify(),
            trials: rollouts.len() as u32,
            mean_efficiency: sum.0 / n,
            mean_security: sum.1 / n,
            goal_rate: sum.2 as f64 / n,
            mean_length: sum.3 as f64 / n,
        }
    }
}

/// Simulates `trials` possessions per style from the same state and
/// summarises each style. `base.policy`'s style is replaced per entry; its
/// threshold and tie-break are kept.
pub fn monte_carlo_compare<E: EstimatorSuite>(
    state: &MatchState,
    styles: &[LinearStyle],
    trials: u32,
    base: &SimulationConfig<E>,
    parallelism: Parallelism,
) -> Result<Vec<StyleReport>> {
    if styles.is_empty() {
        return Err(ModelError::Empty("style list"));
    }
    if trials == 0 {
        return Err(ModelError::ValueOutOfRange {
            field: "trials",
            value: 0.0,
        });
    }
    styles
        .iter()
        .enumerate()
        .map(|(k, &style)| {
            let policy = DecisionPolicy::new(style, base.policy.threshold())?
                .with_tie_break(base.policy.tie_break());
            let cfg = SimulationConfig {
                policy,
                estimators: &base.estimators,
                max_steps: base.max_steps,
                seed: base.seed,
                movement: base.movement,
            };
            let rollouts = run_trials(state, &cfg, k as u64, trials, parallelism)?;
            Ok(StyleReport::from_rollouts(style, &rollouts))
        })
        .collect()
}
