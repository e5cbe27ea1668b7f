//! Estimators for the four decision parameters `(s, tau, p, r)`.
//!
//! [`EstimatorSuite`] is the pluggable interface; [`DefaultEstimators`] is a
//! closed-form geometric model whose constants all live in
//! [`EstimatorConstants`] and can be overridden from the config file.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::network::{is_probability, DecisionNetwork, PlayerId, MAX_RISK};
use crate::state::{MatchState, Point};

pub trait EstimatorSuite: Send + Sync {
    /// Holder's probability of scoring with a shot now.
    fn score_prob(&self, state: &MatchState) -> f64;
    /// Seconds the holder has before pressure forces an action.
    fn decision_time(&self, state: &MatchState) -> f64;
    /// Probability a pass to `target` is received comfortably.
    fn pass_prob(&self, state: &MatchState, target: PlayerId, tau: f64) -> Result<f64>;
    /// Threat on the opponent goal, 0..=10, if `target` receives the ball.
    fn risk(&self, state: &MatchState, target: PlayerId) -> Result<i64>;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimatorConstants {
    /// Distance scale of the scoring-probability decay.
    pub score_decay_m: f64,
    pub goal_width_m: f64,
    /// Closing speed of the nearest opponent.
    pub pressure_speed_mps: f64,
    pub time_cap_s: f64,
    /// Distance scale of the pass-completion decay.
    pub pass_decay_m: f64,
    /// Logistic scale of an opponent's distance to the passing lane.
    pub lane_half_width_m: f64,
    /// Time scale of the `1 - exp(-tau / scale)` readiness factor.
    pub tau_scale_s: f64,
    /// Distance at which a receiver counts as fully unmarked.
    pub openness_radius_m: f64,
    pub risk_score_weight: f64,
    pub risk_openness_weight: f64,
}

impl Default for EstimatorConstants {
    fn default() -> Self {
        Self {
            score_decay_m: 20.0,
            goal_width_m: 7.32,
            pressure_speed_mps: 5.0,
            time_cap_s: 4.0,
            pass_decay_m: 30.0,
            lane_half_width_m: 2.0,
            tau_scale_s: 1.0,
            openness_radius_m: 10.0,
            risk_score_weight: 0.7,
            risk_openness_weight: 0.3,
        }
    }
}

impl EstimatorConstants {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("score_decay_m", self.score_decay_m),
            ("pressure_speed_mps", self.pressure_speed_mps),
            ("pass_decay_m", self.pass_decay_m),
            ("lane_half_width_m", self.lane_half_width_m),
            ("tau_scale_s", self.tau_scale_s),
            ("openness_radius_m", self.openness_radius_m),
        ];
        for (field, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(ModelError::ValueOutOfRange { field, value });
            }
        }
        let nonnegative = [
            ("goal_width_m", self.goal_width_m),
            ("time_cap_s", self.time_cap_s),
            ("risk_score_weight", self.risk_score_weight),
            ("risk_openness_weight", self.risk_openness_weight),
        ];
        for (field, value) in nonnegative {
            if !(value.is_finite() && value >= 0.0) {
                return Err(ModelError::ValueOutOfRange { field, value });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DefaultEstimators {
    pub constants: EstimatorConstants,
}

impl DefaultEstimators {
    pub fn new(constants: EstimatorConstants) -> Result<Self> {
        constants.validate()?;
        Ok(Self { constants })
    }

    /// Scoring probability for a shot taken from `pos`:
    /// `exp(-d / decay) * cos(theta)`, where `d` is the distance to the goal
    /// centre and `theta` the angle between the attack direction and the ray
    /// to the nearer goalpost (zero when `pos` is level with the goal mouth).
    pub fn score_prob_at(&self, state: &MatchState, pos: Point) -> f64 {
        let c = &self.constants;
        let goal = state.pitch().goal_center();
        let d = pos.distance(goal);
        let dx = (goal.x - pos.x).max(0.0);
        let wide = ((pos.y - goal.y).abs() - c.goal_width_m / 2.0).max(0.0);
        let cos_theta = if wide == 0.0 {
            1.0
        } else {
            dx / dx.hypot(wide)
        };
        ((-d / c.score_decay_m).exp() * cos_theta.max(0.0)).clamp(0.0, 1.0)
    }

    /// How unmarked a point is: nearest-opponent distance over the openness
    /// radius, capped at 1.
    pub fn openness_at(&self, state: &MatchState, pos: Point) -> f64 {
        state
            .nearest_opponent_distance(pos)
            .map_or(1.0, |d| (d / self.constants.openness_radius_m).min(1.0))
    }

    /// Minimum over opponents of `sigmoid(d_perp / lane_half_width)`.
    pub fn lane_openness(&self, state: &MatchState, from: Point, to: Point) -> f64 {
        state
            .active_opponents()
            .map(|o| sigmoid(o.distance_to_segment(from, to) / self.constants.lane_half_width_m))
            .fold(1.0, f64::min)
    }
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

fn reject_holder(state: &MatchState, target: PlayerId) -> Result<()> {
    if target == state.holder() {
        Err(ModelError::SelfEdge(target.index()))
    } else {
        Ok(())
    }
}

impl EstimatorSuite for DefaultEstimators {
    fn score_prob(&self, state: &MatchState) -> f64 {
        self.score_prob_at(state, state.ball())
    }

    /// `min(d_nearest / speed, cap)`.
    fn decision_time(&self, state: &MatchState) -> f64 {
        let c = &self.constants;
        state
            .nearest_opponent_distance(state.ball())
            .map_or(c.time_cap_s, |d| {
                (d / c.pressure_speed_mps).min(c.time_cap_s)
            })
    }

    /// `exp(-d / decay) * lane_openness * (1 - exp(-tau / scale))`.
    fn pass_prob(&self, state: &MatchState, target: PlayerId, tau: f64) -> Result<f64> {
        reject_holder(state, target)?;
        let c = &self.constants;
        let from = state.ball();
        let to = state.placement(target).pos;
        let distance = (-from.distance(to) / c.pass_decay_m).exp();
        let readiness = 1.0 - (-tau / c.tau_scale_s).exp();
        Ok(distance * self.lane_openness(state, from, to) * readiness)
    }

    /// `round(10 * clamp(w_s * s(target) + w_o * openness(target)))`.
    fn risk(&self, state: &MatchState, target: PlayerId) -> Result<i64> {
        reject_holder(state, target)?;
        let c = &self.constants;
        let pos = state.placement(target).pos;
        let blend = c.risk_score_weight * self.score_prob_at(state, pos)
            + c.risk_openness_weight * self.openness_at(state, pos);
        Ok((10.0 * blend.clamp(0.0, 1.0)).round() as i64)
    }
}

/// Builds the holder's 4-network from a match state. Offside and outside
/// teammates are marked unavailable.
pub fn estimate_network<E: EstimatorSuite + ?Sized>(
    state: &MatchState,
    est: &E,
) -> Result<DecisionNetwork> {
    let oob = |estimator, value| ModelError::EstimatorOutOfBounds { estimator, value };
    let s = est.score_prob(state);
    if !is_probability(s) {
        return Err(oob("score_prob", s));
    }
    let tau = est.decision_time(state);
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(oob("decision_time", tau));
    }
    let holder = state.holder();
    let mut per_teammate = BTreeMap::new();
    for j in PlayerId::all().filter(|&j| j != holder) {
        let p = est.pass_prob(state, j, tau)?;
        if !is_probability(p) {
            return Err(oob("pass_prob", p));
        }
        let r = est.risk(state, j)?;
        if !(0..=i64::from(MAX_RISK)).contains(&r) {
            return Err(oob("risk", r as f64));
        }
        per_teammate.insert(j, (p, r as u8));
    }
    let mut network = DecisionNetwork::build(holder, s, tau, &per_teammate)?;
    for j in PlayerId::all().filter(|&j| j != holder) {
        if !state.is_available(j) {
            network = network.mark_unavailable(j)?;
        }
    }
    Ok(network)
}
