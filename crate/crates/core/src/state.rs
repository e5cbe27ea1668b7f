//! Match geometry: pitch, player positions and the ball holder.
//!
//! Coordinates are meters with the origin at a corner flag. The team in
//! possession always attacks toward `x = length`; the target goal is centred
//! at `(length, width / 2)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::network::{PlayerId, TEAM_SIZE};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pitch {
    pub length: f64,
    pub width: f64,
}

impl Default for Pitch {
    fn default() -> Self {
        Self {
            length: 105.0,
            width: 68.0,
        }
    }
}

impl Pitch {
    pub fn new(length: f64, width: f64) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(ModelError::InvalidState(format!(
                "pitch length {length} must be positive"
            )));
        }
        if !(width.is_finite() && width > 0.0) {
            return Err(ModelError::InvalidState(format!(
                "pitch width {width} must be positive"
            )));
        }
        Ok(Self { length, width })
    }

    pub fn contains(&self, p: Point) -> bool {
        (0.0..=self.length).contains(&p.x) && (0.0..=self.width).contains(&p.y)
    }

    pub fn clamp(&self, p: Point) -> Point {
        Point::new(p.x.clamp(0.0, self.length), p.y.clamp(0.0, self.width))
    }

    /// Centre of the goal being attacked.
    pub fn goal_center(&self) -> Point {
        Point::new(self.length, self.width / 2.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Distance from `self` to the segment `a..b`.
    pub fn distance_to_segment(self, a: Point, b: Point) -> f64 {
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        let len2 = dx * dx + dy * dy;
        if len2 == 0.0 {
            return self.distance(a);
        }
        let t = (((self.x - a.x) * dx + (self.y - a.y) * dy) / len2).clamp(0.0, 1.0);
        self.distance(Point::new(a.x + t * dx, a.y + t * dy))
    }

    /// Moves up to `step` meters toward `target`, never past it.
    pub fn toward(self, target: Point, step: f64) -> Point {
        let d = self.distance(target);
        if d <= step || d == 0.0 {
            return target;
        }
        let k = step / d;
        Point::new(
            self.x + k * (target.x - self.x),
            self.y + k * (target.y - self.y),
        )
    }
}

/// A player's position. `outside` marks players off the field of play
/// (injured, sent off, or temporarily out); their coordinates are not bound
/// to the pitch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Placement {
    pub pos: Point,
    pub outside: bool,
}

impl Placement {
    pub fn on_pitch(x: f64, y: f64) -> Self {
        Self {
            pos: Point::new(x, y),
            outside: false,
        }
    }

    pub fn outside(x: f64, y: f64) -> Self {
        Self {
            pos: Point::new(x, y),
            outside: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchState {
    pitch: Pitch,
    team: BTreeMap<PlayerId, Placement>,
    opponents: Vec<Placement>,
    holder: PlayerId,
}

impl MatchState {
    pub fn new(
        pitch: Pitch,
        team: BTreeMap<PlayerId, Placement>,
        opponents: Vec<Placement>,
        holder: PlayerId,
    ) -> Result<Self> {
        let pitch = Pitch::new(pitch.length, pitch.width)?;
        if team.len() != usize::from(TEAM_SIZE) {
            return Err(ModelError::InvalidState(format!(
                "team has {} players, expected 11",
                team.len()
            )));
        }
        if opponents.len() != usize::from(TEAM_SIZE) {
            return Err(ModelError::InvalidState(format!(
                "opponents has {} players, expected 11",
                opponents.len()
            )));
        }
        let check = |who: String, pl: &Placement| -> Result<()> {
            if !(pl.pos.x.is_finite() && pl.pos.y.is_finite()) {
                return Err(ModelError::InvalidState(format!(
                    "{who} has a non-finite coordinate"
                )));
            }
            if !pl.outside && !pitch.contains(pl.pos) {
                return Err(ModelError::InvalidState(format!(
                    "{who} at ({}, {}) is off the pitch",
                    pl.pos.x, pl.pos.y
                )));
            }
            Ok(())
        };
        for (id, pl) in &team {
            check(format!("teammate {id}"), pl)?;
        }
        for (k, pl) in opponents.iter().enumerate() {
            check(format!("opponent {k}"), pl)?;
        }
        if team[&holder].outside {
            return Err(ModelError::InvalidState(format!(
                "holder {holder} is outside"
            )));
        }
        Ok(Self {
            pitch,
            team,
            opponents,
            holder,
        })
    }

    pub fn pitch(&self) -> &Pitch {
        &self.pitch
    }

    pub fn holder(&self) -> PlayerId {
        self.holder
    }

    pub fn team(&self) -> &BTreeMap<PlayerId, Placement> {
        &self.team
    }

    pub fn opponents(&self) -> &[Placement] {
        &self.opponents
    }

    pub fn placement(&self, id: PlayerId) -> Placement {
        self.team[&id]
    }

    pub fn ball(&self) -> Point {
        self.team[&self.holder].pos
    }

    /// Opponents currently on the field of play.
    pub fn active_opponents(&self) -> impl Iterator<Item = Point> + '_ {
        self.opponents.iter().filter(|o| !o.outside).map(|o| o.pos)
    }

    pub fn nearest_opponent_distance(&self, from: Point) -> Option<f64> {
        self.active_opponents()
            .map(|o| from.distance(o))
            .min_by(f64::total_cmp)
    }

    /// Same state with the ball given to `holder`.
    pub fn with_holder(&self, holder: PlayerId) -> Result<Self> {
        if self.team[&holder].outside {
            return Err(ModelError::InvalidState(format!(
                "holder {holder} is outside"
            )));
        }
        let mut next = self.clone();
        next.holder = holder;
        Ok(next)
    }

    /// Offside in the model sense: ahead of the ball and ahead of the
    /// second-last opponent, both strictly, in the attack direction.
    pub fn is_offside(&self, j: PlayerId) -> bool {
        if j == self.holder {
            return false;
        }
        let x = self.team[&j].pos.x;
        let mut xs: Vec<f64> = self.active_opponents().map(|o| o.x).collect();
        xs.sort_by(|a, b| b.total_cmp(a));
        let second_last = xs.get(1).copied().unwrap_or(self.pitch.length);
        x > self.ball().x && x > second_last
    }

    /// Whether `j` can currently be passed to at all.
    pub fn is_available(&self, j: PlayerId) -> bool {
        !self.team[&j].outside && !self.is_offside(j)
    }

    pub(crate) fn team_mut(&mut self) -> &mut BTreeMap<PlayerId, Placement> {
        &mut self.team
    }

    pub(crate) fn opponents_mut(&mut self) -> &mut [Placement] {
        &mut self.opponents
    }
}
