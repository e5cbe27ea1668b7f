//! Edge-vector networks.
//!
//! An n-network is a graph whose every edge carries a real vector of fixed
//! arity n. The football model only ever uses n = 4: the ball holder `i` is
//! joined to each teammate `j` by an edge carrying `(s_i, tau_i, p_ij, r_j)`.
//! [`NNetwork`] is the general container; [`DecisionNetwork`] is the
//! specialised, validated 4-network of a single ball holder.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};

/// Number of players per side.
pub const TEAM_SIZE: u8 = 11;
/// Upper bound of the integer risk scale.
pub const MAX_RISK: u8 = 10;

/// Team-relative shirt slot, 1..=11.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "u8")]
pub struct PlayerId(u8);

impl PlayerId {
    pub fn new(index: u8) -> Result<Self> {
        Self::try_from(i64::from(index))
    }

    pub fn index(self) -> u8 {
        self.0
    }

    /// All eleven ids in ascending order.
    pub fn all() -> impl Iterator<Item = PlayerId> {
        (1..=TEAM_SIZE).map(PlayerId)
    }
}

impl TryFrom<i64> for PlayerId {
    type Error = ModelError;

    fn try_from(value: i64) -> Result<Self> {
        if (1..=i64::from(TEAM_SIZE)).contains(&value) {
            Ok(PlayerId(value as u8))
        } else {
            Err(ModelError::InvalidPlayerId(value))
        }
    }
}

impl From<PlayerId> for u8 {
    fn from(id: PlayerId) -> u8 {
        id.0
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

/// A graph whose edges each carry a vector of the same arity.
///
/// Edges are undirected; `{a, b}` and `{b, a}` address the same slot.
#[derive(Debug, Clone, PartialEq)]
pub struct NNetwork<N: Ord + Copy> {
    arity: usize,
    edges: BTreeMap<(N, N), Vec<f64>>,
}

impl<N: Ord + Copy> NNetwork<N> {
    pub fn new(arity: usize) -> Result<Self> {
        if arity == 0 {
            return Err(ModelError::ZeroArity);
        }
        Ok(Self {
            arity,
            edges: BTreeMap::new(),
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Inserts or replaces the vector on edge `{a, b}`.
    pub fn insert_edge(&mut self, a: N, b: N, vector: Vec<f64>) -> Result<()> {
        if vector.len() != self.arity {
            return Err(ModelError::ArityMismatch {
                expected: self.arity,
                got: vector.len(),
            });
        }
        self.edges.insert(Self::key(a, b), vector);
        Ok(())
    }

    pub fn edge(&self, a: N, b: N) -> Option<&[f64]> {
        self.edges.get(&Self::key(a, b)).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = ((N, N), &[f64])> {
        self.edges.iter().map(|(k, v)| (*k, v.as_slice()))
    }

    fn key(a: N, b: N) -> (N, N) {
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }
}

/// The 4-vector `(s, tau, p, r)` carried by one edge of a holder's network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeVector4 {
    s: f64,
    tau: f64,
    p: f64,
    r: u8,
}

impl EdgeVector4 {
    /// Validates every component. `id` only labels the error.
    pub fn new(s: f64, tau: f64, p: f64, r: u8, id: PlayerId) -> Result<Self> {
        let out = |field, value| ModelError::EdgeValueOutOfRange {
            field,
            value,
            id: id.index(),
        };
        if !is_probability(s) {
            return Err(out("s", s));
        }
        if !(tau.is_finite() && tau >= 0.0) {
            return Err(out("tau", tau));
        }
        if !is_probability(p) {
            return Err(out("p", p));
        }
        if r > MAX_RISK {
            return Err(out("r", f64::from(r)));
        }
        Ok(Self { s, tau, p, r })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn r(&self) -> u8 {
        self.r
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.s, self.tau, self.p, f64::from(self.r)]
    }
}

pub(crate) fn is_probability(v: f64) -> bool {
    (0.0..=1.0).contains(&v)
}

/// The 4-network `N(i)` of ball holder `i`: one edge to each of the ten
/// teammates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NetworkWire", into = "NetworkWire")]
pub struct DecisionNetwork {
    holder: PlayerId,
    edges: BTreeMap<PlayerId, EdgeVector4>,
}

impl DecisionNetwork {
    /// Builds `N(holder)` from the holder's `(s, tau)` and a `(p, r)` pair per
    /// teammate. `per_teammate` must contain exactly the ten ids other than
    /// the holder.
    pub fn build(
        holder: PlayerId,
        s: f64,
        tau: f64,
        per_teammate: &BTreeMap<PlayerId, (f64, u8)>,
    ) -> Result<Self> {
        if per_teammate.contains_key(&holder) {
            return Err(ModelError::SelfEdge(holder.index()));
        }
        let mut edges = BTreeMap::new();
        for j in PlayerId::all().filter(|&j| j != holder) {
            let &(p, r) = per_teammate
                .get(&j)
                .ok_or(ModelError::MissingTeammate(j.index()))?;
            edges.insert(j, EdgeVector4::new(s, tau, p, r, j)?);
        }
        Ok(Self { holder, edges })
    }

    pub fn holder(&self) -> PlayerId {
        self.holder
    }

    /// Holder's scoring probability, shared by every edge.
    pub fn s(&self) -> f64 {
        self.first_edge().s
    }

    /// Holder's decision time in seconds, shared by every edge.
    pub fn tau(&self) -> f64 {
        self.first_edge().tau
    }

    fn first_edge(&self) -> &EdgeVector4 {
        self.edges
            .values()
            .next()
            .expect("a decision network always has ten edges")
    }

    /// The vector on edge `{holder, j}`.
    pub fn edge(&self, j: PlayerId) -> Result<EdgeVector4> {
        self.edges
            .get(&j)
            .copied()
            .ok_or(ModelError::SelfEdge(j.index()))
    }

    /// Edges in ascending teammate order.
    pub fn edges(&self) -> impl Iterator<Item = (PlayerId, &EdgeVector4)> {
        self.edges.iter().map(|(j, e)| (*j, e))
    }

    /// Returns a copy with `p = r = 0` on the edge to `j` (offside or
    /// outside the pitch).
    pub fn mark_unavailable(&self, j: PlayerId) -> Result<Self> {
        if j == self.holder {
            return Err(ModelError::HolderMarked);
        }
        let mut next = self.clone();
        let edge = next
            .edges
            .get_mut(&j)
            .expect("every non-holder id has an edge");
        edge.p = 0.0;
        edge.r = 0;
        Ok(next)
    }

    /// View as a generic arity-4 network over player ids.
    pub fn to_n_network(&self) -> NNetwork<PlayerId> {
        let mut net = NNetwork::new(4).expect("arity 4");
        for (j, e) in self.edges() {
            net.insert_edge(self.holder, j, e.to_array().to_vec())
                .expect("arity 4");
        }
        net
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkWire {
    holder: i64,
    s: f64,
    tau: f64,
    edges: Vec<EdgeWire>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeWire {
    to: i64,
    p: f64,
    r: i64,
}

impl TryFrom<NetworkWire> for DecisionNetwork {
    type Error = ModelError;

    fn try_from(wire: NetworkWire) -> Result<Self> {
        let holder = PlayerId::try_from(wire.holder)?;
        let mut per_teammate = BTreeMap::new();
        for e in &wire.edges {
            let to = PlayerId::try_from(e.to)?;
            if !(0..=i64::from(MAX_RISK)).contains(&e.r) {
                return Err(ModelError::EdgeValueOutOfRange {
                    field: "r",
                    value: e.r as f64,
                    id: to.index(),
                });
            }
            if per_teammate.insert(to, (e.p, e.r as u8)).is_some() {
                return Err(ModelError::UnexpectedTeammate(to.index()));
            }
        }
        DecisionNetwork::build(holder, wire.s, wire.tau, &per_teammate)
    }
}

impl From<DecisionNetwork> for NetworkWire {
    fn from(net: DecisionNetwork) -> Self {
        NetworkWire {
            holder: i64::from(net.holder.index()),
            s: net.s(),
            tau: net.tau(),
            edges: net
                .edges()
                .map(|(j, e)| EdgeWire {
                    to: i64::from(j.index()),
                    p: e.p,
                    r: i64::from(e.r),
                })
                .collect(),
        }
    }
}
