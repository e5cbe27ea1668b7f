//! Decision networks for football possessions.
//!
//! The ball holder's situation is a 4-network: one edge to each teammate,
//! carrying the holder's scoring probability and decision time together with
//! the pass-completion probability and receiver risk for that teammate. A
//! linear game-style function ranks the pass options, a threshold on the
//! scoring probability decides between shooting and passing, and chained
//! decisions form possession sequences scored by efficiency and security.

pub mod cli;
pub mod config;
pub mod decision;
pub mod error;
pub mod estimators;
pub mod io;
pub mod network;
pub mod sequence;
pub mod simulate;
pub mod state;
pub mod style;

pub use decision::{decide, ranked_options, Decision, DecisionPolicy, TieBreak};
pub use error::{ModelError, Result};
pub use estimators::{estimate_network, DefaultEstimators, EstimatorConstants, EstimatorSuite};
pub use network::{DecisionNetwork, EdgeVector4, NNetwork, PlayerId};
pub use sequence::{
    efficiency, is_p_secure, is_s_efficient, pareto_frontier, security, FrontierPoint,
    PossessionSequence, PossessionStep, RunningMetrics, StepOutcome,
};
pub use simulate::{
    monte_carlo_compare, simulate_possession, Parallelism, SimulationConfig, StyleReport,
};
pub use state::{MatchState, Pitch, Placement, Point};
pub use style::{LinearStyle, StyleClass, StyleFunction};
