//! Event-based social network formation: exact meeting rates, Nash
//! stability checks, constructions of stable configurations, and metrics
//! over the induced networks.

pub mod constructions;
pub mod degree_sequence;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod model;
pub mod rational;
pub mod stability;

pub use error::{Error, Result};
pub use graph::Graph;
pub use model::{
    connection_graph, cost, meeting_rate, meeting_rate_by, utility, AgentId, ConnectionGraph, Event,
    EventConfiguration, FixedCost, InfinitesimalUtility, Parameters, Strategy,
};
pub use rational::Rational;
pub use stability::{check_stability_criterion, check_stability_deviation, is_stable, StabilityReport};
