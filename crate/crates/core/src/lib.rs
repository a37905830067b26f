//! Agent-based simulation of recommendation sharing among socially
//! connected vehicles.
//!
//! Vehicles follow weekly visit plans over a small set of points of
//! interest whose quality drifts over time. Depending on the strategy, a
//! vehicle blacklists PoIs that disappointed it and refills its plan from
//! friends it met repeatedly at the same places, optionally growing its
//! network through triadic closure. Each run reports a quality index, a
//! connectivity index, the spread of PoI utilization, and how many
//! vehicles made no visit at all in each week.

pub mod agents;
pub mod engine;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod plan;
pub mod quality;
pub mod strategy;
pub mod ties;

pub use agents::{Poi, PoiId, Vehicle, VehicleId, VehicleState};
pub use engine::{run, Event, SimConfig, World};
pub use error::{ConfigError, ExperimentError, SimError};
pub use experiment::{load_config, run_experiment, AggregateSeries, ExperimentSpec};
pub use metrics::{MetricsSample, RunSeries};
pub use plan::{Plan, PlanRow};
pub use strategy::StrategyKind;
pub use ties::{TieRecord, TieTable};
