//! Trip temporalisation on directed multigraphs.
//!
//! A trip network is a weighted multidigraph together with a collection of
//! trips (walks). A temporalisation assigns each trip a starting time, which
//! fixes the appearing time of every edge of the trip back to back; the crate
//! evaluates temporal reachability under such assignments, solves small
//! instances exactly, decides one-to-one feasibility, schedules symmetric
//! networks within a constant factor of all node pairs, and generates the
//! reduction and lower-bound instance families with embedded verification
//! metadata.

pub mod error;
pub mod gen;
pub mod model;
pub mod reach;
pub mod solve;

pub use error::{Error, Result};
pub use model::{
    AnySchedule, Edge, EdgeId, InstanceMeta, NodeId, Schedule, SymmetricPairing, Temporalisation,
    Time, Trip, TripId, TripNetwork, Violation, WeakSchedule, schedule_to_temporalisation,
    symmetric_pairing,
};
pub use reach::{
    ReachReport, TemporalEdge, TemporalGraph, digraph_reach_count, earliest_arrival,
    induce_temporal_graph, reach_report, reach_report_threads,
};
