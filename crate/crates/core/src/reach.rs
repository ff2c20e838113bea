//! Temporal graphs induced by temporalisations and temporal reachability.
//!
//! A temporal edge `(u, v, t, travel)` can be taken from `u` at time `t`,
//! arriving at `v` at `t + travel`. A temporal path requires each edge to
//! start no earlier than the previous edge's arrival; since travel times are
//! at least 1, start times strictly increase along a path. Earliest arrivals
//! are therefore computed by a single pass over the start-sorted edge list.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{NodeId, Temporalisation, Time, TripNetwork};

/// Arrival sentinel for the source: available from the beginning.
pub const FROM_START: Time = i64::MIN;
const UNREACHED: Time = i64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemporalEdge {
    pub tail: NodeId,
    pub head: NodeId,
    pub start: Time,
    pub travel: Time,
}

impl TemporalEdge {
    pub fn arrival(&self) -> Time {
        self.start + self.travel
    }
}

/// A start-sorted list of temporal edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemporalGraph {
    pub node_count: usize,
    pub temporal_edges: Vec<TemporalEdge>,
}

/// One temporal edge per trip edge: the i-th edge of a trip starts at the trip
/// start plus the prefix weight sum. Edges are sorted by nondecreasing start
/// (stable in trip/position order).
pub fn induce_temporal_graph(net: &TripNetwork, tau: &Temporalisation) -> Result<TemporalGraph> {
    tau.check_len(net)?;
    let mut edges = Vec::with_capacity(net.total_trip_len());
    for (t, trip) in net.trips.iter().enumerate() {
        let mut clock = tau.starts[t];
        for &eid in &trip.edge_ids {
            let e = net.edges[eid];
            let arrival = clock.checked_add(e.weight).ok_or(Error::Overflow("temporal edge arrival"))?;
            edges.push(TemporalEdge { tail: e.tail, head: e.head, start: clock, travel: e.weight });
            clock = arrival;
        }
    }
    edges.sort_by_key(|e| e.start);
    Ok(TemporalGraph { node_count: net.node_count, temporal_edges: edges })
}

/// Earliest arrival time per node over temporal paths from `source`.
/// The source gets [`FROM_START`]; unreachable nodes are `None`.
pub fn earliest_arrival(g: &TemporalGraph, source: NodeId) -> Vec<Option<Time>> {
    let mut arr = vec![UNREACHED; g.node_count];
    earliest_arrival_into(g, source, &mut arr);
    arr.into_iter().map(|a| if a == UNREACHED { None } else { Some(a) }).collect()
}

/// Scan form of [`earliest_arrival`] writing into a reusable buffer; returns
/// the number of reached nodes (including the source).
fn earliest_arrival_into(g: &TemporalGraph, source: NodeId, arr: &mut [Time]) -> usize {
    arr.fill(UNREACHED);
    arr[source] = FROM_START;
    let mut reached = 1usize;
    for e in &g.temporal_edges {
        if arr[e.tail] <= e.start {
            let arrival = e.start + e.travel;
            let slot = &mut arr[e.head];
            if *slot == UNREACHED {
                reached += 1;
                *slot = arrival;
            } else if arrival < *slot {
                *slot = arrival;
            }
        }
    }
    reached
}

/// Per-source temporal reach counts (self-reachability always counted) with
/// optional sorted reach sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReachReport {
    pub per_source: Vec<u64>,
    pub total: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subtotal_sources: Option<Vec<NodeId>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subtotal: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sets: Option<Vec<Vec<NodeId>>>,
}

impl ReachReport {
    /// Sum of per-source counts over a listed subset of sources.
    pub fn subtotal_over(&self, sources: &[NodeId]) -> u64 {
        sources.iter().map(|&s| self.per_source[s]).sum()
    }

    /// Attaches the subtotal convention over the listed sources.
    pub fn with_subtotal(mut self, sources: &[NodeId]) -> ReachReport {
        self.subtotal = Some(self.subtotal_over(sources));
        self.subtotal_sources = Some(sources.to_vec());
        self
    }

    fn from_counts(per_source: Vec<u64>, sets: Option<Vec<Vec<NodeId>>>) -> ReachReport {
        let total = per_source.iter().sum();
        ReachReport { per_source, total, subtotal_sources: None, subtotal: None, sets }
    }
}

/// Temporal reachability of every source under a temporalisation.
pub fn reach_report(net: &TripNetwork, tau: &Temporalisation, want_sets: bool) -> Result<ReachReport> {
    reach_report_threads(net, tau, want_sets, 1)
}

/// [`reach_report`] with per-source computations fanned out over `threads`
/// workers. Sources are independent and read-only on the sorted edge list, so
/// the report is identical for every thread count.
pub fn reach_report_threads(
    net: &TripNetwork,
    tau: &Temporalisation,
    want_sets: bool,
    threads: usize,
) -> Result<ReachReport> {
    let g = induce_temporal_graph(net, tau)?;
    let n = g.node_count;
    let threads = threads.max(1).min(n.max(1));
    let mut per_source = vec![0u64; n];
    let mut sets = if want_sets { vec![Vec::new(); n] } else { Vec::new() };

    fn scan_sources(g: &TemporalGraph, base: usize, counts: &mut [u64], mut sets: Option<&mut [Vec<NodeId>]>) {
        let n = g.node_count;
        let mut arr = vec![0i64; n];
        for (off, slot) in counts.iter_mut().enumerate() {
            *slot = earliest_arrival_into(g, base + off, &mut arr) as u64;
            if let Some(sets) = sets.as_mut() {
                sets[off] = (0..n).filter(|&v| arr[v] != UNREACHED).collect();
            }
        }
    }

    if threads <= 1 || n <= 1 {
        scan_sources(&g, 0, &mut per_source, if want_sets { Some(&mut sets) } else { None });
    } else {
        let chunk = n.div_ceil(threads);
        let count_slices: Vec<&mut [u64]> = per_source.chunks_mut(chunk).collect();
        let mut set_slices: std::collections::VecDeque<&mut [Vec<NodeId>]> =
            if want_sets { sets.chunks_mut(chunk).collect() } else { Default::default() };
        std::thread::scope(|scope| {
            for (i, counts) in count_slices.into_iter().enumerate() {
                let set_chunk = set_slices.pop_front();
                let g = &g;
                scope.spawn(move || scan_sources(g, i * chunk, counts, set_chunk));
            }
        });
    }

    Ok(ReachReport::from_counts(per_source, if want_sets { Some(sets) } else { None }))
}

/// Static reachability of the underlying multidigraph (self included), in the
/// same report shape as the temporal one.
pub fn digraph_reach_count(net: &TripNetwork) -> ReachReport {
    let sets = net.static_reach_sets();
    let per_source: Vec<u64> = sets.iter().map(|s| s.len() as u64).collect();
    ReachReport::from_counts(per_source, Some(sets))
}
