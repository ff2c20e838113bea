//! Exact one-to-one temporalisability oracle.
//!
//! A target is reachable from a source under some assignment of trip start
//! times iff the induced multidigraph contains a path that is a concatenation
//! of subtrips of pairwise distinct trips. The oracle searches breadth-first
//! over states (node, set of used trips); the trip set is a 128-bit mask.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{AnySchedule, NodeId, Schedule, TripId, TripNetwork, schedule_to_temporalisation};
use crate::reach::{earliest_arrival, induce_temporal_graph};

/// One ride: board `trip` at `entry`, alight at `exit` (entry precedes exit
/// in the trip's node order).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSegment {
    pub trip: TripId,
    pub entry: NodeId,
    pub exit: NodeId,
}

/// A feasibility certificate: segments ride pairwise distinct trips, and
/// consecutive segments hand over at the same node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub source: NodeId,
    pub target: NodeId,
    pub segments: Vec<WitnessSegment>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleOutcome {
    pub feasible: bool,
    pub witness: Option<Witness>,
    pub explored: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    /// Restrict to at most this many distinct trips along the path.
    pub k_cap: Option<usize>,
    /// Visited-state cap.
    pub state_cap: usize,
}

pub const DEFAULT_STATE_CAP: usize = 2_000_000;

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { k_cap: None, state_cap: DEFAULT_STATE_CAP }
    }
}

/// Per-trip node occurrence index: for boarding/alighting checks we only need
/// the first and last position of each node in the trip's node sequence.
pub struct TripIndex {
    /// (node, first position, last position), sorted by node.
    occ: Vec<Vec<(NodeId, usize, usize)>>,
}

impl TripIndex {
    pub fn new(net: &TripNetwork) -> TripIndex {
        let occ = (0..net.trip_count())
            .map(|t| {
                let nodes = net.trip_nodes(t).expect("validated trip");
                let mut map: HashMap<NodeId, (usize, usize)> = HashMap::new();
                for (pos, &v) in nodes.iter().enumerate() {
                    map.entry(v).and_modify(|e| e.1 = pos).or_insert((pos, pos));
                }
                let mut v: Vec<(NodeId, usize, usize)> =
                    map.into_iter().map(|(n, (f, l))| (n, f, l)).collect();
                v.sort_unstable();
                v
            })
            .collect();
        TripIndex { occ }
    }

    pub(crate) fn first_occurrence(&self, trip: TripId, node: NodeId) -> Option<usize> {
        self.occ[trip]
            .binary_search_by_key(&node, |&(n, _, _)| n)
            .ok()
            .map(|i| self.occ[trip][i].1)
    }

    /// True iff some occurrence of `u` strictly precedes some occurrence of
    /// `v` in the trip.
    pub(crate) fn precedes(&self, trip: TripId, u: NodeId, v: NodeId) -> bool {
        let Some(fu) = self.first_occurrence(trip, u) else { return false };
        match self.occ[trip].binary_search_by_key(&v, |&(n, _, _)| n) {
            Ok(i) => self.occ[trip][i].2 > fu,
            Err(_) => false,
        }
    }

    /// Nodes of the trip (sorted, deduplicated) with their positions.
    pub(crate) fn nodes(&self, trip: TripId) -> &[(NodeId, usize, usize)] {
        &self.occ[trip]
    }
}

/// Exact decision of (source, target)-temporalisability; on YES also returns a
/// witness. `k_cap` restricts the number of distinct trips used.
pub fn o2o_oracle(
    net: &TripNetwork,
    source: NodeId,
    target: NodeId,
    opts: &OracleOptions,
) -> Result<OracleOutcome> {
    if source >= net.node_count {
        return Err(Error::NodeIndexOutOfRange(source, net.node_count));
    }
    if target >= net.node_count {
        return Err(Error::NodeIndexOutOfRange(target, net.node_count));
    }
    if net.trip_count() > 128 {
        return Err(Error::TooManyTrips("o2o oracle", net.trip_count()));
    }
    if source == target {
        return Ok(OracleOutcome {
            feasible: true,
            witness: Some(Witness { source, target, segments: vec![] }),
            explored: 0,
        });
    }

    let index = TripIndex::new(net);
    // trips by member node
    let mut trips_at: Vec<Vec<TripId>> = vec![Vec::new(); net.node_count];
    for t in 0..net.trip_count() {
        for &(v, _, _) in index.nodes(t) {
            trips_at[v].push(t);
        }
    }

    type State = (NodeId, u128);
    let mut visited: HashMap<State, (NodeId, u128, TripId)> = HashMap::new();
    // Accepted trip sets per node, in breadth-first (cardinality) order. A
    // state whose set contains an accepted set at the same node is dominated:
    // the smaller set reaches everything the larger one can.
    let mut frontier: Vec<Vec<u128>> = vec![Vec::new(); net.node_count];
    frontier[source].push(0);
    let mut queue: VecDeque<State> = VecDeque::new();
    let start: State = (source, 0);
    queue.push_back(start);
    let mut explored = 1usize;

    while let Some((u, used)) = queue.pop_front() {
        let depth = used.count_ones() as usize;
        if opts.k_cap.is_some_and(|k| depth >= k) {
            continue;
        }
        for &t in &trips_at[u] {
            if used & (1u128 << t) != 0 {
                continue;
            }
            let Some(fu) = index.first_occurrence(t, u) else { continue };
            let next_used = used | (1u128 << t);
            for &(v, _, last) in index.nodes(t) {
                if last <= fu {
                    continue;
                }
                if frontier[v].iter().any(|&m| m & next_used == m) {
                    continue;
                }
                let state = (v, next_used);
                frontier[v].push(next_used);
                visited.insert(state, (u, used, t));
                explored += 1;
                if explored > opts.state_cap {
                    return Err(Error::StateCapExceeded { explored, cap: opts.state_cap });
                }
                if v == target {
                    let witness = reconstruct(source, target, state, &visited);
                    return Ok(OracleOutcome { feasible: true, witness: Some(witness), explored });
                }
                queue.push_back(state);
            }
        }
    }
    Ok(OracleOutcome { feasible: false, witness: None, explored })
}

fn reconstruct(
    source: NodeId,
    target: NodeId,
    mut state: (NodeId, u128),
    visited: &HashMap<(NodeId, u128), (NodeId, u128, TripId)>,
) -> Witness {
    let mut segments = Vec::new();
    while state != (source, 0) {
        let &(prev_node, prev_used, trip) = visited.get(&state).expect("backpointer");
        segments.push(WitnessSegment { trip, entry: prev_node, exit: state.0 });
        state = (prev_node, prev_used);
    }
    segments.reverse();
    Witness { source, target, segments }
}

/// Schedules the witness trips first, in witness order, and the remaining
/// trips after in index order; the target is then reachable from the source,
/// which is verified before returning.
pub fn witness_to_schedule(net: &TripNetwork, w: &Witness) -> Result<Schedule> {
    validate_witness(net, w)?;
    let mut order: Vec<TripId> = w.segments.iter().map(|s| s.trip).collect();
    let mut in_order = vec![false; net.trip_count()];
    for &t in &order {
        in_order[t] = true;
    }
    order.extend((0..net.trip_count()).filter(|&t| !in_order[t]));
    let schedule = Schedule::new(order);
    let tau = schedule_to_temporalisation(net, &AnySchedule::Strict(schedule.clone()))?;
    let g = induce_temporal_graph(net, &tau)?;
    if earliest_arrival(&g, w.source)[w.target].is_none() {
        return Err(Error::VerificationFailure(format!(
            "witness schedule does not connect {} to {}",
            w.source, w.target
        )));
    }
    Ok(schedule)
}

fn validate_witness(net: &TripNetwork, w: &Witness) -> Result<()> {
    if w.segments.is_empty() {
        if w.source == w.target {
            return Ok(());
        }
        return Err(Error::InvalidWitness("empty witness for distinct endpoints".into()));
    }
    let index = TripIndex::new(net);
    let mut seen = vec![false; net.trip_count()];
    let mut at = w.source;
    for seg in &w.segments {
        if seg.trip >= net.trip_count() {
            return Err(Error::InvalidWitness(format!("trip {} out of range", seg.trip)));
        }
        if seen[seg.trip] {
            return Err(Error::InvalidWitness(format!("trip {} used twice", seg.trip)));
        }
        seen[seg.trip] = true;
        if seg.entry != at {
            return Err(Error::InvalidWitness(format!(
                "segment enters at {} but the walk is at {at}",
                seg.entry
            )));
        }
        if !index.precedes(seg.trip, seg.entry, seg.exit) {
            return Err(Error::InvalidWitness(format!(
                "entry {} does not precede exit {} in trip {}",
                seg.entry, seg.exit, seg.trip
            )));
        }
        at = seg.exit;
    }
    if at != w.target {
        return Err(Error::InvalidWitness(format!("walk ends at {at}, not the target {}", w.target)));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Edge, Trip};

    fn fig2() -> TripNetwork {
        TripNetwork::new(
            8,
            vec![
                Edge::from((0, 1, 1)),
                Edge::from((1, 2, 2)),
                Edge::from((1, 2, 1)),
                Edge::from((2, 3, 2)),
                Edge::from((4, 5, 1)),
                Edge::from((5, 6, 1)),
                Edge::from((6, 7, 2)),
                Edge::from((2, 5, 1)),
                Edge::from((6, 1, 1)),
            ],
            vec![Trip::new(vec![0, 1, 3]), Trip::new(vec![2, 7, 5, 8]), Trip::new(vec![4, 5, 6])],
        )
    }

    #[test]
    fn fig2_feasible_and_infeasible_pairs() {
        let net = fig2();
        let opts = OracleOptions::default();
        assert!(o2o_oracle(&net, 0, 7, &opts).unwrap().feasible); // v1 -> v8
        assert!(!o2o_oracle(&net, 4, 0, &opts).unwrap().feasible); // v5 -> v1
    }

    #[test]
    fn k_cap_separates_two_from_three_trips() {
        let net = fig2();
        let two = OracleOptions { k_cap: Some(2), ..Default::default() };
        assert!(!o2o_oracle(&net, 4, 3, &two).unwrap().feasible);
        let three = OracleOptions { k_cap: Some(3), ..Default::default() };
        let out = o2o_oracle(&net, 4, 3, &three).unwrap();
        assert!(out.feasible);
        let w = out.witness.unwrap();
        assert_eq!(w.segments.iter().map(|s| s.trip).collect::<Vec<_>>(), vec![2, 1, 0]);
    }

    #[test]
    fn witness_schedule_connects_endpoints() {
        let net = fig2();
        let out = o2o_oracle(&net, 4, 3, &OracleOptions::default()).unwrap();
        let sched = witness_to_schedule(&net, &out.witness.unwrap()).unwrap();
        assert_eq!(&sched.order[..3], &[2, 1, 0]);
    }

    #[test]
    fn single_segment_witness_schedules_that_trip_first() {
        let net = fig2();
        let w = Witness {
            source: 0,
            target: 3,
            segments: vec![WitnessSegment { trip: 0, entry: 0, exit: 3 }],
        };
        let sched = witness_to_schedule(&net, &w).unwrap();
        assert_eq!(sched.order[0], 0);
    }

    #[test]
    fn invalid_witness_is_rejected() {
        let net = fig2();
        let w = Witness {
            source: 0,
            target: 3,
            segments: vec![WitnessSegment { trip: 0, entry: 3, exit: 0 }],
        };
        assert!(matches!(witness_to_schedule(&net, &w), Err(Error::InvalidWitness(_))));
    }

    #[test]
    fn state_cap_is_enforced() {
        let net = fig2();
        let opts = OracleOptions { state_cap: 1, ..Default::default() };
        assert!(matches!(o2o_oracle(&net, 4, 3, &opts), Err(Error::StateCapExceeded { .. })));
    }
}
