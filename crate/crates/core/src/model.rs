//! Domain types for trip networks: a weighted directed multigraph together
//! with a collection of trips (walks), plus the assignments of trip starting
//! times (temporalisations, schedules, weak schedules) and structural
//! validation.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type NodeId = usize;
pub type EdgeId = usize;
pub type TripId = usize;
pub type Time = i64;

/// A weighted directed edge. Serialized as `[tail, head, weight]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "(usize, usize, i64)", into = "(usize, usize, i64)")]
pub struct Edge {
    pub tail: NodeId,
    pub head: NodeId,
    pub weight: i64,
}

impl From<(usize, usize, i64)> for Edge {
    fn from((tail, head, weight): (usize, usize, i64)) -> Self {
        Edge { tail, head, weight }
    }
}

impl From<Edge> for (usize, usize, i64) {
    fn from(e: Edge) -> Self {
        (e.tail, e.head, e.weight)
    }
}

/// A trip: a nonempty walk given as a sequence of edge indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Trip {
    pub edge_ids: Vec<EdgeId>,
}

impl Trip {
    pub fn new(edge_ids: Vec<EdgeId>) -> Self {
        Trip { edge_ids }
    }

    pub fn len(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edge_ids.is_empty()
    }
}

/// Generator metadata embedded in instance files.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub generator: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, serde_json::Value>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub roles: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub thresholds: BTreeMap<String, i64>,
    pub paper_params: bool,
}

/// A directed multigraph with positive integer edge weights and a collection
/// of trips referencing edges by index. Trips referencing edges (rather than
/// node pairs) keeps parallel edges used by different trips distinct.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripNetwork {
    pub version: u32,
    #[serde(rename = "nodes")]
    pub node_count: usize,
    pub edges: Vec<Edge>,
    pub trips: Vec<Trip>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<InstanceMeta>,
}

/// One invariant violation found by [`TripNetwork::validate`]. Violations are
/// data, not failures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EdgeEndpointOutOfRange { edge: EdgeId },
    NonPositiveWeight { edge: EdgeId, weight: i64 },
    EmptyTrip { trip: TripId },
    TripEdgeOutOfRange { trip: TripId, pos: usize, edge: EdgeId },
    BrokenWalk { trip: TripId, pos: usize },
    UncoveredNode { node: NodeId },
    UncoveredEdge { edge: EdgeId },
    LabelCountMismatch { labels: usize, nodes: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EdgeEndpointOutOfRange { edge } => {
                write!(f, "edge {edge} has an endpoint out of range")
            }
            Violation::NonPositiveWeight { edge, weight } => {
                write!(f, "edge {edge} has non-positive weight {weight}")
            }
            Violation::EmptyTrip { trip } => write!(f, "trip {trip} is empty"),
            Violation::TripEdgeOutOfRange { trip, pos, edge } => {
                write!(f, "trip {trip} references edge {edge} out of range at position {pos}")
            }
            Violation::BrokenWalk { trip, pos } => {
                write!(f, "trip {trip} breaks the walk condition between positions {pos} and {}", pos + 1)
            }
            Violation::UncoveredNode { node } => write!(f, "node {node} occurs in no trip"),
            Violation::UncoveredEdge { edge } => write!(f, "edge {edge} occurs in no trip"),
            Violation::LabelCountMismatch { labels, nodes } => {
                write!(f, "{labels} labels for {nodes} nodes")
            }
        }
    }
}

impl TripNetwork {
    pub fn new(node_count: usize, edges: Vec<Edge>, trips: Vec<Trip>) -> Self {
        TripNetwork { version: 1, node_count, edges, trips, labels: None, meta: None }
    }

    pub fn trip_count(&self) -> usize {
        self.trips.len()
    }

    /// Sum of trip lengths (number of edges over all trips).
    pub fn total_trip_len(&self) -> usize {
        self.trips.iter().map(Trip::len).sum()
    }

    /// Returns every invariant violation with its location; empty means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.tail >= self.node_count || e.head >= self.node_count {
                out.push(Violation::EdgeEndpointOutOfRange { edge: i });
            }
            if e.weight < 1 {
                out.push(Violation::NonPositiveWeight { edge: i, weight: e.weight });
            }
        }
        let mut node_covered = vec![false; self.node_count];
        let mut edge_covered = vec![false; self.edges.len()];
        for (t, trip) in self.trips.iter().enumerate() {
            if trip.is_empty() {
                out.push(Violation::EmptyTrip { trip: t });
                continue;
            }
            let mut prev_head: Option<NodeId> = None;
            for (pos, &eid) in trip.edge_ids.iter().enumerate() {
                let Some(e) = self.edges.get(eid) else {
                    out.push(Violation::TripEdgeOutOfRange { trip: t, pos, edge: eid });
                    prev_head = None;
                    continue;
                };
                if let Some(h) = prev_head {
                    if h != e.tail {
                        out.push(Violation::BrokenWalk { trip: t, pos: pos - 1 });
                    }
                }
                prev_head = Some(e.head);
                edge_covered[eid] = true;
                if e.tail < self.node_count {
                    node_covered[e.tail] = true;
                }
                if e.head < self.node_count {
                    node_covered[e.head] = true;
                }
            }
        }
        for (v, &c) in node_covered.iter().enumerate() {
            if !c {
                out.push(Violation::UncoveredNode { node: v });
            }
        }
        for (e, &c) in edge_covered.iter().enumerate() {
            if !c {
                out.push(Violation::UncoveredEdge { edge: e });
            }
        }
        if let Some(labels) = &self.labels {
            if labels.len() != self.node_count {
                out.push(Violation::LabelCountMismatch { labels: labels.len(), nodes: self.node_count });
            }
        }
        out
    }

    /// Duration of a trip: the sum of its edge weights.
    pub fn trip_duration(&self, t: TripId) -> Result<i64> {
        let trip = self.trips.get(t).ok_or(Error::TripIndexOutOfRange(t, self.trips.len()))?;
        let mut sum: i64 = 0;
        for &eid in &trip.edge_ids {
            sum = sum.checked_add(self.edges[eid].weight).ok_or(Error::Overflow("trip duration"))?;
        }
        Ok(sum)
    }

    /// Node sequence visited by a trip (length = number of edges + 1).
    pub fn trip_nodes(&self, t: TripId) -> Result<Vec<NodeId>> {
        let trip = self.trips.get(t).ok_or(Error::TripIndexOutOfRange(t, self.trips.len()))?;
        let mut nodes = Vec::with_capacity(trip.len() + 1);
        nodes.push(self.edges[trip.edge_ids[0]].tail);
        for &eid in &trip.edge_ids {
            nodes.push(self.edges[eid].head);
        }
        Ok(nodes)
    }

    /// Node sequence of the reverse walk of a trip.
    pub fn reverse_trip(&self, t: TripId) -> Result<Vec<NodeId>> {
        let mut nodes = self.trip_nodes(t)?;
        nodes.reverse();
        Ok(nodes)
    }

    /// Edge weight sequence along a trip.
    pub fn trip_weights(&self, t: TripId) -> Result<Vec<i64>> {
        let trip = self.trips.get(t).ok_or(Error::TripIndexOutOfRange(t, self.trips.len()))?;
        Ok(trip.edge_ids.iter().map(|&e| self.edges[e].weight).collect())
    }

    /// Identical structure with new edge weights (one per edge, each >= 1).
    pub fn reweight(&self, weights: &[i64]) -> Result<TripNetwork> {
        if weights.len() != self.edges.len() {
            return Err(Error::ReweightLengthMismatch { got: weights.len(), want: self.edges.len() });
        }
        if let Some((i, &w)) = weights.iter().enumerate().find(|&(_, &w)| w < 1) {
            return Err(Error::NonPositiveWeight(i, w));
        }
        let mut net = self.clone();
        for (e, &w) in net.edges.iter_mut().zip(weights) {
            e.weight = w;
        }
        Ok(net)
    }

    /// True iff the underlying multidigraph is strongly connected. A graph
    /// with at most one node is strongly connected by convention.
    pub fn strongly_connected(&self) -> bool {
        if self.node_count <= 1 {
            return true;
        }
        let mut fwd = vec![Vec::new(); self.node_count];
        let mut bwd = vec![Vec::new(); self.node_count];
        for e in &self.edges {
            fwd[e.tail].push(e.head);
            bwd[e.head].push(e.tail);
        }
        let full = |adj: &Vec<Vec<NodeId>>| -> bool {
            let mut seen = vec![false; self.node_count];
            let mut queue = VecDeque::from([0usize]);
            seen[0] = true;
            let mut count = 1;
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        count += 1;
                        queue.push_back(v);
                    }
                }
            }
            count == self.node_count
        };
        full(&fwd) && full(&bwd)
    }

    /// Per-source sets of nodes reachable by a walk in the underlying
    /// multidigraph (each source reaches itself).
    pub fn static_reach_sets(&self) -> Vec<Vec<NodeId>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for e in &self.edges {
            adj[e.tail].push(e.head);
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        (0..self.node_count)
            .map(|s| {
                let mut seen = vec![false; self.node_count];
                seen[s] = true;
                let mut queue = VecDeque::from([s]);
                while let Some(u) = queue.pop_front() {
                    for &v in &adj[u] {
                        if !seen[v] {
                            seen[v] = true;
                            queue.push_back(v);
                        }
                    }
                }
                (0..self.node_count).filter(|&v| seen[v]).collect()
            })
            .collect()
    }
}

/// An assignment of a starting time to every trip. Starting times are 64-bit
/// signed integers; every construction in this crate stays on the integer
/// lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Temporalisation {
    pub starts: Vec<Time>,
}

impl Temporalisation {
    pub fn new(starts: Vec<Time>) -> Self {
        Temporalisation { starts }
    }

    pub fn check_len(&self, net: &TripNetwork) -> Result<()> {
        if self.starts.len() != net.trip_count() {
            return Err(Error::TemporalisationLengthMismatch {
                got: self.starts.len(),
                want: net.trip_count(),
            });
        }
        Ok(())
    }
}

/// A schedule: trips run one after the other in the given order, each starting
/// when the previous one ends.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub order: Vec<TripId>,
}

impl Schedule {
    pub fn new(order: Vec<TripId>) -> Self {
        Schedule { order }
    }

    fn check(&self, trip_count: usize) -> Result<()> {
        if self.order.len() != trip_count {
            return Err(Error::MalformedSchedule(format!(
                "order has {} entries for {} trips",
                self.order.len(),
                trip_count
            )));
        }
        let mut seen = vec![false; trip_count];
        for &t in &self.order {
            if t >= trip_count || seen[t] {
                return Err(Error::MalformedSchedule(format!("trip {t} repeated or out of range")));
            }
            seen[t] = true;
        }
        Ok(())
    }
}

/// An ordered partition of the trips into blocks of simultaneous starts;
/// block j+1 starts when the longest trip of block j ends.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakSchedule {
    pub blocks: Vec<Vec<TripId>>,
}

impl WeakSchedule {
    pub fn new(blocks: Vec<Vec<TripId>>) -> Self {
        WeakSchedule { blocks }
    }

    fn check(&self, trip_count: usize) -> Result<()> {
        let mut seen = vec![false; trip_count];
        let mut n = 0;
        for block in &self.blocks {
            if block.is_empty() {
                return Err(Error::MalformedWeakSchedule("empty block".into()));
            }
            for &t in block {
                if t >= trip_count || seen[t] {
                    return Err(Error::MalformedWeakSchedule(format!(
                        "trip {t} repeated or out of range"
                    )));
                }
                seen[t] = true;
                n += 1;
            }
        }
        if n != trip_count {
            return Err(Error::MalformedWeakSchedule(format!(
                "{n} trips placed, network has {trip_count}"
            )));
        }
        Ok(())
    }
}

/// Either form of sequential assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnySchedule {
    Strict(Schedule),
    Weak(WeakSchedule),
}

/// Starting times induced by a schedule: the first trip starts at 0 and each
/// next trip starts when the previous one ends. For a weak schedule, all trips
/// of a block share the block start and the next block starts after the
/// longest trip of the block.
pub fn schedule_to_temporalisation(net: &TripNetwork, s: &AnySchedule) -> Result<Temporalisation> {
    let mut starts = vec![0i64; net.trip_count()];
    match s {
        AnySchedule::Strict(sched) => {
            sched.check(net.trip_count())?;
            let mut clock: i64 = 0;
            for &t in &sched.order {
                starts[t] = clock;
                clock = clock.checked_add(net.trip_duration(t)?).ok_or(Error::Overflow("schedule start"))?;
            }
        }
        AnySchedule::Weak(weak) => {
            weak.check(net.trip_count())?;
            let mut clock: i64 = 0;
            for block in &weak.blocks {
                let mut max_d: i64 = 0;
                for &t in block {
                    starts[t] = clock;
                    max_d = max_d.max(net.trip_duration(t)?);
                }
                clock = clock.checked_add(max_d).ok_or(Error::Overflow("weak schedule start"))?;
            }
        }
    }
    Ok(Temporalisation::new(starts))
}

/// A perfect matching of the trips into reverse pairs `(trip, reverse)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetricPairing {
    /// Each pair lists the lower trip index first.
    pub pairs: Vec<(TripId, TripId)>,
}

impl SymmetricPairing {
    /// Partner of a trip in the pairing.
    pub fn partner(&self, t: TripId) -> Option<TripId> {
        for &(a, b) in &self.pairs {
            if a == t {
                return Some(b);
            }
            if b == t {
                return Some(a);
            }
        }
        None
    }
}

/// Canonical key of a trip for reverse-matching: node sequence plus edge
/// weight sequence.
pub(crate) fn trip_key(net: &TripNetwork, t: TripId) -> (Vec<NodeId>, Vec<i64>) {
    (net.trip_nodes(t).expect("valid trip"), net.trip_weights(t).expect("valid trip"))
}

pub(crate) fn reverse_key(key: &(Vec<NodeId>, Vec<i64>)) -> (Vec<NodeId>, Vec<i64>) {
    let mut nodes = key.0.clone();
    nodes.reverse();
    let mut weights = key.1.clone();
    weights.reverse();
    (nodes, weights)
}

/// Tries to group all trips into disjoint reverse pairs. Node sequences are
/// compared and weights must agree edgewise under reversal. Matching is
/// greedy by canonical key with multiplicity counting; ties between equal
/// trips break towards the lowest index. On failure returns the lowest
/// unmatched trip as witness.
pub fn symmetric_pairing(net: &TripNetwork) -> std::result::Result<SymmetricPairing, TripId> {
    let keys: Vec<_> = (0..net.trip_count()).map(|t| trip_key(net, t)).collect();
    let mut by_key: HashMap<&(Vec<NodeId>, Vec<i64>), VecDeque<TripId>> = HashMap::new();
    for (t, k) in keys.iter().enumerate() {
        by_key.entry(k).or_default().push_back(t);
    }
    let mut paired = vec![false; net.trip_count()];
    let mut pairs = Vec::new();
    for t in 0..net.trip_count() {
        if paired[t] {
            continue;
        }
        let rev = reverse_key(&keys[t]);
        let candidate = by_key.get_mut(&rev).and_then(|q| {
            while let Some(&front) = q.front() {
                if paired[front] || front == t {
                    q.pop_front();
                } else {
                    return q.pop_front();
                }
            }
            None
        });
        match candidate {
            Some(p) => {
                paired[t] = true;
                paired[p] = true;
                pairs.push((t.min(p), t.max(p)));
            }
            None => return Err(t),
        }
    }
    Ok(SymmetricPairing { pairs })
}
