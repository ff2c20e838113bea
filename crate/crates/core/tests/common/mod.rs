//! Shared fixtures: the worked example networks and a seeded random-instance
//! generator used as fodder for the oracle-equivalence and property suites.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tripnet::model::{Edge, Trip, TripNetwork};

/// Eight nodes, nine edges, three trips; durations 5, 4, 4. The multigraph
/// has two parallel (v2, v3) edges and one (v6, v7) edge shared by two trips.
pub fn fig2() -> TripNetwork {
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

/// Two unit-weight trips crossing at one node; simultaneous starts beat every
/// sequential order.
pub fn fig4() -> TripNetwork {
    TripNetwork::new(
        5,
        vec![Edge::from((0, 2, 1)), Edge::from((2, 4, 1)), Edge::from((1, 2, 1)), Edge::from((2, 3, 1))],
        vec![Trip::new(vec![0, 1]), Trip::new(vec![2, 3])],
    )
}

/// Ten nodes, three trips; with unit weights no assignment matches the static
/// closure.
pub fn fig5_unit() -> TripNetwork {
    TripNetwork::new(
        10,
        vec![
            Edge::from((0, 3, 1)), // v1 -> v4
            Edge::from((3, 5, 1)), // v4 -> v6
            Edge::from((1, 3, 1)), // v2 -> v4
            Edge::from((3, 4, 1)), // v4 -> v5
            Edge::from((5, 9, 1)), // v6 -> v10
            Edge::from((9, 4, 1)), // v10 -> v5
            Edge::from((4, 6, 1)), // v5 -> v7
            Edge::from((4, 7, 1)), // v5 -> v8
            Edge::from((2, 5, 1)), // v3 -> v6
            Edge::from((5, 8, 1)), // v6 -> v9
        ],
        vec![
            Trip::new(vec![0, 1, 9]),    // v1 v4 v6 v9
            Trip::new(vec![8, 4, 5, 6]), // v3 v6 v10 v5 v7
            Trip::new(vec![2, 3, 7]),    // v2 v4 v5 v8
        ],
    )
}

/// Seeded random valid trip network: up to `n_max` nodes and `t_max` trips of
/// 1..=4 edges over the touched nodes (compacted), with occasional parallel
/// edges and shared edges between trips.
pub fn random_instance(n_max: usize, t_max: usize, seed: u64) -> TripNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=n_max.max(2));
    let trip_count = rng.gen_range(1..=t_max.max(1));
    let mut edges: Vec<Edge> = Vec::new();
    let mut trips = Vec::new();
    for _ in 0..trip_count {
        let len = rng.gen_range(1..=4usize);
        let mut at = rng.gen_range(0..n);
        let mut edge_ids = Vec::with_capacity(len);
        for _ in 0..len {
            let mut to = rng.gen_range(0..n);
            if to == at {
                to = (to + 1) % n;
            }
            // Reuse an existing edge most of the time, sometimes lay a
            // parallel copy.
            let existing: Vec<usize> = edges
                .iter()
                .enumerate()
                .filter(|(_, e)| e.tail == at && e.head == to)
                .map(|(i, _)| i)
                .collect();
            let eid = if !existing.is_empty() && rng.gen_range(0..4) > 0 {
                existing[rng.gen_range(0..existing.len())]
            } else {
                edges.push(Edge { tail: at, head: to, weight: rng.gen_range(1..=3) });
                edges.len() - 1
            };
            edge_ids.push(eid);
            at = to;
        }
        trips.push(Trip::new(edge_ids));
    }
    // Compact to the touched nodes.
    let mut used = vec![false; n];
    for e in &edges {
        used[e.tail] = true;
        used[e.head] = true;
    }
    let mut remap = vec![usize::MAX; n];
    let mut next = 0;
    for v in 0..n {
        if used[v] {
            remap[v] = next;
            next += 1;
        }
    }
    for e in &mut edges {
        e.tail = remap[e.tail];
        e.head = remap[e.head];
    }
    let net = TripNetwork::new(next, edges, trips);
    assert!(net.validate().is_empty(), "random instance must be valid");
    net
}

/// Unit-weight variant of [`random_instance`] (for one-edge-trip sampling and
/// grid-mode cross-checks).
pub fn random_unit_instance(n_max: usize, t_max: usize, seed: u64) -> TripNetwork {
    let mut net = random_instance(n_max, t_max, seed);
    for e in &mut net.edges {
        e.weight = 1;
    }
    net
}
