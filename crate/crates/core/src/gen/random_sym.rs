//! Seeded random symmetric trip networks: a random spanning tree covered by
//! walk segments (each emitted with its reverse), plus extra random walks.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gen::NetBuilder;
use crate::model::{InstanceMeta, TripNetwork};

/// Symmetric, strongly connected, unit-weight instance with at least
/// `pair_count` reverse trip pairs; identical for identical `(n, pair_count,
/// seed)`.
pub fn gen_random_symmetric(n: usize, pair_count: usize, seed: u64) -> Result<TripNetwork> {
    if n < 2 {
        return Err(Error::BadParameter(format!("need n >= 2 nodes, got {n}")));
    }
    if pair_count < 1 {
        return Err(Error::BadParameter("need at least one trip pair".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Random spanning tree: node i attaches below a random earlier node.
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 1..n {
        let p = rng.gen_range(0..i);
        children[p].push(i);
    }
    for c in &mut children {
        // Random child order randomizes the tour shape.
        c.shuffle(&mut rng);
    }

    // Depth-first tour, truncated after the last first-visit: every tree edge
    // appears in at least one direction before the cut.
    let mut tour: Vec<usize> = vec![0];
    let mut stack = vec![(0usize, 0usize)];
    let mut last_discovery = 0usize;
    while let Some((v, next_child)) = stack.pop() {
        if next_child < children[v].len() {
            let c = children[v][next_child];
            stack.push((v, next_child + 1));
            stack.push((c, 0));
            tour.push(c);
            last_discovery = tour.len() - 1;
        } else if let Some(&(p, _)) = stack.last() {
            tour.push(p);
        }
    }
    tour.truncate(last_discovery + 1);

    let mut b = NetBuilder::new();
    for v in 0..n {
        b.node(format!("v_{}", v + 1));
    }
    for w in tour.windows(2) {
        b.arc(w[0], w[1]);
        b.arc(w[1], w[0]);
    }

    // Split the tour into coverage segments; cap at the edge count.
    let tour_edges = tour.len() - 1;
    let coverage_segments = pair_count.min(tour_edges);
    let mut cut_points: Vec<usize> = vec![0, tour_edges];
    while cut_points.len() < coverage_segments + 1 {
        let c = rng.gen_range(1..tour_edges);
        if !cut_points.contains(&c) {
            cut_points.push(c);
        }
    }
    cut_points.sort_unstable();
    let mut forward: Vec<Vec<usize>> = Vec::new();
    for w in cut_points.windows(2) {
        forward.push(tour[w[0]..=w[1]].to_vec());
    }
    // Extra random walks over arbitrary node hops (fresh arcs get created and
    // are covered by the walk itself and its reverse).
    for _ in coverage_segments..pair_count {
        let len = rng.gen_range(1..=4usize);
        let mut seq = vec![rng.gen_range(0..n)];
        for _ in 0..len {
            let mut next = rng.gen_range(0..n);
            if next == *seq.last().unwrap() {
                next = (next + 1) % n;
            }
            seq.push(next);
        }
        for w in seq.windows(2) {
            b.arc(w[0], w[1]);
            b.arc(w[1], w[0]);
        }
        forward.push(seq);
    }

    for seq in &forward {
        b.walk_trip(seq);
        let mut rev = seq.clone();
        rev.reverse();
        b.walk_trip(&rev);
    }

    let mut params = BTreeMap::new();
    params.insert("n".to_string(), serde_json::json!(n));
    params.insert("pairs".to_string(), serde_json::json!(forward.len()));
    params.insert("requested_pairs".to_string(), serde_json::json!(pair_count));
    params.insert("seed".to_string(), serde_json::json!(seed));
    let meta = InstanceMeta {
        generator: "random-sym".to_string(),
        params,
        roles: BTreeMap::new(),
        thresholds: BTreeMap::new(),
        paper_params: true,
    };
    let net = b.finish(meta);
    debug_assert!(net.validate().is_empty());
    Ok(net)
}
