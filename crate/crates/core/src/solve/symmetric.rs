//! Scheduling symmetric trip networks: one-to-all / all-to-one schedules from
//! breadth-first levels, the transfer tree over trip pairs, weighted centroid
//! partitioning, and the schedule construction that connects a 2/9 fraction of
//! all node pairs on symmetric strongly connected networks.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    AnySchedule, NodeId, Schedule, SymmetricPairing, TripId, TripNetwork, reverse_key,
    schedule_to_temporalisation, symmetric_pairing, trip_key,
};
use crate::reach::{ReachReport, reach_report};
use crate::solve::oracle::{OracleOptions, o2o_oracle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Make every node statically reachable from `u` temporally reachable.
    FromU,
    /// Make `u` temporally reachable from every node that statically reaches it.
    ToU,
}

/// Builds a full schedule from breadth-first levels: per level, each uncovered
/// tree edge picks the lowest-index trip containing it, and the trip is
/// appended together with its reverse. For the to-`u` direction the levels are
/// taken in the reversed multidigraph and scheduled deepest level first.
pub fn one_to_all_schedule(net: &TripNetwork, u: NodeId, direction: Direction) -> Result<Schedule> {
    if u >= net.node_count {
        return Err(Error::NodeIndexOutOfRange(u, net.node_count));
    }
    let pairing = symmetric_pairing(net).map_err(|witness| Error::NotSymmetric { witness })?;
    let all: Vec<TripId> = (0..net.trip_count()).collect();
    let selected = level_cover(net, &pairing, &all, u, direction);
    let mut order: Vec<TripId> = selected.clone();
    let mut used = vec![false; net.trip_count()];
    for &t in &order {
        used[t] = true;
    }
    order.extend((0..net.trip_count()).filter(|&t| !used[t]));
    Ok(Schedule::new(order))
}

/// Level-by-level cover of the breadth-first tree rooted at `u`, restricted to
/// `trips`. Returns the selected trip order (reverse partners included).
fn level_cover(
    net: &TripNetwork,
    pairing: &SymmetricPairing,
    trips: &[TripId],
    u: NodeId,
    direction: Direction,
) -> Vec<TripId> {
    let mut partner = HashMap::new();
    for &(a, b) in &pairing.pairs {
        partner.insert(a, b);
        partner.insert(b, a);
    }
    // Adjacency over the edges of the chosen trips; (neighbor, lowest trip).
    let mut adj: HashMap<NodeId, Vec<(NodeId, TripId)>> = HashMap::new();
    let mut seen_arc: HashMap<(NodeId, NodeId), TripId> = HashMap::new();
    let mut sorted = trips.to_vec();
    sorted.sort_unstable();
    for &t in &sorted {
        for &eid in &net.trips[t].edge_ids {
            let e = net.edges[eid];
            let (from, to) = match direction {
                Direction::FromU => (e.tail, e.head),
                Direction::ToU => (e.head, e.tail),
            };
            if let std::collections::hash_map::Entry::Vacant(slot) = seen_arc.entry((from, to)) {
                slot.insert(t);
                adj.entry(from).or_default().push((to, t));
            }
        }
    }

    // Breadth-first levels from u.
    let mut level: HashMap<NodeId, usize> = HashMap::from([(u, 0)]);
    let mut frontier = vec![u];
    let mut levels: Vec<Vec<(NodeId, NodeId, TripId)>> = Vec::new(); // tree edges per level
    while !frontier.is_empty() {
        let mut next = Vec::new();
        let mut tree_edges = Vec::new();
        for &x in &frontier {
            if let Some(neigh) = adj.get(&x) {
                for &(y, t) in neigh {
                    if let std::collections::hash_map::Entry::Vacant(slot) = level.entry(y) {
                        slot.insert(levels.len() + 1);
                        tree_edges.push((x, y, t));
                        next.push(y);
                    }
                }
            }
        }
        if tree_edges.is_empty() {
            break;
        }
        levels.push(tree_edges);
        frontier = next;
    }

    // Per level, schedule the trip pair of each tree edge not already covered.
    let mut scheduled = vec![false; net.trip_count()];
    let mut covered_arc: HashMap<(NodeId, NodeId), bool> = HashMap::new();
    let mut blocks: Vec<Vec<TripId>> = Vec::new();
    for tree_edges in &levels {
        let mut block = Vec::new();
        for &(x, y, t) in tree_edges {
            if covered_arc.get(&(x, y)).copied().unwrap_or(false) {
                continue;
            }
            let p = partner[&t];
            for trip in [t.min(p), t.max(p)] {
                if !scheduled[trip] {
                    scheduled[trip] = true;
                    block.push(trip);
                    mark_covered(net, trip, direction, &mut covered_arc);
                }
            }
        }
        blocks.push(block);
    }
    match direction {
        Direction::FromU => blocks.into_iter().flatten().collect(),
        Direction::ToU => blocks.into_iter().rev().flatten().collect(),
    }
}

fn mark_covered(
    net: &TripNetwork,
    trip: TripId,
    direction: Direction,
    covered: &mut HashMap<(NodeId, NodeId), bool>,
) {
    for &eid in &net.trips[trip].edge_ids {
        let e = net.edges[eid];
        let arc = match direction {
            Direction::FromU => (e.tail, e.head),
            Direction::ToU => (e.head, e.tail),
        };
        covered.insert(arc, true);
    }
}

/// The transfer tree over deduplicated trip pairs: pairs are adjacent when
/// they share a node; each node is owned by its lowest-index pair; the tree is
/// a breadth-first spanning tree rooted at pair 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferTree {
    /// Each pair as (forward trip, reverse trip), lower index first.
    pub pairs: Vec<(TripId, TripId)>,
    /// Owning pair per node.
    pub node_owner: Vec<usize>,
    /// Number of owned nodes per pair.
    pub pair_weight: Vec<u64>,
    /// Parent pair per pair (itself for the root).
    pub parent: Vec<usize>,
    /// Total weight (= node count).
    pub total_weight: u64,
    /// Trips that were dropped as duplicate copies.
    pub duplicates: Vec<TripId>,
}

impl TransferTree {
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.pairs.len()];
        for (i, &p) in self.parent.iter().enumerate() {
            if p != i {
                ch[p].push(i);
            }
        }
        ch
    }
}

/// Deduplicates equal trips (palindromic walks keep two copies so the pair
/// survives), pairs the survivors, and builds the transfer tree.
pub fn transfer_tree(net: &TripNetwork) -> Result<TransferTree> {
    symmetric_pairing(net).map_err(|witness| Error::NotSymmetric { witness })?;

    // Dedup by canonical key.
    let keys: Vec<_> = (0..net.trip_count()).map(|t| trip_key(net, t)).collect();
    let mut kept: Vec<TripId> = Vec::new();
    let mut dropped: Vec<TripId> = Vec::new();
    let mut seen: HashMap<&(Vec<NodeId>, Vec<i64>), usize> = HashMap::new();
    for (t, key) in keys.iter().enumerate() {
        let palindromic = &reverse_key(key) == key;
        let budget = if palindromic { 2 } else { 1 };
        let count = seen.entry(key).or_insert(0);
        if *count < budget {
            *count += 1;
            kept.push(t);
        } else {
            dropped.push(t);
        }
    }

    // Pair the kept trips.
    let mut by_key: HashMap<&(Vec<NodeId>, Vec<i64>), VecDeque<TripId>> = HashMap::new();
    for &t in &kept {
        by_key.entry(&keys[t]).or_default().push_back(t);
    }
    let mut paired = vec![false; net.trip_count()];
    let mut pairs: Vec<(TripId, TripId)> = Vec::new();
    for &t in &kept {
        if paired[t] {
            continue;
        }
        let rev = reverse_key(&keys[t]);
        let q = by_key.get_mut(&rev).ok_or(Error::NotSymmetric { witness: t })?;
        let mut p = None;
        while let Some(&front) = q.front() {
            if paired[front] || front == t {
                q.pop_front();
            } else {
                p = q.pop_front();
                break;
            }
        }
        let p = p.ok_or(Error::NotSymmetric { witness: t })?;
        paired[t] = true;
        paired[p] = true;
        pairs.push((t.min(p), t.max(p)));
    }
    pairs.sort_unstable();

    // Node ownership: lowest pair containing the node.
    let mut node_owner = vec![usize::MAX; net.node_count];
    let mut pairs_at: Vec<Vec<usize>> = vec![Vec::new(); net.node_count];
    for (i, &(a, _)) in pairs.iter().enumerate() {
        for v in net.trip_nodes(a)? {
            if node_owner[v] == usize::MAX {
                node_owner[v] = i;
            }
            if pairs_at[v].last() != Some(&i) {
                pairs_at[v].push(i);
            }
        }
    }
    if let Some(v) = node_owner.iter().position(|&o| o == usize::MAX) {
        return Err(Error::InvalidNetwork(format!("node {v} occurs in no trip")));
    }
    let mut pair_weight = vec![0u64; pairs.len()];
    for &o in &node_owner {
        pair_weight[o] += 1;
    }

    // Spanning tree of the transfer graph by breadth-first search from pair 0.
    let mut parent = vec![usize::MAX; pairs.len()];
    parent[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(p) = queue.pop_front() {
        let (a, _) = pairs[p];
        for v in net.trip_nodes(a)? {
            for &q in &pairs_at[v] {
                if parent[q] == usize::MAX {
                    parent[q] = p;
                    queue.push_back(q);
                }
            }
        }
    }
    if parent.contains(&usize::MAX) {
        return Err(Error::TransferGraphDisconnected);
    }

    Ok(TransferTree {
        pairs,
        node_owner,
        pair_weight,
        parent,
        total_weight: net.node_count as u64,
        duplicates: dropped,
    })
}

/// A centroid pair together with the two-sided split of its pending subtrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentroidPartition {
    /// Index of the centroid pair in the tree.
    pub centroid: usize,
    /// True when the centroid pair alone weighs more than 2K/3; the partition
    /// sides are then left empty.
    pub heavy_centroid: bool,
    /// Subtree roots on the side scheduled before the centroid.
    pub p1: Vec<usize>,
    /// Subtree roots on the side scheduled after the centroid.
    pub p2: Vec<usize>,
    pub p1_with_centroid_weight: u64,
    pub p2_weight: u64,
}

/// Finds a weighted centroid (every pending subtree weighs at most half the
/// total) and splits the pending subtrees so that both the first side plus the
/// centroid and the second side weigh at most 2K/3, the first side at least
/// K/3. Subtrees are added by nondecreasing weight until the first side
/// reaches K/3.
pub fn weighted_centroid_partition(tree: &TransferTree) -> CentroidPartition {
    let k = tree.total_weight;
    let children = tree.children();
    let m = tree.pairs.len();

    // Subtree weights from the leaves up (parent index is always smaller for
    // the root's BFS order, but recompute generically).
    let order = bfs_order(tree);
    let mut subtree = tree.pair_weight.clone();
    for &v in order.iter().rev() {
        for &c in &children[v] {
            subtree[v] += subtree[c];
        }
    }

    // maxcomp(v): heaviest component of the tree after removing v.
    let mut centroid = 0usize;
    let mut best = u64::MAX;
    for v in 0..m {
        let mut mc = k - subtree[v];
        for &c in &children[v] {
            mc = mc.max(subtree[c]);
        }
        if mc < best {
            best = mc;
            centroid = v;
        }
    }

    // Pending subtrees of the centroid: children subtrees plus the parent-side
    // rest, rooted at the centroid's parent.
    let mut pending: Vec<(u64, usize)> = children[centroid].iter().map(|&c| (subtree[c], c)).collect();
    if centroid != tree.parent[centroid] {
        pending.push((k - subtree[centroid], tree.parent[centroid]));
    }

    let c_weight = tree.pair_weight[centroid];
    if 3 * c_weight > 2 * k {
        return CentroidPartition {
            centroid,
            heavy_centroid: true,
            p1: Vec::new(),
            p2: Vec::new(),
            p1_with_centroid_weight: c_weight,
            p2_weight: k - c_weight,
        };
    }

    pending.sort_unstable();
    let mut p1 = Vec::new();
    let mut p2 = Vec::new();
    let mut w1 = c_weight;
    for &(w, root) in &pending {
        if 3 * w1 >= k {
            p2.push(root);
        } else {
            p1.push(root);
            w1 += w;
        }
    }
    CentroidPartition {
        centroid,
        heavy_centroid: false,
        p1,
        p2,
        p1_with_centroid_weight: w1,
        p2_weight: k - w1,
    }
}

fn bfs_order(tree: &TransferTree) -> Vec<usize> {
    let children = tree.children();
    let root = (0..tree.pairs.len()).find(|&i| tree.parent[i] == i).unwrap_or(0);
    let mut order = vec![root];
    let mut i = 0;
    while i < order.len() {
        order.extend(children[order[i]].iter().copied());
        i += 1;
    }
    order
}

/// Pairs of one pending subtree: the component of `root` once `exclude` (the
/// centroid) is removed, walking parent and child links alike.
fn subtree_pairs(tree: &TransferTree, root: usize, exclude: usize) -> Vec<usize> {
    let children = tree.children();
    let mut seen = vec![false; tree.pairs.len()];
    seen[exclude] = true;
    seen[root] = true;
    let mut out = vec![root];
    let mut i = 0;
    while i < out.len() {
        let v = out[i];
        i += 1;
        let p = tree.parent[v];
        if !seen[p] {
            seen[p] = true;
            out.push(p);
        }
        for &c in &children[v] {
            if !seen[c] {
                seen[c] = true;
                out.push(c);
            }
        }
    }
    out.sort_unstable();
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricApproxResult {
    pub schedule: Schedule,
    pub report: ReachReport,
    pub heavy_centroid: bool,
}

/// Schedule achieving at least ceil(2 n^2 / 9) connected node pairs on a
/// symmetric, strongly connected trip network.
///
/// Light-centroid case: for every first-side subtree an all-to-one schedule
/// into its contact node on the centroid pair, then the centroid pair, then
/// for every second-side subtree a one-to-all schedule out of its contact
/// node; unused trips close the schedule in index order.
pub fn symmetric_approx_schedule(net: &TripNetwork) -> Result<SymmetricApproxResult> {
    if !net.strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    let tree = transfer_tree(net)?;
    let pairing = SymmetricPairing { pairs: tree.pairs.clone() };
    let part = weighted_centroid_partition(&tree);
    let (c_fwd, c_rev) = tree.pairs[part.centroid];

    let mut order: Vec<TripId> = Vec::new();
    if part.heavy_centroid {
        order.push(c_fwd);
        order.push(c_rev);
    } else {
        let centroid_nodes = net.trip_nodes(c_fwd)?;
        for &root in &part.p1 {
            let members = subtree_pairs(&tree, root, part.centroid);
            let trips = pairs_to_trips(&tree, &members);
            let contact = contact_node(net, &tree, &members, &centroid_nodes)?;
            order.extend(level_cover(net, &pairing, &trips, contact, Direction::ToU));
        }
        order.push(c_fwd);
        order.push(c_rev);
        for &root in &part.p2 {
            let members = subtree_pairs(&tree, root, part.centroid);
            let trips = pairs_to_trips(&tree, &members);
            let contact = contact_node(net, &tree, &members, &centroid_nodes)?;
            order.extend(level_cover(net, &pairing, &trips, contact, Direction::FromU));
        }
    }
    let mut used = vec![false; net.trip_count()];
    let mut final_order = Vec::with_capacity(net.trip_count());
    for t in order {
        if !used[t] {
            used[t] = true;
            final_order.push(t);
        }
    }
    final_order.extend((0..net.trip_count()).filter(|&t| !used[t]));
    let schedule = Schedule::new(final_order);
    let tau = schedule_to_temporalisation(net, &AnySchedule::Strict(schedule.clone()))?;
    let report = reach_report(net, &tau, false)?;
    Ok(SymmetricApproxResult { schedule, report, heavy_centroid: part.heavy_centroid })
}

fn pairs_to_trips(tree: &TransferTree, members: &[usize]) -> Vec<TripId> {
    let mut trips = Vec::with_capacity(members.len() * 2);
    for &p in members {
        trips.push(tree.pairs[p].0);
        trips.push(tree.pairs[p].1);
    }
    trips.sort_unstable();
    trips
}

/// Lowest node shared between the subtree's trips and the centroid pair.
fn contact_node(
    net: &TripNetwork,
    tree: &TransferTree,
    members: &[usize],
    centroid_nodes: &[NodeId],
) -> Result<NodeId> {
    let mut on_centroid = vec![false; net.node_count];
    for &v in centroid_nodes {
        on_centroid[v] = true;
    }
    let mut best = usize::MAX;
    for &p in members {
        for v in net.trip_nodes(tree.pairs[p].0)? {
            if on_centroid[v] && v < best {
                best = v;
            }
        }
    }
    if best == usize::MAX {
        return Err(Error::VerificationFailure("subtree shares no node with the centroid pair".into()));
    }
    Ok(best)
}

/// Minimum number of connected pairs guaranteed on an n-node instance.
pub fn approx_guarantee(n: usize) -> u64 {
    let n = n as u64;
    (2 * n * n).div_ceil(9)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalisabilityOutcome {
    pub strongly_temporalisable: bool,
    /// Ordered pair (u, v) with v not temporalisable-reachable from u.
    pub certificate: Option<(NodeId, NodeId)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TemporalisabilityMode {
    /// Symmetric or one-edge collections reduce to strong connectivity;
    /// everything else falls through to the brute force.
    Auto,
    /// All ordered pairs through the exact oracle.
    Brute,
    /// Decide via strong connectivity only; callers must know the collection
    /// is symmetric or one-edge.
    Structural,
}

/// Decides whether every ordered node pair admits a connecting
/// temporalisation. Strong connectivity of the underlying multidigraph is
/// necessary, and sufficient for symmetric or one-edge collections.
pub fn strongly_temporalisable_check(
    net: &TripNetwork,
    mode: TemporalisabilityMode,
    oracle_opts: &OracleOptions,
) -> Result<TemporalisabilityOutcome> {
    // Lexicographically first ordered pair unreachable already in the
    // underlying multidigraph, if any.
    let static_certificate = || {
        let sets = net.static_reach_sets();
        for (u, set) in sets.iter().enumerate() {
            if set.len() == net.node_count {
                continue;
            }
            let mut in_set = vec![false; net.node_count];
            for &v in set {
                in_set[v] = true;
            }
            if let Some(v) = in_set.iter().position(|&b| !b) {
                return Some((u, v));
            }
        }
        None
    };

    let structural_ok = net.trips.iter().all(|t| t.len() == 1) || symmetric_pairing(net).is_ok();
    match mode {
        TemporalisabilityMode::Structural => {
            let cert = static_certificate();
            Ok(TemporalisabilityOutcome { strongly_temporalisable: cert.is_none(), certificate: cert })
        }
        TemporalisabilityMode::Auto if structural_ok => {
            let cert = static_certificate();
            Ok(TemporalisabilityOutcome { strongly_temporalisable: cert.is_none(), certificate: cert })
        }
        _ => {
            // Strong connectivity is necessary regardless of trip shapes.
            if let Some(cert) = static_certificate() {
                return Ok(TemporalisabilityOutcome {
                    strongly_temporalisable: false,
                    certificate: Some(cert),
                });
            }
            for u in 0..net.node_count {
                for v in 0..net.node_count {
                    if u != v && !o2o_oracle(net, u, v, oracle_opts)?.feasible {
                        return Ok(TemporalisabilityOutcome {
                            strongly_temporalisable: false,
                            certificate: Some((u, v)),
                        });
                    }
                }
            }
            Ok(TemporalisabilityOutcome { strongly_temporalisable: true, certificate: None })
        }
    }
}
