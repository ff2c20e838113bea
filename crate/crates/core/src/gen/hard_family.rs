//! The low-reachability family: strongly temporalisable networks on r^2 + 2r
//! nodes whose temporal reachability is O(n^(3/2)) under every assignment of
//! starting times.
//!
//! An upper ladder and a lower ladder of zig-zag trips are joined by r
//! descending chains (present twice each) and one ascending edge. Between two
//! interior chain nodes of different chains, a connection needs all r lower
//! trips in ascending start order and all r upper trips likewise, which pins
//! the usable chain pair to (argmin lower start, argmax upper start).

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gen::NetBuilder;
use crate::model::{
    AnySchedule, InstanceMeta, NodeId, Schedule, Temporalisation, TripId, TripNetwork,
    schedule_to_temporalisation,
};
use crate::reach::{earliest_arrival, induce_temporal_graph, reach_report};

/// Named node and trip roles of a generated family member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardFamilyLayout {
    pub r: usize,
}

impl HardFamilyLayout {
    /// Upper ladder node c_i, i in 1..=2r (the lower ladder starts at r+1).
    pub fn c(&self, i: usize) -> NodeId {
        debug_assert!((1..=2 * self.r).contains(&i));
        if i <= self.r { i - 1 } else { 2 * self.r + (i - self.r) - 1 }
    }

    pub fn u(&self, i: usize) -> NodeId {
        self.r + i - 1
    }

    pub fn l(&self, i: usize) -> NodeId {
        3 * self.r + i - 1
    }

    /// Descending chain node d_i^j; d_i^1 = u_i and d_i^r = l_i.
    pub fn d(&self, i: usize, j: usize) -> NodeId {
        debug_assert!((1..=self.r).contains(&j));
        match j {
            1 => self.u(i),
            j if j == self.r => self.l(i),
            j => 4 * self.r + (i - 1) * (self.r - 2) + (j - 2),
        }
    }

    pub fn node_count(&self) -> usize {
        self.r * self.r + 2 * self.r
    }

    pub fn trip_count(&self) -> usize {
        4 * self.r + 1
    }

    pub fn trip_upper(&self, i: usize) -> TripId {
        i - 1
    }

    pub fn trip_lower(&self, i: usize) -> TripId {
        self.r + i - 1
    }

    pub fn trip_desc_left(&self, i: usize) -> TripId {
        2 * self.r + i - 1
    }

    pub fn trip_desc_right(&self, i: usize) -> TripId {
        3 * self.r + i - 1
    }

    pub fn trip_ascending(&self) -> TripId {
        4 * self.r
    }

    /// Role of a node index.
    pub fn classify(&self, v: NodeId) -> NodeRole {
        let r = self.r;
        if v < r {
            NodeRole::UpperC(v + 1)
        } else if v < 2 * r {
            NodeRole::U(v - r + 1)
        } else if v < 3 * r {
            NodeRole::LowerC(v - 2 * r + 1)
        } else if v < 4 * r {
            NodeRole::L(v - 3 * r + 1)
        } else {
            let rest = v - 4 * r;
            NodeRole::Desc(rest / (r - 2) + 1, rest % (r - 2) + 2)
        }
    }
}

/// Node roles; ladder indices are 1-based, lower-ladder c-index counts from 1
/// within its own ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeRole {
    UpperC(usize),
    U(usize),
    LowerC(usize),
    L(usize),
    /// Chain i, depth j with 1 < j < r.
    Desc(usize, usize),
}

/// Upper zig-zag trip node sequence for chain index i.
pub(crate) fn upper_trip_nodes(layout: &HardFamilyLayout, i: usize) -> Vec<NodeId> {
    let r = layout.r;
    let mut seq = vec![layout.c(1), layout.u(i), layout.c(2)];
    for j in 1..=r - 2 {
        seq.push(layout.c(j));
        seq.push(layout.c(j + 2));
    }
    seq.push(layout.c(r - 1));
    seq
}

/// Lower zig-zag trip node sequence for chain index i.
pub(crate) fn lower_trip_nodes(layout: &HardFamilyLayout, i: usize) -> Vec<NodeId> {
    let r = layout.r;
    let mut seq = vec![layout.c(r + 2), layout.c(r + 1)];
    for j in 1..=r - 2 {
        seq.push(layout.c(r + j + 2));
        seq.push(layout.c(r + j + 1));
    }
    seq.push(layout.l(i));
    seq.push(layout.c(2 * r));
    seq
}

/// Builds the family member for ladder width r (r > 3): r^2 + 2r nodes and
/// 4r + 1 unit-weight trips.
pub fn gen_hard_family(r: usize) -> Result<(TripNetwork, HardFamilyLayout)> {
    if r <= 3 {
        return Err(Error::BadParameter(format!("family width r = {r} must exceed 3")));
    }
    let layout = HardFamilyLayout { r };
    let mut b = NetBuilder::new();
    for i in 1..=r {
        b.node(format!("c_{i}"));
    }
    for i in 1..=r {
        b.node(format!("u_{i}"));
    }
    for i in r + 1..=2 * r {
        b.node(format!("c_{i}"));
    }
    for i in 1..=r {
        b.node(format!("l_{i}"));
    }
    for i in 1..=r {
        for j in 2..=r - 1 {
            b.node(format!("d_{i}^{j}"));
        }
    }

    // Upper ladder: backward steps, skip-two steps, and the u_i loops.
    for i in 1..=r - 1 {
        b.arc(layout.c(i + 1), layout.c(i));
    }
    for i in 1..=r - 2 {
        b.arc(layout.c(i), layout.c(i + 2));
    }
    for i in 1..=r {
        b.arc(layout.c(1), layout.u(i));
        b.arc(layout.u(i), layout.c(2));
    }
    // Lower ladder.
    for i in 1..=r - 1 {
        b.arc(layout.c(r + i + 1), layout.c(r + i));
    }
    for i in 1..=r - 2 {
        b.arc(layout.c(r + i), layout.c(r + i + 2));
    }
    for i in 1..=r {
        b.arc(layout.c(2 * r - 1), layout.l(i));
        b.arc(layout.l(i), layout.c(2 * r));
    }
    // Descending chains.
    for i in 1..=r {
        for j in 1..=r - 1 {
            b.arc(layout.d(i, j), layout.d(i, j + 1));
        }
    }
    // Ascending edge.
    let up = b.arc(layout.c(r + 1), layout.c(r));

    for i in 1..=r {
        let seq = upper_trip_nodes(&layout, i);
        b.walk_trip(&seq);
    }
    for i in 1..=r {
        let seq = lower_trip_nodes(&layout, i);
        b.walk_trip(&seq);
    }
    for i in 1..=r {
        let chain: Vec<NodeId> = (1..=r).map(|j| layout.d(i, j)).collect();
        b.walk_trip(&chain);
    }
    for i in 1..=r {
        let chain: Vec<NodeId> = (1..=r).map(|j| layout.d(i, j)).collect();
        b.walk_trip(&chain);
    }
    b.edge_trip(up);

    let mut roles = BTreeMap::new();
    roles.insert("c_1".to_string(), layout.c(1));
    roles.insert("c_r".to_string(), layout.c(r));
    roles.insert("c_r+1".to_string(), layout.c(r + 1));
    roles.insert("c_2r".to_string(), layout.c(2 * r));
    let mut params = BTreeMap::new();
    params.insert("r".to_string(), serde_json::json!(r));
    let mut thresholds = BTreeMap::new();
    let n = layout.node_count() as i64;
    thresholds.insert("reach_max_sq".to_string(), 225 * n * n * n); // total^2 <= 225 n^3
    thresholds.insert("claim_pairs_min".to_string(), ((r - 1) * (r - 2).pow(3)) as i64);
    let meta = InstanceMeta {
        generator: "hard-family".to_string(),
        params,
        roles,
        thresholds,
        paper_params: true,
    };
    let net = b.finish(meta);
    debug_assert!(net.validate().is_empty());
    debug_assert_eq!(net.node_count, layout.node_count());
    debug_assert_eq!(net.trip_count(), layout.trip_count());
    Ok((net, layout))
}

/// A recipe component: either one named trip or a partial schedule of a whole
/// ladder with a distinguished trip placed last (upper) or first (lower).
#[derive(Debug, Clone, Copy)]
enum Part {
    Trip(TripId),
    /// All upper trips, the i-th last.
    UpperLast(usize),
    /// All lower trips, the i-th first.
    LowerFirst(usize),
}

fn expand(layout: &HardFamilyLayout, parts: &[Part]) -> Vec<TripId> {
    let r = layout.r;
    let mut order = Vec::new();
    for part in parts {
        match *part {
            Part::Trip(t) => order.push(t),
            Part::UpperLast(i) => {
                order.extend((1..=r).filter(|&j| j != i).map(|j| layout.trip_upper(j)));
                order.push(layout.trip_upper(i));
            }
            Part::LowerFirst(i) => {
                order.push(layout.trip_lower(i));
                order.extend((1..=r).filter(|&j| j != i).map(|j| layout.trip_lower(j)));
            }
        }
    }
    order
}

/// The connecting schedule for an ordered node pair, assembled from the
/// per-role recipe table and verified before being returned.
pub fn hard_family_recipe_schedule(
    net: &TripNetwork,
    layout: &HardFamilyLayout,
    from: NodeId,
    to: NodeId,
) -> Result<Schedule> {
    use NodeRole::*;
    let parts: Vec<Part> = if from == to {
        vec![]
    } else {
        let up = Part::Trip(layout.trip_ascending());
        match (layout.classify(from), layout.classify(to)) {
            (UpperC(h), UpperC(k)) => {
                if k < h {
                    vec![Part::UpperLast(1)]
                } else {
                    vec![Part::Trip(layout.trip_upper(1))]
                }
            }
            (UpperC(_), U(k)) => vec![Part::UpperLast(k)],
            (UpperC(_), LowerC(_)) => {
                vec![Part::UpperLast(1), Part::Trip(layout.trip_desc_left(1)), Part::LowerFirst(1)]
            }
            (UpperC(_), L(k)) | (UpperC(_), Desc(k, _)) => {
                vec![Part::UpperLast(k), Part::Trip(layout.trip_desc_left(k))]
            }
            (U(h), UpperC(_)) => vec![Part::Trip(layout.trip_upper(h))],
            (U(h), U(k)) => vec![Part::Trip(layout.trip_upper(h)), Part::Trip(layout.trip_upper(k))],
            (U(h), LowerC(_)) => {
                vec![Part::Trip(layout.trip_desc_left(h)), Part::LowerFirst(h)]
            }
            (U(h), L(k)) | (U(h), Desc(k, _)) => {
                if k == h {
                    vec![Part::Trip(layout.trip_desc_left(k))]
                } else {
                    vec![
                        Part::Trip(layout.trip_upper(h)),
                        Part::Trip(layout.trip_upper(k)),
                        Part::Trip(layout.trip_desc_left(k)),
                    ]
                }
            }
            (LowerC(_), UpperC(_)) => vec![Part::LowerFirst(1), up, Part::UpperLast(1)],
            (LowerC(_), U(k)) => vec![Part::LowerFirst(1), up, Part::UpperLast(k)],
            (LowerC(h), LowerC(k)) => {
                if k < h {
                    vec![Part::LowerFirst(1)]
                } else {
                    vec![Part::Trip(layout.trip_lower(1))]
                }
            }
            (LowerC(_), L(k)) => vec![Part::Trip(layout.trip_lower(k))],
            (LowerC(h), Desc(k, _)) => {
                vec![Part::LowerFirst(h), up, Part::UpperLast(k), Part::Trip(layout.trip_desc_left(k))]
            }
            (L(h), UpperC(_)) | (L(h), U(_)) => {
                let k = match layout.classify(to) {
                    U(k) => k,
                    _ => 1,
                };
                vec![Part::LowerFirst(h), up, Part::UpperLast(k)]
            }
            (L(h), LowerC(_)) => vec![Part::LowerFirst(h)],
            (L(h), L(k)) => vec![Part::Trip(layout.trip_lower(h)), Part::Trip(layout.trip_lower(k))],
            (L(h), Desc(k, _)) => {
                vec![Part::LowerFirst(h), up, Part::UpperLast(k), Part::Trip(layout.trip_desc_left(k))]
            }
            (Desc(h, _), UpperC(_)) | (Desc(h, _), U(_)) => {
                let k = match layout.classify(to) {
                    U(k) => k,
                    _ => 1,
                };
                vec![Part::Trip(layout.trip_desc_left(h)), Part::LowerFirst(h), up, Part::UpperLast(k)]
            }
            (Desc(h, _), LowerC(_)) => {
                vec![Part::Trip(layout.trip_desc_left(h)), Part::LowerFirst(h)]
            }
            (Desc(h, _), L(k)) => {
                if k == h {
                    vec![Part::Trip(layout.trip_desc_left(h))]
                } else {
                    vec![
                        Part::Trip(layout.trip_desc_left(h)),
                        Part::Trip(layout.trip_lower(h)),
                        Part::Trip(layout.trip_lower(k)),
                    ]
                }
            }
            (Desc(h, l1), Desc(k, l2)) => {
                if k != h {
                    vec![
                        Part::Trip(layout.trip_desc_left(h)),
                        Part::LowerFirst(h),
                        up,
                        Part::UpperLast(k),
                        Part::Trip(layout.trip_desc_left(k)),
                    ]
                } else if l2 > l1 {
                    vec![Part::Trip(layout.trip_desc_left(h))]
                } else {
                    vec![
                        Part::Trip(layout.trip_desc_left(h)),
                        Part::LowerFirst(h),
                        up,
                        Part::UpperLast(k),
                        Part::Trip(layout.trip_desc_right(k)),
                    ]
                }
            }
        }
    };

    let mut order = expand(layout, &parts);
    let mut used = vec![false; net.trip_count()];
    for &t in &order {
        used[t] = true;
    }
    order.extend((0..net.trip_count()).filter(|&t| !used[t]));
    let schedule = Schedule::new(order);
    let tau = schedule_to_temporalisation(net, &AnySchedule::Strict(schedule.clone()))?;
    let g = induce_temporal_graph(net, &tau)?;
    if earliest_arrival(&g, from)[to].is_none() {
        return Err(Error::VerificationFailure(format!(
            "recipe schedule fails to connect {from} to {to}"
        )));
    }
    Ok(schedule)
}

/// Outcome of the sampled reachability-bound verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardFamilyBoundReport {
    pub schedules_checked: usize,
    pub claim_pairs: usize,
    pub max_total: u64,
    pub failures: Vec<String>,
}

impl HardFamilyBoundReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks, over seeded random schedules, that every claim pair stays
/// unconnected and the total never exceeds 15 n^(3/2). Claim pairs are the
/// ordered pairs of interior chain nodes on different chains, except the pair
/// of chains (argmin lower start, argmax upper start).
pub fn verify_hard_family_bound(
    net: &TripNetwork,
    layout: &HardFamilyLayout,
    samples: usize,
    seed: u64,
) -> Result<HardFamilyBoundReport> {
    let r = layout.r;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut max_total = 0u64;
    let claim_pairs = (r * (r - 1) - 1) * (r - 2) * (r - 2);
    let mut order: Vec<TripId> = (0..net.trip_count()).collect();
    for sample in 0..samples {
        order.shuffle(&mut rng);
        let schedule = Schedule::new(order.clone());
        let tau = schedule_to_temporalisation(net, &AnySchedule::Strict(schedule))?;
        if let Some(problem) = check_one_temporalisation(net, layout, &tau)? {
            failures.push(format!("sample {sample}: {problem}"));
            if failures.len() >= 5 {
                break;
            }
        }
        let total = reach_report(net, &tau, false)?.total;
        max_total = max_total.max(total);
    }
    Ok(HardFamilyBoundReport { schedules_checked: samples, claim_pairs, max_total, failures })
}

/// Bound and claim check for one temporalisation; `None` means it passed.
pub fn check_one_temporalisation(
    net: &TripNetwork,
    layout: &HardFamilyLayout,
    tau: &Temporalisation,
) -> Result<Option<String>> {
    let r = layout.r;
    let i_min = (1..=r).min_by_key(|&i| (tau.starts[layout.trip_lower(i)], i)).unwrap();
    let i_max = (1..=r).max_by_key(|&i| (tau.starts[layout.trip_upper(i)], std::cmp::Reverse(i))).unwrap();
    let report = reach_report(net, tau, true)?;
    let n = net.node_count as u64;
    if report.total * report.total > 225 * n * n * n {
        return Ok(Some(format!("total {} exceeds 15 n^(3/2)", report.total)));
    }
    let sets = report.sets.as_ref().unwrap();
    for h1 in 1..=r {
        for h2 in 1..=r {
            if h1 == h2 || (h1 == i_min && h2 == i_max) {
                continue;
            }
            for l1 in 2..=r - 1 {
                let from = layout.d(h1, l1);
                let set = &sets[from];
                for l2 in 2..=r - 1 {
                    let to = layout.d(h2, l2);
                    if set.binary_search(&to).is_ok() {
                        return Ok(Some(format!(
                            "claim pair d_{h1}^{l1} -> d_{h2}^{l2} connected (i_min={i_min}, i_max={i_max})"
                        )));
                    }
                }
            }
        }
    }
    Ok(None)
}
