//! Color-coding decision procedure for one-to-one reachability with a bounded
//! number of trips.
//!
//! For a coloring of the trips with k colors, a dynamic program tracks, per
//! node and path length i, the family of color sets of paths formed by
//! concatenating i subtrips of distinct trips with pairwise distinct colors.
//! Color sets are k-bit masks; each family holds at most 2^k masks. A YES in
//! random mode is always certified: the witness is rebuilt from backpointers
//! and verified through an actual schedule.

use std::collections::HashMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{NodeId, TripId, TripNetwork};
use crate::solve::oracle::{OracleOptions, TripIndex, Witness, WitnessSegment, o2o_oracle, witness_to_schedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FptMode {
    /// One-sided Monte Carlo over seeded random colorings.
    Random { trials: Option<u64>, seed: u64 },
    /// Every coloring, enumerated up to renaming of the colors (the dynamic
    /// program only depends on the induced partition of the trips).
    Exhaustive,
    /// Delegate to the exact oracle with the trip budget as cap.
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FptOutcome {
    pub feasible: bool,
    pub witness: Option<Witness>,
    pub trials: u64,
}

/// Default failure bound for random mode.
pub const DEFAULT_DELTA: f64 = 0.01;

/// ceil(e^k * ln(1/delta)) random colorings push the false-negative
/// probability below delta.
pub fn default_trials(k: usize, delta: f64) -> u64 {
    ((k as f64).exp() * (1.0 / delta).ln()).ceil() as u64
}

/// One DP cell: color mask -> (previous node, trip ridden, previous mask).
type Family = HashMap<u32, (NodeId, TripId, u32)>;

/// Per-trip colors plus the DP tables `families[i][v]` = set of color masks of
/// i-subtrip paths from the source to `v`.
pub struct ColoringState {
    pub k: usize,
    pub colors: Vec<u8>,
    families: Vec<Vec<Family>>,
}

impl ColoringState {
    /// Runs the dynamic program from `source` under the given coloring.
    pub fn run(net: &TripNetwork, index: &TripIndex, source: NodeId, k: usize, colors: Vec<u8>) -> ColoringState {
        debug_assert_eq!(colors.len(), net.trip_count());
        let n = net.node_count;
        let mut families: Vec<Vec<Family>> = Vec::with_capacity(k + 1);
        families.push(vec![Family::new(); n]); // i = 0 unused

        // Base: one-subtrip paths from the source.
        let mut level1 = vec![Family::new(); n];
        for t in 0..net.trip_count() {
            let Some(fs) = index.first_occurrence(t, source) else { continue };
            let mask = 1u32 << colors[t];
            for &(v, _, last) in index.nodes(t) {
                if last > fs {
                    level1[v].entry(mask).or_insert((source, t, 0));
                }
            }
        }
        families.push(level1);

        for i in 1..k {
            let prev = &families[i];
            let mut next = vec![Family::new(); n];
            for (t, trip) in net.trips.iter().enumerate() {
                let color_bit = 1u32 << colors[t];
                // Running union of families over nodes preceding the scan
                // position, with one contributing node per mask.
                let mut carried: HashMap<u32, NodeId> = HashMap::new();
                let mut at = net.edges[trip.edge_ids[0]].tail;
                for &eid in &trip.edge_ids {
                    let e = net.edges[eid];
                    debug_assert_eq!(e.tail, at);
                    for (&mask, _) in &prev[e.tail] {
                        carried.entry(mask).or_insert(e.tail);
                    }
                    at = e.head;
                    for (&mask, &u) in &carried {
                        if mask & color_bit != 0 {
                            continue;
                        }
                        next[at].entry(mask | color_bit).or_insert((u, t, mask));
                    }
                }
            }
            families.push(next);
        }

        ColoringState { k, colors, families }
    }

    /// Smallest i with a nonempty family at `v`, if any.
    pub fn hit(&self, v: NodeId) -> Option<(usize, u32)> {
        for i in 1..self.families.len() {
            if let Some((&mask, _)) = self.families[i][v].iter().min_by_key(|&(&m, _)| m) {
                return Some((i, mask));
            }
        }
        None
    }

    /// Masks present at `v` for path length `i`.
    pub fn family(&self, v: NodeId, i: usize) -> Vec<u32> {
        let mut masks: Vec<u32> = self.families[i][v].keys().copied().collect();
        masks.sort_unstable();
        masks
    }

    fn reconstruct(&self, source: NodeId, target: NodeId, i: usize, mask: u32) -> Witness {
        let mut segments = Vec::new();
        let mut v = target;
        let mut level = i;
        let mut m = mask;
        while level >= 1 {
            let &(u, t, prev_mask) = self.families[level][v].get(&m).expect("backpointer");
            segments.push(WitnessSegment { trip: t, entry: u, exit: v });
            v = u;
            m = prev_mask;
            level -= 1;
        }
        debug_assert_eq!(v, source);
        segments.reverse();
        Witness { source, target, segments }
    }
}

/// Decides whether `target` is reachable from `source` using at most `k`
/// distinct trips under some temporalisation.
pub fn fpt_o2o(
    net: &TripNetwork,
    source: NodeId,
    target: NodeId,
    k: usize,
    mode: FptMode,
) -> Result<FptOutcome> {
    if source >= net.node_count {
        return Err(Error::NodeIndexOutOfRange(source, net.node_count));
    }
    if target >= net.node_count {
        return Err(Error::NodeIndexOutOfRange(target, net.node_count));
    }
    if k < 1 || k > net.trip_count() {
        return Err(Error::BadParameter(format!(
            "k = {k} must be within 1..={}",
            net.trip_count()
        )));
    }
    if k > 31 {
        return Err(Error::BadParameter(format!("k = {k} exceeds the 31-color mask limit")));
    }
    if source == target {
        return Ok(FptOutcome {
            feasible: true,
            witness: Some(Witness { source, target, segments: vec![] }),
            trials: 0,
        });
    }

    match mode {
        FptMode::Oracle => {
            let opts = OracleOptions { k_cap: Some(k), ..Default::default() };
            let out = o2o_oracle(net, source, target, &opts)?;
            Ok(FptOutcome { feasible: out.feasible, witness: out.witness, trials: 0 })
        }
        FptMode::Random { trials, seed } => {
            let trials = trials.unwrap_or_else(|| default_trials(k, DEFAULT_DELTA));
            let index = TripIndex::new(net);
            for trial in 0..trials {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(trial);
                let colors: Vec<u8> =
                    (0..net.trip_count()).map(|_| rng.gen_range(0..k as u32) as u8).collect();
                if let Some(w) = try_coloring(net, &index, source, target, k, colors)? {
                    return Ok(FptOutcome { feasible: true, witness: Some(w), trials: trial + 1 });
                }
            }
            Ok(FptOutcome { feasible: false, witness: None, trials })
        }
        FptMode::Exhaustive => {
            let index = TripIndex::new(net);
            let tn = net.trip_count();
            // Restricted-growth enumeration of trip partitions into at most
            // k classes: every coloring is a renaming of exactly one of them,
            // and renaming colors does not change the DP outcome.
            let mut rgs = vec![0u8; tn];
            let mut trials = 0u64;
            loop {
                trials += 1;
                if let Some(w) = try_coloring(net, &index, source, target, k, rgs.clone())? {
                    return Ok(FptOutcome { feasible: true, witness: Some(w), trials });
                }
                if !next_restricted_growth_capped(&mut rgs, k as u8) {
                    return Ok(FptOutcome { feasible: false, witness: None, trials });
                }
            }
        }
    }
}

fn try_coloring(
    net: &TripNetwork,
    index: &TripIndex,
    source: NodeId,
    target: NodeId,
    k: usize,
    colors: Vec<u8>,
) -> Result<Option<Witness>> {
    let state = ColoringState::run(net, index, source, k, colors);
    let Some((i, mask)) = state.hit(target) else {
        return Ok(None);
    };
    let witness = state.reconstruct(source, target, i, mask);
    // One-sided correctness: the witness must survive schedule verification.
    witness_to_schedule(net, &witness)?;
    Ok(Some(witness))
}

/// Advances a restricted growth string with values capped at `max_classes`.
fn next_restricted_growth_capped(a: &mut [u8], max_classes: u8) -> bool {
    let n = a.len();
    for i in (1..n).rev() {
        let prefix_max = a[..i].iter().copied().max().unwrap();
        if a[i] <= prefix_max && a[i] + 1 < max_classes {
            a[i] += 1;
            for x in &mut a[i + 1..] {
                *x = 0;
            }
            return true;
        }
    }
    false
}
