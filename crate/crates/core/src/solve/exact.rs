//! Exhaustive solvers for tiny instances: all schedules, all weak schedules
//! (ordered set partitions), or all integer start-time grids.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    AnySchedule, NodeId, Schedule, Temporalisation, TripNetwork, WeakSchedule,
    schedule_to_temporalisation,
};
use crate::reach::{ReachReport, reach_report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExactMode {
    /// All |T|! schedules.
    Perm,
    /// All ordered set partitions of the trips into simultaneous blocks.
    Weak,
    /// All integer start vectors in [0, horizon]^|T|.
    Grid,
}

/// The winning assignment of an exhaustive search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BestAssignment {
    Schedule(Schedule),
    Weak(WeakSchedule),
    Starts(Temporalisation),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactResult {
    pub assignment: BestAssignment,
    pub report: ReachReport,
    pub value: u64,
    pub explored: u128,
}

#[derive(Debug, Clone, Copy)]
pub struct ExactOptions {
    /// Candidate-count cap; the search refuses to start above it.
    pub cap: u128,
    /// Grid horizon; defaults to twice the total trip duration.
    pub horizon: Option<i64>,
    /// Maximize the reach of this source instead of the total.
    pub source: Option<NodeId>,
}

pub const DEFAULT_CAP: u128 = 10_000_000;

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions { cap: DEFAULT_CAP, horizon: None, source: None }
    }
}

fn factorial(n: usize) -> Option<u128> {
    (1..=n as u128).try_fold(1u128, |a, b| a.checked_mul(b))
}

/// Number of ordered set partitions of an n-set (Fubini numbers), via the
/// recurrence a(n) = sum_k C(n,k) a(n-k).
fn fubini(n: usize) -> Option<u128> {
    let mut a = vec![1u128; 1];
    for i in 1..=n {
        let mut total: u128 = 0;
        let mut binom: u128 = 1; // C(i, k)
        for k in 1..=i {
            binom = binom.checked_mul((i - k + 1) as u128)? / k as u128;
            total = total.checked_add(binom.checked_mul(a[i - k])?)?;
        }
        a.push(total);
    }
    Some(a[n])
}

fn grid_size(points: u128, dims: usize) -> Option<u128> {
    points.checked_pow(dims as u32)
}

/// Exhaustive maximization over the chosen search space. Ties break towards
/// the first maximizer in the (documented, deterministic) enumeration order:
/// lexicographic permutations, set partitions in restricted-growth order with
/// block orders in lexicographic permutation order, and odometer order for the
/// grid.
pub fn exact_best(net: &TripNetwork, mode: ExactMode, opts: &ExactOptions) -> Result<ExactResult> {
    let tn = net.trip_count();
    if let Some(s) = opts.source {
        if s >= net.node_count {
            return Err(Error::NodeIndexOutOfRange(s, net.node_count));
        }
    }
    let required = match mode {
        ExactMode::Perm => factorial(tn),
        ExactMode::Weak => fubini(tn),
        ExactMode::Grid => {
            let horizon = effective_horizon(net, opts)?;
            grid_size(horizon as u128 + 1, tn)
        }
    }
    .ok_or(Error::CapExceeded { required: u128::MAX, cap: opts.cap })?;
    if required > opts.cap {
        return Err(Error::CapExceeded { required, cap: opts.cap });
    }

    let mut best: Option<(u64, BestAssignment)> = None;
    let mut explored: u128 = 0;
    let mut consider = |value: u64, assignment: &dyn Fn() -> BestAssignment| {
        explored += 1;
        if best.as_ref().map_or(true, |(b, _)| value > *b) {
            best = Some((value, assignment()));
        }
    };

    let objective = |tau: &Temporalisation| -> Result<u64> { objective_value(net, tau, opts.source) };

    match mode {
        ExactMode::Perm => {
            for_each_permutation(tn, &mut |order| {
                let sched = Schedule::new(order.to_vec());
                let tau = schedule_to_temporalisation(net, &AnySchedule::Strict(sched.clone()))?;
                consider(objective(&tau)?, &|| BestAssignment::Schedule(sched.clone()));
                Ok(())
            })?;
        }
        ExactMode::Weak => {
            for_each_ordered_partition(tn, &mut |blocks| {
                let weak = WeakSchedule::new(blocks.to_vec());
                let tau = schedule_to_temporalisation(net, &AnySchedule::Weak(weak.clone()))?;
                consider(objective(&tau)?, &|| BestAssignment::Weak(weak.clone()));
                Ok(())
            })?;
        }
        ExactMode::Grid => {
            let horizon = effective_horizon(net, opts)?;
            let mut starts = vec![0i64; tn];
            loop {
                let tau = Temporalisation::new(starts.clone());
                consider(objective(&tau)?, &|| BestAssignment::Starts(tau.clone()));
                if !odometer_next(&mut starts, horizon) {
                    break;
                }
            }
        }
    }

    let (value, assignment) = best.expect("at least one candidate");
    let tau = assignment_to_temporalisation(net, &assignment)?;
    let report = reach_report(net, &tau, false)?;
    Ok(ExactResult { assignment, report, value, explored })
}

/// Total reach, or the reach count of one source (computed without scanning
/// the other sources).
fn objective_value(net: &TripNetwork, tau: &Temporalisation, source: Option<NodeId>) -> Result<u64> {
    match source {
        None => Ok(reach_report(net, tau, false)?.total),
        Some(s) => {
            let g = crate::reach::induce_temporal_graph(net, tau)?;
            let arr = crate::reach::earliest_arrival(&g, s);
            Ok(arr.iter().filter(|a| a.is_some()).count() as u64)
        }
    }
}

pub fn assignment_to_temporalisation(net: &TripNetwork, a: &BestAssignment) -> Result<Temporalisation> {
    match a {
        BestAssignment::Schedule(s) => schedule_to_temporalisation(net, &AnySchedule::Strict(s.clone())),
        BestAssignment::Weak(w) => schedule_to_temporalisation(net, &AnySchedule::Weak(w.clone())),
        BestAssignment::Starts(t) => Ok(t.clone()),
    }
}

/// Default grid horizon: twice the total trip duration.
pub fn default_horizon(net: &TripNetwork) -> Result<i64> {
    let mut total: i64 = 0;
    for t in 0..net.trip_count() {
        total = total.checked_add(net.trip_duration(t)?).ok_or(Error::Overflow("grid horizon"))?;
    }
    total.checked_mul(2).ok_or(Error::Overflow("grid horizon"))
}

fn effective_horizon(net: &TripNetwork, opts: &ExactOptions) -> Result<i64> {
    match opts.horizon {
        Some(h) if h >= 0 => Ok(h),
        Some(h) => Err(Error::BadParameter(format!("horizon {h} must be >= 0"))),
        None => default_horizon(net),
    }
}

/// Advances a start vector in odometer (lexicographic) order over
/// [0, horizon]^len; false once the last vector has been visited.
fn odometer_next(starts: &mut [i64], horizon: i64) -> bool {
    for slot in starts.iter_mut().rev() {
        if *slot < horizon {
            *slot += 1;
            return true;
        }
        *slot = 0;
    }
    false
}

/// Visits all permutations of 0..n in lexicographic order.
fn for_each_permutation(n: usize, f: &mut dyn FnMut(&[usize]) -> Result<()>) -> Result<()> {
    let mut perm: Vec<usize> = (0..n).collect();
    if n == 0 {
        return f(&perm);
    }
    loop {
        f(&perm)?;
        // next_permutation
        let Some(i) = (0..n - 1).rev().find(|&i| perm[i] < perm[i + 1]) else {
            return Ok(());
        };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
}

/// Visits all ordered set partitions of 0..n: set partitions are enumerated in
/// restricted-growth order, and for each partition every permutation of its
/// blocks is visited in lexicographic order.
fn for_each_ordered_partition(n: usize, f: &mut dyn FnMut(&[Vec<usize>]) -> Result<()>) -> Result<()> {
    if n == 0 {
        return f(&[]);
    }
    let mut rgs = vec![0usize; n];
    loop {
        let block_count = rgs.iter().copied().max().unwrap() + 1;
        let mut blocks = vec![Vec::new(); block_count];
        for (t, &b) in rgs.iter().enumerate() {
            blocks[b].push(t);
        }
        for_each_permutation(block_count, &mut |order| {
            let arranged: Vec<Vec<usize>> = order.iter().map(|&b| blocks[b].clone()).collect();
            f(&arranged)
        })?;
        if !next_restricted_growth(&mut rgs) {
            return Ok(());
        }
    }
}

/// Advances a restricted growth string (a[0] = 0, a[i] <= max(prefix) + 1).
fn next_restricted_growth(a: &mut [usize]) -> bool {
    let n = a.len();
    for i in (1..n).rev() {
        let prefix_max = a[..i].iter().copied().max().unwrap();
        if a[i] <= prefix_max {
            a[i] += 1;
            for x in &mut a[i + 1..] {
                *x = 0;
            }
            return true;
        }
    }
    false
}
