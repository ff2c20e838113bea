//! Reduction from 3-CNF satisfiability to reachability maximization when
//! every trip is a single edge and the underlying multidigraph is strongly
//! connected.
//!
//! A block of M sink/source nodes hangs off a four-node backbone; K parallel
//! in/out stubs per clause amplify the reward for routing through a variable
//! gadget in the orientation picked by a satisfying assignment. The derived
//! thresholds separate satisfiable (reachability >= lower bound) from
//! unsatisfiable (reachability <= upper bound < lower bound) instances.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gen::{Formula, NetBuilder, cadd, cmul};
use crate::model::{InstanceMeta, NodeId, Schedule, TripNetwork};

/// Gadget constants; `k` and `m_big` admit overrides, the thresholds are
/// evaluated at the effective values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MroettParams {
    /// Stub multiplicity per clause.
    pub k: i64,
    /// Block size.
    pub m_big: i64,
    /// Number of non-block nodes.
    pub h_size: i64,
    /// Reachability of the assignment-derived schedule (lower bound when
    /// satisfiable).
    pub lower: i64,
    /// Cap when the block is toured in the wrong order.
    pub upper1: i64,
    /// Cap when the formula is unsatisfiable.
    pub upper2: i64,
}

/// Evaluates the closed forms for an (n, m) formula shape with optional
/// overrides of K and M.
pub fn mroett_params(
    n: usize,
    m: usize,
    k_override: Option<i64>,
    m_override: Option<i64>,
) -> Result<MroettParams> {
    let (n, m) = (n as i64, m as i64);
    let k = match k_override {
        Some(k) if k >= 1 => k,
        Some(k) => return Err(Error::BadParameter(format!("K = {k} must be >= 1"))),
        None => cmul(91, cmul(n, m, "nm")?, "default K")?,
    };
    let h_size = cadd(cmul(cmul(2, cadd(k, 1, "K+1")?, "2(K+1)")?, m, "2(K+1)m")?, 4 * n, "|H|")?;
    let m_big = match m_override {
        Some(v) if v >= 1 => v,
        Some(v) => return Err(Error::BadParameter(format!("M = {v} must be >= 1"))),
        None => cadd(cmul(h_size + 5, h_size + 5, "(|H|+5)^2")?, 1, "default M")?,
    };
    let km = cmul(k, m, "Km")?;
    let lower = {
        let mut acc = cmul(m_big, cadd(m_big, h_size + 4, "M+|H|+4")?, "M(M+|H|+4)")?;
        acc = cadd(acc, cadd(cmul(4, m_big, "4M")?, 2 * h_size + 10, "4M+2|H|+10")?, "lower")?;
        let reach_mid = cadd(m_big, cadd(km, m, "Km+m")?, "M+Km+m")?;
        acc = cadd(acc, cmul(km, reach_mid, "Km(M+Km+m)")?, "lower")?;
        acc = cadd(acc, cmul(m, reach_mid, "m(M+Km+m)")?, "lower")?;
        acc = cadd(acc, cmul(4 * n, cadd(m_big, k, "M+K")?, "4n(M+K)")?, "lower")?;
        acc = cadd(acc, cmul(m, cadd(m_big, k, "M+K")?, "m(M+K)")?, "lower")?;
        cadd(acc, cmul(m_big, km, "MKm")?, "lower")?
    };
    let upper1 = cadd(
        cmul(m_big, h_size + 5, "M(|H|+5)")?,
        cmul(h_size + 4, cadd(m_big, h_size + 4, "M+|H|+4")?, "(|H|+4)(M+|H|+4)")?,
        "upper1",
    )?;
    let upper2 = {
        let mut acc = cmul(m_big, cadd(m_big, h_size + 4, "M+|H|+4")?, "M(M+|H|+4)")?;
        acc = cadd(acc, cadd(cmul(4, m_big, "4M")?, 3 * h_size + 15, "4M+3|H|+15")?, "upper2")?;
        let mid17 = cadd(cadd(m_big, km, "M+Km")?, m + 17, "M+Km+m+17")?;
        acc = cadd(acc, cadd(cmul(km, mid17, "Km(...)")?, -cmul(k, k, "K^2")?, "Km(...)-K^2")?, "upper2")?;
        let mid16 = cadd(cadd(m_big, km, "M+Km")?, m + 16, "M+Km+m+16")?;
        acc = cadd(acc, cmul(m, mid16, "m(...)")?, "upper2")?;
        let mid7 = cadd(cadd(m_big, km, "M+Km")?, m + 7, "M+Km+m+7")?;
        acc = cadd(acc, cmul(4 * n, mid7, "4n(...)")?, "upper2")?;
        acc = cadd(acc, cmul(m, cadd(m_big, k + 4, "M+K+4")?, "m(M+K+4)")?, "upper2")?;
        cadd(acc, cmul(km, cadd(m_big, 4, "M+4")?, "Km(M+4)")?, "upper2")?
    };
    Ok(MroettParams { k, m_big, h_size, lower, upper1, upper2 })
}

/// Node handles of a generated instance.
#[derive(Debug, Clone)]
pub struct MroettLayout {
    pub t1: Vec<NodeId>,
    pub t2: Vec<NodeId>,
    pub f1: Vec<NodeId>,
    pub f2: Vec<NodeId>,
    pub c1: Vec<NodeId>,
    pub c2: Vec<NodeId>,
    pub d: Vec<Vec<NodeId>>,
    pub e: Vec<Vec<NodeId>>,
    pub u: [NodeId; 4],
    pub block: Vec<NodeId>,
}

/// Builds the one-edge-trip instance. Every edge forms its own trip, so trip
/// indices equal edge indices.
pub fn gen_mroett(
    f: &Formula,
    k_override: Option<i64>,
    m_override: Option<i64>,
) -> Result<(TripNetwork, MroettParams, MroettLayout)> {
    if !f.distinct_vars_per_clause() {
        return Err(Error::Formula(
            "the one-edge reduction needs three distinct variables per clause".into(),
        ));
    }
    let n = f.n_vars;
    let m = f.n_clauses();
    let params = mroett_params(n, m, k_override, m_override)?;
    let k = usize::try_from(params.k).map_err(|_| Error::Overflow("stub count"))?;
    let m_big = usize::try_from(params.m_big).map_err(|_| Error::Overflow("block size"))?;
    // Refuse absurd memory before allocating.
    let node_estimate = (m_big as u128) + (2 * (k as u128 + 1) * m as u128) + 4 * n as u128 + 4;
    if node_estimate > 50_000_000 {
        return Err(Error::BadParameter(format!(
            "instance would have {node_estimate} nodes; pass overrides for K and M"
        )));
    }

    let mut b = NetBuilder::new();
    let t1: Vec<usize> = (1..=n).map(|i| b.node(format!("t_{i}^1"))).collect();
    let t2: Vec<usize> = (1..=n).map(|i| b.node(format!("t_{i}^2"))).collect();
    let f1: Vec<usize> = (1..=n).map(|i| b.node(format!("f_{i}^1"))).collect();
    let f2: Vec<usize> = (1..=n).map(|i| b.node(format!("f_{i}^2"))).collect();
    let c1: Vec<usize> = (1..=m).map(|j| b.node(format!("c_{j}^1"))).collect();
    let c2: Vec<usize> = (1..=m).map(|j| b.node(format!("c_{j}^2"))).collect();
    let d: Vec<Vec<usize>> = (1..=m)
        .map(|j| (1..=k).map(|i| b.node(format!("d_{j}^{i}"))).collect())
        .collect();
    let e: Vec<Vec<usize>> = (1..=m)
        .map(|j| (1..=k).map(|i| b.node(format!("e_{j}^{i}"))).collect())
        .collect();
    let u: [usize; 4] = std::array::from_fn(|i| b.node(format!("u_{}", i + 1)));
    let block: Vec<usize> = (1..=m_big).map(|i| b.node(format!("b_{i}"))).collect();

    // Variable gadget cycle.
    for i in 0..n {
        b.arc(t1[i], f2[i]);
        b.arc(f2[i], f1[i]);
        b.arc(f1[i], t2[i]);
        b.arc(t2[i], t1[i]);
    }
    // Clause gadgets.
    for j in 0..m {
        for lit in &f.clauses[j] {
            if lit.negated {
                b.arc(c1[j], f1[lit.var]);
                b.arc(f2[lit.var], c2[j]);
            } else {
                b.arc(c1[j], t1[lit.var]);
                b.arc(t2[lit.var], c2[j]);
            }
        }
        for h in 0..m {
            if h != j {
                b.arc(c1[j], c2[h]);
            }
        }
        for i in 0..k {
            b.arc(d[j][i], c1[j]);
            b.arc(c2[j], e[j][i]);
        }
    }
    // Block gadget.
    for &bi in &block {
        b.arc(bi, u[0]);
    }
    b.arc(u[0], u[1]);
    for j in 0..m {
        for i in 0..k {
            b.arc(u[1], d[j][i]);
            b.arc(e[j][i], u[2]);
        }
    }
    b.arc(u[2], u[3]);
    for &bi in &block {
        b.arc(u[3], bi);
    }

    // One trip per edge.
    for eid in 0..b.edge_count() {
        b.edge_trip(eid);
    }

    let layout = MroettLayout { t1, t2, f1, f2, c1, c2, d, e, u, block };
    let mut roles = BTreeMap::new();
    roles.insert("u_1".to_string(), layout.u[0]);
    roles.insert("u_2".to_string(), layout.u[1]);
    roles.insert("u_3".to_string(), layout.u[2]);
    roles.insert("u_4".to_string(), layout.u[3]);
    roles.insert("b_1".to_string(), layout.block[0]);
    let mut meta_params = BTreeMap::new();
    meta_params.insert("n".to_string(), serde_json::json!(n));
    meta_params.insert("m".to_string(), serde_json::json!(m));
    meta_params.insert("K".to_string(), serde_json::json!(params.k));
    meta_params.insert("M".to_string(), serde_json::json!(params.m_big));
    meta_params.insert("H".to_string(), serde_json::json!(params.h_size));
    meta_params.insert("clauses".to_string(), serde_json::json!(super::dimacs_clauses(f)));
    let mut thresholds = BTreeMap::new();
    thresholds.insert("lower".to_string(), params.lower);
    thresholds.insert("upper1".to_string(), params.upper1);
    thresholds.insert("upper2".to_string(), params.upper2);
    let meta = InstanceMeta {
        generator: "mroett".to_string(),
        params: meta_params,
        roles,
        thresholds,
        paper_params: k_override.is_none() && m_override.is_none(),
    };
    let net = b.finish(meta);
    debug_assert!(net.validate().is_empty());
    Ok((net, params, layout))
}

/// The schedule derived from a satisfying assignment: block in-edges, the
/// backbone, clause stubs, clause fan-out, variable cycles in the orientation
/// given by the assignment, clause fan-in, stubs out, backbone, block
/// out-edges. Ties inside a phase resolve to edge-index order.
pub fn mroett_assignment_schedule(
    net: &TripNetwork,
    f: &Formula,
    layout: &MroettLayout,
    assignment: &[bool],
) -> Result<Schedule> {
    if assignment.len() != f.n_vars {
        return Err(Error::BadParameter(format!(
            "assignment has {} values for {} variables",
            assignment.len(),
            f.n_vars
        )));
    }
    if let Some(j) = f.first_unsatisfied(assignment) {
        return Err(Error::UnsatisfiedClause(j));
    }
    let by_arc: std::collections::HashMap<(usize, usize), usize> =
        net.edges.iter().enumerate().map(|(i, e)| ((e.tail, e.head), i)).collect();
    let arc = |tail: usize, head: usize| -> usize { by_arc[&(tail, head)] };
    let mut order: Vec<usize> = Vec::with_capacity(net.trip_count());
    // Phase 1: into the funnel.
    for &bi in &layout.block {
        order.push(arc(bi, layout.u[0]));
    }
    order.push(arc(layout.u[0], layout.u[1]));
    for dj in &layout.d {
        for &di in dj {
            order.push(arc(layout.u[1], di));
        }
    }
    for (j, dj) in layout.d.iter().enumerate() {
        for &di in dj {
            order.push(arc(di, layout.c1[j]));
        }
    }
    // Phase 2: out of the bottom clause nodes (literal edges and cross edges).
    let mut phase: Vec<usize> = Vec::new();
    for (eid, e) in net.edges.iter().enumerate() {
        if layout.c1.contains(&e.tail) {
            phase.push(eid);
        }
    }
    order.extend(phase.iter().copied());
    // Phase 3: variable cycles in assignment orientation.
    for i in 0..f.n_vars {
        let (a, b2, c, d2) = if assignment[i] {
            (
                arc(layout.t1[i], layout.f2[i]),
                arc(layout.f2[i], layout.f1[i]),
                arc(layout.f1[i], layout.t2[i]),
                arc(layout.t2[i], layout.t1[i]),
            )
        } else {
            (
                arc(layout.f1[i], layout.t2[i]),
                arc(layout.t2[i], layout.t1[i]),
                arc(layout.t1[i], layout.f2[i]),
                arc(layout.f2[i], layout.f1[i]),
            )
        };
        order.extend([a, b2, c, d2]);
    }
    // Phase 4: into the top clause nodes, then out to the stubs.
    let mut placed = vec![false; net.trip_count()];
    for &t in &order {
        placed[t] = true;
    }
    let mut entering: Vec<usize> = Vec::new();
    for (eid, e) in net.edges.iter().enumerate() {
        if !placed[eid] && layout.c2.contains(&e.head) {
            entering.push(eid);
        }
    }
    order.extend(entering);
    for (j, ej) in layout.e.iter().enumerate() {
        for &ei in ej {
            order.push(arc(layout.c2[j], ei));
        }
    }
    // Phase 5: back to the block.
    for ej in &layout.e {
        for &ei in ej {
            order.push(arc(ei, layout.u[2]));
        }
    }
    order.push(arc(layout.u[2], layout.u[3]));
    for &bi in &layout.block {
        order.push(arc(layout.u[3], bi));
    }
    if order.len() != net.trip_count() {
        return Err(Error::VerificationFailure(format!(
            "assignment schedule placed {} of {} trips",
            order.len(),
            net.trip_count()
        )));
    }
    Ok(Schedule::new(order))
}
