//! Gap amplifications: wrap a one-to-one feasibility instance so that the
//! achievable reachability jumps across an explicit threshold exactly when the
//! base pair is connectable.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gen::{NetBuilder, cadd, cmul};
use crate::model::{InstanceMeta, NodeId, TripNetwork};

/// Checks a gap base: structurally valid with unit weights (the constructions
/// chain base nodes with fresh unit edges, so mixed weights are refused).
fn check_base(net: &TripNetwork) -> Result<()> {
    let violations = net.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidNetwork(violations[0].to_string()));
    }
    if let Some(e) = net.edges.iter().position(|e| e.weight != 1) {
        return Err(Error::BadParameter(format!("base edge {e} has non-unit weight")));
    }
    Ok(())
}

/// Node renumbering that pins chosen endpoints to the first and last
/// positions, keeping everyone else in relative order.
fn relabel(n: usize, first: NodeId, last: NodeId) -> Vec<usize> {
    let mut map = vec![usize::MAX; n];
    map[first] = 0;
    map[last] = n - 1;
    let mut next = 1;
    for v in 0..n {
        if v != first && v != last {
            map[v] = next;
            next += 1;
        }
    }
    map
}

fn base_label(net: &TripNetwork, v: usize) -> String {
    match &net.labels {
        Some(labels) => labels[v].clone(),
        None => format!("x_{}", v + 1),
    }
}

/// Single-source gap with reward chains on both sides of the target: the new
/// source reaches at least 2K nodes iff the base pair is connectable, and at
/// most K + n + 1 otherwise. K defaults to ceil(2(n+1)/eps).
pub fn gen_ssmrtt_gap(
    base: &TripNetwork,
    s: NodeId,
    t: NodeId,
    eps: f64,
    k_override: Option<i64>,
) -> Result<(TripNetwork, NodeId)> {
    check_base(base)?;
    let n = base.node_count;
    if s >= n || t >= n || s == t {
        return Err(Error::BadParameter("source and target must be distinct base nodes".into()));
    }
    let k = match k_override {
        Some(k) if k >= 1 => k,
        Some(k) => return Err(Error::BadParameter(format!("K = {k} must be >= 1"))),
        None => {
            if !(0.0 < eps && eps < 1.0) {
                return Err(Error::BadParameter(format!("eps = {eps} must lie in (0, 1)")));
            }
            (2.0 * (n as f64 + 1.0) / eps).ceil() as i64
        }
    };
    let k_usize = usize::try_from(k).map_err(|_| Error::Overflow("reward size"))?;

    let map = relabel(n, s, t);
    let mut b = NetBuilder::new();
    let mut order: Vec<usize> = vec![0; n];
    for v in 0..n {
        order[map[v]] = v;
    }
    for &old in &order {
        b.node(base_label(base, old));
    }
    let s_new = map[s]; // 0
    let t_new = map[t]; // n - 1
    let sprime = b.node("s'".to_string());
    let a: Vec<usize> = (1..=k_usize).map(|i| b.node(format!("a_{i}"))).collect();
    let bb: Vec<usize> = (1..=k_usize).map(|i| b.node(format!("b_{i}"))).collect();

    // Base edges keep their multiplicity.
    let base_edge_ids: Vec<usize> = base
        .edges
        .iter()
        .map(|e| b.parallel_arc(map[e.tail], map[e.head]))
        .collect();
    // Starting-node edges.
    b.arc(sprime, s_new);
    b.arc(s_new, sprime);
    // Reward gadgets.
    for i in 0..k_usize - 1 {
        b.arc(a[i], a[i + 1]);
        b.arc(a[i + 1], a[i]);
        b.arc(bb[i], bb[i + 1]);
        b.arc(bb[i + 1], bb[i]);
    }
    b.arc(t_new, a[0]);
    b.arc(a[0], t_new);
    b.arc(t_new, bb[0]);
    b.arc(a[k_usize - 1], s_new);
    b.arc(bb[k_usize - 1], s_new);
    b.arc(a[k_usize - 1], bb[0]);
    b.arc(bb[0], a[k_usize - 1]);
    // Connectivity chain over the base nodes (absent arcs only).
    for i in 0..n - 1 {
        b.arc(i, i + 1);
        b.arc(i + 1, i);
    }

    for trip in &base.trips {
        let edges = trip.edge_ids.iter().map(|&e| base_edge_ids[e]).collect();
        b.trip_from_edges(edges);
    }
    let chain_up: Vec<usize> = (0..n).collect();
    let chain_down: Vec<usize> = (0..n).rev().collect();
    // Looping trip through the a-rewards.
    let mut seq_a = vec![t_new];
    seq_a.extend(&a);
    seq_a.extend(&chain_up);
    b.walk_trip(&seq_a);
    // Looping trip through the b-rewards.
    let mut seq_b = vec![t_new];
    seq_b.extend(&bb);
    seq_b.extend(&chain_up);
    b.walk_trip(&seq_b);
    // The grand tour: up the chain, around both reward chains, back down, and
    // over to the new source.
    let mut seq_c: Vec<usize> = chain_up.clone();
    seq_c.extend(&a);
    seq_c.extend(&bb);
    seq_c.extend(bb.iter().rev().skip(1));
    seq_c.push(a[k_usize - 1]);
    seq_c.extend(a.iter().rev().skip(1));
    seq_c.extend(&chain_down);
    seq_c.push(sprime);
    seq_c.push(s_new);
    b.walk_trip(&seq_c);

    let mut roles = BTreeMap::new();
    roles.insert("s'".to_string(), sprime);
    roles.insert("s".to_string(), s_new);
    roles.insert("t".to_string(), t_new);
    let mut params = BTreeMap::new();
    params.insert("K".to_string(), serde_json::json!(k));
    params.insert("eps".to_string(), serde_json::json!(eps));
    params.insert("base_nodes".to_string(), serde_json::json!(n));
    let mut thresholds = BTreeMap::new();
    thresholds.insert("feasible_min".to_string(), cmul(2, k, "2K")?);
    thresholds.insert("infeasible_max".to_string(), cadd(k, n as i64 + 1, "K+n+1")?);
    let meta = InstanceMeta {
        generator: "gap-ssmrtt".to_string(),
        params,
        roles,
        thresholds,
        paper_params: k_override.is_none(),
    };
    let net = b.finish(meta);
    debug_assert!(net.validate().is_empty());
    Ok((net, sprime))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimpleGapVariant {
    /// K fresh in-neighbors of the source and K fresh out-neighbors of the
    /// target; total reachability at least K^2 iff the base pair connects.
    Mrtt,
    /// K fresh out-neighbors of the target; the source reaches at least K + 2
    /// nodes iff the base pair connects, and fewer than n otherwise.
    Ssmrtt,
}

/// `c` and `eps` feed the default K formulas; overriding K flags the instance
/// as non-default.
pub fn gen_simple_gaps(
    base: &TripNetwork,
    s: NodeId,
    t: NodeId,
    variant: SimpleGapVariant,
    k_override: Option<i64>,
    c: f64,
    eps: f64,
) -> Result<TripNetwork> {
    check_base(base)?;
    let n = base.node_count;
    if s >= n || t >= n {
        return Err(Error::BadParameter("source or target out of range".into()));
    }
    let k = match k_override {
        Some(k) if k >= 1 => k,
        Some(k) => return Err(Error::BadParameter(format!("K = {k} must be >= 1"))),
        None => {
            if !(0.0 < eps && eps < 1.0) || c <= 0.0 {
                return Err(Error::BadParameter("need c > 0 and eps in (0, 1)".into()));
            }
            let nf = n as f64;
            let value = match variant {
                SimpleGapVariant::Mrtt => {
                    (c * nf).powf(1.0 / eps) * (nf + 2.0).powf((2.0 - eps) / eps)
                }
                SimpleGapVariant::Ssmrtt => c * nf.powf(2.0 / eps),
            };
            if !value.is_finite() || value >= i64::MAX as f64 {
                return Err(Error::Overflow("default reward size"));
            }
            value.ceil() as i64
        }
    };
    let k_usize = usize::try_from(k).map_err(|_| Error::Overflow("reward size"))?;
    if k_usize > 10_000_000 {
        return Err(Error::BadParameter(format!(
            "K = {k_usize} would be enormous; pass an override"
        )));
    }

    let mut b = NetBuilder::new();
    for v in 0..n {
        b.node(base_label(base, v));
    }
    let base_edge_ids: Vec<usize> =
        base.edges.iter().map(|e| b.parallel_arc(e.tail, e.head)).collect();
    let mut fresh_edges = Vec::new();
    match variant {
        SimpleGapVariant::Mrtt => {
            let into: Vec<usize> = (1..=k_usize).map(|i| b.node(format!("in_{i}"))).collect();
            let out: Vec<usize> = (1..=k_usize).map(|i| b.node(format!("out_{i}"))).collect();
            for &v in &into {
                fresh_edges.push(b.parallel_arc(v, s));
            }
            for &v in &out {
                fresh_edges.push(b.parallel_arc(t, v));
            }
        }
        SimpleGapVariant::Ssmrtt => {
            let out: Vec<usize> = (1..=k_usize).map(|i| b.node(format!("out_{i}"))).collect();
            for &v in &out {
                fresh_edges.push(b.parallel_arc(t, v));
            }
        }
    }
    for trip in &base.trips {
        let edges = trip.edge_ids.iter().map(|&e| base_edge_ids[e]).collect();
        b.trip_from_edges(edges);
    }
    for e in fresh_edges {
        b.edge_trip(e);
    }

    let mut roles = BTreeMap::new();
    roles.insert("s".to_string(), s);
    roles.insert("t".to_string(), t);
    let mut params = BTreeMap::new();
    params.insert("K".to_string(), serde_json::json!(k));
    params.insert("c".to_string(), serde_json::json!(c));
    params.insert("eps".to_string(), serde_json::json!(eps));
    params.insert("base_nodes".to_string(), serde_json::json!(n));
    params.insert(
        "variant".to_string(),
        serde_json::json!(match variant {
            SimpleGapVariant::Mrtt => "mrtt",
            SimpleGapVariant::Ssmrtt => "ssmrtt",
        }),
    );
    let mut thresholds = BTreeMap::new();
    let n_i = n as i64;
    match variant {
        SimpleGapVariant::Mrtt => {
            thresholds.insert("feasible_min".to_string(), cmul(k, k, "K^2")?);
            // (n-1) + (n-1)(n+K) + Kn + K = n^2 + 2nK - 1
            thresholds.insert(
                "infeasible_max".to_string(),
                cadd(cmul(n_i, n_i, "n^2")?, cmul(2 * n_i, k, "2nK")? - 1, "cap")?,
            );
        }
        SimpleGapVariant::Ssmrtt => {
            thresholds.insert("feasible_min_source".to_string(), cadd(k, 2, "K+2")?);
            thresholds.insert("infeasible_max_source".to_string(), n_i - 1);
        }
    }
    let meta = InstanceMeta {
        generator: "gap-simple".to_string(),
        params,
        roles,
        thresholds,
        paper_params: k_override.is_none(),
    };
    let net = b.finish(meta);
    debug_assert!(net.validate().is_empty());
    Ok(net)
}

/// Embeds a feasibility base into the last descending chain of the
/// low-reachability family with ladder width r = p + 1 (p base nodes). The
/// three replacement trips keep the result strongly temporalisable while the
/// reachability jumps past ((r-1) r)^2 iff the base pair connects, and stays
/// at most 3 r n + 7 r^2 (r - 1) otherwise.
pub fn gen_sqrtn_gap(base: &TripNetwork, s: NodeId, t: NodeId) -> Result<TripNetwork> {
    use crate::gen::hard_family::HardFamilyLayout;
    check_base(base)?;
    let p = base.node_count;
    if s >= p || t >= p || s == t {
        return Err(Error::BadParameter("source and target must be distinct base nodes".into()));
    }
    if p < 3 {
        return Err(Error::BadParameter("base needs at least 3 nodes".into()));
    }
    let r = p + 1;
    let layout = HardFamilyLayout { r };
    // Base node x_i (1-based after relabeling, target first and source last)
    // becomes chain node d_r^i.
    let map_pos = relabel(p, t, s);
    let embed = |v: NodeId| layout.d(r, map_pos[v] + 1);

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
            if i == r {
                // Interior chain nodes of the last chain carry the base names.
                let old = (0..p).find(|&v| map_pos[v] + 1 == j).unwrap();
                b.node(base_label(base, old));
            } else {
                b.node(format!("d_{i}^{j}"));
            }
        }
    }

    // Ladder, chain, and ascending edges.
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
    for i in 1..=r {
        for j in 1..=r - 1 {
            b.arc(layout.d(i, j), layout.d(i, j + 1));
        }
    }
    let up_edge = b.arc(layout.c(r + 1), layout.c(r));
    // Ascent along the last chain, the u-row, the l-row, and the two bridges.
    for i in 1..=r - 1 {
        b.arc(layout.d(r, i + 1), layout.d(r, i));
    }
    for i in 1..=r - 1 {
        b.arc(layout.u(i + 1), layout.u(i));
    }
    for i in 1..=r - 1 {
        b.arc(layout.l(i), layout.l(i + 1));
    }
    b.arc(layout.u(1), layout.c(1));
    b.arc(layout.c(2 * r), layout.l(1));
    // Base edges, embedded; multiplicity preserved.
    let base_edge_ids: Vec<usize> =
        base.edges.iter().map(|e| b.parallel_arc(embed(e.tail), embed(e.head))).collect();

    // Trips: the base collection, the family trips of the first r - 1 chains,
    // the ascending edge, and the three replacements.
    for trip in &base.trips {
        let edges = trip.edge_ids.iter().map(|&e| base_edge_ids[e]).collect();
        b.trip_from_edges(edges);
    }
    let first_family_trip = b.trip_count();
    for i in 1..=r - 1 {
        let seq = super::hard_family::upper_trip_nodes(&layout, i);
        b.walk_trip(&seq);
    }
    for i in 1..=r - 1 {
        let seq = super::hard_family::lower_trip_nodes(&layout, i);
        b.walk_trip(&seq);
    }
    for _copy in 0..2 {
        for i in 1..=r - 1 {
            let chain: Vec<usize> = (1..=r).map(|j| layout.d(i, j)).collect();
            b.walk_trip(&chain);
        }
    }
    b.edge_trip(up_edge);
    // Replacement upper trip: down the u-row, over to c_1, then the zig-zag.
    let mut t_u: Vec<usize> = (1..=r).rev().map(|i| layout.u(i)).collect();
    t_u.extend(super::hard_family::upper_trip_nodes(&layout, r));
    let t_u_id = b.walk_trip(&t_u);
    // Replacement lower trip: the zig-zag, then along the l-row.
    let mut t_l = super::hard_family::lower_trip_nodes(&layout, r);
    t_l.extend((1..=r).map(|i| layout.l(i)));
    let t_l_id = b.walk_trip(&t_l);
    // Replacement chain trip: up the last chain, down again, one step to l_r,
    // and back up to the source.
    let mut t_ud: Vec<usize> = (1..=r - 1).rev().map(|j| layout.d(r, j)).collect();
    t_ud.extend((2..=r - 1).map(|j| layout.d(r, j)));
    t_ud.push(layout.l(r));
    t_ud.push(layout.d(r, r - 1));
    let t_ud_id = b.walk_trip(&t_ud);

    let n_big = layout.node_count() as i64;
    let r_i = r as i64;
    let mut roles = BTreeMap::new();
    roles.insert("s".to_string(), embed(s));
    roles.insert("t".to_string(), embed(t));
    roles.insert("trip_T_U".to_string(), t_u_id);
    roles.insert("trip_T_L".to_string(), t_l_id);
    roles.insert("trip_T_updown".to_string(), t_ud_id);
    roles.insert("first_family_trip".to_string(), first_family_trip);
    let mut params = BTreeMap::new();
    params.insert("r".to_string(), serde_json::json!(r));
    params.insert("base_nodes".to_string(), serde_json::json!(p));
    params.insert("base_trips".to_string(), serde_json::json!(base.trip_count()));
    let mut thresholds = BTreeMap::new();
    thresholds.insert("feasible_min".to_string(), cmul((r_i - 1) * r_i, (r_i - 1) * r_i, "((r-1)r)^2")?);
    thresholds.insert(
        "infeasible_max".to_string(),
        cadd(cmul(3 * r_i, n_big, "3rn")?, cmul(7 * r_i * r_i, r_i - 1, "7r^2(r-1)")?, "cap")?,
    );
    let meta = InstanceMeta {
        generator: "gap-sqrtn".to_string(),
        params,
        roles,
        thresholds,
        paper_params: p > 22,
    };
    let net = b.finish(meta);
    debug_assert!(net.validate().is_empty());
    debug_assert_eq!(net.node_count, layout.node_count());
    Ok(net)
}
