//! Reduction from 3-CNF satisfiability to reachability maximization on
//! symmetric, strongly connected trip networks.
//!
//! Long tail chains force high-reachability temporalisations to synchronize
//! the hub-crossing trips; the only remaining slack is the relative order of
//! the three trips inside each variable gadget, which encodes a truth value.
//! Middle-to-head connections through a clause gadget then pay off exactly
//! when the clause is satisfied.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gen::{Formula, NetBuilder, cadd, cmul};
use crate::model::{InstanceMeta, Temporalisation, TripNetwork};

/// Derived constants of the construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymParams {
    /// Middle-chain length.
    pub l: i64,
    /// Tail-chain length.
    pub big_l: i64,
    /// Node count.
    pub node_count: i64,
    /// Reachability threshold separating satisfiable from unsatisfiable.
    pub q: i64,
    /// Anchor time of the variable phase in the satisfying-assignment
    /// temporalisation.
    pub t_v: i64,
}

/// Evaluates the closed-form constants for an (n, m) formula shape.
pub fn sym_params(n: usize, m: usize) -> Result<SymParams> {
    let (n, m) = (n as i64, m as i64);
    let s = cadd(cmul(7, n, "7n")?, cmul(m, m + 3, "m(m+3)")?, "base count")?;
    let s2 = cmul(s, s, "base count squared")?;
    let big_l = cadd(s2, 1, "tail length")?;
    let l = cadd(s2.div_euclid(m + 2) + i64::from(s2 % (m + 2) != 0), 1, "middle length")?;
    // |V| = 2 + 7n + m(L+1)(m+4) + ml + mL
    let node_count = {
        let a = cmul(cmul(m, cadd(big_l, 1, "L+1")?, "m(L+1)")?, m + 4, "m(L+1)(m+4)")?;
        let b = cmul(m, l, "ml")?;
        let c = cmul(m, big_l, "mL")?;
        cadd(cadd(cadd(2 + 7 * n, a, "nodes")?, b, "nodes")?, c, "nodes")?
    };
    let q = cadd(cmul(node_count, node_count, "node count squared")?, -s2, "threshold")?;
    let t_v = cadd(big_l, l + 3, "variable anchor")?;
    Ok(SymParams { l, big_l, node_count, q, t_v })
}

/// Trip-index layout; all trips come in (forward, reverse) index pairs.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SymTrips {
    n: usize,
    m: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum VarTrip {
    T = 0,
    F = 1,
    A = 2,
}

impl SymTrips {
    pub(crate) fn var(&self, i: usize, kind: VarTrip, rev: bool) -> usize {
        6 * i + 2 * (kind as usize) + rev as usize
    }

    pub(crate) fn bottom_var(&self, j: usize, slot: usize, rev: bool) -> usize {
        6 * self.n + 2 * (3 * j + slot) + rev as usize
    }

    pub(crate) fn bottom_clause(&self, j: usize, other_idx: usize, rev: bool) -> usize {
        6 * self.n + 6 * self.m + 2 * ((self.m - 1) * j + other_idx) + rev as usize
    }

    pub(crate) fn top(&self, j: usize, slot: usize, rev: bool) -> usize {
        6 * self.n + 6 * self.m + 2 * self.m * (self.m - 1) + 2 * (3 * j + slot) + rev as usize
    }

    pub(crate) fn total(&self) -> usize {
        6 * self.n + 6 * self.m + 2 * self.m * (self.m - 1) + 6 * self.m
    }
}

fn check_sym_assumptions(f: &Formula) -> Result<()> {
    let m = f.n_clauses();
    if m < 2 {
        return Err(Error::Formula("the symmetric reduction needs at least two clauses".into()));
    }
    if !f.distinct_vars_per_clause() {
        return Err(Error::Formula(
            "the symmetric reduction needs three distinct variables per clause".into(),
        ));
    }
    for v in 0..f.n_vars {
        if f.pos_count(v) == m || f.neg_count(v) == m {
            return Err(Error::Formula(format!(
                "literal of variable {} appears in every clause",
                v + 1
            )));
        }
    }
    Ok(())
}

/// Builds the symmetric instance. Every edge and every trip is emitted in both
/// directions; the network passes the reverse-pairing and strong-connectivity
/// checks by construction.
pub fn gen_sym(f: &Formula) -> Result<(TripNetwork, SymParams)> {
    check_sym_assumptions(f)?;
    let n = f.n_vars;
    let m = f.n_clauses();
    let params = sym_params(n, m)?;
    let l = params.l as usize;
    let big_l = params.big_l as usize;

    let mut b = NetBuilder::new();
    // Variable nodes: t^1, t^2, f^1, f^2, a^1, a^2, a^3 per variable.
    struct VarNodes {
        t1: usize,
        t2: usize,
        f1: usize,
        f2: usize,
        a1: usize,
        a2: usize,
        a3: usize,
    }
    let vars: Vec<VarNodes> = (0..n)
        .map(|i| {
            let i1 = i + 1;
            VarNodes {
                t1: b.node(format!("t_{i1}^1")),
                t2: b.node(format!("t_{i1}^2")),
                f1: b.node(format!("f_{i1}^1")),
                f2: b.node(format!("f_{i1}^2")),
                a1: b.node(format!("a_{i1}^1")),
                a2: b.node(format!("a_{i1}^2")),
                a3: b.node(format!("a_{i1}^3")),
            }
        })
        .collect();
    let c1: Vec<usize> = (0..m).map(|j| b.node(format!("c_{}^1", j + 1))).collect();
    let c2: Vec<usize> = (0..m).map(|j| b.node(format!("c_{}^2", j + 1))).collect();
    let mid: Vec<Vec<usize>> = (0..m)
        .map(|j| (1..=l).map(|k| b.node(format!("d_{}^{k}", j + 1))).collect())
        .collect();
    // Head nodes: e_j^i per clause slot, g_j^h per ordered clause pair.
    let e_heads: Vec<[usize; 3]> = (0..m)
        .map(|j| {
            std::array::from_fn(|h| b.node(format!("e_{}^{}", j + 1, f.clauses[j][h].var + 1)))
        })
        .collect();
    let g_heads: Vec<Vec<usize>> = (0..m)
        .map(|j| {
            (0..m).filter(|&h| h != j).map(|h| b.node(format!("g_{}^{}", j + 1, h + 1))).collect()
        })
        .collect();
    let hub_b = b.node("B".to_string());
    let hub_u = b.node("U".to_string());
    let chain = |b: &mut NetBuilder, name: String, len: usize| -> Vec<usize> {
        (1..=len).map(|k| b.node(format!("{name}^{k}"))).collect()
    };
    let u_tails: Vec<[Vec<usize>; 3]> = (0..m)
        .map(|j| {
            std::array::from_fn(|h| {
                chain(&mut b, format!("u_{},{}", j + 1, f.clauses[j][h].var + 1), big_l)
            })
        })
        .collect();
    let v_tails: Vec<Vec<Vec<usize>>> = (0..m)
        .map(|j| {
            (0..m)
                .filter(|&h| h != j)
                .map(|h| chain(&mut b, format!("v_{},{}", j + 1, h + 1), big_l))
                .collect()
        })
        .collect();
    let w_tails: Vec<[Vec<usize>; 3]> = (0..m)
        .map(|j| {
            std::array::from_fn(|h| {
                chain(&mut b, format!("w_{},{}", j + 1, f.clauses[j][h].var + 1), big_l)
            })
        })
        .collect();

    let bidir = |b: &mut NetBuilder, x: usize, y: usize| {
        b.arc(x, y);
        b.arc(y, x);
    };
    // Variable gadget edges.
    for v in &vars {
        bidir(&mut b, v.t1, v.a3);
        bidir(&mut b, v.a3, v.f2);
        bidir(&mut b, v.a1, v.a2);
        bidir(&mut b, v.a2, v.a3);
        bidir(&mut b, v.f1, v.a1);
        bidir(&mut b, v.a1, v.t2);
    }
    // Clause gadget edges.
    for j in 0..m {
        for h in 0..3 {
            let lit = f.clauses[j][h];
            let v = &vars[lit.var];
            let (bottom, top) = if lit.negated { (v.f1, v.f2) } else { (v.t1, v.t2) };
            bidir(&mut b, c1[j], bottom);
            bidir(&mut b, top, c2[j]);
            bidir(&mut b, c2[j], e_heads[j][h]);
        }
        for (idx, h) in (0..m).filter(|&h| h != j).enumerate() {
            bidir(&mut b, c1[j], c2[h]);
            bidir(&mut b, c2[j], g_heads[j][idx]);
        }
        for k in 0..l - 1 {
            bidir(&mut b, mid[j][k], mid[j][k + 1]);
        }
        bidir(&mut b, mid[j][l - 1], c1[j]);
    }
    // Hub edges and tail chains.
    for j in 0..m {
        bidir(&mut b, hub_b, mid[j][0]);
        for h in 0..3 {
            for k in 0..big_l - 1 {
                bidir(&mut b, u_tails[j][h][k], u_tails[j][h][k + 1]);
                bidir(&mut b, w_tails[j][h][k], w_tails[j][h][k + 1]);
            }
            bidir(&mut b, u_tails[j][h][big_l - 1], hub_b);
            bidir(&mut b, w_tails[j][h][big_l - 1], hub_u);
            let lit = f.clauses[j][h];
            let v = &vars[lit.var];
            let top = if lit.negated { v.f2 } else { v.t2 };
            bidir(&mut b, hub_u, top);
        }
        for idx in 0..m - 1 {
            for k in 0..big_l - 1 {
                bidir(&mut b, v_tails[j][idx][k], v_tails[j][idx][k + 1]);
            }
            bidir(&mut b, v_tails[j][idx][big_l - 1], hub_b);
        }
    }

    // Trips: forward node sequence followed by its reverse.
    let walk_pair = |b: &mut NetBuilder, seq: Vec<usize>| {
        b.walk_trip(&seq);
        let mut rev = seq;
        rev.reverse();
        b.walk_trip(&rev);
    };
    for v in &vars {
        walk_pair(&mut b, vec![v.t1, v.a3, v.f2]);
        walk_pair(&mut b, vec![v.f1, v.a1, v.t2]);
        walk_pair(&mut b, vec![v.a1, v.a2, v.a3]);
    }
    for j in 0..m {
        for h in 0..3 {
            let lit = f.clauses[j][h];
            let v = &vars[lit.var];
            let bottom = if lit.negated { v.f1 } else { v.t1 };
            let mut seq = u_tails[j][h].clone();
            seq.push(hub_b);
            seq.extend(&mid[j]);
            seq.push(c1[j]);
            seq.push(bottom);
            walk_pair(&mut b, seq);
        }
    }
    for j in 0..m {
        for (idx, h) in (0..m).filter(|&h| h != j).enumerate() {
            let mut seq = v_tails[j][idx].clone();
            seq.push(hub_b);
            seq.extend(&mid[j]);
            seq.push(c1[j]);
            seq.push(c2[h]);
            // The matching head hangs off the other clause's top node.
            let back = (0..m).filter(|&x| x != h).position(|x| x == j).unwrap();
            seq.push(g_heads[h][back]);
            walk_pair(&mut b, seq);
        }
    }
    for j in 0..m {
        for h in 0..3 {
            let lit = f.clauses[j][h];
            let v = &vars[lit.var];
            let top = if lit.negated { v.f2 } else { v.t2 };
            let mut seq = w_tails[j][h].clone();
            seq.push(hub_u);
            seq.push(top);
            seq.push(c2[j]);
            seq.push(e_heads[j][h]);
            walk_pair(&mut b, seq);
        }
    }

    let trips = SymTrips { n, m };
    debug_assert_eq!(b.trip_count(), trips.total());

    let mut roles = BTreeMap::new();
    roles.insert("B".to_string(), hub_b);
    roles.insert("U".to_string(), hub_u);
    for j in 0..m {
        roles.insert(format!("c_{}^1", j + 1), c1[j]);
        roles.insert(format!("c_{}^2", j + 1), c2[j]);
    }
    let mut meta_params = BTreeMap::new();
    meta_params.insert("n".to_string(), serde_json::json!(n));
    meta_params.insert("m".to_string(), serde_json::json!(m));
    meta_params.insert("l".to_string(), serde_json::json!(params.l));
    meta_params.insert("L".to_string(), serde_json::json!(params.big_l));
    meta_params.insert("clauses".to_string(), serde_json::json!(super::dimacs_clauses(f)));
    let mut thresholds = BTreeMap::new();
    thresholds.insert("Q".to_string(), params.q);
    let meta = InstanceMeta {
        generator: "sym".to_string(),
        params: meta_params,
        roles,
        thresholds,
        paper_params: true,
    };
    let net = b.finish(meta);
    debug_assert_eq!(net.node_count as i64, params.node_count);
    Ok((net, params))
}

/// The starting times derived from a satisfying assignment; the induced
/// reachability is at least the threshold Q. Errors if the assignment does
/// not satisfy the formula.
pub fn sym_assignment_temporalisation(
    net: &TripNetwork,
    f: &Formula,
    assignment: &[bool],
) -> Result<Temporalisation> {
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
    let n = f.n_vars;
    let m = f.n_clauses();
    let trips = SymTrips { n, m };
    if net.trip_count() != trips.total() {
        return Err(Error::BadParameter("network does not match the formula shape".into()));
    }
    let params = sym_params(n, m)?;
    let t_v = params.t_v;
    let big_l = params.big_l;
    let l = params.l;

    let mut starts = vec![0i64; net.trip_count()];
    use VarTrip::*;
    for i in 0..n {
        if assignment[i] {
            starts[trips.var(i, T, false)] = t_v;
            starts[trips.var(i, A, true)] = t_v + 1;
            starts[trips.var(i, F, false)] = t_v + 2;
            starts[trips.var(i, F, true)] = t_v + 8;
            starts[trips.var(i, A, false)] = t_v + 9;
            starts[trips.var(i, T, true)] = t_v + 10;
        } else {
            starts[trips.var(i, F, false)] = t_v;
            starts[trips.var(i, A, false)] = t_v + 1;
            starts[trips.var(i, T, false)] = t_v + 2;
            starts[trips.var(i, T, true)] = t_v + 8;
            starts[trips.var(i, A, true)] = t_v + 9;
            starts[trips.var(i, F, true)] = t_v + 10;
        }
    }
    for j in 0..m {
        for slot in 0..3 {
            starts[trips.bottom_var(j, slot, false)] = 1;
            starts[trips.bottom_var(j, slot, true)] = t_v + 12;
            starts[trips.top(j, slot, false)] = t_v + 3 - big_l;
            starts[trips.top(j, slot, true)] = t_v + 6;
        }
        for idx in 0..m - 1 {
            starts[trips.bottom_clause(j, idx, false)] = t_v + 3 - (big_l + l);
            starts[trips.bottom_clause(j, idx, true)] = t_v + 6;
        }
    }
    Ok(Temporalisation::new(starts))
}
