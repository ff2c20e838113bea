//! Reduction from 3-CNF satisfiability to one-to-one reachability under trip
//! temporalisation.
//!
//! The instance chains variable gadgets (a false-branch and a true-branch per
//! variable) into a spine from `v_1` to `v_{n+1}`, continues through one
//! four-node gadget per clause, and ties each clause slot back into the
//! opposite branch of its literal's variable with a three-edge trip. The
//! formula is satisfiable iff the final node is reachable from `v_1` under
//! some assignment of trip starting times.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::gen::{Formula, NetBuilder};
use crate::model::{InstanceMeta, NodeId, TripNetwork};

/// Builds the instance; returns the network together with the source and
/// target nodes. Clauses must not repeat a literal: a repeated literal would
/// put one chain edge into two trips, and the equivalence relies on every
/// edge having exactly one temporal copy.
pub fn gen_o2o(f: &Formula) -> Result<(TripNetwork, NodeId, NodeId)> {
    if !f.distinct_literals_per_clause() {
        return Err(crate::error::Error::Formula(
            "the one-to-one reduction needs three distinct literals per clause".into(),
        ));
    }
    let n = f.n_vars;
    let m = f.n_clauses();
    let mut b = NetBuilder::new();

    // Spine nodes v_1 .. v_{n+1}.
    let v: Vec<usize> = (1..=n + 1).map(|i| b.node(format!("v_{i}"))).collect();
    // Branch chains: f_i^1..f_i^{p_i} and t_i^1..t_i^{n_i}.
    let mut f_nodes: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut t_nodes: Vec<Vec<usize>> = Vec::with_capacity(n);
    for i in 0..n {
        let p_i = f.pos_count(i);
        let n_i = f.neg_count(i);
        f_nodes.push((1..=p_i).map(|h| b.node(format!("f_{}^{h}", i + 1))).collect());
        t_nodes.push((1..=n_i).map(|h| b.node(format!("t_{}^{h}", i + 1))).collect());
    }
    // Clause nodes w_1 .. w_{m+1} and the literal nodes l_j^h.
    let w: Vec<usize> = (1..=m + 1).map(|j| b.node(format!("w_{j}"))).collect();
    let l: Vec<[usize; 3]> = (1..=m)
        .map(|j| [b.node(format!("l_{j}^1")), b.node(format!("l_{j}^2")), b.node(format!("l_{j}^3"))])
        .collect();

    // Variable gadget edges.
    for i in 0..n {
        b.arc(v[i], f_nodes[i][0]);
        for h in 0..f_nodes[i].len() - 1 {
            b.arc(f_nodes[i][h], f_nodes[i][h + 1]);
        }
        b.arc(*f_nodes[i].last().unwrap(), v[i + 1]);
        b.arc(v[i], t_nodes[i][0]);
        for h in 0..t_nodes[i].len() - 1 {
            b.arc(t_nodes[i][h], t_nodes[i][h + 1]);
        }
        b.arc(*t_nodes[i].last().unwrap(), v[i + 1]);
    }
    // Clause gadget edges.
    for j in 0..m {
        for h in 0..3 {
            b.arc(w[j], l[j][h]);
            b.arc(l[j][h], w[j + 1]);
        }
    }
    // Spine-to-clauses edge.
    b.arc(v[n], w[0]);
    // Clause-to-variable edges: the slot for literal x_i enters the false
    // branch, the slot for literal not-x_i enters the true branch.
    // clause_rank[(var, negated)][j] = k-1 where the clause is the k-th one
    // containing that literal; slots repeating a literal share the rank.
    let rank_of = |var: usize, negated: bool, j: usize| -> usize {
        (0..j)
            .filter(|&g| f.clauses[g].iter().any(|l| l.var == var && l.negated == negated))
            .count()
    };
    let mut slot_targets: Vec<[(usize, usize); 3]> = Vec::with_capacity(m);
    for j in 0..m {
        let mut targets = [(0usize, 0usize); 3];
        for h in 0..3 {
            let lit = f.clauses[j][h];
            let i = lit.var;
            let chain = if lit.negated { &t_nodes[i] } else { &f_nodes[i] };
            let rank = rank_of(i, lit.negated, j);
            let entry = chain[rank];
            let next = if rank + 1 < chain.len() { chain[rank + 1] } else { v[i + 1] };
            b.parallel_arc(l[j][h], entry);
            targets[h] = (entry, next);
        }
        slot_targets.push(targets);
    }

    // Trips: one three-edge trip per clause slot, one-edge trips for the rest.
    let mut covered = vec![false; b.edge_count()];
    for j in 0..m {
        for h in 0..3 {
            let (entry, next) = slot_targets[j][h];
            let e1 = b.edge_id(w[j], l[j][h]);
            let e2 = b.edge_id(l[j][h], entry);
            let e3 = b.edge_id(entry, next);
            let _ = b.trip_from_edges(vec![e1, e2, e3]);
            covered[e1] = true;
            covered[e2] = true;
            covered[e3] = true;
        }
    }
    for e in 0..covered.len() {
        if !covered[e] {
            b.edge_trip(e);
        }
    }

    let source = v[0];
    let target = w[m];
    let mut roles = BTreeMap::new();
    roles.insert("s".to_string(), source);
    roles.insert("t".to_string(), target);
    roles.insert("v_n+1".to_string(), v[n]);
    roles.insert("w_1".to_string(), w[0]);
    let mut params = BTreeMap::new();
    params.insert("n".to_string(), serde_json::json!(n));
    params.insert("m".to_string(), serde_json::json!(m));
    params.insert("clauses".to_string(), serde_json::json!(super::dimacs_clauses(f)));
    let meta = InstanceMeta {
        generator: "o2o".to_string(),
        params,
        roles,
        thresholds: BTreeMap::new(),
        paper_params: true,
    };
    let net = b.finish(meta);
    debug_assert!(net.validate().is_empty());
    Ok((net, source, target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::parse_and_normalize;
    use crate::solve::{OracleOptions, o2o_oracle};

    fn fig_formula() -> Formula {
        parse_and_normalize("1 2 -3 0\n-1 2 3 0\n-1 -2 -3 0\n").unwrap()
    }

    #[test]
    fn sizes_match_the_closed_forms() {
        let f = fig_formula();
        let (net, _, _) = gen_o2o(&f).unwrap();
        let (n, m) = (3, 3);
        assert_eq!(net.node_count, n + 7 * m + 2);
        assert_eq!(net.trip_count(), 3 * m + 2 * n + 3 * m + 1);
        assert!(net.validate().is_empty());
    }

    #[test]
    fn satisfiable_formula_yields_feasible_instance() {
        let (net, s, t) = gen_o2o(&fig_formula()).unwrap();
        assert!(o2o_oracle(&net, s, t, &OracleOptions::default()).unwrap().feasible);
    }

    #[test]
    fn unsatisfiable_formula_yields_infeasible_instance() {
        let f = Formula::all_patterns_unsat();
        assert!(f.brute_force_sat().is_none());
        let (net, s, t) = gen_o2o(&f).unwrap();
        assert_eq!(net.trip_count(), 2 * 3 + 6 * 8 + 1);
        let out = o2o_oracle(&net, s, t, &OracleOptions::default()).unwrap();
        assert!(!out.feasible, "explored {} states", out.explored);
    }

    #[test]
    fn repeated_literal_clause_is_refused() {
        let f = parse_and_normalize("1 1 1 0\n-1 -1 -1 0\n").unwrap();
        assert!(gen_o2o(&f).is_err());
    }
}
