//! Instance generators: satisfiability reductions, gap amplifications, the
//! low-reachability hard family, and random symmetric networks. Every
//! generator embeds metadata (parameters, node roles, claim thresholds) into
//! the produced instance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod gaps;
pub mod hard_family;
pub mod mroett;
pub mod o2o_reduction;
pub mod random_sym;
pub mod sym_reduction;

pub use gaps::{SimpleGapVariant, gen_simple_gaps, gen_sqrtn_gap, gen_ssmrtt_gap};
pub use hard_family::{HardFamilyLayout, gen_hard_family, hard_family_recipe_schedule, verify_hard_family_bound};
pub use mroett::{MroettParams, gen_mroett, mroett_assignment_schedule, mroett_params};
pub use o2o_reduction::gen_o2o;
pub use random_sym::gen_random_symmetric;
pub use sym_reduction::{SymParams, gen_sym, sym_assignment_temporalisation, sym_params};

/// A literal: variable index (0-based) with a sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lit {
    pub var: usize,
    pub negated: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Lit {
        Lit { var, negated: false }
    }

    pub fn neg(var: usize) -> Lit {
        Lit { var, negated: true }
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment[self.var] != self.negated
    }
}

/// A 3-CNF formula. Every variable must appear positive in at least one
/// clause and negative in at least one clause; violations are refused rather
/// than repaired, since padding would change a reduction's meaning.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Formula {
    pub n_vars: usize,
    pub clauses: Vec<[Lit; 3]>,
}

impl Formula {
    pub fn new(n_vars: usize, clauses: Vec<[Lit; 3]>) -> Result<Formula> {
        let f = Formula { n_vars, clauses };
        f.check_assumptions()?;
        Ok(f)
    }

    pub fn n_clauses(&self) -> usize {
        self.clauses.len()
    }

    fn check_assumptions(&self) -> Result<()> {
        if self.clauses.is_empty() {
            return Err(Error::Formula("formula has no clauses".into()));
        }
        let mut pos = vec![false; self.n_vars];
        let mut neg = vec![false; self.n_vars];
        for (j, clause) in self.clauses.iter().enumerate() {
            for lit in clause {
                if lit.var >= self.n_vars {
                    return Err(Error::Formula(format!(
                        "clause {} references variable {} out of range",
                        j + 1,
                        lit.var + 1
                    )));
                }
                if lit.negated {
                    neg[lit.var] = true;
                } else {
                    pos[lit.var] = true;
                }
            }
        }
        for v in 0..self.n_vars {
            if !pos[v] {
                return Err(Error::Formula(format!(
                    "variable {} never appears positive",
                    v + 1
                )));
            }
            if !neg[v] {
                return Err(Error::Formula(format!(
                    "variable {} never appears negative",
                    v + 1
                )));
            }
        }
        Ok(())
    }

    /// Number of clauses containing the positive literal of `var`.
    pub fn pos_count(&self, var: usize) -> usize {
        self.clauses.iter().filter(|c| c.iter().any(|l| l.var == var && !l.negated)).count()
    }

    /// Number of clauses containing the negative literal of `var`.
    pub fn neg_count(&self, var: usize) -> usize {
        self.clauses.iter().filter(|c| c.iter().any(|l| l.var == var && l.negated)).count()
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.satisfied_by(assignment)))
    }

    /// First unsatisfied clause index under the assignment, if any.
    pub fn first_unsatisfied(&self, assignment: &[bool]) -> Option<usize> {
        self.clauses.iter().position(|c| !c.iter().any(|l| l.satisfied_by(assignment)))
    }

    /// Exhaustive satisfiability check; the intended use is tiny formulas.
    pub fn brute_force_sat(&self) -> Option<Vec<bool>> {
        let n = self.n_vars;
        assert!(n <= 24, "brute-force satisfiability is for tiny formulas");
        for bits in 0u32..(1u32 << n) {
            let assignment: Vec<bool> = (0..n).map(|i| bits & (1 << i) != 0).collect();
            if self.satisfied_by(&assignment) {
                return Some(assignment);
            }
        }
        None
    }

    /// True when the three literals of every clause use three distinct
    /// variables (required by the gadget reductions that allocate per-variable
    /// structure for each clause slot).
    pub fn distinct_vars_per_clause(&self) -> bool {
        self.clauses.iter().all(|c| {
            c[0].var != c[1].var && c[0].var != c[2].var && c[1].var != c[2].var
        })
    }

    /// True when no clause repeats a literal. The one-to-one reduction relies
    /// on each edge belonging to exactly one trip, which a repeated literal
    /// would break.
    pub fn distinct_literals_per_clause(&self) -> bool {
        self.clauses.iter().all(|c| c[0] != c[1] && c[0] != c[2] && c[1] != c[2])
    }

    /// The unsatisfiable formula over three variables consisting of all
    /// eight sign patterns; each clause rules out exactly one assignment.
    pub fn all_patterns_unsat() -> Formula {
        let clauses = (0u8..8)
            .map(|bits| {
                std::array::from_fn(|h| Lit { var: h, negated: bits & (1 << h) != 0 })
            })
            .collect();
        Formula::new(3, clauses).expect("pattern formula is normalized")
    }
}

/// Parses DIMACS CNF text and checks the reduction assumptions (exactly three
/// literals per clause, every variable occurring in both polarities).
pub fn parse_and_normalize(text: &str) -> Result<Formula> {
    let mut declared: Option<(usize, usize)> = None;
    let mut clauses: Vec<[Lit; 3]> = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut max_var = 0usize;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            let fields: Vec<&str> = rest.split_whitespace().collect();
            if fields.len() != 3 || fields[0] != "cnf" {
                return Err(Error::Formula(format!("bad problem line: {line}")));
            }
            let nv = fields[1].parse::<usize>().map_err(|e| Error::Formula(e.to_string()))?;
            let nc = fields[2].parse::<usize>().map_err(|e| Error::Formula(e.to_string()))?;
            declared = Some((nv, nc));
            continue;
        }
        for tok in line.split_whitespace() {
            let x: i64 = tok.parse().map_err(|_| Error::Formula(format!("bad literal: {tok}")))?;
            if x == 0 {
                if current.len() != 3 {
                    return Err(Error::Formula(format!(
                        "clause {} has {} literals; exactly 3 required",
                        clauses.len() + 1,
                        current.len()
                    )));
                }
                clauses.push([current[0], current[1], current[2]]);
                current.clear();
            } else {
                let var = x.unsigned_abs() as usize - 1;
                max_var = max_var.max(var + 1);
                current.push(Lit { var, negated: x < 0 });
            }
        }
    }
    if !current.is_empty() {
        if current.len() != 3 {
            return Err(Error::Formula(format!(
                "clause {} has {} literals; exactly 3 required",
                clauses.len() + 1,
                current.len()
            )));
        }
        clauses.push([current[0], current[1], current[2]]);
    }
    if clauses.is_empty() {
        return Err(Error::Formula("no clauses found".into()));
    }
    let n_vars = match declared {
        Some((nv, nc)) => {
            if nc != clauses.len() {
                return Err(Error::Formula(format!(
                    "problem line declares {nc} clauses, found {}",
                    clauses.len()
                )));
            }
            if max_var > nv {
                return Err(Error::Formula(format!(
                    "problem line declares {nv} variables, found literal for variable {max_var}"
                )));
            }
            nv
        }
        None => max_var,
    };
    Formula::new(n_vars, clauses)
}

/// Clause list in signed 1-based form, as recorded in instance metadata.
pub(crate) fn dimacs_clauses(f: &Formula) -> Vec<[i64; 3]> {
    f.clauses
        .iter()
        .map(|c| {
            std::array::from_fn(|h| {
                let lit = c[h];
                let v = (lit.var + 1) as i64;
                if lit.negated { -v } else { v }
            })
        })
        .collect()
}

/// Checked arithmetic helpers for gadget constants.
pub(crate) fn cadd(a: i64, b: i64, what: &'static str) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow(what))
}

pub(crate) fn cmul(a: i64, b: i64, what: &'static str) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow(what))
}

/// Incremental construction of labeled unit-weight gadget networks. Edges are
/// deduplicated by (tail, head) unless explicitly added as parallel copies;
/// trips are written as node sequences and resolved against the edge table.
pub(crate) struct NetBuilder {
    labels: Vec<String>,
    edges: Vec<crate::model::Edge>,
    by_arc: std::collections::HashMap<(usize, usize), usize>,
    trips: Vec<crate::model::Trip>,
}

impl NetBuilder {
    pub(crate) fn new() -> NetBuilder {
        NetBuilder {
            labels: Vec::new(),
            edges: Vec::new(),
            by_arc: std::collections::HashMap::new(),
            trips: Vec::new(),
        }
    }

    pub(crate) fn node(&mut self, label: String) -> usize {
        self.labels.push(label);
        self.labels.len() - 1
    }

    /// Unit-weight edge, deduplicated by arc.
    pub(crate) fn arc(&mut self, tail: usize, head: usize) -> usize {
        if let Some(&e) = self.by_arc.get(&(tail, head)) {
            return e;
        }
        let id = self.edges.len();
        self.edges.push(crate::model::Edge { tail, head, weight: 1 });
        self.by_arc.insert((tail, head), id);
        id
    }

    /// Unit-weight edge added unconditionally (parallel copies allowed); not
    /// registered for arc lookup unless the arc was absent.
    pub(crate) fn parallel_arc(&mut self, tail: usize, head: usize) -> usize {
        let id = self.edges.len();
        self.edges.push(crate::model::Edge { tail, head, weight: 1 });
        self.by_arc.entry((tail, head)).or_insert(id);
        id
    }

    pub(crate) fn edge_id(&self, tail: usize, head: usize) -> usize {
        self.by_arc[&(tail, head)]
    }

    /// Trip along a node sequence; every consecutive arc must already exist.
    pub(crate) fn walk_trip(&mut self, nodes: &[usize]) -> usize {
        let edge_ids = nodes.windows(2).map(|w| self.edge_id(w[0], w[1])).collect();
        self.trips.push(crate::model::Trip::new(edge_ids));
        self.trips.len() - 1
    }

    pub(crate) fn edge_trip(&mut self, edge: usize) -> usize {
        self.trips.push(crate::model::Trip::new(vec![edge]));
        self.trips.len() - 1
    }

    pub(crate) fn trip_from_edges(&mut self, edge_ids: Vec<usize>) -> usize {
        self.trips.push(crate::model::Trip::new(edge_ids));
        self.trips.len() - 1
    }

    pub(crate) fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub(crate) fn trip_count(&self) -> usize {
        self.trips.len()
    }

    pub(crate) fn finish(self, meta: crate::model::InstanceMeta) -> crate::model::TripNetwork {
        let node_count = self.labels.len();
        crate::model::TripNetwork {
            version: 1,
            node_count,
            edges: self.edges,
            trips: self.trips,
            labels: Some(self.labels),
            meta: Some(meta),
        }
    }
}
