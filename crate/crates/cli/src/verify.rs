//! Generator-specific verification: each generated instance carries metadata
//! naming its family, parameters, and claim thresholds; this module re-runs
//! the checks appropriate for the family.

use serde_json::Value;

use tripnet::gen::{
    Formula, HardFamilyLayout, Lit, gen_hard_family, hard_family_recipe_schedule,
    mroett_assignment_schedule, sym_assignment_temporalisation, verify_hard_family_bound,
};
use tripnet::model::{AnySchedule, InstanceMeta, TripNetwork};
use tripnet::solve::{
    ExactMode, ExactOptions, OracleOptions, TemporalisabilityMode, exact_best, o2o_oracle,
    strongly_temporalisable_check, symmetric_approx_schedule,
};
use tripnet::{
    Error as CoreError, reach_report_threads, schedule_to_temporalisation, symmetric_pairing,
};

use crate::Failure;

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn ok(name: &'static str, detail: impl Into<String>) -> Check {
        Check { name, passed: true, detail: detail.into() }
    }

    fn fail(name: &'static str, detail: impl Into<String>) -> Check {
        Check { name, passed: false, detail: detail.into() }
    }

    fn from_bool(name: &'static str, passed: bool, detail: impl Into<String>) -> Check {
        Check { name, passed, detail: detail.into() }
    }
}

pub fn run(
    net: &TripNetwork,
    meta: &InstanceMeta,
    assignment: Option<&[bool]>,
    samples: usize,
    seed: u64,
    threads: usize,
) -> Result<Vec<Check>, Failure> {
    match meta.generator.as_str() {
        "o2o" => verify_o2o(net, meta),
        "mroett" => verify_mroett(net, meta, assignment),
        "sym" => verify_sym(net, meta, assignment, threads),
        "hard-family" => verify_hard_family(net, meta, samples, seed),
        "gap-ssmrtt" => verify_gap_ssmrtt(net, meta),
        "gap-simple" => verify_gap_simple(net, meta),
        "gap-sqrtn" => verify_gap_sqrtn(net, meta),
        "random-sym" => verify_random_sym(net),
        other => Err(Failure::Usage(format!("unknown generator in metadata: {other}"))),
    }
}

fn param_usize(meta: &InstanceMeta, key: &str) -> Result<usize, Failure> {
    meta.params
        .get(key)
        .and_then(Value::as_u64)
        .map(|v| v as usize)
        .ok_or_else(|| Failure::Usage(format!("metadata misses parameter {key}")))
}

fn param_i64(meta: &InstanceMeta, key: &str) -> Result<i64, Failure> {
    meta.params
        .get(key)
        .and_then(Value::as_i64)
        .ok_or_else(|| Failure::Usage(format!("metadata misses parameter {key}")))
}

fn threshold(meta: &InstanceMeta, key: &str) -> Result<i64, Failure> {
    meta.thresholds
        .get(key)
        .copied()
        .ok_or_else(|| Failure::Usage(format!("metadata misses threshold {key}")))
}

fn role(meta: &InstanceMeta, key: &str) -> Result<usize, Failure> {
    meta.roles
        .get(key)
        .copied()
        .ok_or_else(|| Failure::Usage(format!("metadata misses role {key}")))
}

/// Rebuilds the formula recorded in the metadata.
fn formula_from_meta(meta: &InstanceMeta) -> Result<Formula, Failure> {
    let n = param_usize(meta, "n")?;
    let raw = meta
        .params
        .get("clauses")
        .and_then(Value::as_array)
        .ok_or_else(|| Failure::Usage("metadata misses the clause list".into()))?;
    let mut clauses = Vec::with_capacity(raw.len());
    for clause in raw {
        let lits: Vec<Lit> = clause
            .as_array()
            .map(|xs| {
                xs.iter()
                    .filter_map(Value::as_i64)
                    .map(|x| Lit { var: x.unsigned_abs() as usize - 1, negated: x < 0 })
                    .collect()
            })
            .unwrap_or_default();
        if lits.len() != 3 {
            return Err(Failure::Usage("malformed clause in metadata".into()));
        }
        clauses.push([lits[0], lits[1], lits[2]]);
    }
    Formula::new(n, clauses).map_err(Failure::from)
}

fn verify_o2o(net: &TripNetwork, meta: &InstanceMeta) -> Result<Vec<Check>, Failure> {
    let n = param_usize(meta, "n")?;
    let m = param_usize(meta, "m")?;
    let mut checks = vec![
        Check::from_bool(
            "node_count",
            net.node_count == n + 7 * m + 2,
            format!("{} nodes, expected {}", net.node_count, n + 7 * m + 2),
        ),
        Check::from_bool(
            "trip_count",
            net.trip_count() == 2 * n + 6 * m + 1,
            format!("{} trips, expected {}", net.trip_count(), 2 * n + 6 * m + 1),
        ),
    ];
    let s = role(meta, "s")?;
    let t = role(meta, "t")?;
    if n <= 16 {
        match net.meta.as_ref().and_then(|m| m.params.get("clauses")) {
            Some(_) => {
                let f = formula_from_meta(meta)?;
                let sat = f.brute_force_sat().is_some();
                let feasible = o2o_oracle(net, s, t, &OracleOptions::default())
                    .map_err(Failure::from)?
                    .feasible;
                checks.push(Check::from_bool(
                    "sat_iff_feasible",
                    sat == feasible,
                    format!("satisfiable={sat}, feasible={feasible}"),
                ));
            }
            None => checks.push(Check::ok("sat_iff_feasible", "skipped: no clause list recorded")),
        }
    } else {
        checks.push(Check::ok("sat_iff_feasible", "skipped: beyond desk scale"));
    }
    Ok(checks)
}

fn verify_mroett(
    net: &TripNetwork,
    meta: &InstanceMeta,
    assignment: Option<&[bool]>,
) -> Result<Vec<Check>, Failure> {
    let k = param_i64(meta, "K")?;
    let m_big = param_i64(meta, "M")?;
    let h = param_i64(meta, "H")?;
    let f = formula_from_meta(meta)?;
    let params =
        tripnet::gen::mroett_params(f.n_vars, f.n_clauses(), Some(k), Some(m_big)).map_err(Failure::from)?;
    let mut checks = vec![
        Check::from_bool(
            "node_count",
            net.node_count as i64 == m_big + h + 4,
            format!("{} nodes, expected M+|H|+4 = {}", net.node_count, m_big + h + 4),
        ),
        Check::from_bool(
            "h_closed_form",
            h == params.h_size,
            format!("|H| = {h}, recomputed {}", params.h_size),
        ),
        Check::from_bool(
            "thresholds_match",
            threshold(meta, "lower")? == params.lower
                && threshold(meta, "upper1")? == params.upper1
                && threshold(meta, "upper2")? == params.upper2,
            "recomputed threshold formulas",
        ),
        Check::from_bool("one_edge", net.trips.iter().all(|t| t.len() == 1), "all trips single-edge"),
        Check::from_bool("strongly_connected", net.strongly_connected(), ""),
    ];
    if let Some(a) = assignment {
        // Rebuild the generator layout to drive the assignment schedule.
        let (rebuilt, _, layout) =
            tripnet::gen::gen_mroett(&f, Some(k), Some(m_big)).map_err(Failure::from)?;
        if rebuilt.edges == net.edges {
            let sched = mroett_assignment_schedule(net, &f, &layout, a).map_err(Failure::from)?;
            let tau =
                schedule_to_temporalisation(net, &AnySchedule::Strict(sched)).map_err(Failure::from)?;
            let report = reach_report_threads(net, &tau, false, 1).map_err(Failure::from)?;
            let all_from_block =
                layout.block.iter().all(|&b| report.per_source[b] as usize == net.node_count);
            checks.push(Check::from_bool(
                "assignment_schedule_block_reach",
                all_from_block,
                format!("total {}", report.total),
            ));
            checks.push(Check::from_bool(
                "assignment_schedule_lower_bound",
                report.total as i64 >= params.lower,
                format!("total {} vs lower bound {}", report.total, params.lower),
            ));
        } else {
            checks.push(Check::fail("assignment_schedule_block_reach", "instance differs from its metadata"));
        }
    }
    Ok(checks)
}

fn verify_sym(
    net: &TripNetwork,
    meta: &InstanceMeta,
    assignment: Option<&[bool]>,
    threads: usize,
) -> Result<Vec<Check>, Failure> {
    let f = formula_from_meta(meta)?;
    let params = tripnet::gen::sym_params(f.n_vars, f.n_clauses()).map_err(Failure::from)?;
    let mut checks = vec![
        Check::from_bool(
            "node_count",
            net.node_count as i64 == params.node_count,
            format!("{} nodes, closed form {}", net.node_count, params.node_count),
        ),
        Check::from_bool("symmetric", symmetric_pairing(net).is_ok(), ""),
        Check::from_bool("strongly_connected", net.strongly_connected(), ""),
        Check::from_bool(
            "q_threshold",
            threshold(meta, "Q")? == params.q,
            format!("Q = {}", params.q),
        ),
    ];
    if let Some(a) = assignment {
        let tau = sym_assignment_temporalisation(net, &f, a).map_err(Failure::from)?;
        let report = reach_report_threads(net, &tau, false, threads).map_err(Failure::from)?;
        checks.push(Check::from_bool(
            "assignment_reaches_q",
            report.total as i64 >= params.q,
            format!("total {} vs Q {}", report.total, params.q),
        ));
    }
    Ok(checks)
}

fn verify_hard_family(
    net: &TripNetwork,
    meta: &InstanceMeta,
    samples: usize,
    seed: u64,
) -> Result<Vec<Check>, Failure> {
    let r = param_usize(meta, "r")?;
    let layout = HardFamilyLayout { r };
    let (rebuilt, _) = gen_hard_family(r).map_err(Failure::from)?;
    let mut checks = vec![
        Check::from_bool(
            "node_count",
            net.node_count == r * r + 2 * r,
            format!("{} nodes, expected {}", net.node_count, r * r + 2 * r),
        ),
        Check::from_bool(
            "trip_count",
            net.trip_count() == 4 * r + 1,
            format!("{} trips, expected {}", net.trip_count(), 4 * r + 1),
        ),
        Check::from_bool("matches_generator", rebuilt.edges == net.edges && rebuilt.trips == net.trips, ""),
    ];
    let mut bad_pair = None;
    'outer: for from in 0..net.node_count {
        for to in 0..net.node_count {
            if hard_family_recipe_schedule(net, &layout, from, to).is_err() {
                bad_pair = Some((from, to));
                break 'outer;
            }
        }
    }
    checks.push(Check::from_bool(
        "all_pair_recipes",
        bad_pair.is_none(),
        match bad_pair {
            Some((u, v)) => format!("recipe failed for ({u}, {v})"),
            None => format!("{} ordered pairs verified", net.node_count * net.node_count),
        },
    ));
    let report = verify_hard_family_bound(net, &layout, samples, seed).map_err(Failure::from)?;
    checks.push(Check::from_bool(
        "sampled_reachability_bound",
        report.passed(),
        format!(
            "{} schedules, {} claim pairs, max total {}; failures: {:?}",
            report.schedules_checked, report.claim_pairs, report.max_total, report.failures
        ),
    ));
    Ok(checks)
}

/// Brute-force weak-schedule optimum restricted to one source, or None when
/// the search is too large for desk-scale verification.
fn weak_best(net: &TripNetwork, source: Option<usize>) -> Result<Option<u64>, Failure> {
    let opts = ExactOptions { source, ..Default::default() };
    match exact_best(net, ExactMode::Weak, &opts) {
        Ok(res) => Ok(Some(res.value)),
        Err(CoreError::CapExceeded { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn verify_gap_ssmrtt(net: &TripNetwork, meta: &InstanceMeta) -> Result<Vec<Check>, Failure> {
    let sprime = role(meta, "s'")?;
    let lo = threshold(meta, "feasible_min")?;
    let hi = threshold(meta, "infeasible_max")?;
    let mut checks = Vec::new();
    if net.trip_count() <= 12 {
        let out = strongly_temporalisable_check(
            net,
            TemporalisabilityMode::Brute,
            &OracleOptions::default(),
        )
        .map_err(Failure::from)?;
        checks.push(Check::from_bool(
            "strongly_temporalisable",
            out.strongly_temporalisable,
            format!("{:?}", out.certificate),
        ));
    } else {
        checks.push(Check::ok("strongly_temporalisable", "skipped: beyond desk scale"));
    }
    match weak_best(net, Some(sprime))? {
        Some(best) => {
            let consistent = best as i64 >= lo || best as i64 <= hi;
            checks.push(Check::from_bool(
                "gap_thresholds",
                consistent,
                format!("best source reach {best}; thresholds {hi} / {lo}"),
            ));
        }
        None => checks.push(Check::ok("gap_thresholds", "skipped: beyond desk scale")),
    }
    Ok(checks)
}

fn verify_gap_simple(net: &TripNetwork, meta: &InstanceMeta) -> Result<Vec<Check>, Failure> {
    let variant = meta.params.get("variant").and_then(Value::as_str).unwrap_or_default().to_string();
    let k = param_i64(meta, "K")?;
    let base_nodes = param_usize(meta, "base_nodes")?;
    let mut checks = Vec::new();
    let expected_nodes = match variant.as_str() {
        "mrtt" => base_nodes as i64 + 2 * k,
        _ => base_nodes as i64 + k,
    };
    checks.push(Check::from_bool(
        "node_count",
        net.node_count as i64 == expected_nodes,
        format!("{} nodes, expected {expected_nodes}", net.node_count),
    ));
    match variant.as_str() {
        "mrtt" => match weak_best(net, None)? {
            Some(best) => {
                let lo = threshold(meta, "feasible_min")?;
                let hi = threshold(meta, "infeasible_max")?;
                checks.push(Check::from_bool(
                    "gap_thresholds",
                    best as i64 >= lo || best as i64 <= hi,
                    format!("best total {best}; thresholds {hi} / {lo}"),
                ));
            }
            None => checks.push(Check::ok("gap_thresholds", "skipped: beyond desk scale")),
        },
        _ => {
            let s = role(meta, "s")?;
            match weak_best(net, Some(s))? {
                Some(best) => {
                    let lo = threshold(meta, "feasible_min_source")?;
                    let hi = threshold(meta, "infeasible_max_source")?;
                    checks.push(Check::from_bool(
                        "gap_thresholds",
                        best as i64 >= lo || best as i64 <= hi,
                        format!("best source reach {best}; thresholds {hi} / {lo}"),
                    ));
                }
                None => checks.push(Check::ok("gap_thresholds", "skipped: beyond desk scale")),
            }
        }
    }
    Ok(checks)
}

fn verify_gap_sqrtn(net: &TripNetwork, meta: &InstanceMeta) -> Result<Vec<Check>, Failure> {
    let r = param_usize(meta, "r")?;
    let base_trips = param_usize(meta, "base_trips")?;
    let mut checks = vec![
        Check::from_bool(
            "node_count",
            net.node_count == r * r + 2 * r,
            format!("{} nodes, expected {}", net.node_count, r * r + 2 * r),
        ),
        Check::from_bool(
            "trip_roster",
            net.trip_count() == base_trips + 4 * r,
            format!("{} trips, expected {}", net.trip_count(), base_trips + 4 * r),
        ),
        Check::from_bool("strongly_connected", net.strongly_connected(), ""),
    ];
    if net.trip_count() <= 40 {
        match strongly_temporalisable_check(
            net,
            TemporalisabilityMode::Brute,
            &OracleOptions { k_cap: None, state_cap: 20_000_000 },
        ) {
            Ok(out) => checks.push(Check::from_bool(
                "strongly_temporalisable",
                out.strongly_temporalisable,
                format!("{:?}", out.certificate),
            )),
            Err(CoreError::StateCapExceeded { .. }) => {
                checks.push(Check::ok("strongly_temporalisable", "skipped: beyond desk scale"));
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        checks.push(Check::ok("strongly_temporalisable", "skipped: beyond desk scale"));
    }
    Ok(checks)
}

fn verify_random_sym(net: &TripNetwork) -> Result<Vec<Check>, Failure> {
    let mut checks = vec![
        Check::from_bool("symmetric", symmetric_pairing(net).is_ok(), ""),
        Check::from_bool("strongly_connected", net.strongly_connected(), ""),
    ];
    let res = symmetric_approx_schedule(net).map_err(Failure::from)?;
    let guarantee = tripnet::solve::approx_guarantee(net.node_count);
    checks.push(Check::from_bool(
        "approx_guarantee",
        res.report.total >= guarantee,
        format!("total {} vs guarantee {guarantee}", res.report.total),
    ));
    Ok(checks)
}
