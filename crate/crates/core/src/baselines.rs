//! Comparison rules: strongest-signal association and a minimum predicted
//! interference rule.
//!
//! Both are greedy: candidate pairs are visited in the rule's order, each
//! pair is added tentatively and kept only while the whole association stays
//! feasible, so the reported count is directly comparable with the other
//! solvers.

use std::cmp::Ordering;

use crate::channel::Scenario;
use crate::exact::{mu_infeasible_result, SolveResult, SolverTag};
use crate::sinr::{slots_feasible, Association};

fn try_pairs(scn: &Scenario, candidates: impl Iterator<Item = (usize, usize)>, solver: SolverTag) -> SolveResult {
    if scn.mu_infeasible() {
        return mu_infeasible_result(scn, solver);
    }
    let (k, n) = (scn.k(), scn.n());
    let mut slots = vec![None; n];
    let mut su_used = vec![false; k];
    let mut steps = 0u64;
    for (su, sbs) in candidates {
        if su_used[su] || slots[sbs].is_some() {
            continue;
        }
        steps += 1;
        slots[sbs] = Some(su);
        if slots_feasible(scn, &slots) {
            su_used[su] = true;
        } else {
            slots[sbs] = None;
        }
    }
    let association = Association::new(k, slots).expect("used rows and columns are skipped");
    let objective = association.len() as f64;
    SolveResult { association, objective, nodes_explored: steps, solver, mu_infeasible: false }
}

/// Users in decreasing order of their best gain each take the strongest SBS
/// still free. A user whose pick breaks feasibility stays unassociated.
pub fn solve_max_sinr(scn: &Scenario) -> SolveResult {
    let (k, n) = (scn.k(), scn.n());
    let best_gain = |su: usize| (0..n).map(|s| scn.su_sbs(su, s)).fold(f64::NEG_INFINITY, f64::max);
    let mut users: Vec<usize> = (0..k).collect();
    users.sort_by(|&a, &b| best_gain(b).total_cmp(&best_gain(a)).then(a.cmp(&b)));

    if scn.mu_infeasible() {
        return mu_infeasible_result(scn, SolverTag::MaxSinr);
    }
    let mut slots: Vec<Option<usize>> = vec![None; n];
    let mut steps = 0u64;
    for su in users {
        let strongest = (0..n)
            .filter(|&s| slots[s].is_none())
            .max_by(|&a, &b| scn.su_sbs(su, a).total_cmp(&scn.su_sbs(su, b)).then(b.cmp(&a)));
        let Some(sbs) = strongest else { break };
        steps += 1;
        slots[sbs] = Some(su);
        if !slots_feasible(scn, &slots) {
            slots[sbs] = None;
        }
    }
    let association = Association::new(k, slots).expect("each user is tried once");
    let objective = association.len() as f64;
    SolveResult { association, objective, nodes_explored: steps, solver: SolverTag::MaxSinr, mu_infeasible: false }
}

/// Pairs ranked by the interference SU `k` would see if every other SBS
/// transmitted, `sum_{n' != n} g_kn'`, smallest first.
pub fn solve_min_interference(scn: &Scenario) -> SolveResult {
    let (k, n) = (scn.k(), scn.n());
    let mut ranked: Vec<(f64, usize, usize)> = Vec::with_capacity(k * n);
    for su in 0..k {
        for sbs in 0..n {
            let predicted: f64 = (0..n).filter(|&o| o != sbs).map(|o| scn.su_sbs(su, o)).sum();
            ranked.push((predicted, su, sbs));
        }
    }
    ranked.sort_by(|a, b| match a.0.total_cmp(&b.0) {
        Ordering::Equal => (a.1, a.2).cmp(&(b.1, b.2)),
        o => o,
    });
    try_pairs(scn, ranked.into_iter().map(|(_, su, sbs)| (su, sbs)), SolverTag::MinInterf)
}
