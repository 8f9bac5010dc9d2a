//! Relative-channel-gain greedy heuristics (unweighted and weighted).
//!
//! Each cell `(k, n)` gets the priority `w * g_kn / sum_{k' != k} g_k'n`. The
//! loop repeatedly picks the extreme untried cell among rows and columns not
//! yet used, tentatively associates it, and keeps it only if every SINR
//! constraint still holds.

use serde::{Deserialize, Serialize};

use crate::channel::Scenario;
use crate::error::SolveError;
use crate::exact::{check_weights, mu_infeasible_result, objective, SolveResult, SolverTag};
use crate::sinr::{slots_feasible, Association};
use crate::weights::WeightVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelectionOrder {
    /// Pick the minimum priority first.
    SmallestFirst,
    /// Pick the maximum priority first: the user with the strongest link
    /// relative to the interference it causes goes first.
    #[default]
    LargestFirst,
}

impl std::str::FromStr for SelectionOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "smallest-first" | "smallest" | "min" => Ok(Self::SmallestFirst),
            "largest-first" | "largest" | "max" => Ok(Self::LargestFirst),
            other => Err(format!("unknown selection order `{other}` (smallest-first | largest-first)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PriorityMatrix {
    k: usize,
    n: usize,
    values: Vec<f64>,
    pub eliminated_rows: Vec<bool>,
    pub eliminated_cols: Vec<bool>,
}

impl PriorityMatrix {
    pub fn get(&self, su: usize, sbs: usize) -> f64 {
        self.values[su * self.n + sbs]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eliminate(&mut self, su: usize, sbs: usize) {
        self.eliminated_rows[su] = true;
        self.eliminated_cols[sbs] = true;
    }

    pub fn is_eliminated(&self, su: usize, sbs: usize) -> bool {
        self.eliminated_rows[su] || self.eliminated_cols[sbs]
    }
}

/// Priority matrix in O(K*N) via column sums. A cell whose column holds no
/// other gain (always the case for K = 1) gets `+inf`.
pub fn build_priority(scn: &Scenario, weights: Option<&WeightVector>) -> PriorityMatrix {
    let (k, n) = (scn.k(), scn.n());
    let col_sums: Vec<f64> = (0..n).map(|sbs| (0..k).map(|su| scn.su_sbs(su, sbs)).sum()).collect();
    let mut values = Vec::with_capacity(k * n);
    for su in 0..k {
        for sbs in 0..n {
            let g = scn.su_sbs(su, sbs);
            let others = col_sums[sbs] - g;
            let w = weights.map_or(1.0, |w| w.get(su, sbs));
            values.push(if others > 0.0 { w * g / others } else { f64::INFINITY });
        }
    }
    PriorityMatrix { k, n, values, eliminated_rows: vec![false; k], eliminated_cols: vec![false; n] }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GreedyStats {
    /// Iterations of the main loop.
    pub iterations: u64,
    /// Elementary steps: cells scanned during selection plus gain terms
    /// touched while re-evaluating SINRs.
    pub operations: u64,
}

/// Shared loop. Ties go to the lowest cell index in `x` order.
pub(crate) fn run_greedy(
    scn: &Scenario,
    weights: Option<&WeightVector>,
    order: SelectionOrder,
    solver: SolverTag,
) -> (SolveResult, GreedyStats) {
    let (k, n) = (scn.k(), scn.n());
    if scn.mu_infeasible() {
        return (mu_infeasible_result(scn, solver), GreedyStats::default());
    }
    let mut u = build_priority(scn, weights);
    let mut tried = vec![false; k * n];
    let mut slots: Vec<Option<usize>> = vec![None; n];
    let mut stats = GreedyStats::default();

    for _ in 0..k * n {
        let mut pick: Option<(usize, f64)> = None;
        for cell in 0..k * n {
            stats.operations += 1;
            let (su, sbs) = (cell / n, cell % n);
            if tried[cell] || u.is_eliminated(su, sbs) {
                continue;
            }
            let v = u.values[cell];
            let better = match (pick, order) {
                (None, _) => true,
                (Some((_, best)), SelectionOrder::SmallestFirst) => v < best,
                (Some((_, best)), SelectionOrder::LargestFirst) => v > best,
            };
            if better {
                pick = Some((cell, v));
            }
        }
        let Some((cell, _)) = pick else { break };
        stats.iterations += 1;
        tried[cell] = true;
        let (su, sbs) = (cell / n, cell % n);

        slots[sbs] = Some(su);
        let active = slots.iter().filter(|s| s.is_some()).count() as u64;
        stats.operations += (active + 1) * n as u64;
        if slots_feasible(scn, &slots) {
            u.eliminate(su, sbs);
        } else {
            slots[sbs] = None;
        }
    }

    let association = Association::new(k, slots).expect("eliminated rows keep the matching one-to-one");
    let objective = objective(&association, weights);
    let result = SolveResult { association, objective, nodes_explored: stats.iterations, solver, mu_infeasible: false };
    (result, stats)
}

pub fn solve_umrcg(scn: &Scenario, order: SelectionOrder) -> SolveResult {
    run_greedy(scn, None, order, SolverTag::Umrcg).0
}

pub fn solve_umrcg_with_stats(scn: &Scenario, order: SelectionOrder) -> (SolveResult, GreedyStats) {
    run_greedy(scn, None, order, SolverTag::Umrcg)
}

/// Weighted variant; the objective reported is `w' x`. Weight updates
/// between slots belong to the caller.
pub fn solve_wmrcg(scn: &Scenario, weights: &WeightVector, order: SelectionOrder) -> Result<SolveResult, SolveError> {
    check_weights(scn, Some(weights))?;
    Ok(run_greedy(scn, Some(weights), order, SolverTag::Wmrcg).0)
}
