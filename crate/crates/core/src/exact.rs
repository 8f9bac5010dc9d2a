//! Exact solvers: exhaustive enumeration and a depth-first branch-and-bound.
//!
//! Both maximize `|a|` (or `w' x` when weights are given) over feasible
//! associations and break ties toward the lexicographically smallest `x`.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::channel::Scenario;
use crate::error::SolveError;
use crate::sinr::{slots_feasible, Association};
use crate::weights::WeightVector;

pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SolverTag {
    #[serde(rename = "BF")]
    Bf,
    #[serde(rename = "BnB")]
    Bnb,
    #[serde(rename = "UMRCG")]
    Umrcg,
    #[serde(rename = "WMRCG")]
    Wmrcg,
    MaxSinr,
    MinInterf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub association: Association,
    /// Number of associated SUs, or `w' x` for weighted runs.
    pub objective: f64,
    /// Matchings tested (BF), tree nodes visited (BnB) or loop iterations
    /// (greedy and baselines).
    pub nodes_explored: u64,
    pub solver: SolverTag,
    /// The macro user misses its threshold even with every SBS silent;
    /// the association is then empty and the objective 0.
    pub mu_infeasible: bool,
}

/// Objective of `a`: cardinality, or `w' x` with `weights`.
pub fn objective(a: &Association, weights: Option<&WeightVector>) -> f64 {
    match weights {
        Some(w) => w.objective(a),
        None => a.len() as f64,
    }
}

pub(crate) fn check_weights(scn: &Scenario, weights: Option<&WeightVector>) -> Result<(), SolveError> {
    match weights {
        Some(w) if w.k() != scn.k() || w.n() != scn.n() => {
            Err(SolveError::WeightShape { expected: scn.k() * scn.n(), got: w.len() })
        }
        _ => Ok(()),
    }
}

pub(crate) fn mu_infeasible_result(scn: &Scenario, solver: SolverTag) -> SolveResult {
    SolveResult {
        association: Association::empty(scn.k(), scn.n()),
        objective: 0.0,
        nodes_explored: 1,
        solver,
        mu_infeasible: true,
    }
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

fn binomial(n: usize, r: usize) -> BigUint {
    if r > n {
        return BigUint::ZERO;
    }
    let r = r.min(n - r);
    // Running product stays integral: after step i it equals C(n - r + i, i).
    (1..=r).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - r + i) / BigUint::from(i))
}

/// Number of non-empty partial one-to-one matchings between `k` users and
/// `n` base stations: `sum_{i=1}^{min} i! C(min, i) C(max, i)`.
pub fn count_combinations(k: usize, n: usize) -> BigUint {
    let (lo, hi) = (k.min(n), k.max(n));
    (1..=lo).map(|i| factorial(i) * binomial(lo, i) * binomial(hi, i)).sum()
}

struct Incumbent {
    best: Option<(f64, Association)>,
}

impl Incumbent {
    fn offer(&mut self, value: f64, slots: &[Option<usize>], k: usize) {
        let better = match &self.best {
            None => true,
            Some((v, a)) => {
                value > *v
                    || (value == *v && {
                        let cand = Association::new(k, slots.to_vec()).expect("solver keeps matchings one-to-one");
                        cand.cmp_x(a).is_lt()
                    })
            }
        };
        if better {
            let a = Association::new(k, slots.to_vec()).expect("solver keeps matchings one-to-one");
            self.best = Some((value, a));
        }
    }

    fn value(&self) -> f64 {
        self.best.as_ref().map_or(f64::NEG_INFINITY, |(v, _)| *v)
    }
}

/// Exhaustive search over every partial matching, empty one included.
pub fn solve_bf(scn: &Scenario, weights: Option<&WeightVector>, cap: u64) -> Result<SolveResult, SolveError> {
    check_weights(scn, weights)?;
    let total = count_combinations(scn.k(), scn.n()) + BigUint::one();
    if total > BigUint::from(cap) {
        return Err(SolveError::CapExceeded { count: total, cap });
    }
    if scn.mu_infeasible() {
        return Ok(mu_infeasible_result(scn, SolverTag::Bf));
    }

    struct Walk<'a> {
        scn: &'a Scenario,
        weights: Option<&'a WeightVector>,
        slots: Vec<Option<usize>>,
        tested: u64,
        incumbent: Incumbent,
    }

    impl Walk<'_> {
        fn visit(&mut self, su: usize) {
            let k = self.scn.k();
            if su == k {
                self.tested += 1;
                if slots_feasible(self.scn, &self.slots) {
                    let a = Association::new(k, self.slots.clone()).expect("one-to-one by construction");
                    let value = objective(&a, self.weights);
                    self.incumbent.offer(value, &self.slots, k);
                }
                return;
            }
            self.visit(su + 1);
            for sbs in 0..self.scn.n() {
                if self.slots[sbs].is_none() {
                    self.slots[sbs] = Some(su);
                    self.visit(su + 1);
                    self.slots[sbs] = None;
                }
            }
        }
    }

    let mut walk = Walk {
        scn,
        weights,
        slots: vec![None; scn.n()],
        tested: 0,
        incumbent: Incumbent { best: None },
    };
    walk.visit(0);
    let (objective, association) = walk.incumbent.best.expect("the empty association is feasible here");
    Ok(SolveResult { association, objective, nodes_explored: walk.tested, solver: SolverTag::Bf, mu_infeasible: false })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BnbOptions {
    /// Disable to run the same search with bound pruning switched off.
    pub prune: bool,
}

impl Default for BnbOptions {
    fn default() -> Self {
        Self { prune: true }
    }
}

pub fn solve_bnb(scn: &Scenario, weights: Option<&WeightVector>) -> Result<SolveResult, SolveError> {
    solve_bnb_with(scn, weights, BnbOptions::default())
}

/// Depth-first branch-and-bound over users.
///
/// At depth `k` the children are "SU k idle" followed by "SU k on SBS n" for
/// `n = N-1, ..., 0`, so leaves are reached in increasing lexicographic order
/// of `x` and the first optimum found is the tie-break winner. Feasibility is
/// downward closed (removing a pair only removes interference), so a pair is
/// only branched on when the partial association stays feasible. A node is
/// pruned when its objective plus an optimistic completion bound cannot beat
/// the incumbent.
pub fn solve_bnb_with(
    scn: &Scenario,
    weights: Option<&WeightVector>,
    opts: BnbOptions,
) -> Result<SolveResult, SolveError> {
    check_weights(scn, weights)?;
    if scn.mu_infeasible() {
        return Ok(mu_infeasible_result(scn, SolverTag::Bnb));
    }
    let (k, n) = (scn.k(), scn.n());

    // Pairs that are feasible on their own; nothing else can ever be used.
    let mut alone = vec![false; k * n];
    let mut probe = vec![None; n];
    for su in 0..k {
        for sbs in 0..n {
            probe[sbs] = Some(su);
            alone[su * n + sbs] = slots_feasible(scn, &probe);
            probe[sbs] = None;
        }
    }

    struct Search<'a> {
        scn: &'a Scenario,
        weights: Option<&'a WeightVector>,
        alone: Vec<bool>,
        prune: bool,
        slots: Vec<Option<usize>>,
        nodes: u64,
        incumbent: Incumbent,
        scratch: Vec<f64>,
    }

    impl Search<'_> {
        fn pair_value(&self, su: usize, sbs: usize) -> f64 {
            self.weights.map_or(1.0, |w| w.get(su, sbs))
        }

        /// Admissible bound on what SUs `from..K` can still add.
        fn bound(&mut self, from: usize) -> f64 {
            let (k, n) = (self.scn.k(), self.scn.n());
            self.scratch.clear();
            let mut usable_sbs = 0usize;
            for sbs in (0..n).filter(|&s| self.slots[s].is_none()) {
                if (from..k).any(|su| self.alone[su * n + sbs]) {
                    usable_sbs += 1;
                }
            }
            for su in from..k {
                let best = (0..n)
                    .filter(|&s| self.slots[s].is_none() && self.alone[su * n + s])
                    .map(|s| self.pair_value(su, s))
                    .fold(f64::NEG_INFINITY, f64::max);
                if best > 0.0 {
                    self.scratch.push(best);
                }
            }
            self.scratch.sort_unstable_by(|a, b| b.total_cmp(a));
            self.scratch.iter().take(usable_sbs).sum()
        }

        fn visit(&mut self, su: usize, value: f64) {
            self.nodes += 1;
            let k = self.scn.k();
            if su == k {
                if slots_feasible(self.scn, &self.slots) {
                    let a = Association::new(k, self.slots.clone()).expect("one-to-one by construction");
                    let exact = objective(&a, self.weights);
                    self.incumbent.offer(exact, &self.slots, k);
                }
                return;
            }
            if self.prune && self.incumbent.best.is_some() {
                let best = self.incumbent.value();
                // Weighted sums carry rounding; leave a margin so that no
                // subtree holding a strictly better leaf is cut.
                let slack = if self.weights.is_some() { 1e-9 * (1.0 + best.abs()) } else { 0.0 };
                if value + self.bound(su) <= best - slack {
                    return;
                }
            }
            self.visit(su + 1, value);
            let n = self.scn.n();
            for sbs in (0..n).rev() {
                if self.slots[sbs].is_some() || !self.alone[su * n + sbs] {
                    continue;
                }
                self.slots[sbs] = Some(su);
                if slots_feasible(self.scn, &self.slots) {
                    let v = value + self.pair_value(su, sbs);
                    self.visit(su + 1, v);
                }
                self.slots[sbs] = None;
            }
        }
    }

    let mut search = Search {
        scn,
        weights,
        alone,
        prune: opts.prune,
        slots: vec![None; n],
        nodes: 0,
        incumbent: Incumbent { best: None },
        scratch: Vec::with_capacity(k),
    };
    search.visit(0, 0.0);
    let (objective, association) = search.incumbent.best.expect("the empty association is feasible here");
    Ok(SolveResult { association, objective, nodes_explored: search.nodes, solver: SolverTag::Bnb, mu_infeasible: false })
}
