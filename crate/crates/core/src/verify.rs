//! Self-checks over random small networks: exact solvers agree with each
//! other, the matrix form agrees with the SINR predicate, enumeration visits
//! exactly the counted number of associations, and heuristics return
//! feasible associations no better than the optimum.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::baselines::{solve_max_sinr, solve_min_interference};
use crate::channel::{sample_scenario, NetworkConfig, Scenario};
use crate::exact::{count_combinations, solve_bf, solve_bnb, DEFAULT_ENUMERATION_CAP};
use crate::greedy::{solve_umrcg, solve_wmrcg, SelectionOrder};
use crate::ilp::IlpInstance;
use crate::sinr::{is_feasible, Association};
use crate::weights::WeightVector;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// First failing case, if any.
    pub detail: Option<String>,
}

impl CheckOutcome {
    fn new(name: &'static str) -> Self {
        Self { name, cases: 0, failures: 0, detail: None }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.detail.is_none() {
                self.detail = Some(detail());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }
}

/// Every partial matching for `k` SUs and `n` SBSs, empty one included.
pub fn all_associations(k: usize, n: usize) -> Vec<Association> {
    fn rec(su: usize, k: usize, slots: &mut Vec<Option<usize>>, out: &mut Vec<Association>) {
        if su == k {
            out.push(Association::new(k, slots.clone()).expect("built one-to-one"));
            return;
        }
        rec(su + 1, k, slots, out);
        for sbs in 0..slots.len() {
            if slots[sbs].is_none() {
                slots[sbs] = Some(su);
                rec(su + 1, k, slots, out);
                slots[sbs] = None;
            }
        }
    }
    let mut out = Vec::new();
    rec(0, k, &mut vec![None; n], &mut out);
    out
}

/// A random small network with SNRs drawn so that both sparse and dense
/// feasible sets appear.
fn random_case(rng: &mut ChaCha8Rng, max_k: usize, max_n: usize) -> (Scenario, WeightVector) {
    let cfg = NetworkConfig {
        k: rng.random_range(1..=max_k),
        n: rng.random_range(1..=max_n),
        gamma_db: rng.random_range(0.0..40.0),
        gamma0_db: rng.random_range(10.0..45.0),
        beta_db: rng.random_range(-5.0..10.0),
        beta0_db: rng.random_range(-10.0..10.0),
        seed: rng.random(),
        ..NetworkConfig::default()
    };
    let scn = sample_scenario(&cfg, &mut cfg.rng());
    // Window-style weights 1/(1+c) produce plenty of ties.
    let su_w: Vec<f64> = (0..cfg.k).map(|_| 1.0 / (1.0 + rng.random_range(0..4) as f64)).collect();
    (scn, WeightVector::per_su(&su_w, cfg.n))
}

pub fn run_verification(cases: usize, seed: u64) -> Vec<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bf_bnb = CheckOutcome::new("exhaustive and branch-and-bound optima coincide");
    let mut weighted = CheckOutcome::new("weighted exhaustive and branch-and-bound optima coincide");
    let mut matrix = CheckOutcome::new("matrix form agrees with SINR feasibility");
    let mut counting = CheckOutcome::new("enumeration visits C(K,N)+1 associations");
    let mut heuristics = CheckOutcome::new("heuristics are feasible and never beat the optimum");

    for case in 0..cases {
        let (scn, w) = random_case(&mut rng, 4, 4);
        let (k, n) = (scn.k(), scn.n());
        let tag = || format!("case {case}: K={k}, N={n}, hash {}", scn.gain_hash());

        let bf = solve_bf(&scn, None, DEFAULT_ENUMERATION_CAP).expect("small case under cap");
        let bnb = solve_bnb(&scn, None).expect("unweighted");
        bf_bnb.record(bf.association == bnb.association && bf.objective == bnb.objective, || {
            format!("{}: BF {:?} vs BnB {:?}", tag(), bf.association.slots(), bnb.association.slots())
        });

        let wbf = solve_bf(&scn, Some(&w), DEFAULT_ENUMERATION_CAP).expect("shape matches");
        let wbnb = solve_bnb(&scn, Some(&w)).expect("shape matches");
        weighted.record(wbf.association == wbnb.association, || {
            format!("{}: WBF {:?} vs WBnB {:?}", tag(), wbf.association.slots(), wbnb.association.slots())
        });

        if !scn.mu_infeasible() {
            let expected = count_combinations(k, n) + 1u32;
            counting.record(expected == bf.nodes_explored.into(), || {
                format!("{}: expected {expected}, visited {}", tag(), bf.nodes_explored)
            });
        }

        if let Ok(ilp) = IlpInstance::build(&scn) {
            for a in all_associations(k, n) {
                let (m, s) = (ilp.matrix_feasible(&a), is_feasible(&scn, &a));
                matrix.record(m == s, || format!("{}: {:?} matrix {m}, SINR {s}", tag(), a.slots()));
            }
        }

        let heur = [
            solve_umrcg(&scn, SelectionOrder::LargestFirst),
            solve_umrcg(&scn, SelectionOrder::SmallestFirst),
            solve_max_sinr(&scn),
            solve_min_interference(&scn),
        ];
        for h in &heur {
            let ok = if scn.mu_infeasible() { h.association.is_empty() } else { is_feasible(&scn, &h.association) };
            heuristics.record(ok && h.objective <= bf.objective, || {
                format!("{}: {:?} gave {:?}", tag(), h.solver, h.association.slots())
            });
        }
        let wh = solve_wmrcg(&scn, &w, SelectionOrder::LargestFirst).expect("shape matches");
        let ok = if scn.mu_infeasible() { wh.association.is_empty() } else { is_feasible(&scn, &wh.association) };
        heuristics.record(ok && wh.objective <= wbf.objective + 1e-9, || {
            format!("{}: WMRCG gave {:?}", tag(), wh.association.slots())
        });
    }
    vec![bf_bnb, weighted, matrix, counting, heuristics]
}
