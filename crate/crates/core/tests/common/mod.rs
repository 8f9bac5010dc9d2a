//! Reference implementations used as test oracles. They work on the raw
//! gain matrix and SU-indexed assignments so they share no code path with
//! the library.
#![allow(dead_code)]

use hetsnet::{Association, Scenario};
use proptest::prelude::*;

/// Raw problem data: gains row-major over (K+1) x (N+1), row/col 0 = MU/MBS.
#[derive(Debug, Clone)]
pub struct Raw {
    pub k: usize,
    pub n: usize,
    pub g: Vec<f64>,
    pub gamma: f64,
    pub gamma0: f64,
    pub beta: f64,
    pub beta0: f64,
}

impl Raw {
    pub fn from_scenario(scn: &Scenario) -> Self {
        Raw {
            k: scn.k(),
            n: scn.n(),
            g: scn.gains.clone(),
            gamma: scn.gamma,
            gamma0: scn.gamma0,
            beta: scn.beta,
            beta0: scn.beta0,
        }
    }

    pub fn g(&self, row: usize, col: usize) -> f64 {
        self.g[row * (self.n + 1) + col]
    }

    pub fn scenario(&self) -> Scenario {
        Scenario::from_gains(self.k, self.n, self.g.clone(), self.gamma, self.gamma0, self.beta, self.beta0).unwrap()
    }

    /// `su_to_sbs[k] = Some(n)`: SU k (0-based) is served by SBS n (0-based).
    pub fn feasible(&self, su_to_sbs: &[Option<usize>]) -> bool {
        let active: Vec<usize> = su_to_sbs.iter().flatten().copied().collect();
        let mut mu_den = 1.0;
        for &s in &active {
            mu_den += self.gamma * self.g(0, s + 1);
        }
        if self.gamma0 * self.g(0, 0) / mu_den < self.beta0 {
            return false;
        }
        for (k, sbs) in su_to_sbs.iter().enumerate() {
            let Some(own) = *sbs else { continue };
            let mut den = 1.0 + self.gamma0 * self.g(k + 1, 0);
            for &s in &active {
                if s != own {
                    den += self.gamma * self.g(k + 1, s + 1);
                }
            }
            if self.gamma * self.g(k + 1, own + 1) / den < self.beta {
                return false;
            }
        }
        true
    }

    pub fn mu_infeasible(&self) -> bool {
        self.gamma0 * self.g(0, 0) < self.beta0
    }
}

/// Every injective partial map SU -> SBS, found by counting through all
/// `(N+1)^K` maps and keeping the injective ones.
pub fn matchings(k: usize, n: usize) -> Vec<Vec<Option<usize>>> {
    let total = (n + 1).pow(k as u32);
    let mut out = Vec::new();
    for mut code in 0..total {
        let mut map = Vec::with_capacity(k);
        for _ in 0..k {
            let d = code % (n + 1);
            code /= n + 1;
            map.push(if d == 0 { None } else { Some(d - 1) });
        }
        let mut seen = vec![false; n];
        let injective = map.iter().flatten().all(|&s| !std::mem::replace(&mut seen[s], true));
        if injective {
            out.push(map);
        }
    }
    out
}

pub fn to_association(n: usize, su_to_sbs: &[Option<usize>]) -> Association {
    let mut slots = vec![None; n];
    for (k, s) in su_to_sbs.iter().enumerate() {
        if let Some(s) = s {
            slots[*s] = Some(k);
        }
    }
    Association::new(su_to_sbs.len(), slots).unwrap()
}

/// Best objective over all feasible matchings; `weights[k][n]` when given.
pub fn optimum(raw: &Raw, weights: Option<&[Vec<f64>]>) -> f64 {
    if raw.mu_infeasible() {
        return 0.0;
    }
    matchings(raw.k, raw.n)
        .into_iter()
        .filter(|m| raw.feasible(m))
        .map(|m| {
            m.iter()
                .enumerate()
                .filter_map(|(k, s)| s.map(|s| weights.map_or(1.0, |w| w[k][s])))
                .sum::<f64>()
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Random small problem. Gains span several decades so that feasible sets
/// range from empty to everything.
pub fn arb_raw(max_k: usize, max_n: usize) -> impl Strategy<Value = Raw> {
    (1..=max_k, 1..=max_n).prop_flat_map(|(k, n)| {
        (
            prop::collection::vec(-4.0f64..0.5, (k + 1) * (n + 1)),
            -5.0f64..40.0,
            0.0f64..45.0,
            -5.0f64..10.0,
            -10.0f64..10.0,
        )
            .prop_map(move |(lg, g_db, g0_db, b_db, b0_db)| Raw {
                k,
                n,
                g: lg.into_iter().map(|e| 10f64.powf(e)).collect(),
                gamma: 10f64.powf(g_db / 10.0),
                gamma0: 10f64.powf(g0_db / 10.0),
                beta: 10f64.powf(b_db / 10.0),
                beta0: 10f64.powf(b0_db / 10.0),
            })
    })
}

/// Weights of the form `1 / (1 + c)`, as the sliding window produces.
pub fn arb_weights(k: usize, n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec((0u32..5).prop_map(|c| 1.0 / (1.0 + c as f64)), n), k)
}
