//! SINR of associated small-cell users and of the macro user, and the
//! feasibility predicate built on top of them.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::channel::Scenario;
use crate::error::AssociationError;

/// Partial one-to-one matching between SBSs and SUs, indexed by SBS.
/// `assign[n] == Some(k)` means SBS `n` serves SU `k` (both 0-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Association {
    k: usize,
    assign: Vec<Option<usize>>,
}

impl Association {
    pub fn empty(k: usize, n: usize) -> Self {
        Self { k, assign: vec![None; n] }
    }

    pub fn new(k: usize, assign: Vec<Option<usize>>) -> Result<Self, AssociationError> {
        let mut owner = vec![None; k];
        for (sbs, slot) in assign.iter().enumerate() {
            if let Some(su) = *slot {
                if su >= k {
                    return Err(AssociationError::SuOutOfRange { su, k });
                }
                if let Some(first) = owner[su] {
                    return Err(AssociationError::NotOneToOne { su, first, second: sbs });
                }
                owner[su] = Some(sbs);
            }
        }
        Ok(Self { k, assign })
    }

    /// Builds from `(su, sbs)` pairs.
    pub fn from_pairs(k: usize, n: usize, pairs: &[(usize, usize)]) -> Result<Self, AssociationError> {
        let mut assign = vec![None; n];
        for &(su, sbs) in pairs {
            if sbs >= n {
                return Err(AssociationError::WrongLength { expected: n, got: sbs + 1 });
            }
            if let Some(other) = assign[sbs] {
                return Err(AssociationError::NotOneToOne { su: other, first: sbs, second: sbs });
            }
            assign[sbs] = Some(su);
        }
        Self::new(k, assign)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.assign.len()
    }

    pub fn slots(&self) -> &[Option<usize>] {
        &self.assign
    }

    pub fn served_by(&self, sbs: usize) -> Option<usize> {
        self.assign[sbs]
    }

    pub fn sbs_of(&self, su: usize) -> Option<usize> {
        self.assign.iter().position(|s| *s == Some(su))
    }

    /// `(su, sbs)` pairs in SBS order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.assign.iter().enumerate().filter_map(|(n, s)| s.map(|k| (k, n)))
    }

    /// Number of associated SUs.
    pub fn len(&self) -> usize {
        self.assign.iter().filter(|s| s.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn su_flags(&self) -> Vec<bool> {
        let mut flags = vec![false; self.k];
        for (k, _) in self.pairs() {
            flags[k] = true;
        }
        flags
    }

    pub fn sbs_flags(&self) -> Vec<bool> {
        self.assign.iter().map(Option::is_some).collect()
    }

    /// Binary vector `x` with column `k * N + n` set for every pair.
    pub fn to_x(&self) -> Vec<bool> {
        let n = self.n();
        let mut x = vec![false; self.k * n];
        for (k, sbs) in self.pairs() {
            x[k * n + sbs] = true;
        }
        x
    }

    /// Lexicographic order of the `x` vectors (SU-major, SBS-minor).
    pub fn cmp_x(&self, other: &Self) -> Ordering {
        debug_assert_eq!((self.k, self.n()), (other.k, other.n()));
        let n = self.n();
        let mut mine = vec![0usize; self.k];
        let mut theirs = vec![0usize; self.k];
        // An empty row is smallest; a one-hot row is larger the earlier its 1.
        for (k, sbs) in self.pairs() {
            mine[k] = n - sbs;
        }
        for (k, sbs) in other.pairs() {
            theirs[k] = n - sbs;
        }
        mine.cmp(&theirs)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuSinr {
    pub su: usize,
    pub sbs: usize,
    pub sinr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SinrReport {
    pub su_sinr: Vec<SuSinr>,
    pub mu_sinr: f64,
    pub feasible: bool,
}

fn check_shape(scn: &Scenario, a: &Association) {
    assert!(
        a.n() == scn.n() && a.k() == scn.k(),
        "association for K={}, N={} used with scenario K={}, N={}",
        a.k(),
        a.n(),
        scn.k(),
        scn.n()
    );
}

/// Interference-plus-noise at the macro user from the active SBSs.
fn mu_sinr_of(scn: &Scenario, slots: &[Option<usize>]) -> f64 {
    let interference: f64 = slots
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_some())
        .map(|(n, _)| scn.gamma * scn.mu_sbs(n))
        .sum();
    scn.gamma0 * scn.mu_mbs() / (1.0 + interference)
}

/// SINR of `su` served by `sbs`; interference comes from every other active SBS.
fn su_sinr_of(scn: &Scenario, slots: &[Option<usize>], su: usize, sbs: usize) -> f64 {
    let interference: f64 = slots
        .iter()
        .enumerate()
        .filter(|(n, s)| *n != sbs && s.is_some())
        .map(|(n, _)| scn.gamma * scn.su_sbs(su, n))
        .sum();
    scn.gamma * scn.su_sbs(su, sbs) / (1.0 + scn.gamma0 * scn.su_mbs(su) + interference)
}

pub fn evaluate(scn: &Scenario, a: &Association) -> SinrReport {
    check_shape(scn, a);
    let slots = a.slots();
    let mu_sinr = mu_sinr_of(scn, slots);
    let mut feasible = mu_sinr >= scn.beta0;
    let su_sinr: Vec<SuSinr> = a
        .pairs()
        .map(|(su, sbs)| {
            let sinr = su_sinr_of(scn, slots, su, sbs);
            feasible &= sinr >= scn.beta;
            SuSinr { su, sbs, sinr }
        })
        .collect();
    SinrReport { su_sinr, mu_sinr, feasible }
}

pub fn is_feasible(scn: &Scenario, a: &Association) -> bool {
    check_shape(scn, a);
    slots_feasible(scn, a.slots())
}

/// Allocation-free feasibility on raw slots; the solvers' hot path.
pub(crate) fn slots_feasible(scn: &Scenario, slots: &[Option<usize>]) -> bool {
    if mu_sinr_of(scn, slots) < scn.beta0 {
        return false;
    }
    slots.iter().enumerate().all(|(sbs, s)| match *s {
        None => true,
        Some(su) => su_sinr_of(scn, slots, su, sbs) >= scn.beta,
    })
}

/// SINR of the macro user under `a`.
pub fn mu_sinr(scn: &Scenario, a: &Association) -> f64 {
    check_shape(scn, a);
    mu_sinr_of(scn, a.slots())
}
