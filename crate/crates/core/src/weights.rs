//! Sliding-window fairness weights and Jain's index.
//!
//! An entity (SU or SBS, depending on [`WeightMode`]) associated `c` times
//! during the last `T` slots carries weight `1 / (1 + c)`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::sinr::Association;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum WeightMode {
    /// Fairness between small-cell users.
    #[default]
    PerSu,
    /// Load balancing between small-cell base stations.
    PerSbs,
}

/// Objective coefficients laid out like the association vector: entry
/// `k * N + n` is the value of pairing SU `k` with SBS `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    k: usize,
    n: usize,
    values: Vec<f64>,
}

impl WeightVector {
    pub fn ones(k: usize, n: usize) -> Self {
        Self { k, n, values: vec![1.0; k * n] }
    }

    /// Each `w_k` repeated `n` times.
    pub fn per_su(su_weights: &[f64], n: usize) -> Self {
        let values = su_weights.iter().flat_map(|w| std::iter::repeat_n(*w, n)).collect();
        Self { k: su_weights.len(), n, values }
    }

    /// The sequence `w_1..w_N` repeated for each of the `k` users.
    pub fn per_sbs(sbs_weights: &[f64], k: usize) -> Self {
        let values = (0..k).flat_map(|_| sbs_weights.iter().copied()).collect();
        Self { k, n: sbs_weights.len(), values }
    }

    pub fn from_values(k: usize, n: usize, values: Vec<f64>) -> Option<Self> {
        (values.len() == k * n).then_some(Self { k, n, values })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, su: usize, sbs: usize) -> f64 {
        self.values[su * self.n + sbs]
    }

    /// `w' x`, summed in column order so every solver gets the same rounding.
    pub fn objective(&self, a: &Association) -> f64 {
        let mut pairs: Vec<(usize, usize)> = a.pairs().collect();
        pairs.sort_unstable();
        pairs.iter().map(|&(k, n)| self.get(k, n)).sum()
    }
}

/// Sliding window of the last `T` associations and the weights derived from it.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightState {
    window: usize,
    mode: WeightMode,
    k: usize,
    n: usize,
    history: VecDeque<Association>,
    counts: Vec<u32>,
}

impl WeightState {
    pub fn new(window: usize, mode: WeightMode, k: usize, n: usize) -> Self {
        assert!(window >= 1, "window must be at least one slot");
        let entities = match mode {
            WeightMode::PerSu => k,
            WeightMode::PerSbs => n,
        };
        Self { window, mode, k, n, history: VecDeque::with_capacity(window), counts: vec![0; entities] }
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn mode(&self) -> WeightMode {
        self.mode
    }

    /// Associations of each entity within the window.
    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn history(&self) -> impl Iterator<Item = &Association> {
        self.history.iter()
    }

    fn entities(&self, a: &Association) -> Vec<usize> {
        match self.mode {
            WeightMode::PerSu => a.pairs().map(|(k, _)| k).collect(),
            WeightMode::PerSbs => a.pairs().map(|(_, n)| n).collect(),
        }
    }

    /// Pushes `a` as the newest slot, evicting the oldest one once the
    /// window is full.
    pub fn push(&mut self, a: Association) {
        assert!(a.k() == self.k && a.n() == self.n, "association shape does not match weight state");
        if self.history.len() == self.window {
            let old = self.history.pop_front().expect("window is non-empty");
            for e in self.entities(&old) {
                self.counts[e] -= 1;
            }
        }
        for e in self.entities(&a) {
            self.counts[e] += 1;
        }
        self.history.push_back(a);
    }

    /// Successor state after observing `a`.
    pub fn update(&self, a: &Association) -> Self {
        let mut next = self.clone();
        next.push(a.clone());
        next
    }

    /// Per-entity weights `1 / (1 + count)`.
    pub fn weights(&self) -> Vec<f64> {
        self.counts.iter().map(|c| 1.0 / (1.0 + f64::from(*c))).collect()
    }

    pub fn weight_vector(&self) -> WeightVector {
        let w = self.weights();
        match self.mode {
            WeightMode::PerSu => WeightVector::per_su(&w, self.n),
            WeightMode::PerSbs => WeightVector::per_sbs(&w, self.k),
        }
    }
}

/// `(sum c)^2 / (m * sum c^2)`. `None` when there are no entities or every
/// count is zero.
pub fn jain_index(counts: &[f64]) -> Option<f64> {
    if counts.is_empty() {
        return None;
    }
    let sum: f64 = counts.iter().sum();
    let sq: f64 = counts.iter().map(|c| c * c).sum();
    if sq == 0.0 {
        return None;
    }
    Some(sum * sum / (counts.len() as f64 * sq))
}
