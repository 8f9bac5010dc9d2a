//! Matrix form `A x <= 1` of the association problem.
//!
//! Columns follow the association vector layout: column `k * N + n` is the
//! binary variable for SU `k` on SBS `n` (0-based). Rows come in four blocks:
//!
//! 1. `N` rows, one per SBS: at most one SU per SBS.
//! 2. `K` rows, one per SU: at most one SBS per SU.
//! 3. `K * N` linearized SINR rows, ordered like the columns.
//! 4. One macro-user row.
//!
//! A SINR row for `(k, n)` is the big-M relaxation of `SINR_kn >= beta * x_kn`
//! divided through by `M - beta - beta * gamma0 * g_k0`, so that the right-hand
//! side of every row is 1.

use std::fmt::Write as _;

use crate::channel::Scenario;
use crate::error::IlpError;
use crate::sinr::Association;
use crate::weights::WeightVector;

/// Slack allowed on each row of `A x <= 1`.
pub const ROW_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct IlpInstance {
    k: usize,
    n: usize,
    /// Row-major `p x q`.
    a: Vec<f64>,
    /// Closed-form maximum of the big-M lower bound.
    pub big_m_star: f64,
    /// Constant actually used in the SINR rows. Equal to `big_m_star` unless
    /// some row denominator would vanish, in which case it is `big_m_star + 1`.
    pub big_m: f64,
}

/// Largest right-hand side of the big-M condition over every `(k, n)` and
/// every binary `x`: `beta + beta*gamma0*g_k0 + (K-1)*beta*gamma*sum_{n'!=n} g_kn'`,
/// maximized over `k` and the excluded SBS `n`.
pub fn compute_big_m(scn: &Scenario) -> f64 {
    let (k, n) = (scn.k(), scn.n());
    let mut best = f64::NEG_INFINITY;
    for su in 0..k {
        let row: Vec<f64> = (0..n).map(|sbs| scn.su_sbs(su, sbs)).collect();
        let total: f64 = row.iter().sum();
        // Excluding the weakest SBS keeps the largest sum.
        let weakest = row.iter().copied().fold(f64::INFINITY, f64::min);
        let retained = if n > 1 { total - weakest } else { 0.0 };
        let value = scn.beta
            + scn.beta * scn.gamma0 * scn.su_mbs(su)
            + (k as f64 - 1.0) * scn.beta * scn.gamma * retained;
        if value > best {
            best = value;
        }
    }
    best
}

impl IlpInstance {
    pub fn build(scn: &Scenario) -> Result<Self, IlpError> {
        let mu_signal = scn.gamma0 * scn.mu_mbs();
        if !(mu_signal > scn.beta0) {
            return Err(IlpError::MuInfeasible { mu_signal, beta0: scn.beta0 });
        }
        let (k, n) = (scn.k(), scn.n());
        let (p, q) = (k + n + k * n + 1, k * n);
        let col = |su: usize, sbs: usize| su * n + sbs;

        let big_m_star = compute_big_m(scn);
        let denom = |m: f64, su: usize| m - scn.beta - scn.beta * scn.gamma0 * scn.su_mbs(su);
        let degenerate = (0..k).any(|su| !(denom(big_m_star, su) > 0.0));
        let big_m = if degenerate { big_m_star + 1.0 } else { big_m_star };

        let mut a = vec![0.0; p * q];
        for sbs in 0..n {
            for su in 0..k {
                a[sbs * q + col(su, sbs)] = 1.0;
            }
        }
        for su in 0..k {
            let row = n + su;
            for sbs in 0..n {
                a[row * q + col(su, sbs)] = 1.0;
            }
        }
        for su in 0..k {
            let d = denom(big_m, su);
            for sbs in 0..n {
                let row = n + k + col(su, sbs);
                let base = row * q;
                a[base + col(su, sbs)] = (big_m - scn.gamma * scn.su_sbs(su, sbs)) / d;
                for other_su in (0..k).filter(|&o| o != su) {
                    for other_sbs in (0..n).filter(|&o| o != sbs) {
                        a[base + col(other_su, other_sbs)] = scn.beta * scn.gamma * scn.su_sbs(su, other_sbs) / d;
                    }
                }
            }
        }
        let mu_row = (p - 1) * q;
        let mu_denom = mu_signal - scn.beta0;
        for su in 0..k {
            for sbs in 0..n {
                a[mu_row + col(su, sbs)] = scn.beta0 * scn.gamma * scn.mu_sbs(sbs) / mu_denom;
            }
        }

        Ok(Self { k, n, a, big_m_star, big_m })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of rows, `K + N + K*N + 1`.
    pub fn p(&self) -> usize {
        self.k + self.n + self.k * self.n + 1
    }

    /// Number of columns, `K*N`.
    pub fn q(&self) -> usize {
        self.k * self.n
    }

    pub fn column(&self, su: usize, sbs: usize) -> usize {
        su * self.n + sbs
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let q = self.q();
        &self.a[i * q..(i + 1) * q]
    }

    pub fn coeff(&self, row: usize, col: usize) -> f64 {
        self.a[row * self.q() + col]
    }

    pub fn sinr_row(&self, su: usize, sbs: usize) -> usize {
        self.n + self.k + self.column(su, sbs)
    }

    pub fn mu_row(&self) -> usize {
        self.p() - 1
    }

    /// `A x` for a binary `x` of length `q`.
    pub fn lhs(&self, x: &[bool]) -> Vec<f64> {
        assert_eq!(x.len(), self.q());
        (0..self.p())
            .map(|i| self.row(i).iter().zip(x).filter(|(_, on)| **on).map(|(c, _)| c).sum())
            .collect()
    }

    /// Whether `A x <= 1` holds row by row within [`ROW_TOLERANCE`].
    pub fn satisfies(&self, x: &[bool]) -> bool {
        self.lhs(x).iter().all(|v| *v <= 1.0 + ROW_TOLERANCE)
    }

    pub fn matrix_feasible(&self, a: &Association) -> bool {
        assert!(a.k() == self.k && a.n() == self.n, "association shape does not match instance");
        self.satisfies(&a.to_x())
    }

    /// CPLEX LP text of the instance. The objective is `1' x` unless
    /// `weights` is given, in which case it is `w' x`.
    pub fn to_lp(&self, weights: Option<&WeightVector>) -> String {
        let var = |c: usize| format!("x_{}_{}", c / self.n + 1, c % self.n + 1);
        let mut out = String::new();
        let _ = writeln!(out, "\\ user-SBS association, K = {}, N = {}, M = {:e}", self.k, self.n, self.big_m);
        out.push_str("Maximize\n obj:");
        let obj: Vec<f64> = match weights {
            Some(w) => {
                assert_eq!(w.len(), self.q(), "weight vector length");
                w.values().to_vec()
            }
            None => vec![1.0; self.q()],
        };
        write_terms(&mut out, obj.iter().copied().enumerate(), &var);
        out.push_str("\nSubject To\n");
        for i in 0..self.p() {
            let name = if i < self.n {
                format!("sbs_{}", i + 1)
            } else if i < self.n + self.k {
                format!("su_{}", i - self.n + 1)
            } else if i < self.p() - 1 {
                let c = i - self.n - self.k;
                format!("sinr_{}_{}", c / self.n + 1, c % self.n + 1)
            } else {
                "mu".to_string()
            };
            let _ = write!(out, " {name}:");
            write_terms(&mut out, self.row(i).iter().copied().enumerate(), &var);
            out.push_str(" <= 1\n");
        }
        out.push_str("Binary\n");
        for c in 0..self.q() {
            let _ = writeln!(out, " {}", var(c));
        }
        out.push_str("End\n");
        out
    }
}

fn write_terms(out: &mut String, terms: impl Iterator<Item = (usize, f64)>, var: &dyn Fn(usize) -> String) {
    let mut written = 0usize;
    for (c, v) in terms.filter(|(_, v)| *v != 0.0) {
        if written > 0 && written % 6 == 0 {
            out.push_str("\n   ");
        }
        let sign = if v < 0.0 { '-' } else { '+' };
        if written == 0 && sign == '+' {
            let _ = write!(out, " {:e} {}", v, var(c));
        } else {
            let _ = write!(out, " {sign} {:e} {}", v.abs(), var(c));
        }
        written += 1;
    }
    if written == 0 {
        let _ = write!(out, " 0 {}", var(0));
    }
}
