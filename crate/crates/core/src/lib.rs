//! User association between small-cell users and small-cell base stations
//! in a two-tier network sharing one band with a macro cell.
//!
//! The crate covers the full pipeline: random network realizations
//! ([`channel`]), SINR feasibility ([`sinr`]), the matrix-form integer
//! program ([`ilp`]), exact solvers ([`exact`]), the relative-channel-gain
//! heuristics ([`greedy`]), comparison rules ([`baselines`]), fairness
//! weights ([`weights`]) and a Monte Carlo driver ([`harness`]).

pub mod baselines;
pub mod channel;
pub mod error;
pub mod exact;
pub mod fixtures;
pub mod greedy;
pub mod harness;
pub mod ilp;
pub mod sinr;
pub mod verify;
pub mod weights;

pub use channel::{db_to_linear, sample_scenario, NetworkConfig, Scenario};
pub use error::{AssociationError, ConfigError, IlpError, SolveError};
pub use exact::{count_combinations, solve_bf, solve_bnb, SolveResult, SolverTag};
pub use harness::{aggregate, estimate_complexity, run_experiment, Algorithm, ExperimentSpec, TrialRecord};
pub use greedy::{solve_umrcg, solve_wmrcg, SelectionOrder};
pub use ilp::IlpInstance;
pub use sinr::{evaluate, is_feasible, Association, SinrReport};
pub use weights::{jain_index, WeightMode, WeightState, WeightVector};
