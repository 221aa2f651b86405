//! Economic-statistical design of two-sided CUSUM control charts.
//!
//! The crate evaluates chart designs `(n, h, H)` against two objectives —
//! expected cost per monitoring cycle and out-of-control average run
//! length — and searches the design space with an elitist non-dominated
//! sorting genetic algorithm. Closed-form run lengths use Siegmund's
//! approximation; Monte-Carlo and exhaustive grid oracles provide
//! independent verification of both the formulas and the optimizer.
//!
//! Modules:
//! - [`run_length`]: one- and two-sided ARL formulas.
//! - [`economics`]: cycle cost model and its timing quantities.
//! - [`problem`]: the evaluable bi-objective design problem.
//! - [`moea`]: the NSGA-II optimizer.
//! - [`oracles`]: simulation and grid-search verification.

pub mod economics;
pub mod error;
pub mod moea;
pub mod oracles;
pub mod problem;
pub mod run_length;

pub use economics::{CostModelVariant, CostTimeParams, ProcessModel};
pub use error::{Error, Result};
pub use moea::{FrontPoint, MoeaConfig, MoeaProblem, ParetoFront};
pub use problem::{ArlConstraints, ConstraintPolicy, DesignProblem, DesignSpace, Evaluation};
pub use run_length::{ChartDesign, RunLengthProfile};
