//! The bi-objective design problem: minimize cost per cycle and
//! out-of-control ARL over `(n, h, H)`, subject to run-length bounds.

use serde::{Deserialize, Serialize};

use crate::economics::{
    expected_cost_per_cycle, CostModelVariant, CostTimeParams, ProcessModel,
};
use crate::error::{Error, Result};
use crate::moea::MoeaProblem;
use crate::run_length::{arl_profile, ChartDesign};

/// Box constraints of the decision space. `n` is integral; `h` and the
/// decision interval are real.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignSpace {
    pub n_range: (u32, u32),
    pub h_range: (f64, f64),
    #[serde(rename = "H_range")]
    pub decision_range: (f64, f64),
}

impl DesignSpace {
    pub fn validate(&self) -> Result<()> {
        if self.n_range.0 < 1 {
            return Err(Error::InvalidParameter(
                "sample-size range must start at 1 or above".into(),
            ));
        }
        if self.n_range.0 >= self.n_range.1 {
            return Err(Error::InvalidParameter(format!(
                "sample-size range must satisfy lower < upper, got {:?}",
                self.n_range
            )));
        }
        for (name, (lo, hi)) in [("h_range", self.h_range), ("H_range", self.decision_range)] {
            if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo < hi) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must satisfy 0 < lower < upper, got ({lo}, {hi})"
                )));
            }
        }
        Ok(())
    }

    pub fn contains(&self, design: &ChartDesign) -> bool {
        design.sample_size >= self.n_range.0
            && design.sample_size <= self.n_range.1
            && design.sampling_interval >= self.h_range.0
            && design.sampling_interval <= self.h_range.1
            && design.decision_interval >= self.decision_range.0
            && design.decision_interval <= self.decision_range.1
    }

    /// Gene bounds in decode order `(n, h, H)`.
    pub fn gene_bounds(&self) -> Vec<(f64, f64)> {
        vec![
            (f64::from(self.n_range.0), f64::from(self.n_range.1)),
            self.h_range,
            self.decision_range,
        ]
    }
}

/// How the run-length bounds are treated during evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstraintPolicy {
    /// Violations make a design infeasible; selection prefers feasible
    /// designs and orders infeasible ones by total violation.
    Enforce,
    /// Violations are computed and ranked exactly as under `Enforce`;
    /// reported fronts keep the violation amounts for inspection.
    Penalty,
    /// Bounds are ignored; every in-space design is feasible.
    Off,
}

impl ConstraintPolicy {
    pub fn label(self) -> &'static str {
        match self {
            ConstraintPolicy::Enforce => "enforce",
            ConstraintPolicy::Penalty => "penalty",
            ConstraintPolicy::Off => "off",
        }
    }
}

impl std::fmt::Display for ConstraintPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Run-length bounds: `ARL₀ ≥ arl_lower_bound` and
/// `ARL_δ ≤ arl_upper_bound`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArlConstraints {
    pub arl_lower_bound: f64,
    pub arl_upper_bound: f64,
    pub policy: ConstraintPolicy,
}

impl ArlConstraints {
    pub fn validate(&self) -> Result<()> {
        if !(self.arl_upper_bound.is_finite() && self.arl_upper_bound > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "ARL upper bound must be positive, got {}",
                self.arl_upper_bound
            )));
        }
        if !(self.arl_lower_bound.is_finite() && self.arl_lower_bound > self.arl_upper_bound) {
            return Err(Error::InvalidParameter(format!(
                "ARL lower bound ({}) must exceed the upper bound ({})",
                self.arl_lower_bound, self.arl_upper_bound
            )));
        }
        Ok(())
    }
}

/// Result of evaluating one design: the two objectives
/// `(cost per cycle, ARL_δ)`, the total constraint violation, and whether
/// the design is feasible under the active policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub objectives: [f64; 2],
    pub violation: f64,
    pub feasible: bool,
}

impl Evaluation {
    /// Constrained dominance: feasible beats infeasible, infeasible
    /// solutions compare by violation, feasible ones by Pareto dominance
    /// (minimization in both objectives).
    pub fn constrained_dominates(&self, other: &Evaluation) -> bool {
        match (self.feasible, other.feasible) {
            (true, false) => true,
            (false, true) => false,
            (false, false) => self.violation < other.violation,
            (true, true) => {
                let no_worse = self.objectives[0] <= other.objectives[0]
                    && self.objectives[1] <= other.objectives[1];
                let better = self.objectives[0] < other.objectives[0]
                    || self.objectives[1] < other.objectives[1];
                no_worse && better
            }
        }
    }
}

/// The full evaluable problem: process, costs, space, constraints, and the
/// active cost-model variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignProblem {
    pub process: ProcessModel,
    pub costs: CostTimeParams,
    pub space: DesignSpace,
    pub constraints: ArlConstraints,
    pub variant: CostModelVariant,
}

impl DesignProblem {
    pub fn new(
        process: ProcessModel,
        costs: CostTimeParams,
        space: DesignSpace,
        constraints: ArlConstraints,
        variant: CostModelVariant,
    ) -> Result<Self> {
        process.validate()?;
        costs.validate()?;
        space.validate()?;
        constraints.validate()?;
        Ok(Self {
            process,
            costs,
            space,
            constraints,
            variant,
        })
    }

    /// Evaluate one in-space design. Out-of-space designs are rejected;
    /// optimizer paths must clamp through [`DesignProblem::decode`] first.
    pub fn evaluate(&self, design: &ChartDesign) -> Result<Evaluation> {
        if !self.space.contains(design) {
            return Err(Error::OutOfSpace(format!(
                "n={} h={} H={}",
                design.sample_size, design.sampling_interval, design.decision_interval
            )));
        }
        let expected_reference = self.process.delta / 2.0;
        if (design.reference_value - expected_reference).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "design reference value {} does not match delta/2 = {}",
                design.reference_value, expected_reference
            )));
        }
        let profile = arl_profile(self.process.delta, design.decision_interval)?;
        let cost = expected_cost_per_cycle(
            design,
            &self.process,
            &self.costs,
            &profile,
            self.variant,
        )?;
        let violation = match self.constraints.policy {
            ConstraintPolicy::Off => 0.0,
            ConstraintPolicy::Enforce | ConstraintPolicy::Penalty => {
                (self.constraints.arl_lower_bound - profile.arl0).max(0.0)
                    + (profile.arl_delta - self.constraints.arl_upper_bound).max(0.0)
            }
        };
        Ok(Evaluation {
            objectives: [cost, profile.arl_delta],
            violation,
            feasible: violation == 0.0,
        })
    }

    /// Map a raw gene vector `(n, h, H)` into the space: clamp every axis
    /// and round the sample-size gene to the nearest integer.
    pub fn decode(&self, genes: &[f64]) -> ChartDesign {
        assert_eq!(genes.len(), 3, "design genes are (n, h, H)");
        let n = genes[0]
            .clamp(f64::from(self.space.n_range.0), f64::from(self.space.n_range.1))
            .round() as u32;
        let h = genes[1].clamp(self.space.h_range.0, self.space.h_range.1);
        let decision = genes[2].clamp(self.space.decision_range.0, self.space.decision_range.1);
        ChartDesign {
            sample_size: n,
            sampling_interval: h,
            decision_interval: decision,
            reference_value: self.process.delta / 2.0,
        }
    }

    /// Inverse of [`DesignProblem::decode`] on valid designs.
    pub fn encode(&self, design: &ChartDesign) -> [f64; 3] {
        [
            f64::from(design.sample_size),
            design.sampling_interval,
            design.decision_interval,
        ]
    }
}

impl MoeaProblem for DesignProblem {
    fn bounds(&self) -> Vec<(f64, f64)> {
        self.space.gene_bounds()
    }

    fn evaluate(&self, genes: &[f64]) -> Evaluation {
        let design = self.decode(genes);
        // decode clamps into the validated space and arl_profile/cost are
        // total there (the cycle length is bounded below by h·S > 0).
        DesignProblem::evaluate(self, &design)
            .expect("validated problem evaluates every decoded design")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn section5_problem(policy: ConstraintPolicy, variant: CostModelVariant) -> DesignProblem {
        DesignProblem::new(
            ProcessModel {
                delta: 1.0,
                lambda: 0.01,
            },
            CostTimeParams {
                c0: 10.0,
                c1: 100.0,
                w: 50.0,
                y_cost: 25.0,
                d: 0.5,
                y_var: 0.1,
                t: 0.05,
                t0: 2.0,
                t1: 2.0,
                t2: 2.0,
                gamma1: 1,
                gamma2: 1,
            },
            DesignSpace {
                n_range: (2, 20),
                h_range: (0.01, 2.0),
                decision_range: (0.0001, 5.0),
            },
            ArlConstraints {
                arl_lower_bound: 200.0,
                arl_upper_bound: 14.0,
                policy,
            },
            variant,
        )
        .unwrap()
    }

    #[test]
    fn evaluates_feasible_reference_point() {
        for policy in [ConstraintPolicy::Off, ConstraintPolicy::Enforce] {
            let problem = section5_problem(policy, CostModelVariant::Literal);
            let design = ChartDesign::for_shift(2, 0.36, 4.19, 1.0).unwrap();
            let eval = problem.evaluate(&design).unwrap();
            assert!(eval.feasible, "policy {policy:?}");
            assert_eq!(eval.violation, 0.0);
            assert!((eval.objectives[1] - 8.72).abs() <= 0.05);
        }
    }

    #[test]
    fn low_decision_interval_violates_in_control_bound() {
        let problem = section5_problem(ConstraintPolicy::Enforce, CostModelVariant::Literal);
        let design = ChartDesign::for_shift(2, 1.07, 1.22, 1.0).unwrap();
        let eval = problem.evaluate(&design).unwrap();
        assert!(!eval.feasible);
        // ARL_delta = 2.93 is inside its bound; the whole violation comes
        // from ARL0 = 7.48 against the lower bound of 200.
        assert!((eval.violation - 192.5).abs() < 0.1, "got {}", eval.violation);
        assert!((eval.objectives[1] - 2.92).abs() <= 0.05);

        let relaxed = section5_problem(ConstraintPolicy::Off, CostModelVariant::Literal);
        let eval = relaxed.evaluate(&design).unwrap();
        assert!(eval.feasible);
        assert_eq!(eval.violation, 0.0);
    }

    #[test]
    fn boundary_in_control_arl_is_feasible() {
        // Pick constraints so that ARL0 sits exactly on the bound.
        let mut problem = section5_problem(ConstraintPolicy::Enforce, CostModelVariant::Literal);
        let design = ChartDesign::for_shift(2, 0.36, 4.19, 1.0).unwrap();
        let profile = crate::run_length::arl_profile(1.0, 4.19).unwrap();
        problem.constraints.arl_lower_bound = profile.arl0;
        let eval = problem.evaluate(&design).unwrap();
        assert_eq!(eval.violation, 0.0);
        assert!(eval.feasible);
    }

    #[test]
    fn rejects_out_of_space_designs() {
        let problem = section5_problem(ConstraintPolicy::Off, CostModelVariant::Literal);
        let design = ChartDesign::for_shift(1, 0.5, 1.0, 1.0).unwrap();
        assert!(matches!(
            problem.evaluate(&design),
            Err(Error::OutOfSpace(_))
        ));
    }

    #[test]
    fn decode_rounds_and_clamps() {
        let problem = section5_problem(ConstraintPolicy::Off, CostModelVariant::Literal);
        let design = problem.decode(&[2.4, 0.36, 4.19]);
        assert_eq!(design.sample_size, 2);
        assert_eq!(design.sampling_interval, 0.36);
        assert_eq!(design.decision_interval, 4.19);

        let clamped = problem.decode(&[25.0, 3.0, -1.0]);
        assert_eq!(clamped.sample_size, 20);
        assert_eq!(clamped.sampling_interval, 2.0);
        assert_eq!(clamped.decision_interval, 0.0001);
    }

    #[test]
    fn evaluation_is_deterministic() {
        let problem = section5_problem(ConstraintPolicy::Enforce, CostModelVariant::Literal);
        let design = ChartDesign::for_shift(7, 1.234, 3.456, 1.0).unwrap();
        let a = problem.evaluate(&design).unwrap();
        let b = problem.evaluate(&design).unwrap();
        assert_eq!(a.objectives[0].to_bits(), b.objectives[0].to_bits());
        assert_eq!(a.objectives[1].to_bits(), b.objectives[1].to_bits());
    }

    #[test]
    fn objectives_conflict_along_decision_interval() {
        // At fixed (n, h) no single H minimizes both objectives: ARL_delta
        // always prefers the smallest H while the cost minimum is interior.
        let problem = section5_problem(ConstraintPolicy::Off, CostModelVariant::NoInControlCost);
        let mut best_cost = f64::INFINITY;
        let mut best_cost_at = 0;
        let mut best_arl = f64::INFINITY;
        let mut best_arl_at = 0;
        for i in 0..=100 {
            let h_decision = 0.0001 + (5.0 - 0.0001) * (i as f64) / 100.0;
            let design = ChartDesign::for_shift(2, 0.36, h_decision, 1.0).unwrap();
            let eval = problem.evaluate(&design).unwrap();
            if eval.objectives[0] < best_cost {
                best_cost = eval.objectives[0];
                best_cost_at = i;
            }
            if eval.objectives[1] < best_arl {
                best_arl = eval.objectives[1];
                best_arl_at = i;
            }
        }
        assert_ne!(best_cost_at, best_arl_at);
        assert_eq!(best_arl_at, 0);
        assert!(best_cost_at > 0);
    }

    #[test]
    fn constrained_dominance_rules() {
        let feasible = |c: f64, a: f64| Evaluation {
            objectives: [c, a],
            violation: 0.0,
            feasible: true,
        };
        let infeasible = |v: f64| Evaluation {
            objectives: [1.0, 1.0],
            violation: v,
            feasible: false,
        };
        assert!(feasible(5.0, 5.0).constrained_dominates(&infeasible(0.1)));
        assert!(!infeasible(0.1).constrained_dominates(&feasible(5.0, 5.0)));
        assert!(infeasible(0.1).constrained_dominates(&infeasible(0.2)));
        assert!(feasible(1.0, 1.0).constrained_dominates(&feasible(2.0, 2.0)));
        assert!(feasible(1.0, 1.0).constrained_dominates(&feasible(1.0, 2.0)));
        assert!(!feasible(1.0, 5.0).constrained_dominates(&feasible(2.0, 3.0)));
        assert!(!feasible(1.0, 1.0).constrained_dominates(&feasible(1.0, 1.0)));
    }

    proptest! {
        #[test]
        fn encode_decode_round_trip(
            n in 2u32..=20,
            h in 0.01f64..=2.0,
            decision in 0.0001f64..=5.0,
        ) {
            let problem = section5_problem(ConstraintPolicy::Off, CostModelVariant::Literal);
            let design = ChartDesign::for_shift(n, h, decision, 1.0).unwrap();
            prop_assume!(problem.space.contains(&design));
            let round_tripped = problem.decode(&problem.encode(&design));
            prop_assert_eq!(design, round_tripped);
        }
    }
}
