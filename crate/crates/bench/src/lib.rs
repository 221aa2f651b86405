//! Shared fixtures for the benchmark targets.

use cusum_design::{
    ArlConstraints, ConstraintPolicy, CostModelVariant, CostTimeParams, DesignProblem,
    DesignSpace, ProcessModel,
};

/// The bottling-line problem used by every benchmark.
pub fn bottling_problem(policy: ConstraintPolicy) -> DesignProblem {
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
        CostModelVariant::NoInControlCost,
    )
    .expect("benchmark problem is valid")
}
