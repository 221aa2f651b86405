//! Independent verification machinery: Monte-Carlo run-length simulation
//! from the raw CUSUM recursion, an exhaustive grid-search reference front,
//! and a renewal-cycle cost simulation.
//!
//! Everything here is deliberately separate from the closed-form paths it
//! audits. Gaussian variates come from the rand_distr ziggurat sampler over
//! a ChaCha8 generator; replication `r` of a plan draws from stream `r` of
//! the plan seed, so results do not depend on execution order and common
//! random numbers across plans only need a shared seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Exp, Geometric, StandardNormal};

use crate::economics::{cost_breakdown, CostModelVariant, CostTimeParams, ProcessModel};
use crate::error::{Error, Result};
use crate::moea::{FrontPoint, ParetoFront};
use crate::problem::DesignProblem;
use crate::run_length::{arl_profile, ChartDesign};

/// Hard per-replication step cap; hitting it is an error, not a truncation.
pub const STEP_CAP: u64 = 10_000_000;

/// Description of one run-length simulation: the chart `(K, H)` in
/// standardized units, the shift applied to the observation stream (0 for
/// in-control), and the replication budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationPlan {
    pub replications: u64,
    pub rng_seed: u64,
    pub shift: f64,
    pub reference_value: f64,
    pub decision_interval: f64,
}

impl SimulationPlan {
    pub fn validate(&self) -> Result<()> {
        if self.replications < 1 {
            return Err(Error::InvalidParameter(
                "at least one replication is required".into(),
            ));
        }
        if !(self.shift.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "shift must be finite, got {}",
                self.shift
            )));
        }
        if !(self.reference_value.is_finite() && self.reference_value >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "reference value must be non-negative, got {}",
                self.reference_value
            )));
        }
        if !(self.decision_interval.is_finite() && self.decision_interval > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "decision interval must be positive, got {}",
                self.decision_interval
            )));
        }
        Ok(())
    }
}

/// Simulated ARL with a 95% normal-approximation confidence half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunLengthEstimate {
    pub mean: f64,
    pub half_width: f64,
    pub replications: u64,
}

/// Simulate the two-sided CUSUM recursion until either side exceeds the
/// decision interval and average the stopping times.
pub fn simulate_run_length(plan: &SimulationPlan) -> Result<RunLengthEstimate> {
    plan.validate()?;
    let mut sum = 0.0;
    let mut sum_squares = 0.0;
    for replication in 0..plan.replications {
        let steps = simulate_one_run(plan, replication)? as f64;
        sum += steps;
        sum_squares += steps * steps;
    }
    let n = plan.replications as f64;
    let mean = sum / n;
    let variance = if plan.replications > 1 {
        ((sum_squares - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(RunLengthEstimate {
        mean,
        half_width: 1.96 * (variance / n).sqrt(),
        replications: plan.replications,
    })
}

fn simulate_one_run(plan: &SimulationPlan, replication: u64) -> Result<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(plan.rng_seed);
    rng.set_stream(replication);
    let mut upper = 0.0f64;
    let mut lower = 0.0f64;
    for step in 1..=STEP_CAP {
        let noise: f64 = StandardNormal.sample(&mut rng);
        let x = plan.shift + noise;
        upper = (upper + x - plan.reference_value).max(0.0);
        lower = (lower - x - plan.reference_value).max(0.0);
        if upper > plan.decision_interval || lower > plan.decision_interval {
            return Ok(step);
        }
    }
    Err(Error::StepCapExceeded(STEP_CAP))
}

/// Exhaustively evaluate the design lattice (every integer sample size in
/// range crossed with uniform `h` and `H` grids) and return the exact
/// non-dominated subset under the problem's constraint policy.
pub fn grid_reference_front(
    problem: &DesignProblem,
    h_steps: usize,
    decision_steps: usize,
) -> Result<ParetoFront> {
    if h_steps < 2 || decision_steps < 2 {
        return Err(Error::InvalidParameter(
            "grid needs at least 2 steps per real axis".into(),
        ));
    }
    let n_count = (problem.space.n_range.1 - problem.space.n_range.0 + 1) as usize;
    let total = n_count
        .saturating_mul(h_steps)
        .saturating_mul(decision_steps);
    if total > 10_000_000 {
        return Err(Error::InvalidParameter(format!(
            "grid of {total} points exceeds the 1e7 budget"
        )));
    }

    let (h_lo, h_hi) = problem.space.h_range;
    let (d_lo, d_hi) = problem.space.decision_range;
    let mut candidates = Vec::with_capacity(total);
    for n in problem.space.n_range.0..=problem.space.n_range.1 {
        for i in 0..h_steps {
            let h = h_lo + (h_hi - h_lo) * i as f64 / (h_steps - 1) as f64;
            for j in 0..decision_steps {
                let decision = d_lo + (d_hi - d_lo) * j as f64 / (decision_steps - 1) as f64;
                let design = ChartDesign {
                    sample_size: n,
                    sampling_interval: h,
                    decision_interval: decision,
                    reference_value: problem.process.delta / 2.0,
                };
                let evaluation = problem.evaluate(&design)?;
                candidates.push(FrontPoint {
                    genes: vec![f64::from(n), h, decision],
                    objectives: evaluation.objectives,
                    violation: evaluation.violation,
                    feasible: evaluation.feasible,
                });
            }
        }
    }

    let front = extract_front(candidates);
    // Self-check: no surviving row may dominate another.
    for (i, p) in front.points.iter().enumerate() {
        for (j, q) in front.points.iter().enumerate() {
            if i != j {
                let dominates = p.objectives[0] <= q.objectives[0]
                    && p.objectives[1] <= q.objectives[1]
                    && (p.objectives[0] < q.objectives[0] || p.objectives[1] < q.objectives[1]);
                assert!(!dominates, "grid front is not internally non-dominated");
            }
        }
    }
    Ok(front)
}

/// Keep the non-dominated subset: feasible candidates win outright; with no
/// feasible candidate the least-violating ones survive. The feasible sweep
/// runs over candidates sorted by cost, keeping strict ARL improvements.
fn extract_front(mut candidates: Vec<FrontPoint>) -> ParetoFront {
    if candidates.iter().any(|p| p.feasible) {
        candidates.retain(|p| p.feasible);
        candidates.sort_by(|a, b| {
            a.objectives[0]
                .total_cmp(&b.objectives[0])
                .then(a.objectives[1].total_cmp(&b.objectives[1]))
        });
        let mut front: Vec<FrontPoint> = Vec::new();
        let mut best_arl = f64::INFINITY;
        for candidate in candidates {
            if candidate.objectives[1] < best_arl {
                best_arl = candidate.objectives[1];
                front.push(candidate);
            }
        }
        ParetoFront { points: front }
    } else {
        let least = candidates
            .iter()
            .map(|p| p.violation)
            .fold(f64::INFINITY, f64::min);
        candidates.retain(|p| p.violation == least);
        ParetoFront::from_candidates(candidates)
    }
}

/// Simulated cost-per-cycle ratio with a delta-method 95% half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleCostEstimate {
    pub mean: f64,
    pub half_width: f64,
    pub replications: u64,
}

/// Renewal simulation of monitoring cycles for auditing the cost model.
///
/// Each cycle draws the failure time exponentially, counts in-control
/// samples and binomial false alarms at the per-sample rate `1/ARL₀`,
/// draws a geometric detection delay with mean `ARL_δ`, then accounts for
/// repair. The estimate is total cost over total cycle length, matching the
/// ratio form of the closed-form model (in its literal variant).
pub fn simulate_cycle_cost(
    design: &ChartDesign,
    process: &ProcessModel,
    params: &CostTimeParams,
    replications: u64,
    rng_seed: u64,
) -> Result<CycleCostEstimate> {
    if replications < 1 {
        return Err(Error::InvalidParameter(
            "at least one replication is required".into(),
        ));
    }
    process.validate()?;
    params.validate()?;
    let profile = arl_profile(process.delta, design.decision_interval)?;
    if profile.arl_delta < 1.0 || profile.arl0 <= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "renewal audit needs per-sample signal probabilities below 1 \
             (ARL0 = {}, ARL_delta = {})",
            profile.arl0, profile.arl_delta
        )));
    }

    let n = f64::from(design.sample_size);
    let h = design.sampling_interval;
    let gamma1 = f64::from(params.gamma1);
    let gamma2 = f64::from(params.gamma2);
    let failure_time = Exp::new(process.lambda)
        .map_err(|e| Error::InvalidParameter(format!("failure-time distribution: {e}")))?;
    let false_alarm_rate = 1.0 / profile.arl0;
    let detection = Geometric::new(1.0 / profile.arl_delta)
        .map_err(|e| Error::InvalidParameter(format!("detection-delay distribution: {e}")))?;

    let mut sum_cost = 0.0;
    let mut sum_length = 0.0;
    let mut sum_cost_sq = 0.0;
    let mut sum_length_sq = 0.0;
    let mut sum_cross = 0.0;
    for replication in 0..replications {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        rng.set_stream(replication);

        let time_to_failure = failure_time.sample(&mut rng);
        let in_control_samples = (time_to_failure / h).floor();
        let false_alarms = Binomial::new(in_control_samples as u64, false_alarm_rate)
            .expect("false-alarm probability is in (0, 1)")
            .sample(&mut rng) as f64;
        // Geometric(p) counts failures before the first success; the
        // detecting sample is one past that, giving mean ARL_delta.
        let detection_samples = 1.0 + detection.sample(&mut rng) as f64;
        let residual = time_to_failure - in_control_samples * h;
        let detection_span = h * detection_samples - residual;

        let length = time_to_failure
            + detection_span
            + n * params.t
            + params.t1
            + params.t2
            + (1.0 - gamma1) * false_alarms * params.t0;
        let cost = params.c0 * time_to_failure
            + params.c1
                * (detection_span + n * params.t + gamma1 * params.t1 + gamma2 * params.t2)
            + false_alarms * params.w
            + params.y_cost
            + (params.d + n * params.y_var)
                * (in_control_samples
                    + detection_samples
                    + (n * params.t + gamma1 * params.t1 + gamma2 * params.t2) / h);

        sum_cost += cost;
        sum_length += length;
        sum_cost_sq += cost * cost;
        sum_length_sq += length * length;
        sum_cross += cost * length;
    }

    let reps = replications as f64;
    let mean_cost = sum_cost / reps;
    let mean_length = sum_length / reps;
    let ratio = mean_cost / mean_length;
    let half_width = if replications > 1 {
        let var_cost = ((sum_cost_sq - reps * mean_cost * mean_cost) / (reps - 1.0)).max(0.0);
        let var_length =
            ((sum_length_sq - reps * mean_length * mean_length) / (reps - 1.0)).max(0.0);
        let cov = (sum_cross - reps * mean_cost * mean_length) / (reps - 1.0);
        let ratio_variance = (var_cost - 2.0 * ratio * cov + ratio * ratio * var_length)
            .max(0.0)
            / (reps * mean_length * mean_length);
        1.96 * ratio_variance.sqrt()
    } else {
        0.0
    };
    Ok(CycleCostEstimate {
        mean: ratio,
        half_width,
        replications,
    })
}

/// Closed-form cost the renewal simulation audits (always the literal form).
pub fn literal_cycle_cost(
    design: &ChartDesign,
    process: &ProcessModel,
    params: &CostTimeParams,
) -> Result<f64> {
    let profile = arl_profile(process.delta, design.decision_interval)?;
    cost_breakdown(design, process, params, &profile, CostModelVariant::Literal)
        .map(|b| b.total)
}
