//! Expected cost per monitoring cycle and its auxiliary timing quantities.
//!
//! A cycle runs from the start of in-control production through detection
//! and elimination of the assignable cause. With the cause arriving after an
//! exponential time with rate `λ` and samples every `h` hours, the two
//! closed-form ingredients are
//!
//! ```text
//! τ = 1/λ - h / (e^(λh) - 1)    expected time from the last sample to the cause
//! S = 1 / (e^(λh) - 1)          expected number of in-control samples
//! ```
//!
//! The cycle cost ratio combines quality costs (`c0` in control, `c1` out of
//! control), false-alarm investigations (`w` each, `S/ARL₀` expected per
//! cycle), repair (`y_cost`), and sampling (`d + n·y_var` per sample), over
//! the expected cycle length. The `γ` flags select whether production
//! continues during the search for and elimination of the cause.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::run_length::{ChartDesign, RunLengthProfile};

/// Process behaviour: shift magnitude `δ` (σ units) and assignable-cause
/// rate `λ` (per hour, exponential inter-occurrence).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessModel {
    pub delta: f64,
    pub lambda: f64,
}

impl ProcessModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "shift magnitude delta must be positive, got {}",
                self.delta
            )));
        }
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "assignable-cause rate lambda must be positive, got {}",
                self.lambda
            )));
        }
        Ok(())
    }
}

/// Cost and time constants of the cycle model.
///
/// The `gamma` flags are kept as integers in `{0, 1}` so the `(1 - γ)`
/// factors in the model stay literal arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostTimeParams {
    /// Quality cost per hour while in control ($/h).
    pub c0: f64,
    /// Quality cost per hour while out of control ($/h).
    pub c1: f64,
    /// Cost of investigating a false alarm ($).
    pub w: f64,
    /// Cost of identifying and eliminating an assignable cause ($).
    pub y_cost: f64,
    /// Fixed cost per sample ($).
    pub d: f64,
    /// Variable sampling cost per inspection unit ($).
    pub y_var: f64,
    /// Time to take a sample and obtain the result (hours).
    pub t: f64,
    /// Average time associated with a false alarm (hours).
    pub t0: f64,
    /// Average time to discover an assignable cause (hours).
    pub t1: f64,
    /// Average time to eliminate an assignable cause (hours).
    pub t2: f64,
    /// 1 if production continues during the search for a cause, else 0.
    pub gamma1: u8,
    /// 1 if production continues during elimination, else 0.
    pub gamma2: u8,
}

impl CostTimeParams {
    pub fn validate(&self) -> Result<()> {
        let named = [
            ("c0", self.c0),
            ("c1", self.c1),
            ("w", self.w),
            ("y_cost", self.y_cost),
            ("d", self.d),
            ("y_var", self.y_var),
            ("t", self.t),
            ("t0", self.t0),
            ("t1", self.t1),
            ("t2", self.t2),
        ];
        for (name, value) in named {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be non-negative, got {value}"
                )));
            }
        }
        if self.c1 <= self.c0 {
            return Err(Error::InvalidParameter(format!(
                "out-of-control quality cost c1 ({}) must exceed c0 ({})",
                self.c1, self.c0
            )));
        }
        for (name, flag) in [("gamma1", self.gamma1), ("gamma2", self.gamma2)] {
            if flag > 1 {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be 0 or 1, got {flag}"
                )));
            }
        }
        Ok(())
    }
}

/// Which form of the cost model to evaluate.
///
/// `Literal` includes the in-control quality term `c0/λ` in the cost
/// numerator; `NoInControlCost` omits it and charges only costs that the
/// design decisions can influence. The active variant is recorded in every
/// output that carries a cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CostModelVariant {
    Literal,
    NoInControlCost,
}

impl CostModelVariant {
    pub fn include_in_control_cost(self) -> bool {
        matches!(self, CostModelVariant::Literal)
    }

    pub fn label(self) -> &'static str {
        match self {
            CostModelVariant::Literal => "literal",
            CostModelVariant::NoInControlCost => "no-in-control-cost",
        }
    }
}

impl std::fmt::Display for CostModelVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Expected time from the last in-control sample to the assignable cause.
/// Lies in `(0, h)`; tends to `h/2` as `λ → 0`.
pub fn expected_time_to_cause(lambda: f64, h: f64) -> Result<f64> {
    validate_rate_and_interval(lambda, h)?;
    let product = lambda * h;
    if product < 1e-10 {
        // 1/λ and h/(e^(λh)-1) agree to ~10 digits here; the series limit
        // avoids the cancellation.
        return Ok(h / 2.0);
    }
    Ok(1.0 / lambda - h / product.exp_m1())
}

/// Expected number of samples taken while the process is still in control.
pub fn expected_in_control_samples(lambda: f64, h: f64) -> Result<f64> {
    validate_rate_and_interval(lambda, h)?;
    Ok(1.0 / (lambda * h).exp_m1())
}

fn validate_rate_and_interval(lambda: f64, h: f64) -> Result<()> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "rate lambda must be positive, got {lambda}"
        )));
    }
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "sampling interval must be positive, got {h}"
        )));
    }
    Ok(())
}

/// Itemized terms of one cost-per-cycle evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostBreakdown {
    /// τ, expected time from the last sample to the cause (hours).
    pub time_to_cause: f64,
    /// S, expected in-control sample count.
    pub in_control_samples: f64,
    /// `c0/λ` when the variant includes it, else 0.
    pub in_control_quality: f64,
    /// `c1 · (-τ + n·t + h·ARL_δ + γ₁t1 + γ₂t2)`.
    pub out_of_control_quality: f64,
    /// `S·w / ARL₀`.
    pub false_alarm: f64,
    /// `y_cost`.
    pub repair: f64,
    /// `(d + n·y_var)/h · (1/λ - τ + n·t + h·ARL_δ + γ₁t1 + γ₂t2)`.
    pub sampling: f64,
    /// Expected cycle length (hours).
    pub cycle_length: f64,
    /// The cost ratio, i.e. the value of the model.
    pub total: f64,
}

/// Expected cost per cycle for a design, given its run-length profile.
pub fn expected_cost_per_cycle(
    design: &ChartDesign,
    process: &ProcessModel,
    params: &CostTimeParams,
    profile: &RunLengthProfile,
    variant: CostModelVariant,
) -> Result<f64> {
    cost_breakdown(design, process, params, profile, variant).map(|b| b.total)
}

/// Full term-by-term evaluation of the cost model.
pub fn cost_breakdown(
    design: &ChartDesign,
    process: &ProcessModel,
    params: &CostTimeParams,
    profile: &RunLengthProfile,
    variant: CostModelVariant,
) -> Result<CostBreakdown> {
    process.validate()?;
    params.validate()?;
    for (name, arl) in [("ARL0", profile.arl0), ("ARL_delta", profile.arl_delta)] {
        if !(arl.is_finite() && arl > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "{name} must be positive and finite, got {arl}"
            )));
        }
    }

    let n = f64::from(design.sample_size);
    let h = design.sampling_interval;
    let lambda = process.lambda;
    let gamma1 = f64::from(params.gamma1);
    let gamma2 = f64::from(params.gamma2);

    let time_to_cause = expected_time_to_cause(lambda, h)?;
    let in_control_samples = expected_in_control_samples(lambda, h)?;

    // Shared sub-expression: time from the cause to the end of repair,
    // counting only periods in which production continues.
    let operating_tail = -time_to_cause
        + n * params.t
        + h * profile.arl_delta
        + gamma1 * params.t1
        + gamma2 * params.t2;

    let cycle_length = 1.0 / lambda + (1.0 - gamma1) * in_control_samples * params.t0 / profile.arl0
        - time_to_cause
        + n * params.t
        + h * profile.arl_delta
        + params.t1
        + params.t2;
    if cycle_length <= 0.0 {
        return Err(Error::PathologicalDenominator(cycle_length));
    }

    let out_of_control_quality = params.c1 * operating_tail;
    let false_alarm = in_control_samples * params.w / profile.arl0;
    let repair = params.y_cost;
    let sampling = (params.d + n * params.y_var) / h * (1.0 / lambda + operating_tail);

    // The in-control term is added as its own fraction so the two variants
    // differ by exactly (c0/λ)/cycle_length.
    let in_control_quality = if variant.include_in_control_cost() {
        params.c0 / lambda
    } else {
        0.0
    };
    let total = (out_of_control_quality + false_alarm + repair) / cycle_length
        + sampling / cycle_length
        + in_control_quality / cycle_length;

    Ok(CostBreakdown {
        time_to_cause,
        in_control_samples,
        in_control_quality,
        out_of_control_quality,
        false_alarm,
        repair,
        sampling,
        cycle_length,
        total,
    })
}
