//! Closed-form average run lengths for two-sided CUSUM charts.
//!
//! A one-sided CUSUM with reference value `K` and decision interval `H`
//! signals when its statistic exceeds `H`. Its ARL under a drift `Δ` of the
//! standardized observation stream is approximated by
//!
//! ```text
//! ARL(Δ, b) = (e^(-2Δb) + 2Δb - 1) / (2Δ²),    b = H + 1.166
//! ```
//!
//! with the limit `b²` at `Δ = 0`. The drift seen by the upper chart under a
//! mean shift `δ` is `δ - K`, and `-δ - K` for the lower chart; the two-sided
//! ARL combines the one-sided pair harmonically. All inputs are in
//! standardized (σ = 1) units; callers convert units beforehand.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Additive correction applied to the decision interval, `b = H + 1.166`.
pub const SIEGMUND_OFFSET: f64 = 1.166;

/// Ceiling on returned ARLs. The exponential term overflows for large
/// drift-interval products (the dominated side of a two-sided chart under a
/// big shift); a capped value keeps the harmonic combination finite while
/// changing it by less than one part in 1e10.
pub const ARL_CEILING: f64 = 1e12;

/// Drifts with `|Δ|` at or below this threshold take the `b²` branch.
const DRIFT_EPSILON: f64 = 1e-8;

/// Chart design parameters: sample size `n`, sampling interval `h` (hours),
/// decision interval `H` and reference value `K` (both in σ units).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartDesign {
    pub sample_size: u32,
    pub sampling_interval: f64,
    pub decision_interval: f64,
    pub reference_value: f64,
}

impl ChartDesign {
    /// Build a design tuned for a shift of magnitude `delta`, which fixes
    /// the reference value at `delta / 2`.
    pub fn for_shift(
        sample_size: u32,
        sampling_interval: f64,
        decision_interval: f64,
        delta: f64,
    ) -> Result<Self> {
        if sample_size < 1 {
            return Err(Error::InvalidParameter(
                "sample size must be at least 1".into(),
            ));
        }
        if !(sampling_interval.is_finite() && sampling_interval > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sampling interval must be positive, got {sampling_interval}"
            )));
        }
        if !(decision_interval.is_finite() && decision_interval > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "decision interval must be positive, got {decision_interval}"
            )));
        }
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "shift magnitude must be positive, got {delta}"
            )));
        }
        Ok(Self {
            sample_size,
            sampling_interval,
            decision_interval,
            reference_value: delta / 2.0,
        })
    }
}

/// In-control and out-of-control two-sided ARLs of a design, in samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunLengthProfile {
    pub arl0: f64,
    pub arl_delta: f64,
}

/// One-sided CUSUM ARL for a signed drift and adjusted decision interval
/// `b = H + 1.166`. Takes the `b²` branch when the drift is (numerically)
/// zero; capped at [`ARL_CEILING`].
pub fn one_sided_arl(drift: f64, adjusted_interval: f64) -> Result<f64> {
    if !drift.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "drift must be finite, got {drift}"
        )));
    }
    if !(adjusted_interval.is_finite() && adjusted_interval > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "adjusted decision interval must be positive, got {adjusted_interval}"
        )));
    }
    if drift.abs() <= DRIFT_EPSILON {
        return Ok(adjusted_interval * adjusted_interval);
    }
    // expm1 keeps the e^(-2Δb) - 1 cancellation accurate near Δ = 0.
    let two_drift_b = 2.0 * drift * adjusted_interval;
    let raw = ((-two_drift_b).exp_m1() + two_drift_b) / (2.0 * drift * drift);
    Ok(raw.min(ARL_CEILING))
}

/// One-sided in-control ARL for reference value `K > 0`; identical to
/// [`one_sided_arl`] at drift `-K`.
pub fn in_control_one_sided(reference_value: f64, adjusted_interval: f64) -> Result<f64> {
    if !(reference_value.is_finite() && reference_value > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "reference value must be positive, got {reference_value}; \
             use the zero-drift branch of one_sided_arl for K = 0"
        )));
    }
    one_sided_arl(-reference_value, adjusted_interval)
}

/// One-sided out-of-control ARLs `(lower, upper)` under an upward shift
/// `δ > 0`: the lower chart drifts by `-δ - K`, the upper by `δ - K`.
/// `δ = K` routes the upper side through the zero-drift branch.
pub fn out_of_control_one_sided(
    shift: f64,
    reference_value: f64,
    adjusted_interval: f64,
) -> Result<(f64, f64)> {
    if !(shift.is_finite() && shift > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "shift must be positive, got {shift}"
        )));
    }
    if !(reference_value.is_finite() && reference_value > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "reference value must be positive, got {reference_value}"
        )));
    }
    let lower = one_sided_arl(-shift - reference_value, adjusted_interval)?;
    let upper = one_sided_arl(shift - reference_value, adjusted_interval)?;
    Ok((lower, upper))
}

/// Two-sided ARL from the one-sided pair: `1/ARL = 1/ARL⁻ + 1/ARL⁺`.
pub fn combine_two_sided(arl_minus: f64, arl_plus: f64) -> Result<f64> {
    for (name, value) in [("ARL-", arl_minus), ("ARL+", arl_plus)] {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "{name} must be positive and finite, got {value}"
            )));
        }
    }
    Ok(1.0 / (1.0 / arl_minus + 1.0 / arl_plus))
}

/// Two-sided in-control and out-of-control ARLs for a chart tuned to a
/// shift `δ` (`K = δ/2`) with decision interval `H`.
///
/// The profile does not depend on the sample size: the run-length formulas
/// operate on the standardized observation stream as-is.
pub fn arl_profile(shift: f64, decision_interval: f64) -> Result<RunLengthProfile> {
    if !(shift.is_finite() && shift > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "shift must be positive, got {shift}"
        )));
    }
    if !(decision_interval.is_finite() && decision_interval > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "decision interval must be positive, got {decision_interval}"
        )));
    }
    let reference_value = shift / 2.0;
    let b = decision_interval + SIEGMUND_OFFSET;
    let one_sided_in_control = in_control_one_sided(reference_value, b)?;
    let arl0 = combine_two_sided(one_sided_in_control, one_sided_in_control)?;
    let (lower, upper) = out_of_control_one_sided(shift, reference_value, b)?;
    let arl_delta = combine_two_sided(lower, upper)?;
    Ok(RunLengthProfile { arl0, arl_delta })
}
