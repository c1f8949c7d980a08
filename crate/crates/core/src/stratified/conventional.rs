//! Inverse-variance (Woolf) pooling of stratum-specific contrasts.

use serde::Serialize;

use super::contrast::{check_alpha, ContrastResult, ContrastScale, Method};
use crate::error::{Error, Result};
use crate::survival::AhEstimate;

/// Control and treatment AH of one stratum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StratumPair {
    pub control: AhEstimate,
    pub treatment: AhEstimate,
}

/// Stratum contrast on its inference scale and its variance:
/// `log(eta1/eta0)` with `var_log1 + var_log0`, or `eta1 - eta0` with
/// `var_natural1 + var_natural0`.
pub fn stratum_effect(
    control: &AhEstimate,
    treatment: &AhEstimate,
    scale: ContrastScale,
) -> (f64, f64) {
    match scale {
        ContrastScale::Difference => (
            treatment.eta_hat - control.eta_hat,
            treatment.var_natural + control.var_natural,
        ),
        ContrastScale::Ratio => (
            (treatment.eta_hat / control.eta_hat).ln(),
            treatment.var_log + control.var_log,
        ),
    }
}

/// Pool `theta_hats` (on the inference scale) with weights `1 / variance`.
/// For `Ratio`, inputs are log ratios and the result is reported exponentiated.
pub fn inverse_variance_combine(
    theta_hats: &[f64],
    variances: &[f64],
    scale: ContrastScale,
    alpha: f64,
) -> Result<ContrastResult> {
    check_alpha(alpha)?;
    if theta_hats.is_empty() || theta_hats.len() != variances.len() {
        return Err(Error::InvalidInput(format!(
            "need one variance per estimate ({} vs {})",
            theta_hats.len(),
            variances.len()
        )));
    }
    if let Some(v) = variances.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::InvalidInput(format!(
            "stratum variance must be positive, got {v}"
        )));
    }
    let (pooled, var) = if let ([theta], [var]) = (theta_hats, variances) {
        (*theta, *var)
    } else {
        let precision: f64 = variances.iter().map(|v| 1.0 / v).sum();
        let pooled = theta_hats
            .iter()
            .zip(variances)
            .map(|(t, v)| t / v)
            .sum::<f64>()
            / precision;
        (pooled, 1.0 / precision)
    };
    Ok(ContrastResult::from_inference_scale(
        Method::Conventional,
        scale,
        pooled,
        var.sqrt(),
        alpha,
    ))
}

/// Conventional stratified contrast from per-stratum AH estimates.
pub fn conventional_contrast(
    pairs: &[StratumPair],
    scale: ContrastScale,
    alpha: f64,
) -> Result<ContrastResult> {
    let (thetas, vars): (Vec<f64>, Vec<f64>) = pairs
        .iter()
        .map(|p| stratum_effect(&p.control, &p.treatment, scale))
        .unzip();
    inverse_variance_combine(&thetas, &vars, scale, alpha)
}
