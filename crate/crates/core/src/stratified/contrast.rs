use serde::{Deserialize, Serialize};

use super::standardized::StandardizedAhEstimate;
use crate::error::{Error, Result};
use crate::normal::{two_sided_critical, two_sided_p};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Proposed,
    Conventional,
    Cmh1,
    Cmh2,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Proposed,
        Method::Conventional,
        Method::Cmh1,
        Method::Cmh2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Proposed => "proposed",
            Method::Conventional => "conventional",
            Method::Cmh1 => "cmh1",
            Method::Cmh2 => "cmh2",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidInput(format!("unknown method {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContrastScale {
    /// `eta_1 - eta_0`, inference on the natural scale.
    Difference,
    /// `eta_1 / eta_0`, inference on the log scale.
    Ratio,
}

/// Group-level AH with natural-scale and log-scale intervals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSummary {
    pub estimate: f64,
    pub se: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub se_log: Option<f64>,
    pub log_ci_low: Option<f64>,
    pub log_ci_high: Option<f64>,
}

impl GroupSummary {
    pub fn new(estimate: f64, var: f64, var_log: Option<f64>, alpha: f64) -> Self {
        let z = two_sided_critical(alpha);
        let se = var.sqrt();
        let se_log = var_log.map(f64::sqrt);
        Self {
            estimate,
            se,
            ci_low: estimate - z * se,
            ci_high: estimate + z * se,
            se_log,
            log_ci_low: se_log.map(|s| estimate * (-z * s).exp()),
            log_ci_high: se_log.map(|s| estimate * (z * s).exp()),
        }
    }
}

/// A between-group contrast with interval and two-sided test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContrastResult {
    pub method: Method,
    pub scale: ContrastScale,
    /// Difference or ratio, as reported.
    pub estimate: f64,
    /// Standard error on the inference scale (log scale for ratios).
    pub se: f64,
    pub z: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub p_value: f64,
    pub alpha: f64,
    /// `[control, treatment]` where the method provides group-level AHs.
    pub group_summaries: Option<[GroupSummary; 2]>,
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidInput(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    Ok(())
}

impl ContrastResult {
    /// Build from an estimate on the inference scale (log for ratios).
    pub(crate) fn from_inference_scale(
        method: Method,
        scale: ContrastScale,
        theta: f64,
        se: f64,
        alpha: f64,
    ) -> Self {
        let crit = two_sided_critical(alpha);
        let z = if se > 0.0 {
            theta / se
        } else if theta == 0.0 {
            0.0
        } else {
            theta.signum() * f64::INFINITY
        };
        let (estimate, ci_low, ci_high) = match scale {
            ContrastScale::Difference => (theta, theta - crit * se, theta + crit * se),
            ContrastScale::Ratio => {
                let est = theta.exp();
                (est, est * (-crit * se).exp(), est * (crit * se).exp())
            }
        };
        Self {
            method,
            scale,
            estimate,
            se,
            z,
            ci_low,
            ci_high,
            p_value: two_sided_p(z),
            alpha,
            group_summaries: None,
        }
    }

    /// Null value of the contrast: 0 for differences, 1 for ratios.
    pub fn null_value(&self) -> f64 {
        match self.scale {
            ContrastScale::Difference => 0.0,
            ContrastScale::Ratio => 1.0,
        }
    }

    pub fn ci_excludes_null(&self) -> bool {
        let null = self.null_value();
        self.ci_low > null || self.ci_high < null
    }

    pub fn ci_contains(&self, value: f64) -> bool {
        self.ci_low <= value && value <= self.ci_high
    }
}

/// Difference or ratio of two standardized AHs (treatment `group1` vs
/// control `group0`).
pub fn ah_contrast(
    group0: &StandardizedAhEstimate,
    group1: &StandardizedAhEstimate,
    scale: ContrastScale,
    alpha: f64,
) -> Result<ContrastResult> {
    check_alpha(alpha)?;
    if group0.tau != group1.tau {
        return Err(Error::InvalidPairing(format!(
            "tau differs between groups ({} vs {})",
            group0.tau, group1.tau
        )));
    }
    if group0.weights != group1.weights {
        return Err(Error::InvalidPairing(
            "standardization weights differ between groups".into(),
        ));
    }
    let (theta, se) = match scale {
        ContrastScale::Difference => (
            group1.eta_bar_hat - group0.eta_bar_hat,
            (group1.var_q + group0.var_q).sqrt(),
        ),
        ContrastScale::Ratio => {
            let (Some(w1), Some(w0)) = (group1.var_w, group0.var_w) else {
                return Err(Error::ZeroEvents {
                    cell: Some(
                        if group1.var_w.is_none() {
                            "treatment arm"
                        } else {
                            "control arm"
                        }
                        .into(),
                    ),
                });
            };
            (
                (group1.eta_bar_hat / group0.eta_bar_hat).ln(),
                (w1 + w0).sqrt(),
            )
        }
    };
    let mut result =
        ContrastResult::from_inference_scale(Method::Proposed, scale, theta, se, alpha);
    result.group_summaries = Some([
        GroupSummary::new(group0.eta_bar_hat, group0.var_q, group0.var_w, alpha),
        GroupSummary::new(group1.eta_bar_hat, group1.var_q, group1.var_w, alpha),
    ]);
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stratified::standardized::standardized_ah;
    use crate::survival::Observation;

    fn sample(shift: f64) -> Vec<Observation> {
        (1..=30)
            .map(|i| Observation::new(i as f64 * 0.3 + shift, i % 4 != 0))
            .collect()
    }

    #[test]
    fn self_comparison_is_null() {
        let s = sample(0.0);
        let g = standardized_ah(&[&s], &[1.0], 6.0).unwrap();
        let d = ah_contrast(&g, &g, ContrastScale::Difference, 0.05).unwrap();
        assert_eq!(d.estimate, 0.0);
        assert_eq!(d.p_value, 1.0);
        let r = ah_contrast(&g, &g, ContrastScale::Ratio, 0.05).unwrap();
        assert_eq!(r.estimate, 1.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn half_width_uses_normal_quantile() {
        let (a, b) = (sample(0.0), sample(0.7));
        let g0 = standardized_ah(&[&a], &[1.0], 6.0).unwrap();
        let g1 = standardized_ah(&[&b], &[1.0], 6.0).unwrap();
        let d = ah_contrast(&g0, &g1, ContrastScale::Difference, 0.05).unwrap();
        let half = (d.ci_high - d.ci_low) / 2.0;
        assert!((half / d.se - 1.959964).abs() < 1e-6);
        assert!(d.ci_low <= d.estimate && d.estimate <= d.ci_high);

        let r = ah_contrast(&g0, &g1, ContrastScale::Ratio, 0.05).unwrap();
        let log_half = (r.ci_high.ln() - r.ci_low.ln()) / 2.0;
        assert!((log_half / r.se - 1.959964).abs() < 1e-6);
        assert!(r.ci_low > 0.0 && r.ci_low <= r.estimate && r.estimate <= r.ci_high);
    }

    #[test]
    fn pairing_checks() {
        let (a, b) = (sample(0.0), sample(0.7));
        let g0 = standardized_ah(&[&a], &[1.0], 6.0).unwrap();
        let g1 = standardized_ah(&[&b], &[1.0], 5.0).unwrap();
        assert!(matches!(
            ah_contrast(&g0, &g1, ContrastScale::Difference, 0.05),
            Err(Error::InvalidPairing(_))
        ));
        let h0 = standardized_ah(&[&a, &b], &[0.5, 0.5], 6.0).unwrap();
        let h1 = standardized_ah(&[&a, &b], &[0.6, 0.4], 6.0).unwrap();
        assert!(matches!(
            ah_contrast(&h0, &h1, ContrastScale::Ratio, 0.05),
            Err(Error::InvalidPairing(_))
        ));
        assert!(ah_contrast(&h0, &h0, ContrastScale::Ratio, 1.5).is_err());
    }

    #[test]
    fn ratio_with_zero_ah_errors() {
        let a = sample(0.0);
        let quiet: Vec<_> = (0..5)
            .map(|i| Observation::new(10.0 + i as f64, false))
            .collect();
        let g0 = standardized_ah(&[&quiet], &[1.0], 6.0).unwrap();
        let g1 = standardized_ah(&[&a], &[1.0], 6.0).unwrap();
        assert!(matches!(
            ah_contrast(&g0, &g1, ContrastScale::Ratio, 0.05),
            Err(Error::ZeroEvents { .. })
        ));
        // the difference scale still works
        assert!(ah_contrast(&g0, &g1, ContrastScale::Difference, 0.05).is_ok());
    }
}
