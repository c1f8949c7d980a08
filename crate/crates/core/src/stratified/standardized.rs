//! Standardized AH: the AH of the mixture survival curve `sum_k w_k S_k`.

use serde::{Deserialize, Serialize};

use super::weights::normalize_weights;
use crate::error::{Error, Result};
use crate::survival::{Observation, TruncatedFit};

/// Integrand used for the plug-in variances of the standardized AH.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarianceForm {
    /// `{1/sum(wR) - sum(wF) R_k(u) / sum(wR)^2}^2` for `V(Q)` and
    /// `{1/sum(wF) - R_k(u)/sum(wR)}^2` for `V(W)`.
    #[default]
    Published,
    /// Martingale representation of `F_k(tau)` and `R_k(tau)` carried through
    /// exactly, with integrand coefficient `S_k(tau)` on the incidence part and
    /// `R_k(tau) - R_k(u)` on the RMST part. Equal to `Published` when K = 1
    /// or when every stratum has the same AH.
    Influence,
}

/// Per-stratum ingredients of a standardized AH.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StratumTerms {
    pub n: usize,
    pub events: usize,
    pub f_hat: f64,
    pub r_hat: f64,
    /// `f_hat / r_hat`; zero when the stratum has no events by tau.
    pub eta_hat: f64,
    /// `n_k / n` within this arm.
    pub p_hat: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StandardizedAhEstimate {
    pub tau: f64,
    pub eta_bar_hat: f64,
    /// Variance of `eta_bar_hat` (already divided by `n`).
    pub var_q: f64,
    /// Variance of `log eta_bar_hat`; `None` when no stratum has an event by tau.
    pub var_w: Option<f64>,
    pub weights: Vec<f64>,
    pub per_stratum: Vec<StratumTerms>,
    pub n_total: usize,
    pub variance_form: VarianceForm,
}

impl StandardizedAhEstimate {
    pub fn se(&self) -> f64 {
        self.var_q.sqrt()
    }

    pub fn se_log(&self) -> Option<f64> {
        self.var_w.map(f64::sqrt)
    }

    pub fn p_hat(&self) -> Vec<f64> {
        self.per_stratum.iter().map(|s| s.p_hat).collect()
    }

    /// `sum_k w_k (1 - S_k(tau))`.
    pub fn weighted_incidence(&self) -> f64 {
        self.per_stratum.iter().map(|s| s.weight * s.f_hat).sum()
    }

    /// `sum_k w_k R_k(tau)`.
    pub fn weighted_rmst(&self) -> f64 {
        self.per_stratum.iter().map(|s| s.weight * s.r_hat).sum()
    }
}

/// Standardized AH of one arm from its per-stratum samples.
///
/// `weights` need not be normalized; they are rescaled to sum to one.
pub fn standardized_ah(
    strata: &[&[Observation]],
    weights: &[f64],
    tau: f64,
) -> Result<StandardizedAhEstimate> {
    standardized_ah_with(strata, weights, tau, VarianceForm::Published)
}

pub fn standardized_ah_with(
    strata: &[&[Observation]],
    weights: &[f64],
    tau: f64,
    form: VarianceForm,
) -> Result<StandardizedAhEstimate> {
    if strata.len() != weights.len() {
        return Err(Error::InvalidInput(format!(
            "{} weights for {} strata",
            weights.len(),
            strata.len()
        )));
    }
    let weights = normalize_weights(weights)?;
    let fits = strata
        .iter()
        .enumerate()
        .map(|(k, s)| TruncatedFit::new(s, tau).map_err(|e| e.in_cell(format!("stratum #{k}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(from_fits(&fits, weights, tau, form))
}

pub(crate) fn from_fits(
    fits: &[TruncatedFit],
    weights: Vec<f64>,
    tau: f64,
    form: VarianceForm,
) -> StandardizedAhEstimate {
    let n_total: usize = fits.iter().map(|f| f.n).sum();
    let sum_f: f64 = fits.iter().zip(&weights).map(|(f, w)| w * f.f_hat).sum();
    let sum_r: f64 = fits.iter().zip(&weights).map(|(f, w)| w * f.r_hat).sum();
    let eta_bar_hat = sum_f / sum_r;

    let mut var_q = 0.0;
    let mut var_w = 0.0;
    let mut per_stratum = Vec::with_capacity(fits.len());
    for (fit, &w) in fits.iter().zip(&weights) {
        let p_hat = fit.n as f64 / n_total as f64;
        // (w^2 / p_hat) / n_total
        let scale = w * w / fit.n as f64;
        let (q, lw) = match form {
            VarianceForm::Published => (
                fit.squared_jump_sum(|r_u| 1.0 / sum_r - sum_f * r_u / (sum_r * sum_r))
                    .0,
                fit.squared_jump_sum(|r_u| 1.0 / sum_f - r_u / sum_r).0,
            ),
            VarianceForm::Influence => {
                let (s_tau, r_tau) = (fit.s_tau, fit.r_hat);
                (
                    fit.squared_jump_sum(|r_u| {
                        s_tau / sum_r + sum_f * (r_tau - r_u) / (sum_r * sum_r)
                    })
                    .0,
                    fit.squared_jump_sum(|r_u| s_tau / sum_f + (r_tau - r_u) / sum_r)
                        .0,
                )
            }
        };
        var_q += scale * q;
        var_w += scale * lw;
        per_stratum.push(StratumTerms {
            n: fit.n,
            events: fit.events,
            f_hat: fit.f_hat,
            r_hat: fit.r_hat,
            eta_hat: fit.f_hat / fit.r_hat,
            p_hat,
            weight: w,
        });
    }

    StandardizedAhEstimate {
        tau,
        eta_bar_hat,
        var_q,
        var_w: (sum_f > 0.0).then_some(var_w),
        weights,
        per_stratum,
        n_total,
        variance_form: form,
    }
}
