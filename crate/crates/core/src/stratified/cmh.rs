//! CMH-type adjusted AHs: arm-level weighted averages of stratum AHs.

use serde::{Deserialize, Serialize};

use super::contrast::{check_alpha, ContrastResult, ContrastScale, GroupSummary, Method};
use super::conventional::StratumPair;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CmhVariant {
    /// `n1 n0 R1 R0 / (n1 + n0)`
    Cmh1,
    /// `n1 n0 R1 R0 / (n1 R1 + n0 R0)`: harmonic mean of the censoring-free
    /// person-time of the two arms.
    Cmh2,
}

impl CmhVariant {
    pub fn method(self) -> Method {
        match self {
            CmhVariant::Cmh1 => Method::Cmh1,
            CmhVariant::Cmh2 => Method::Cmh2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CmhEstimate {
    pub variant: CmhVariant,
    pub tau: f64,
    /// `[control, treatment]` adjusted AH.
    pub eta: [f64; 2],
    /// `[control, treatment]` variance of the adjusted AH with the weights
    /// held fixed.
    pub var_natural: [f64; 2],
    pub dah: f64,
    pub rah: f64,
    /// Stratum weights applied to the stratum AHs.
    pub weights: Vec<f64>,
    /// Weights under which the adjusted RAH is the weighted mean of the
    /// stratum RAHs.
    pub ratio_weights: Vec<f64>,
}

/// Adjusted AH per arm with CMH-type stratum weights.
pub fn cmh_adjusted_ah(pairs: &[StratumPair], variant: CmhVariant) -> Result<CmhEstimate> {
    let Some(first) = pairs.first() else {
        return Err(Error::InvalidInput("no strata".into()));
    };
    let tau = first.control.tau;
    if pairs
        .iter()
        .any(|p| p.control.tau != tau || p.treatment.tau != tau)
    {
        return Err(Error::InvalidPairing(
            "stratum estimates use different tau".into(),
        ));
    }

    let mut weights = Vec::with_capacity(pairs.len());
    let mut ratio_weights = Vec::with_capacity(pairs.len());
    for p in pairs {
        let (n0, n1) = (p.control.n as f64, p.treatment.n as f64);
        let (r0, r1) = (p.control.r_hat, p.treatment.r_hat);
        let denom = match variant {
            CmhVariant::Cmh1 => n1 + n0,
            CmhVariant::Cmh2 => n1 * r1 + n0 * r0,
        };
        weights.push(n1 * n0 * r1 * r0 / denom);
        // the printed CMH2 form reads R1(u)du; R1(tau) is what makes the identity hold
        ratio_weights.push(n0 * n1 * p.control.f_hat * r1 / denom);
    }

    let total: f64 = weights.iter().sum();
    let mut eta = [0.0; 2];
    let mut var_natural = [0.0; 2];
    for (p, w) in pairs.iter().zip(&weights) {
        let share = w / total;
        eta[0] += share * p.control.eta_hat;
        eta[1] += share * p.treatment.eta_hat;
        var_natural[0] += share * share * p.control.var_natural;
        var_natural[1] += share * share * p.treatment.var_natural;
    }

    Ok(CmhEstimate {
        variant,
        tau,
        eta,
        var_natural,
        dah: eta[1] - eta[0],
        rah: eta[1] / eta[0],
        weights,
        ratio_weights,
    })
}

impl CmhEstimate {
    /// Weighted mean of stratum RAHs under `ratio_weights`; equals `rah`.
    pub fn rah_from_strata(&self, pairs: &[StratumPair]) -> f64 {
        let num: f64 = pairs
            .iter()
            .zip(&self.ratio_weights)
            .map(|(p, w)| w * p.treatment.eta_hat / p.control.eta_hat)
            .sum();
        num / self.ratio_weights.iter().sum::<f64>()
    }

    /// Wald interval treating the CMH weights as fixed.
    pub fn contrast(&self, scale: ContrastScale, alpha: f64) -> Result<ContrastResult> {
        check_alpha(alpha)?;
        let [e0, e1] = self.eta;
        let [v0, v1] = self.var_natural;
        let (theta, var) = match scale {
            ContrastScale::Difference => (self.dah, v0 + v1),
            ContrastScale::Ratio => (self.rah.ln(), v0 / (e0 * e0) + v1 / (e1 * e1)),
        };
        let mut result = ContrastResult::from_inference_scale(
            self.variant.method(),
            scale,
            theta,
            var.sqrt(),
            alpha,
        );
        result.group_summaries = Some([
            GroupSummary::new(e0, v0, Some(v0 / (e0 * e0)), alpha),
            GroupSummary::new(e1, v1, Some(v1 / (e1 * e1)), alpha),
        ]);
        Ok(result)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::survival::AhEstimate;

    fn ah(n: usize, f: f64, r: f64) -> AhEstimate {
        AhEstimate {
            tau: 10.0,
            eta_hat: f / r,
            f_hat: f,
            r_hat: r,
            var_log: 0.01,
            var_natural: 0.01 * (f / r) * (f / r),
            n,
            events: 5,
            max_term_share: 0.1,
        }
    }

    fn pairs() -> Vec<StratumPair> {
        vec![
            StratumPair {
                control: ah(120, 0.45, 7.1),
                treatment: ah(110, 0.31, 7.9),
            },
            StratumPair {
                control: ah(60, 0.22, 8.8),
                treatment: ah(75, 0.19, 9.1),
            },
            StratumPair {
                control: ah(33, 0.6, 6.0),
                treatment: ah(30, 0.5, 6.6),
            },
        ]
    }

    #[test]
    fn ratio_is_weighted_mean_of_stratum_ratios() {
        let p = pairs();
        for variant in [CmhVariant::Cmh1, CmhVariant::Cmh2] {
            let est = cmh_adjusted_ah(&p, variant).unwrap();
            let via_strata = est.rah_from_strata(&p);
            assert!(
                (est.rah - via_strata).abs() <= 1e-12 * est.rah,
                "{variant:?}"
            );
        }
    }

    #[test]
    fn single_stratum_returns_stratum_ah() {
        let p = &pairs()[..1];
        for variant in [CmhVariant::Cmh1, CmhVariant::Cmh2] {
            let est = cmh_adjusted_ah(p, variant).unwrap();
            assert_eq!(est.eta[0], p[0].control.eta_hat);
            assert_eq!(est.eta[1], p[0].treatment.eta_hat);
            assert_eq!(est.var_natural[0], p[0].control.var_natural);
        }
    }

    #[test]
    fn equal_sizes_and_rmst_make_variants_agree() {
        // identical n and R across every cell: both weight sets are proportional to n
        let p = vec![
            StratumPair {
                control: ah(50, 0.4, 7.0),
                treatment: ah(50, 0.3, 7.0),
            },
            StratumPair {
                control: ah(50, 0.2, 7.0),
                treatment: ah(50, 0.25, 7.0),
            },
        ];
        let a = cmh_adjusted_ah(&p, CmhVariant::Cmh1).unwrap();
        let b = cmh_adjusted_ah(&p, CmhVariant::Cmh2).unwrap();
        let ratio0 = a.weights[0] / b.weights[0];
        assert!((a.weights[1] / b.weights[1] - ratio0).abs() < 1e-12);
        assert!((a.eta[0] - b.eta[0]).abs() < 1e-15);
        assert!((a.eta[1] - b.eta[1]).abs() < 1e-15);
        // with R identical across arms only, CMH1/CMH2 = R_k per stratum
        let p = vec![
            StratumPair {
                control: ah(50, 0.4, 7.0),
                treatment: ah(50, 0.3, 7.0),
            },
            StratumPair {
                control: ah(50, 0.2, 9.0),
                treatment: ah(50, 0.25, 9.0),
            },
        ];
        let a = cmh_adjusted_ah(&p, CmhVariant::Cmh1).unwrap();
        let b = cmh_adjusted_ah(&p, CmhVariant::Cmh2).unwrap();
        assert!((a.weights[0] / b.weights[0] - 7.0).abs() < 1e-12);
        assert!((a.weights[1] / b.weights[1] - 9.0).abs() < 1e-12);
    }

    #[test]
    fn mismatched_tau_rejected() {
        let mut p = pairs();
        p[1].treatment.tau = 12.0;
        assert!(matches!(
            cmh_adjusted_ah(&p, CmhVariant::Cmh1),
            Err(Error::InvalidPairing(_))
        ));
        assert!(cmh_adjusted_ah(&[], CmhVariant::Cmh1).is_err());
    }
}
