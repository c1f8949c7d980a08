use serde::Serialize;

use super::km::TruncatedFit;
use super::Observation;
use crate::error::{Error, Result};

/// Average hazard with survival weight for one stratum-arm cell.
///
/// Rates are events per person-month (per unit of the time axis).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AhEstimate {
    pub tau: f64,
    pub eta_hat: f64,
    /// `1 - S(tau)`.
    pub f_hat: f64,
    /// `int_0^tau S(u) du`.
    pub r_hat: f64,
    /// Variance of `log eta_hat`.
    pub var_log: f64,
    /// Variance of `eta_hat`.
    pub var_natural: f64,
    pub n: usize,
    pub events: usize,
    /// Largest share of `var_log` contributed by a single event time.
    pub max_term_share: f64,
}

impl AhEstimate {
    pub fn se_natural(&self) -> f64 {
        self.var_natural.sqrt()
    }

    pub fn se_log(&self) -> f64 {
        self.var_log.sqrt()
    }

    /// True when one jump carries more than half of the variance sum, which
    /// usually means the last event fell in a risk set of one or two.
    pub fn variance_dominated(&self) -> bool {
        self.max_term_share > 0.5
    }
}

/// AH of one sample truncated at `tau`, with its plug-in asymptotic variance.
pub fn stratum_ah(sample: &[Observation], tau: f64) -> Result<AhEstimate> {
    let fit = TruncatedFit::new(sample, tau)?;
    AhEstimate::from_fit(&fit, tau)
}

impl AhEstimate {
    pub(crate) fn from_fit(fit: &TruncatedFit, tau: f64) -> Result<Self> {
        if fit.events == 0 {
            return Err(Error::ZeroEvents { cell: None });
        }
        let (f, r) = (fit.f_hat, fit.r_hat);
        let (sum, max) = fit.squared_jump_sum(|r_u| 1.0 / f - r_u / r);
        let n = fit.n as f64;
        let eta_hat = f / r;
        let var_log = sum / n;
        Ok(Self {
            tau,
            eta_hat,
            f_hat: f,
            r_hat: r,
            var_log,
            var_natural: eta_hat * eta_hat * var_log,
            n: fit.n,
            events: fit.events,
            max_term_share: if sum > 0.0 { max / sum } else { 0.0 },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obs(pairs: &[(f64, bool)]) -> Vec<Observation> {
        pairs
            .iter()
            .map(|&(time, event)| Observation { time, event })
            .collect()
    }

    #[test]
    fn three_uncensored_points() {
        let est = stratum_ah(&obs(&[(1.0, true), (2.0, true), (3.0, true)]), 3.0).unwrap();
        assert_eq!(est.f_hat, 1.0);
        assert!((est.r_hat - 2.0).abs() < 1e-15);
        assert!((est.eta_hat - 0.5).abs() < 1e-15);
        assert_eq!(est.eta_hat, est.f_hat / est.r_hat);
        // jump terms by hand: u=1 (R=1, dH=ln 1.5, G=1), u=2 (R=5/3, dH=ln 2,
        // G=2/3), u=3 (R=2, integrand zero)
        let expected = (0.25 * 1.5f64.ln() + (1.0 / 36.0) * 1.5 * 2f64.ln()) / 3.0;
        assert!((est.var_log - expected).abs() < 1e-15);
        assert!((est.var_natural - 0.25 * expected).abs() < 1e-15);
    }

    #[test]
    fn zero_events_is_an_error() {
        let s = obs(&[(5.0, false), (6.0, true)]);
        assert_eq!(stratum_ah(&s, 4.0), Err(Error::ZeroEvents { cell: None }));
    }

    #[test]
    fn tau_beyond_data() {
        let s = obs(&[(1.0, true), (2.0, false)]);
        assert!(matches!(
            stratum_ah(&s, 2.5),
            Err(Error::TauBeyondData { tau, .. }) if tau == 2.5
        ));
    }

    #[test]
    fn dominated_variance_flag() {
        // last event in a risk set of one carries the whole sum
        let s = obs(&[(1.0, false), (2.0, false), (3.0, true), (5.0, false)]);
        let est = stratum_ah(&s, 4.0).unwrap();
        assert!(est.variance_dominated());
        assert_eq!(est.max_term_share, 1.0);
    }

    #[test]
    fn censoring_beyond_tau_is_ignored() {
        let full = obs(&[
            (1.0, true),
            (2.5, true),
            (3.0, true),
            (6.0, true),
            (8.0, true),
        ]);
        let before = stratum_ah(&full, 5.0).unwrap();
        let censored: Vec<_> = full
            .iter()
            .map(|o| {
                if o.time > 5.0 {
                    Observation::new(o.time * 3.0, false)
                } else {
                    *o
                }
            })
            .collect();
        let after = stratum_ah(&censored, 5.0).unwrap();
        assert_eq!(before, after);
    }
}
