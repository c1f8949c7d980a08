//! Product-limit estimation and the quantities derived from it on `[0, tau]`.

use serde::Serialize;

use super::step::StepFunction;
use super::Observation;
use crate::error::{Error, Result};

/// Kaplan–Meier fit of one sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KmFit {
    pub survival: StepFunction,
    pub event_times: Vec<f64>,
    pub deaths_at: Vec<usize>,
    pub at_risk_at: Vec<usize>,
    pub n: usize,
    /// Largest observed time (event or censoring).
    pub max_time: f64,
}

pub(crate) fn validate_sample(sample: &[Observation]) -> Result<()> {
    if sample.is_empty() {
        return Err(Error::InvalidInput("sample is empty".into()));
    }
    if let Some(bad) = sample.iter().find(|o| !o.time.is_finite() || o.time < 0.0) {
        return Err(Error::InvalidInput(format!(
            "observation time {} is not a finite non-negative number",
            bad.time
        )));
    }
    Ok(())
}

/// Product-limit estimate. At tied times events are counted before
/// censorings, so a subject censored at `t` is still at risk at `t`.
pub fn kaplan_meier(sample: &[Observation]) -> Result<KmFit> {
    validate_sample(sample)?;

    let mut sorted: Vec<Observation> = sample.to_vec();
    sorted.sort_by(|a, b| a.time.total_cmp(&b.time));

    let n = sorted.len();
    let mut event_times = Vec::new();
    let mut deaths_at = Vec::new();
    let mut at_risk_at = Vec::new();
    let mut surv_values = Vec::new();

    let mut remaining = n;
    let mut surv = 1.0;
    let mut i = 0;
    while i < n {
        let t = sorted[i].time;
        let mut deaths = 0;
        let mut j = i;
        while j < n && sorted[j].time == t {
            if sorted[j].event {
                deaths += 1;
            }
            j += 1;
        }
        if deaths > 0 {
            surv *= 1.0 - deaths as f64 / remaining as f64;
            event_times.push(t);
            deaths_at.push(deaths);
            at_risk_at.push(remaining);
            surv_values.push(surv);
        }
        remaining -= j - i;
        i = j;
    }

    let survival = StepFunction::new(event_times.clone(), surv_values, 1.0)?;
    Ok(KmFit {
        survival,
        event_times,
        deaths_at,
        at_risk_at,
        n,
        max_time: sorted[n - 1].time,
    })
}

impl KmFit {
    /// Whether `S(tau)` is identified: some subject is still under
    /// observation at `tau`, or the curve has already dropped to zero.
    pub fn estimable_at(&self, tau: f64) -> bool {
        self.max_time >= tau || self.survival.values().last().is_some_and(|&s| s == 0.0)
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tau must be positive, got {tau}"
        )));
    }
    Ok(())
}

/// Restricted mean survival time `int_0^tau S(u) du`.
pub fn rmst(fit: &KmFit, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    Ok(fit.survival.integral(0.0, tau))
}

/// `1 - S(tau)`.
pub fn cumulative_incidence(fit: &KmFit, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    Ok(1.0 - fit.survival.eval(tau))
}

/// Cumulative-hazard jumps `-d log S(u)` at event times `u <= tau`.
///
/// Where the curve drops to zero the log increment is infinite and the
/// Nelson–Aalen increment `deaths / at_risk` is used instead.
pub fn hazard_increments(fit: &KmFit, tau: f64) -> Vec<(f64, f64)> {
    fit.event_times
        .iter()
        .zip(fit.deaths_at.iter().zip(&fit.at_risk_at))
        .take_while(|(&u, _)| u <= tau)
        .map(|(&u, (&d, &y))| (u, hazard_jump(d, y)))
        .collect()
}

#[inline]
pub(crate) fn hazard_jump(deaths: usize, at_risk: usize) -> f64 {
    if deaths >= at_risk {
        1.0
    } else {
        // log S(u-) - log S(u) = -log(1 - d/Y)
        -(-(deaths as f64) / at_risk as f64).ln_1p()
    }
}

/// Proportion of the sample with observed time `>= t`.
pub fn at_risk_fraction(sample: &[Observation], t: f64) -> f64 {
    if sample.is_empty() {
        return 0.0;
    }
    let at_risk = sample.iter().filter(|o| o.time >= t).count();
    at_risk as f64 / sample.len() as f64
}

/// One term of a jump-sum variance integral.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Jump {
    /// `R(u) = int_0^u S`.
    pub rmst_to: f64,
    /// `dH(u) / G(u)`.
    pub hazard_over_risk: f64,
}

/// Everything the AH estimators need from one stratum-arm cell.
#[derive(Debug, Clone)]
pub(crate) struct TruncatedFit {
    pub n: usize,
    pub f_hat: f64,
    pub r_hat: f64,
    pub s_tau: f64,
    pub events: usize,
    pub jumps: Vec<Jump>,
}

impl TruncatedFit {
    pub fn new(sample: &[Observation], tau: f64) -> Result<Self> {
        check_tau(tau)?;
        let fit = kaplan_meier(sample)?;
        if !fit.estimable_at(tau) {
            return Err(Error::TauBeyondData { tau, cell: None });
        }
        let n = fit.n as f64;
        let mut jumps = Vec::new();
        let mut events = 0;
        let mut rmst_to = 0.0;
        let mut last_t = 0.0;
        let mut last_s = 1.0;
        for (i, &u) in fit.event_times.iter().enumerate() {
            if u > tau {
                break;
            }
            rmst_to += last_s * (u - last_t);
            let (d, y) = (fit.deaths_at[i], fit.at_risk_at[i]);
            events += d;
            jumps.push(Jump {
                rmst_to,
                hazard_over_risk: hazard_jump(d, y) * n / y as f64,
            });
            last_t = u;
            last_s = fit.survival.values()[i];
        }
        let r_hat = rmst_to + last_s * (tau - last_t);
        Ok(Self {
            n: fit.n,
            f_hat: 1.0 - last_s,
            r_hat,
            s_tau: last_s,
            events,
            jumps,
        })
    }

    /// `sum_u g(R(u))^2 dH(u)/G(u)` together with the largest single term.
    pub fn squared_jump_sum(&self, integrand: impl Fn(f64) -> f64) -> (f64, f64) {
        self.jumps.iter().fold((0.0, 0.0), |(sum, max), j| {
            let g = integrand(j.rmst_to);
            let term = g * g * j.hazard_over_risk;
            (sum + term, f64::max(max, term))
        })
    }
}
