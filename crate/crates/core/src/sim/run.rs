use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::scenario::{Censoring, SimScenario};
use crate::error::{Error, Result};
use crate::normal::two_sided_critical;
use crate::stratified::{ah_contrast, from_fits, normalize_weights, ContrastScale};
use crate::survival::{Arm, Observation, StratumId, SubjectRecord, TruncatedFit};

/// Largest tolerated share of failed replicates.
pub const MAX_FAILURE_RATE: f64 = 0.01;

/// Population AHs from the scenario's Weibull laws (events per person-month).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Truth {
    pub tau: f64,
    /// `[control, treatment]`
    pub ah: [f64; 2],
    pub dah: f64,
    pub log_rah: f64,
}

/// Standardized population AH `sum w F / sum w R` for each arm at `tau`.
pub fn weibull_truth(scenario: &SimScenario, tau: f64) -> Truth {
    let weights = &scenario.weights;
    let mut ah = [0.0; 2];
    for arm in Arm::BOTH {
        let (f, r) = scenario.event_params[arm.index()]
            .iter()
            .zip(weights)
            .fold((0.0, 0.0), |(f, r), (p, w)| {
                (f + w * p.cdf(tau), r + w * p.rmst(tau))
            });
        ah[arm.index()] = f / r;
    }
    Truth {
        tau,
        ah,
        dah: ah[1] - ah[0],
        log_rah: (ah[1] / ah[0]).ln(),
    }
}

/// One simulated trial: `n_per_arm` subjects per arm with deterministic
/// stratum counts. Per subject the event time is drawn before the censoring
/// time; arms and strata are generated in index order.
pub fn generate_trial<R: Rng + ?Sized>(scenario: &SimScenario, rng: &mut R) -> Vec<SubjectRecord> {
    let counts = scenario.stratum_counts();
    let mut records = Vec::with_capacity(2 * scenario.n_per_arm);
    for arm in Arm::BOTH {
        for (k, &count) in counts.iter().enumerate() {
            let law = scenario.params(arm, k);
            for _ in 0..count {
                let t = law.sample(rng);
                let (time, event) = match scenario.censoring {
                    Censoring::Weibull(c) => {
                        let c = c.sample(rng);
                        (t.min(c), t <= c)
                    }
                    Censoring::None => (t, true),
                };
                records.push(SubjectRecord {
                    time,
                    event,
                    arm,
                    stratum: StratumId(k),
                });
            }
        }
    }
    records
}

/// Group records into `[arm][stratum]` samples.
pub fn split_cells(records: &[SubjectRecord], strata: usize) -> [Vec<Vec<Observation>>; 2] {
    let mut cells = [vec![Vec::new(); strata], vec![Vec::new(); strata]];
    for r in records {
        cells[r.arm.index()][r.stratum.0].push(r.observation());
    }
    cells
}

/// Random stream for replicate `index`: the scenario seed selects the key
/// and the replicate index selects the ChaCha stream.
pub fn replicate_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    AhTreatment,
    AhControl,
    Dah,
    LogRah,
}

impl Metric {
    pub const ALL: [Metric; 4] = [
        Metric::AhTreatment,
        Metric::AhControl,
        Metric::Dah,
        Metric::LogRah,
    ];

    pub fn truth(self, t: &Truth) -> f64 {
        match self {
            Metric::AhTreatment => t.ah[1],
            Metric::AhControl => t.ah[0],
            Metric::Dah => t.dah,
            Metric::LogRah => t.log_rah,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Metric::AhTreatment => "AH treatment",
            Metric::AhControl => "AH control",
            Metric::Dah => "DAH",
            Metric::LogRah => "log(RAH)",
        }
    }

    /// Whether the metric is a rate (scaled by the display unit).
    pub fn is_rate(self) -> bool {
        !matches!(self, Metric::LogRah)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricSummary {
    pub metric: Metric,
    pub truth: f64,
    pub mean_estimate: f64,
    pub bias: f64,
    pub empirical_sd: f64,
    pub mean_se: f64,
    pub coverage: f64,
    pub replicates: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiskSetSummary {
    pub arm: Arm,
    /// Across-replicate mean of `#{X >= tau}` per stratum.
    pub avg_risk_set: Vec<f64>,
    /// Minimum of `avg_risk_set` over strata.
    pub min_avg_risk_set: f64,
}

/// Agreement between `p < alpha` and the interval excluding the null.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualityCheck {
    pub evaluated: usize,
    pub difference_rejections: usize,
    pub ratio_rejections: usize,
    pub difference_discordant: usize,
    pub ratio_discordant: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TauSummary {
    pub tau: f64,
    pub metrics: Vec<MetricSummary>,
    pub risk_sets: Vec<RiskSetSummary>,
    pub duality: DualityCheck,
}

impl TauSummary {
    pub fn metric(&self, m: Metric) -> &MetricSummary {
        self.metrics
            .iter()
            .find(|s| s.metric == m)
            .expect("all metrics summarized")
    }

    pub fn risk_set(&self, arm: Arm) -> &RiskSetSummary {
        &self.risk_sets[arm.index()]
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FailureSummary {
    pub replicates_failed: usize,
    pub tau_beyond_data: usize,
    pub zero_events: usize,
    pub other: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub scenario: String,
    pub seed: u64,
    pub replications: usize,
    pub n_per_arm: usize,
    pub taus: Vec<TauSummary>,
    pub failures: FailureSummary,
}

impl SimResult {
    pub fn at_tau(&self, tau: f64) -> Option<&TauSummary> {
        self.taus.iter().find(|t| t.tau == tau)
    }
}

#[derive(Debug, Clone, Copy)]
struct Evaluation {
    estimate: [f64; 4],
    se: [f64; 4],
    covered: [bool; 4],
    rejects: [bool; 2],
    excludes_null: [bool; 2],
}

struct Replicate {
    /// `[tau][arm][stratum]`
    risk_sets: Vec<[Vec<usize>; 2]>,
    /// Per tau; `Err` holds the failure.
    evaluations: Vec<std::result::Result<Evaluation, Error>>,
}

fn evaluate(
    cells: &[Vec<Vec<Observation>>; 2],
    scenario: &SimScenario,
    weights: &[f64],
    truth: &Truth,
    tau: f64,
    z: f64,
) -> Result<Evaluation> {
    let mut groups = Vec::with_capacity(2);
    for arm in Arm::BOTH {
        let fits = cells[arm.index()]
            .iter()
            .map(|s| TruncatedFit::new(s, tau))
            .collect::<Result<Vec<_>>>()?;
        groups.push(from_fits(
            &fits,
            weights.to_vec(),
            tau,
            scenario.variance_form,
        ));
    }
    let (g0, g1) = (&groups[0], &groups[1]);
    let diff = ah_contrast(g0, g1, ContrastScale::Difference, scenario.alpha)?;
    let ratio = ah_contrast(g0, g1, ContrastScale::Ratio, scenario.alpha)?;

    let estimate = [
        g1.eta_bar_hat,
        g0.eta_bar_hat,
        diff.estimate,
        ratio.estimate.ln(),
    ];
    let se = [g1.se(), g0.se(), diff.se, ratio.se];
    let mut covered = [false; 4];
    for (i, m) in Metric::ALL.iter().enumerate() {
        covered[i] = (estimate[i] - m.truth(truth)).abs() <= z * se[i];
    }
    Ok(Evaluation {
        estimate,
        se,
        covered,
        rejects: [
            diff.p_value < scenario.alpha,
            ratio.p_value < scenario.alpha,
        ],
        excludes_null: [diff.ci_excludes_null(), ratio.ci_excludes_null()],
    })
}

fn run_replicate(
    scenario: &SimScenario,
    weights: &[f64],
    truths: &[Truth],
    z: f64,
    index: usize,
) -> Replicate {
    let mut rng = replicate_rng(scenario.seed, index as u64);
    let records = generate_trial(scenario, &mut rng);
    let cells = split_cells(&records, scenario.strata());
    let risk_sets = scenario
        .taus
        .iter()
        .map(|&tau| {
            let count = |arm: Arm| -> Vec<usize> {
                cells[arm.index()]
                    .iter()
                    .map(|s| s.iter().filter(|o| o.time >= tau).count())
                    .collect()
            };
            [count(Arm::Control), count(Arm::Treatment)]
        })
        .collect();
    let evaluations = scenario
        .taus
        .iter()
        .zip(truths)
        .map(|(&tau, truth)| evaluate(&cells, scenario, weights, truth, tau, z))
        .collect();
    Replicate {
        risk_sets,
        evaluations,
    }
}

#[derive(Default)]
struct Moments {
    n: usize,
    sum: f64,
    sum_sq: f64,
    sum_se: f64,
    covered: usize,
}

/// Replicated study over every tau of `scenario`.
///
/// Replicates run in parallel; each draws from its own stream
/// (`replicate_rng(seed, r)`) and results are reduced in replicate order, so
/// the output does not depend on the thread count.
pub fn run_simulation(scenario: &SimScenario) -> Result<SimResult> {
    scenario.validate()?;
    let weights = normalize_weights(&scenario.weights)?;
    let truths: Vec<Truth> = scenario
        .taus
        .iter()
        .map(|&t| weibull_truth(scenario, t))
        .collect();
    let z = two_sided_critical(scenario.alpha);

    let replicates: Vec<Replicate> = (0..scenario.replications)
        .into_par_iter()
        .map(|r| run_replicate(scenario, &weights, &truths, z, r))
        .collect();

    let mut failures = FailureSummary::default();
    for rep in &replicates {
        let mut failed = false;
        for e in rep.evaluations.iter().filter_map(|e| e.as_ref().err()) {
            failed = true;
            match e {
                Error::TauBeyondData { .. } => failures.tau_beyond_data += 1,
                Error::ZeroEvents { .. } => failures.zero_events += 1,
                _ => failures.other += 1,
            }
        }
        failures.replicates_failed += failed as usize;
    }
    if failures.replicates_failed as f64 > MAX_FAILURE_RATE * scenario.replications as f64 {
        return Err(Error::SimulationAborted {
            failed: failures.replicates_failed,
            attempted: scenario.replications,
            summary: format!(
                "tau_beyond_data={}, zero_events={}, other={}",
                failures.tau_beyond_data, failures.zero_events, failures.other
            ),
        });
    }

    let k = scenario.strata();
    let mut taus = Vec::with_capacity(scenario.taus.len());
    for (ti, (&tau, truth)) in scenario.taus.iter().zip(&truths).enumerate() {
        let mut moments: [Moments; 4] = Default::default();
        let mut duality = DualityCheck {
            evaluated: 0,
            difference_rejections: 0,
            ratio_rejections: 0,
            difference_discordant: 0,
            ratio_discordant: 0,
        };
        let mut risk_totals = [vec![0usize; k], vec![0usize; k]];
        for rep in &replicates {
            for arm in Arm::BOTH {
                for (total, c) in risk_totals[arm.index()]
                    .iter_mut()
                    .zip(&rep.risk_sets[ti][arm.index()])
                {
                    *total += c;
                }
            }
            let Ok(ev) = &rep.evaluations[ti] else {
                continue;
            };
            for (i, m) in moments.iter_mut().enumerate() {
                m.n += 1;
                m.sum += ev.estimate[i];
                m.sum_sq += ev.estimate[i] * ev.estimate[i];
                m.sum_se += ev.se[i];
                m.covered += ev.covered[i] as usize;
            }
            duality.evaluated += 1;
            duality.difference_rejections += ev.rejects[0] as usize;
            duality.ratio_rejections += ev.rejects[1] as usize;
            duality.difference_discordant += (ev.rejects[0] != ev.excludes_null[0]) as usize;
            duality.ratio_discordant += (ev.rejects[1] != ev.excludes_null[1]) as usize;
        }

        let metrics = Metric::ALL
            .iter()
            .zip(&moments)
            .map(|(&metric, m)| {
                let n = m.n as f64;
                let mean = m.sum / n;
                let var = if m.n > 1 {
                    (m.sum_sq - n * mean * mean) / (n - 1.0)
                } else {
                    0.0
                };
                let truth_value = metric.truth(truth);
                MetricSummary {
                    metric,
                    truth: truth_value,
                    mean_estimate: mean,
                    bias: mean - truth_value,
                    empirical_sd: var.max(0.0).sqrt(),
                    mean_se: m.sum_se / n,
                    coverage: m.covered as f64 / n,
                    replicates: m.n,
                }
            })
            .collect();

        let risk_sets = Arm::BOTH
            .iter()
            .map(|&arm| {
                let avg: Vec<f64> = risk_totals[arm.index()]
                    .iter()
                    .map(|&t| t as f64 / scenario.replications as f64)
                    .collect();
                RiskSetSummary {
                    arm,
                    min_avg_risk_set: avg.iter().copied().fold(f64::INFINITY, f64::min),
                    avg_risk_set: avg,
                }
            })
            .collect();

        taus.push(TauSummary {
            tau,
            metrics,
            risk_sets,
            duality,
        });
    }

    Ok(SimResult {
        scenario: scenario.name.clone(),
        seed: scenario.seed,
        replications: scenario.replications,
        n_per_arm: scenario.n_per_arm,
        taus,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{DesignPattern, WeibullParams};

    #[test]
    fn exponential_truth_is_the_rate() {
        let mut s = SimScenario::reference_design(DesignPattern::NoCensoring, 200);
        let e = |rate| WeibullParams::exponential(rate).unwrap();
        s.event_params = [vec![e(0.02), e(0.02)], vec![e(0.01), e(0.01)]];
        for tau in [10.0, 48.0, 90.0] {
            let t = weibull_truth(&s, tau);
            assert!((t.ah[0] - 0.02).abs() < 1e-12);
            assert!((t.ah[1] - 0.01).abs() < 1e-12);
            assert!((t.log_rah - 0.5f64.ln()).abs() < 1e-10);
        }
    }

    #[test]
    fn uncensored_trial_has_all_events() {
        let s = SimScenario::reference_design(DesignPattern::NoCensoring, 1400);
        let records = generate_trial(&s, &mut replicate_rng(1, 0));
        assert_eq!(records.len(), 1400);
        assert!(records.iter().all(|r| r.event));
        let cells = split_cells(&records, 2);
        for arm in Arm::BOTH {
            assert_eq!(cells[arm.index()][0].len(), 490);
            assert_eq!(cells[arm.index()][1].len(), 210);
        }
    }

    #[test]
    fn streams_are_distinct_and_reproducible() {
        let a: Vec<u64> = (0..4).map(|_| replicate_rng(9, 0).gen()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        let x: u64 = replicate_rng(9, 0).gen();
        let y: u64 = replicate_rng(9, 1).gen();
        assert_ne!(x, y);
    }

    #[test]
    fn single_replicate_is_repeatable() {
        let mut s = SimScenario::reference_design(DesignPattern::RandomCensoring, 700);
        s.replications = 1;
        assert_eq!(run_simulation(&s).unwrap(), run_simulation(&s).unwrap());
    }

    #[test]
    fn excessive_failures_abort() {
        // censoring far earlier than tau leaves no one at risk
        let mut s = SimScenario::reference_design(DesignPattern::RandomCensoring, 100);
        s.censoring = Censoring::Weibull(WeibullParams::new(20.0, 5.0).unwrap());
        s.replications = 20;
        match run_simulation(&s) {
            Err(Error::SimulationAborted {
                failed, attempted, ..
            }) => {
                assert_eq!(attempted, 20);
                assert!(failed > 0);
            }
            other => panic!("{other:?}"),
        }
    }
}
