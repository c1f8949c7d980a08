//! Large-sample checks of the single-stratum estimators against closed-form
//! and numerical oracles.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use stratah::sim::{
    generate_trial, integrate, replicate_rng, Censoring, DesignPattern, SimScenario, WeibullParams,
};
use stratah::survival::{
    hazard_increments, kaplan_meier, rmst, stratum_ah, Arm, Observation, StratumId,
};

fn exponential_sample(rate: f64, n: usize, seed: u64) -> Vec<Observation> {
    let law = WeibullParams::exponential(rate).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Observation::new(law.sample(&mut rng), true))
        .collect()
}

#[test]
fn exponential_rmst_matches_closed_form() {
    let sample = exponential_sample(0.01, 100_000, 1);
    let fit = kaplan_meier(&sample).unwrap();
    let exact = (1.0 - (-0.48f64).exp()) / 0.01;
    assert!((exact - 38.12).abs() < 0.01);
    // sd of min(T, 48) is about 14, so the standard error is about 0.045
    let got = rmst(&fit, 48.0).unwrap();
    assert!((got - exact).abs() < 0.2, "{got} vs {exact}");
}

#[test]
fn cumulative_hazard_is_linear_for_exponential() {
    let sample = exponential_sample(0.02, 100_000, 2);
    let fit = kaplan_meier(&sample).unwrap();
    for tau in [10.0, 30.0, 60.0] {
        let h: f64 = hazard_increments(&fit, tau).iter().map(|(_, dh)| dh).sum();
        assert!((h - 0.02 * tau).abs() < 0.02 * tau * 0.03, "tau {tau}: {h}");
    }
}

#[test]
fn weibull_standard_error_is_calibrated() {
    let event = WeibullParams::new(1.46, 55.87).unwrap();
    let censor = WeibullParams::new(8.21, 47.79).unwrap();
    let tau = 48.0;
    let reps = 5000;
    let draws: Vec<(f64, f64)> = (0..reps as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = replicate_rng(99, r);
            let sample: Vec<Observation> = (0..460)
                .map(|_| {
                    let (t, c) = (event.sample(&mut rng), censor.sample(&mut rng));
                    Observation::new(t.min(c), t <= c)
                })
                .collect();
            let est = stratum_ah(&sample, tau).unwrap();
            (est.eta_hat, est.se_natural())
        })
        .collect();

    let n = reps as f64;
    let mean = draws.iter().map(|d| d.0).sum::<f64>() / n;
    let sd = (draws.iter().map(|d| (d.0 - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let mean_se = draws.iter().map(|d| d.1).sum::<f64>() / n;
    let truth = event.average_hazard(tau);

    assert!(
        (mean - truth).abs() < 0.02 * truth,
        "mean {mean} truth {truth}"
    );
    assert!((mean_se / sd - 1.0).abs() < 0.05, "se {mean_se} sd {sd}");
}

/// `P(T <= C, T < 40)` as a double integral of the joint density over
/// `{t < 40, c > t}`.
fn observed_event_probability(event: WeibullParams, censor: WeibullParams, horizon: f64) -> f64 {
    let density = |w: WeibullParams, x: f64| w.hazard(x) * w.survival(x);
    let upper = censor.scale * 4.0;
    integrate(
        |t| density(event, t) * integrate(|c| density(censor, c), t, upper, 1e-12),
        0.0,
        horizon,
        1e-10,
    )
}

#[test]
fn censoring_pattern_matches_quadrature() {
    let mut scenario = SimScenario::reference_design(DesignPattern::RandomCensoring, 1400);
    scenario.n_per_arm = 100_000;
    let Censoring::Weibull(censor) = scenario.censoring else {
        panic!("pattern I censors");
    };
    let event = scenario.params(Arm::Control, 0);
    let oracle = observed_event_probability(event, censor, 40.0);
    // the inner integral is a survival function; check the closed form too
    let direct = integrate(
        |t| event.hazard(t) * event.survival(t) * censor.survival(t),
        0.0,
        40.0,
        1e-12,
    );
    assert!((oracle - direct).abs() < 1e-8);

    let records = generate_trial(&scenario, &mut ChaCha8Rng::seed_from_u64(4));
    let cell: Vec<_> = records
        .iter()
        .filter(|r| r.arm == Arm::Control && r.stratum == StratumId(0))
        .collect();
    let hits = cell.iter().filter(|r| r.event && r.time < 40.0).count();
    let p = hits as f64 / cell.len() as f64;
    let se = (oracle * (1.0 - oracle) / cell.len() as f64).sqrt();
    assert!((p - oracle).abs() < 4.0 * se, "{p} vs {oracle}");
}

#[test]
fn no_censoring_means_every_record_is_an_event() {
    let scenario = SimScenario::reference_design(DesignPattern::NoCensoring, 700);
    let records = generate_trial(&scenario, &mut ChaCha8Rng::seed_from_u64(8));
    assert_eq!(records.len(), 700);
    assert!(records.iter().all(|r| r.event));
    let in_a = records
        .iter()
        .filter(|r| r.arm == Arm::Treatment && r.stratum == StratumId(0))
        .count();
    assert_eq!(in_a, 245);
}
