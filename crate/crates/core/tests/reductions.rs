use rayon::prelude::*;
use stratah::io::{analyze, fmt3, parse_dataset, render_analysis_table, AnalysisConfig};
use stratah::sim::{generate_trial, replicate_rng, split_cells, DesignPattern, SimScenario};
use stratah::stratified::{
    ah_contrast, conventional_contrast, standardized_ah, ContrastScale, Method, StratumPair,
};
use stratah::survival::{stratum_ah, Observation};

/// Pattern I design with the stratum-A laws used in both strata.
fn homogeneous(n_per_arm: usize) -> SimScenario {
    let mut s = SimScenario::reference_design(DesignPattern::RandomCensoring, 2 * n_per_arm);
    for arm in &mut s.event_params {
        arm[1] = arm[0];
    }
    s
}

fn slices(arm: &[Vec<Observation>]) -> Vec<&[Observation]> {
    arm.iter().map(Vec::as_slice).collect()
}

/// Mean |proposed - conventional| for (DAH, log RAH) over `reps` trials.
fn mean_gap(n_per_arm: usize, reps: u64) -> (f64, f64) {
    let scenario = homogeneous(n_per_arm);
    let tau = 45.0;
    let gaps: Vec<(f64, f64)> = (0..reps)
        .into_par_iter()
        .map(|r| {
            let records = generate_trial(&scenario, &mut replicate_rng(17, r));
            let [c, t] = split_cells(&records, 2);
            let g0 = standardized_ah(&slices(&c), &scenario.weights, tau).unwrap();
            let g1 = standardized_ah(&slices(&t), &scenario.weights, tau).unwrap();
            let pairs: Vec<_> = c
                .iter()
                .zip(&t)
                .map(|(c, t)| StratumPair {
                    control: stratum_ah(c, tau).unwrap(),
                    treatment: stratum_ah(t, tau).unwrap(),
                })
                .collect();
            let gap = |scale| {
                let p = ah_contrast(&g0, &g1, scale, 0.05).unwrap().estimate;
                let q = conventional_contrast(&pairs, scale, 0.05).unwrap().estimate;
                match scale {
                    ContrastScale::Difference => (p - q).abs(),
                    ContrastScale::Ratio => (p.ln() - q.ln()).abs(),
                }
            };
            (gap(ContrastScale::Difference), gap(ContrastScale::Ratio))
        })
        .collect();
    let n = reps as f64;
    (
        gaps.iter().map(|g| g.0).sum::<f64>() / n,
        gaps.iter().map(|g| g.1).sum::<f64>() / n,
    )
}

#[test]
fn proposed_and_conventional_agree_under_homogeneity() {
    let sizes = [1000, 4000, 16000];
    let gaps: Vec<_> = sizes.iter().map(|&n| mean_gap(n, 60)).collect();
    for (k, which) in ["DAH", "log RAH"].iter().enumerate() {
        let g: Vec<f64> = gaps
            .iter()
            .map(|x| if k == 0 { x.0 } else { x.1 })
            .collect();
        // each fourfold increase in n should at least roughly halve the gap
        assert!(g[1] < 0.75 * g[0] && g[2] < 0.75 * g[1], "{which}: {g:?}");
        let root_n: Vec<f64> = g
            .iter()
            .zip(sizes)
            .map(|(g, n)| g * (n as f64).sqrt())
            .collect();
        assert!(
            root_n[2] < 2.0 * root_n[0],
            "{which}: sqrt(n)-scaled {root_n:?}"
        );
    }
}

#[test]
fn duplicated_stratum_matches_single_stratum() {
    let sample: Vec<Observation> = (1..=40)
        .map(|i| Observation::new(i as f64 * 0.9, i % 3 != 0))
        .collect();
    let single = stratum_ah(&sample, 20.0).unwrap();
    let twice = standardized_ah(&[&sample, &sample], &[0.5, 0.5], 20.0).unwrap();
    assert!((twice.eta_bar_hat - single.eta_hat).abs() < 1e-15);
}

#[test]
fn display_unit_scales_rates_only() {
    let text = include_str!("../data/two_strata.csv");
    let d = parse_dataset(text, "placebo").unwrap();
    let mut config = AnalysisConfig::new(12.0);
    config.unit_scale = 1.0;
    let base = analyze(&d, &config).unwrap();
    config.unit_scale = 100.0;
    let per100 = analyze(&d, &config).unwrap();

    // machine output stays in base units
    let mut patched = per100.clone();
    patched.unit_scale = 1.0;
    assert_eq!(patched, base);

    let t1 = render_analysis_table(&base);
    let t100 = render_analysis_table(&per100);
    let p = base.method(Method::Proposed).unwrap();
    let dah = &p.difference;
    assert!(t1.contains(&fmt3(dah.estimate)));
    assert!(t100.contains(&format!(
        "{} ({} to {})",
        fmt3(100.0 * dah.estimate),
        fmt3(100.0 * dah.ci_low),
        fmt3(100.0 * dah.ci_high)
    )));
    // ratio and p-value lines are unit free
    let rah_lines = |t: &str| -> Vec<String> {
        t.lines()
            .filter(|l| l.trim_start().starts_with("RAH"))
            .map(String::from)
            .collect()
    };
    assert_eq!(rah_lines(&t1), rah_lines(&t100));
    assert_eq!(dah.z, per100.method(Method::Proposed).unwrap().difference.z);
}
