//! Standardized AH per arm over two strata and the DAH/RAH contrasts.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stratah::sim::{generate_trial, split_cells, DesignPattern, SimScenario};
use stratah::stratified::{ah_contrast, standardized_ah, ContrastScale};

fn main() -> stratah::Result<()> {
    let scenario = SimScenario::reference_design(DesignPattern::RandomCensoring, 1400);
    let records = generate_trial(&scenario, &mut ChaCha8Rng::seed_from_u64(3));
    let [control, treatment] = split_cells(&records, scenario.strata());

    let tau = 48.0;
    let g0 = standardized_ah(
        &control.iter().map(Vec::as_slice).collect::<Vec<_>>(),
        &scenario.weights,
        tau,
    )?;
    let g1 = standardized_ah(
        &treatment.iter().map(Vec::as_slice).collect::<Vec<_>>(),
        &scenario.weights,
        tau,
    )?;
    for (name, g) in [("control", &g0), ("treatment", &g1)] {
        println!(
            "{name:<10} AH = {:.3} per 100 (se {:.3}); stratum AHs {:?}",
            100.0 * g.eta_bar_hat,
            100.0 * g.se(),
            g.per_stratum
                .iter()
                .map(|s| (100.0 * s.eta_hat * 1000.0).round() / 1000.0)
                .collect::<Vec<_>>()
        );
    }
    for scale in [ContrastScale::Difference, ContrastScale::Ratio] {
        let c = ah_contrast(&g0, &g1, scale, 0.05)?;
        let unit = if scale == ContrastScale::Difference {
            100.0
        } else {
            1.0
        };
        println!(
            "{scale:?}: {:.3} (95% CI {:.3} to {:.3}), p = {:.2e}",
            c.estimate * unit,
            c.ci_low * unit,
            c.ci_high * unit,
            c.p_value
        );
    }
    Ok(())
}
