//! CMH-type adjusted AHs and the identity linking the adjusted ratio to a
//! weighted mean of stratum ratios.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stratah::sim::{generate_trial, split_cells, DesignPattern, SimScenario};
use stratah::stratified::{cmh_adjusted_ah, CmhVariant, ContrastScale, StratumPair};
use stratah::survival::stratum_ah;

fn main() -> stratah::Result<()> {
    let scenario = SimScenario::reference_design(DesignPattern::NoCensoring, 700);
    let records = generate_trial(&scenario, &mut ChaCha8Rng::seed_from_u64(5));
    let [control, treatment] = split_cells(&records, scenario.strata());
    let tau = 45.0;
    let pairs = control
        .iter()
        .zip(&treatment)
        .map(|(c, t)| {
            Ok(StratumPair {
                control: stratum_ah(c, tau)?,
                treatment: stratum_ah(t, tau)?,
            })
        })
        .collect::<stratah::Result<Vec<_>>>()?;

    for variant in [CmhVariant::Cmh1, CmhVariant::Cmh2] {
        let est = cmh_adjusted_ah(&pairs, variant)?;
        let rah = est.contrast(ContrastScale::Ratio, 0.05)?;
        println!(
            "{variant:?}: AH {:.3} vs {:.3} per 100, RAH {:.3} (95% CI {:.3} to {:.3})",
            100.0 * est.eta[1],
            100.0 * est.eta[0],
            rah.estimate,
            rah.ci_low,
            rah.ci_high
        );
        println!(
            "  weighted mean of stratum RAHs: {:.12}",
            est.rah_from_strata(&pairs)
        );
        println!("  ratio of adjusted AHs:         {:.12}", est.rah);
    }
    Ok(())
}
