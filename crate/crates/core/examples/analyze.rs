//! Stratified analysis of a bundled dataset with every method.

use stratah::io::{analyze, parse_dataset, render_analysis_table, AnalysisConfig, WeightChoice};

fn main() -> stratah::Result<()> {
    let text = include_str!("../data/two_strata.csv");
    let dataset = parse_dataset(text, "placebo")?;
    println!(
        "strata {:?}, sizes {:?}\n",
        dataset.stratum_labels,
        dataset.stratum_sizes()
    );

    let mut config = AnalysisConfig::new(12.0);
    config.weights = WeightChoice::Equal;
    let report = analyze(&dataset, &config)?;
    print!("{}", render_analysis_table(&report));
    Ok(())
}
