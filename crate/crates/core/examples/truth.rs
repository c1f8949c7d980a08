//! Analytic standardized AH, DAH and log RAH under the two-stratum Weibull
//! model.

use stratah::sim::{weibull_truth, DesignPattern, SimScenario};

fn main() {
    let scenario = SimScenario::reference_design(DesignPattern::RandomCensoring, 1400);
    println!("tau   AH treatment  AH control     DAH  log RAH   (per 100)");
    for &tau in &scenario.taus {
        let t = weibull_truth(&scenario, tau);
        println!(
            "{tau:<5} {:>12.4} {:>11.4} {:>7.4} {:>8.4}",
            100.0 * t.ah[1],
            100.0 * t.ah[0],
            100.0 * t.dah,
            t.log_rah
        );
    }
}
