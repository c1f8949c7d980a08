//! Inverse-variance pooling of stratum-level contrasts, starting from
//! published stratum estimates and their 95% intervals.

use stratah::normal::two_sided_critical;
use stratah::stratified::{inverse_variance_combine, ContrastScale};

fn main() -> stratah::Result<()> {
    let z = two_sided_critical(0.05);
    // (RAH, lower, upper) for two strata; the variance of log RAH is backed out
    // from the interval width
    let strata: [(f64, f64, f64); 2] = [(0.712, 0.592, 0.856), (0.611, 0.420, 0.888)];
    let (log_rah, var): (Vec<f64>, Vec<f64>) = strata
        .iter()
        .map(|&(e, lo, hi)| (e.ln(), ((hi / lo).ln() / (2.0 * z)).powi(2)))
        .unzip();
    let pooled = inverse_variance_combine(&log_rah, &var, ContrastScale::Ratio, 0.05)?;
    println!(
        "pooled RAH = {:.3} (95% CI {:.3} to {:.3}), p = {:.1e}",
        pooled.estimate, pooled.ci_low, pooled.ci_high, pooled.p_value
    );
    Ok(())
}
