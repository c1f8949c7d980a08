//! Kaplan–Meier curve, RMST and hazard increments for a small sample.

use stratah::survival::{cumulative_incidence, hazard_increments, kaplan_meier, rmst, Observation};

fn main() -> stratah::Result<()> {
    let sample: Vec<Observation> = [
        (2.0, true),
        (3.0, false),
        (4.5, true),
        (4.5, true),
        (6.0, false),
        (7.5, true),
        (9.0, false),
    ]
    .into_iter()
    .map(|(t, e)| Observation::new(t, e))
    .collect();
    let fit = kaplan_meier(&sample)?;

    println!("time  at-risk  deaths  S(t)");
    for ((t, y), d) in fit
        .event_times
        .iter()
        .zip(&fit.at_risk_at)
        .zip(&fit.deaths_at)
    {
        println!("{t:>4}  {y:>7}  {d:>6}  {:.4}", fit.survival.eval(*t));
    }

    let tau = 8.0;
    println!("\nRMST({tau}) = {:.4}", rmst(&fit, tau)?);
    println!("F({tau})    = {:.4}", cumulative_incidence(&fit, tau)?);
    let cumhaz: f64 = hazard_increments(&fit, tau).iter().map(|(_, dh)| dh).sum();
    println!(
        "H({tau})    = {cumhaz:.4}  (-log S = {:.4})",
        -fit.survival.eval(tau).ln()
    );
    Ok(())
}
