//! Average hazard of a single sample with its log-scale and natural-scale
//! standard errors.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stratah::normal::two_sided_critical;
use stratah::sim::WeibullParams;
use stratah::survival::{stratum_ah, Observation};

fn main() -> stratah::Result<()> {
    let event = WeibullParams::new(1.46, 55.87)?;
    let censor = WeibullParams::new(8.21, 47.79)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let sample: Vec<Observation> = (0..460)
        .map(|_| {
            let (t, c) = (event.sample(&mut rng), censor.sample(&mut rng));
            Observation::new(t.min(c), t <= c)
        })
        .collect();

    let tau = 48.0;
    let est = stratum_ah(&sample, tau)?;
    let z = two_sided_critical(0.05);
    println!("n = {}, events before tau = {}", est.n, est.events);
    println!("F(tau) = {:.4}, R(tau) = {:.3}", est.f_hat, est.r_hat);
    println!(
        "AH = {:.3} per 100 (95% CI {:.3} to {:.3}); truth {:.3}",
        100.0 * est.eta_hat,
        100.0 * est.eta_hat * (-z * est.se_log()).exp(),
        100.0 * est.eta_hat * (z * est.se_log()).exp(),
        100.0 * event.average_hazard(tau)
    );
    println!(
        "se(log AH) = {:.4}, se(AH) = {:.5}",
        est.se_log(),
        est.se_natural()
    );
    Ok(())
}
