//! Monte Carlo bias and coverage study from a bundled scenario file.
//!
//! `cargo run --release --example simulate -- [scenario.toml] [replicates]`

use stratah::io::render_simulation_table;
use stratah::sim::{run_simulation, SimScenario};

fn main() -> stratah::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| {
        concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/scenarios/paper_pattern1_n1400.toml"
        )
        .into()
    });
    let mut scenario = SimScenario::from_file(&path)?;
    scenario.replications = args.next().and_then(|r| r.parse().ok()).unwrap_or(500);

    let result = run_simulation(&scenario)?;
    print!("{}", render_simulation_table(&result, 100.0));
    let tau = result.taus[1].tau;
    let d = &result.taus[1].duality;
    println!(
        "tau={tau}: {} difference and {} ratio tests disagree with their intervals",
        d.difference_discordant, d.ratio_discordant
    );
    Ok(())
}
