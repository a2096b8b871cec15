//! Exhaustive sweep over every pattern of at most two failed paths, plus a
//! three-failure pattern that exceeds the budget.
//!
//! ```bash
//! cargo run -p nps2 --example failure_sweep
//! ```

use nps2::{FailurePattern, Scheme, SimConfig, Simulator};

fn main() -> nps2::Result<()> {
    for scheme in [Scheme::Nps2I, Scheme::Nps2II] {
        for n in [4, 6, 8, 10] {
            let sim = Simulator::new(SimConfig::new(scheme, n))?;
            let report = sim.sweep(2, 42)?;
            println!(
                "{scheme:7} n={n:2}: {:3}/{:3} complete, {:4} recovered, sessions by scenario {:?}",
                report.complete, report.total, report.recovered_total, report.scenario_histogram
            );
        }
    }

    let sim = Simulator::new(SimConfig::new(Scheme::Nps2II, 6))?;
    let data = sim.generate_data(1, 42);
    let r = sim.run_session(0, &FailurePattern::new([1, 2, 3]), &data)?;
    println!("\nthree failures: {}", serde_json::to_string_pretty(&r.outcome)?);
    Ok(())
}
