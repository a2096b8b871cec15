//! NPS2-I: two paths carry protection for a whole session. Walks through the
//! three two-failure cases: both protection paths, one of each, two working
//! paths.
//!
//! ```bash
//! cargo run -p nps2 --example dedicated_protection_paths
//! ```

use nps2::{FailurePattern, Scheme, SimConfig, Simulator};

fn main() -> nps2::Result<()> {
    let sim = Simulator::new(SimConfig::new(Scheme::Nps2I, 6))?;
    let session = 0;
    let schedule = sim.schedule(session);
    print!("{}", schedule.render_text());
    let (j, k) = schedule.protection_paths().unwrap();
    println!("protection paths this session: {j} (sum) and {k} (weighted)\n");

    let data = sim.generate_data(1, 2024);
    for failed in [[j, k], [k, 4], [3, 5]] {
        let r = sim.run_session(session, &FailurePattern::new(failed), &data)?;
        println!(
            "failed {:?}: {} | recovered {:>2} symbols | capacity {} | {:?}",
            failed,
            r.worst_scenario(),
            r.recovered_count,
            r.normalized_capacity,
            r.outcome
        );
    }

    // the dedicated pair moves between sessions
    for s in 0..4 {
        println!("session {s}: protection on {:?}", sim.schedule(s).protection_paths().unwrap());
    }
    Ok(())
}
