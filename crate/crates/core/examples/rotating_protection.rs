//! NPS2-II: the protection slots rotate over path pairs so every path carries
//! protection exactly once per session.
//!
//! ```bash
//! cargo run -p nps2 --example rotating_protection -- 8
//! ```

use nps2::simnet::Scenario;
use nps2::{schedule_capacity, FailurePattern, Scheme, SimConfig, Simulator};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(6);
    let sim = Simulator::new(SimConfig::new(Scheme::Nps2II, n))?;
    let schedule = sim.schedule(0);
    print!("{}", schedule.render_text());
    println!("capacity {}\n", schedule_capacity(&schedule));

    for round in 1..=schedule.rounds() {
        let members: Vec<String> = schedule
            .protected_slots(round)?
            .iter()
            .map(|p| format!("x_{}^{}", p.source, p.data_index))
            .collect();
        let (sum, weighted) = schedule.protection_slots(round)?;
        println!("round {round}: y on paths {sum},{weighted} combine {}", members.join(" "));
    }

    let data = sim.generate_data(1, 5);
    let failure = FailurePattern::new([1, n - 1]);
    let r = sim.run_session(0, &failure, &data)?;
    println!("\nfailed paths {failure}:");
    for (round, s) in r.scenarios.iter().enumerate() {
        let note = match s {
            Scenario::ProtectionOnly => "nothing to recover",
            Scenario::WorkingAndProtection => "one unknown, one surviving protection symbol",
            Scenario::TwoWorking => "2x2 solve",
            _ => "",
        };
        println!("  round {}: {s} {note}", round + 1);
    }
    println!("outcome {:?}, {} symbols recovered", r.outcome, r.recovered_count);
    Ok(())
}
