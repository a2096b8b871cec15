//! Single-failure protection over GF(2): only the parity row is sent, the
//! weighted slot stays idle.
//!
//! ```bash
//! cargo run -p nps2 --example binary_parity
//! ```

use nps2::{CodingMode, FailurePattern, FieldSpec, Scheme, SimConfig, Simulator};

fn main() -> nps2::Result<()> {
    let cfg = SimConfig::new(Scheme::Nps2II, 8)
        .with_field(FieldSpec::binary())
        .with_mode(CodingMode::SumOnly);
    let sim = Simulator::new(cfg)?;
    let data = sim.generate_data(1, 1);

    for path in 1..=8 {
        let r = sim.run_session(0, &FailurePattern::new([path]), &data)?;
        println!("path {path} down: {:?}, recovered {}", r.outcome, r.recovered_count);
    }

    // Two failures are beyond a single parity row.
    let r = sim.run_session(0, &FailurePattern::new([3, 5]), &data)?;
    println!("paths 3,5 down: complete = {}", r.outcome.is_complete());

    // Dual rows need at least GF(2^m) with 2^m - 1 >= n - 2.
    let err = Simulator::new(SimConfig::new(Scheme::Nps2II, 8).with_field(FieldSpec::binary()))
        .unwrap_err();
    println!("dual rows over GF(2): {err}");
    Ok(())
}
