//! Run a short experiment through the CLI layer and write the JSON report and
//! packet trace to a temporary directory.
//!
//! ```bash
//! cargo run -p nps2 --example packet_trace
//! ```

use nps2::cli::{self, FailureSpec, RunConfig};
use nps2::Scheme;

fn main() -> nps2::Result<()> {
    let dir = std::env::temp_dir().join("nps2-packet-trace");
    std::fs::create_dir_all(&dir).map_err(|source| nps2::Error::Io { path: dir.clone(), source })?;

    let config = RunConfig {
        scheme: Scheme::Nps2II,
        n: 4,
        sessions: 2,
        failure: FailureSpec::Paths(vec![2, 3]),
        seed: 7,
        trace: Some(dir.join("trace.jsonl")),
        report: Some(dir.join("report.json")),
        ..RunConfig::default()
    };
    let ok = cli::run(&config, &mut std::io::stdout())?;
    println!("success: {ok}");

    let trace = std::fs::read_to_string(config.trace.as_ref().unwrap())
        .map_err(|source| nps2::Error::Io { path: dir.join("trace.jsonl"), source })?;
    for line in trace.lines().take(6) {
        println!("{line}");
    }
    println!("... written to {}", dir.display());
    Ok(())
}
