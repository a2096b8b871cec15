//! Network-coded protection of `n` disjoint sender-to-receiver paths against
//! one or two persistent link failures per session.
//!
//! Two schemes are provided. NPS2-I dedicates two paths to protection for a
//! whole session; NPS2-II rotates the two protection slots over path pairs so
//! every path carries protection exactly once per session. Both reach a
//! normalized capacity of `(n - 2) / n`.
//!
//! The crate is layered bottom-up:
//!
//! * [`field`]: GF(2^m) arithmetic.
//! * [`codec`]: the two coefficient rows, protection symbols and the 1x1 / 2x2
//!   recovery solves.
//! * [`schemes`]: per-session slot schedules.
//! * [`simnet`]: the discrete-round session engine with fail-stop path
//!   failures, recovery and exhaustive failure sweeps.
//! * [`cli`]: configuration, report and trace output used by the `nps2`
//!   binary.
//!
//! ```
//! use nps2::{FailurePattern, Scheme, SimConfig, Simulator};
//!
//! let sim = Simulator::new(SimConfig::new(Scheme::Nps2II, 6)).unwrap();
//! let data = sim.generate_data(1, 7);
//! let result = sim.run_session(0, &FailurePattern::new([2, 5]), &data).unwrap();
//! assert!(result.outcome.is_complete());
//! assert_eq!(result.recovered_count, 4);
//! ```

pub mod cli;
pub mod codec;
pub mod field;
pub mod schemes;
pub mod simnet;

use std::path::PathBuf;

pub use codec::{CodecError, CoefficientRows, RecoveryProblem, Row};
pub use field::{FieldElement, FieldError, FieldSpec};
pub use schemes::{
    nps2i_schedule, nps2ii_schedule, schedule_capacity, ScheduleError, Scheme, SessionSchedule,
    Slot, SlotKind,
};
pub use simnet::{
    CodingMode, FailurePattern, Outcome, Packet, Scenario, SessionResult, SimConfig, Simulator,
    SourceData, SweepReport,
};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error("malformed hex value `{0}`")]
    MalformedHex(String),
    #[error("path {path} outside 1..={n}")]
    PathOutOfRange { path: usize, n: usize },
    #[error("packet for session {session} round {round} does not belong to this round")]
    ForeignPacket { session: u64, round: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
