//! Discrete-round session engine.
//!
//! Sources hand their data to an ideal distributor that fills the protection
//! slots of each round. Failed paths drop every packet for the whole session
//! (fail-stop); the collector sees only the survivors, works out per round
//! which slots are missing, and solves for the lost data units.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Ratio;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codec::{CodecError, CoefficientRows, RecoveryProblem, Row};
use crate::field::{FieldElement, FieldSpec};
use crate::schemes::{
    format_ratio_over, schedule_for, DataUnit, Scheme, SessionSchedule, Slot, SlotKind,
};
use crate::{Error, Result};

/// Which protection rows are transmitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CodingMode {
    /// Sum and weighted rows; any two failures are recoverable.
    #[default]
    Dual,
    /// Sum row only. The weighted slot stays idle; a single failure is
    /// recoverable, in any field including GF(2).
    SumOnly,
}

impl std::str::FromStr for CodingMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dual" => Ok(CodingMode::Dual),
            "sum-only" | "sum_only" => Ok(CodingMode::SumOnly),
            other => Err(format!("unknown coding mode `{other}` (expected dual or sum-only)")),
        }
    }
}

/// Source data for a run: `x_i^d` for every session, source and data index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceData {
    n: usize,
    per_source: usize,
    sessions: usize,
    values: Vec<FieldElement>,
}

impl SourceData {
    pub fn zeros(n: usize, per_source: usize, sessions: usize) -> Self {
        SourceData {
            n,
            per_source,
            sessions,
            values: vec![FieldElement::ZERO; n * per_source * sessions],
        }
    }

    pub fn from_fn(
        n: usize,
        per_source: usize,
        sessions: usize,
        mut f: impl FnMut(u64, usize, usize) -> FieldElement,
    ) -> Self {
        let mut values = Vec::with_capacity(n * per_source * sessions);
        for s in 0..sessions {
            for i in 1..=n {
                for d in 1..=per_source {
                    values.push(f(s as u64, i, d));
                }
            }
        }
        SourceData {
            n,
            per_source,
            sessions,
            values,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn per_source(&self) -> usize {
        self.per_source
    }

    pub fn sessions(&self) -> usize {
        self.sessions
    }

    /// `x_source^data_index` in `session`. Panics outside the generated range.
    pub fn get(&self, session: u64, source: usize, data_index: usize) -> FieldElement {
        assert!(
            (session as usize) < self.sessions
                && (1..=self.n).contains(&source)
                && (1..=self.per_source).contains(&data_index),
            "no data for session {session} source {source} index {data_index}"
        );
        let idx = (session as usize * self.n + source - 1) * self.per_source + data_index - 1;
        self.values[idx]
    }
}

/// Uniform pseudo-random symbols from a ChaCha8 stream seeded with `seed`.
pub fn generate_source_data(
    field: &FieldSpec,
    n: usize,
    per_source: usize,
    sessions: usize,
    seed: u64,
) -> SourceData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = field.order();
    SourceData::from_fn(n, per_source, sessions, |_, _, _| {
        FieldElement::from_raw(rng.gen_range(0..q) as u16)
    })
}

/// One transmission on one path in one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Packet {
    pub session: u64,
    pub round: usize,
    pub sender: usize,
    pub path: usize,
    pub kind: SlotKind,
    pub payload: FieldElement,
}

/// JSON-lines form of a [`Packet`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub session: u64,
    pub round: usize,
    pub sender: usize,
    pub path: usize,
    pub kind: SlotKind,
    pub payload_hex: String,
}

impl Packet {
    pub fn trace_record(&self, field: &FieldSpec) -> TraceRecord {
        TraceRecord {
            session: self.session,
            round: self.round,
            sender: self.sender,
            path: self.path,
            kind: self.kind,
            payload_hex: field.to_hex(self.payload),
        }
    }
}

/// Paths failed for an entire session.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FailurePattern {
    failed: BTreeSet<usize>,
}

impl FailurePattern {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn new(paths: impl IntoIterator<Item = usize>) -> Self {
        FailurePattern {
            failed: paths.into_iter().collect(),
        }
    }

    /// `k` distinct paths of `1..=n`.
    pub fn random(n: usize, k: usize, rng: &mut impl Rng) -> Self {
        Self::new(sample(rng, n, k.min(n)).into_iter().map(|p| p + 1))
    }

    /// The empty pattern, every single failure and every pair, in that order.
    pub fn up_to_two(n: usize) -> Vec<FailurePattern> {
        let mut out = vec![Self::none()];
        out.extend((1..=n).map(|p| Self::new([p])));
        for a in 1..=n {
            out.extend((a + 1..=n).map(|b| Self::new([a, b])));
        }
        out
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match self.failed.iter().find(|&&p| p == 0 || p > n) {
            Some(&path) => Err(Error::PathOutOfRange { path, n }),
            None => Ok(()),
        }
    }

    pub fn contains(&self, path: usize) -> bool {
        self.failed.contains(&path)
    }

    pub fn paths(&self) -> impl Iterator<Item = usize> + '_ {
        self.failed.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.failed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.failed.is_empty()
    }
}

impl fmt::Display for FailurePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.failed.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

/// Capacity indicators `c_i`: 1 for an active path, 0 for a failed one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathState {
    active: Vec<bool>,
}

impl PathState {
    pub fn new(n: usize, failure: &FailurePattern) -> Self {
        PathState {
            active: (1..=n).map(|p| !failure.contains(p)).collect(),
        }
    }

    pub fn capacity(&self, path: usize) -> u8 {
        u8::from(self.active[path - 1])
    }

    pub fn is_active(&self, path: usize) -> bool {
        self.active[path - 1]
    }

    /// `(sum of c_i) / n`.
    pub fn normalized_capacity(&self) -> Ratio<u64> {
        let up = self.active.iter().filter(|&&a| a).count();
        Ratio::new(up as u64, self.active.len() as u64)
    }
}

/// What a round lost, ordered by how much recovery it needs.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// Nothing lost.
    Intact,
    /// Only protection slots lost; pass-through.
    ProtectionOnly,
    /// One working slot lost, both protection symbols intact.
    SingleWorking,
    /// One working and one protection slot lost.
    WorkingAndProtection,
    /// Two working slots lost.
    TwoWorking,
    /// More erasures than the two protection rows can cover.
    Overloaded,
}

impl Scenario {
    pub fn classify(working_lost: usize, protection_lost: usize) -> Self {
        match (working_lost, protection_lost) {
            (0, 0) => Scenario::Intact,
            (0, _) => Scenario::ProtectionOnly,
            (1, 0) => Scenario::SingleWorking,
            (1, 1) => Scenario::WorkingAndProtection,
            (2, 0) => Scenario::TwoWorking,
            _ => Scenario::Overloaded,
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("plain enum");
        f.write_str(s.as_str().expect("string tag"))
    }
}

/// Collector view of one round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRecovery {
    pub round: usize,
    pub scenario: Scenario,
    /// Units taken straight off a surviving working packet.
    pub direct: Vec<(DataUnit, FieldElement)>,
    /// Units rebuilt from protection symbols.
    pub recovered: Vec<(DataUnit, FieldElement)>,
}

/// Why a round could not be recovered.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundFailure {
    pub round: usize,
    pub scenario: Scenario,
    pub lost_paths: Vec<usize>,
    pub missing: usize,
    pub available: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum UnrecoverableDetail {
    /// Some rounds had more unknowns than surviving protection symbols.
    TooManyErasures { rounds: Vec<RoundFailure> },
    /// Recovery produced values that differ from what was sent.
    Mismatch { units: Vec<DataUnit> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Complete,
    Unrecoverable { detail: UnrecoverableDetail },
}

impl Outcome {
    pub fn is_complete(&self) -> bool {
        matches!(self, Outcome::Complete)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionResult {
    pub session: u64,
    pub failure: FailurePattern,
    /// Every unit the collector ended up with, direct or recovered.
    pub delivered: BTreeMap<DataUnit, FieldElement>,
    pub recovered_count: usize,
    /// Scenario of each round, round 1 first.
    pub scenarios: Vec<Scenario>,
    /// `(n - |failed|) / n`.
    pub normalized_capacity: Ratio<u64>,
    pub schedule_capacity: Ratio<u64>,
    pub outcome: Outcome,
    /// Surviving packets in (round, path) order.
    pub trace: Vec<Packet>,
}

impl SessionResult {
    /// The most demanding round scenario of the session.
    pub fn worst_scenario(&self) -> Scenario {
        self.scenarios.iter().copied().max().unwrap_or(Scenario::Intact)
    }
}

/// Engine parameters shared by every session of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimConfig {
    pub scheme: Scheme,
    pub n: usize,
    pub field: FieldSpec,
    pub mode: CodingMode,
    /// NPS2-I session length; `n` when unset. Ignored by NPS2-II.
    pub rounds: Option<usize>,
}

impl SimConfig {
    /// Dual rows in the default GF(2^8).
    pub fn new(scheme: Scheme, n: usize) -> Self {
        SimConfig {
            scheme,
            n,
            field: FieldSpec::default(),
            mode: CodingMode::Dual,
            rounds: None,
        }
    }

    pub fn with_field(mut self, field: FieldSpec) -> Self {
        self.field = field;
        self
    }

    pub fn with_mode(mut self, mode: CodingMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_rounds(mut self, rounds: usize) -> Self {
        self.rounds = Some(rounds);
        self
    }
}

/// Runs sessions for one configuration. Immutable once built, so it can be
/// shared across threads.
#[derive(Debug, Clone)]
pub struct Simulator {
    config: SimConfig,
    rows: CoefficientRows,
}

impl Simulator {
    pub fn new(config: SimConfig) -> Result<Self> {
        // Surfaces scheme/n errors before the field check.
        let probe = schedule_for(config.scheme, config.n, 0, config.rounds)?;
        let rows = match config.mode {
            CodingMode::Dual => CoefficientRows::build(probe.width(), &config.field)?,
            CodingMode::SumOnly => CoefficientRows::sum_only(probe.width())?,
        };
        Ok(Simulator { config, rows })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn field(&self) -> &FieldSpec {
        &self.config.field
    }

    pub fn rows(&self) -> &CoefficientRows {
        &self.rows
    }

    pub fn n(&self) -> usize {
        self.config.n
    }

    pub fn schedule(&self, session: u64) -> SessionSchedule {
        schedule_for(self.config.scheme, self.config.n, session, self.config.rounds)
            .expect("validated in Simulator::new")
    }

    /// Data units each source needs per session.
    pub fn data_per_source(&self) -> usize {
        self.schedule(0).max_data_index()
    }

    pub fn generate_data(&self, sessions: usize, seed: u64) -> SourceData {
        generate_source_data(
            self.field(),
            self.n(),
            self.data_per_source(),
            sessions,
            seed,
        )
    }

    fn transmits(&self, kind: SlotKind) -> bool {
        kind != SlotKind::ProtectionWeighted || self.rows.has_weighted()
    }

    /// The packets of one round that survive `failure`, in path order.
    pub fn transmit_round(
        &self,
        schedule: &SessionSchedule,
        round: usize,
        data: &SourceData,
        failure: &FailurePattern,
    ) -> Result<Vec<Packet>> {
        let field = self.field();
        let session = schedule.session();
        let protected = schedule.protected_slots(round)?;
        let symbols: Vec<_> = protected
            .iter()
            .map(|p| data.get(session, p.source, p.data_index))
            .collect();
        let y_sum = self.rows.encode_row(field, &symbols, Row::Sum)?;
        let y_weighted = if self.rows.has_weighted() {
            Some(self.rows.encode_row(field, &symbols, Row::Weighted)?)
        } else {
            None
        };

        let mut out = Vec::with_capacity(schedule.n());
        for path in 1..=schedule.n() {
            if failure.contains(path) {
                continue;
            }
            let slot = schedule.slot(round, path)?;
            let payload = match slot {
                Slot::Working { data_index } => data.get(session, path, data_index),
                Slot::ProtectionSum => y_sum,
                Slot::ProtectionWeighted => match y_weighted {
                    Some(y) => y,
                    None => continue,
                },
            };
            out.push(Packet {
                session,
                round,
                sender: path,
                path,
                kind: slot.kind(),
                payload,
            });
        }
        Ok(out)
    }

    /// Collector step for one round. Erasures are inferred from which
    /// expected packets are absent.
    pub fn recover_round(
        &self,
        schedule: &SessionSchedule,
        round: usize,
        packets: &[Packet],
    ) -> Result<std::result::Result<RoundRecovery, RoundFailure>> {
        let field = self.field();
        let mut by_path: BTreeMap<usize, &Packet> = BTreeMap::new();
        for p in packets {
            if p.round != round || p.session != schedule.session() {
                return Err(Error::ForeignPacket {
                    session: p.session,
                    round: p.round,
                });
            }
            if p.path == 0 || p.path > schedule.n() {
                return Err(Error::PathOutOfRange {
                    path: p.path,
                    n: schedule.n(),
                });
            }
            by_path.insert(p.path, p);
        }

        let (sum_path, weighted_path) = schedule.protection_slots(round)?;
        let protected = schedule.protected_slots(round)?;

        let mut known = Vec::new();
        let mut direct = Vec::new();
        let mut missing = Vec::new();
        for (rank, slot) in protected.iter().enumerate() {
            let unit = (slot.source, slot.data_index);
            match by_path.get(&slot.path) {
                Some(p) => {
                    known.push((rank, p.payload));
                    direct.push((unit, p.payload));
                }
                None => missing.push(rank),
            }
        }

        let sum_packet = by_path.get(&sum_path).map(|p| p.payload);
        let weighted_packet = if self.transmits(SlotKind::ProtectionWeighted) {
            by_path.get(&weighted_path).map(|p| p.payload)
        } else {
            None
        };
        let mut lost_paths: Vec<usize> = missing.iter().map(|&r| protected[r].path).collect();
        if sum_packet.is_none() {
            lost_paths.push(sum_path);
        }
        if self.transmits(SlotKind::ProtectionWeighted) && weighted_packet.is_none() {
            lost_paths.push(weighted_path);
        }
        lost_paths.sort_unstable();
        let protection_lost = lost_paths.len() - missing.len();
        let scenario = Scenario::classify(missing.len(), protection_lost);

        if missing.is_empty() {
            return Ok(Ok(RoundRecovery {
                round,
                scenario,
                direct,
                recovered: Vec::new(),
            }));
        }

        let residual = |y: Option<FieldElement>, row| {
            y.map(|y| self.rows.residualize(field, y, &known, row)).transpose()
        };
        let residual_sum = residual(sum_packet, Row::Sum)?;
        let residual_weighted = residual(weighted_packet, Row::Weighted)?;
        let available =
            usize::from(residual_sum.is_some()) + usize::from(residual_weighted.is_some());
        let fail = RoundFailure {
            round,
            scenario,
            lost_paths,
            missing: missing.len(),
            available,
        };
        if missing.len() > 2 {
            return Ok(Err(fail));
        }
        let problem = match RecoveryProblem::new(missing.clone(), residual_sum, residual_weighted) {
            Ok(p) => p,
            Err(CodecError::Unrecoverable { .. }) => return Ok(Err(fail)),
            Err(e) => return Err(e.into()),
        };
        let values = self.rows.solve(field, &problem)?;
        let recovered = problem
            .missing_ranks()
            .iter()
            .zip(values)
            .map(|(&rank, v)| ((protected[rank].source, protected[rank].data_index), v))
            .collect();
        Ok(Ok(RoundRecovery {
            round,
            scenario,
            direct,
            recovered,
        }))
    }

    /// Runs one session end to end and checks every delivered unit against
    /// the source data.
    pub fn run_session(
        &self,
        session: u64,
        failure: &FailurePattern,
        data: &SourceData,
    ) -> Result<SessionResult> {
        failure.validate(self.n())?;
        let schedule = self.schedule(session);
        let mut delivered = BTreeMap::new();
        let mut recovered_count = 0;
        let mut scenarios = Vec::with_capacity(schedule.rounds());
        let mut failed_rounds = Vec::new();
        let mut trace = Vec::new();

        for round in 1..=schedule.rounds() {
            let packets = self.transmit_round(&schedule, round, data, failure)?;
            match self.recover_round(&schedule, round, &packets)? {
                Ok(rec) => {
                    scenarios.push(rec.scenario);
                    recovered_count += rec.recovered.len();
                    delivered.extend(rec.direct);
                    delivered.extend(rec.recovered);
                }
                Err(fail) => {
                    scenarios.push(fail.scenario);
                    failed_rounds.push(fail);
                }
            }
            trace.extend(packets);
        }

        let outcome = if !failed_rounds.is_empty() {
            Outcome::Unrecoverable {
                detail: UnrecoverableDetail::TooManyErasures {
                    rounds: failed_rounds,
                },
            }
        } else {
            let wrong: Vec<_> = schedule
                .data_units()
                .into_iter()
                .filter(|&(i, d)| delivered.get(&(i, d)) != Some(&data.get(session, i, d)))
                .collect();
            if wrong.is_empty() {
                Outcome::Complete
            } else {
                Outcome::Unrecoverable {
                    detail: UnrecoverableDetail::Mismatch { units: wrong },
                }
            }
        };

        Ok(SessionResult {
            session,
            failure: failure.clone(),
            delivered,
            recovered_count,
            scenarios,
            normalized_capacity: PathState::new(self.n(), failure).normalized_capacity(),
            schedule_capacity: schedule.capacity(),
            outcome,
            trace,
        })
    }

    /// Every pattern of at most two failures, for each of `sessions`
    /// sessions, over data seeded with `seed`.
    pub fn sweep(&self, sessions: usize, seed: u64) -> Result<SweepReport> {
        let data = self.generate_data(sessions, seed);
        let patterns = FailurePattern::up_to_two(self.n());
        self.run_patterns(&patterns, &data)
    }

    /// Runs every pattern against every session of `data`. Sessions run in
    /// parallel; results keep (session, pattern) order.
    pub fn run_patterns(
        &self,
        patterns: &[FailurePattern],
        data: &SourceData,
    ) -> Result<SweepReport> {
        let jobs: Vec<(u64, &FailurePattern)> = (0..data.sessions() as u64)
            .flat_map(|s| patterns.iter().map(move |p| (s, p)))
            .collect();
        let results = jobs
            .par_iter()
            .map(|&(s, p)| self.run_session(s, p, data).map(|r| SessionSummary::from_result(&r, self.n())))
            .collect::<Result<Vec<_>>>()?;
        Ok(SweepReport::from_summaries(self, results))
    }
}

/// Serializable digest of a [`SessionResult`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionSummary {
    pub session: u64,
    pub failed_paths: FailurePattern,
    pub outcome: Outcome,
    pub recovered_count: usize,
    pub scenario: Scenario,
    pub round_scenarios: Vec<Scenario>,
    pub normalized_capacity: String,
}

impl SessionSummary {
    pub fn from_result(r: &SessionResult, n: usize) -> Self {
        SessionSummary {
            session: r.session,
            failed_paths: r.failure.clone(),
            outcome: r.outcome.clone(),
            recovered_count: r.recovered_count,
            scenario: r.worst_scenario(),
            round_scenarios: r.scenarios.clone(),
            normalized_capacity: format_ratio_over(r.normalized_capacity, n as u64),
        }
    }
}

/// Aggregate over many sessions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub scheme: Scheme,
    pub n: usize,
    pub total: usize,
    pub complete: usize,
    /// Complete sessions among those with at most two failures.
    pub complete_within_budget: usize,
    pub total_within_budget: usize,
    pub recovered_total: usize,
    /// Sessions per most demanding round scenario.
    pub scenario_histogram: BTreeMap<Scenario, usize>,
    /// Rounds per scenario.
    pub round_scenario_histogram: BTreeMap<Scenario, usize>,
    pub sessions: Vec<SessionSummary>,
}

impl SweepReport {
    pub fn from_summaries(sim: &Simulator, sessions: Vec<SessionSummary>) -> Self {
        let mut scenario_histogram = BTreeMap::new();
        let mut round_scenario_histogram = BTreeMap::new();
        for s in &sessions {
            *scenario_histogram.entry(s.scenario).or_default() += 1;
            for &r in &s.round_scenarios {
                *round_scenario_histogram.entry(r).or_default() += 1;
            }
        }
        let within: Vec<_> = sessions.iter().filter(|s| s.failed_paths.len() <= 2).collect();
        SweepReport {
            scheme: sim.config.scheme,
            n: sim.n(),
            total: sessions.len(),
            complete: sessions.iter().filter(|s| s.outcome.is_complete()).count(),
            complete_within_budget: within.iter().filter(|s| s.outcome.is_complete()).count(),
            total_within_budget: within.len(),
            recovered_total: sessions.iter().map(|s| s.recovered_count).sum(),
            scenario_histogram,
            round_scenario_histogram,
            sessions,
        }
    }

    /// Fraction of sessions that completed; 1.0 for an empty report.
    pub fn complete_rate(&self) -> f64 {
        if self.total == 0 {
            1.0
        } else {
            self.complete as f64 / self.total as f64
        }
    }

    pub fn all_complete(&self) -> bool {
        self.complete == self.total
    }
}
