//! Session schedules: which path carries which symbol in every round.
//!
//! Paths, sources and rounds are 1-based; sessions are 0-based. Source `i`
//! always transmits on path `i`.
//!
//! * NPS2-I dedicates two paths to protection for a whole session of `n`
//!   rounds. Every other path sends one fresh data unit per round.
//! * NPS2-II runs `n/2` rounds; in round `l` paths `2l-1` and `2l` carry the
//!   protection symbols and every other path sends its next data unit.
//!
//! In both schemes the first protection path of a round carries the sum row
//! and the second the weighted row.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScheduleError {
    #[error("{scheme} needs at least {min} paths, got {n}")]
    TooFewPaths { scheme: Scheme, n: usize, min: usize },
    #[error("NPS2-II assumes an even number of paths, got {0}")]
    OddPathCount(usize),
    #[error("round {round} outside 1..={rounds}")]
    RoundOutOfRange { round: usize, rounds: usize },
    #[error("a session needs at least one round")]
    NoRounds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scheme {
    /// Two dedicated protection paths per session.
    #[serde(rename = "nps2-i")]
    Nps2I,
    /// Protection rotating over path pairs, one pair per round.
    #[serde(rename = "nps2-ii")]
    Nps2II,
}

impl Scheme {
    pub fn min_paths(self) -> usize {
        match self {
            Scheme::Nps2I => 3,
            Scheme::Nps2II => 4,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Nps2I => "nps2-i",
            Scheme::Nps2II => "nps2-ii",
        })
    }
}

impl std::str::FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "nps2-i" | "nps2i" | "i" => Ok(Scheme::Nps2I),
            "nps2-ii" | "nps2ii" | "ii" => Ok(Scheme::Nps2II),
            other => Err(format!("unknown scheme `{other}` (expected nps2-i or nps2-ii)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlotKind {
    Working,
    ProtectionSum,
    ProtectionWeighted,
}

impl SlotKind {
    pub fn is_protection(self) -> bool {
        !matches!(self, SlotKind::Working)
    }
}

impl fmt::Display for SlotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SlotKind::Working => "working",
            SlotKind::ProtectionSum => "protection_sum",
            SlotKind::ProtectionWeighted => "protection_weighted",
        })
    }
}

/// What a path sends in one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Slot {
    /// The source's own data unit `x^data_index`.
    Working { data_index: usize },
    ProtectionSum,
    ProtectionWeighted,
}

impl Slot {
    pub fn kind(self) -> SlotKind {
        match self {
            Slot::Working { .. } => SlotKind::Working,
            Slot::ProtectionSum => SlotKind::ProtectionSum,
            Slot::ProtectionWeighted => SlotKind::ProtectionWeighted,
        }
    }

    pub fn data_index(self) -> Option<usize> {
        match self {
            Slot::Working { data_index } => Some(data_index),
            _ => None,
        }
    }
}

/// A working slot as seen by the protection encoder: its path, the source
/// feeding it and the data unit it carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProtectedSlot {
    pub path: usize,
    pub source: usize,
    pub data_index: usize,
}

/// `(source, data_index)` identifying one data unit within a session.
pub type DataUnit = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionSchedule {
    scheme: Scheme,
    n: usize,
    session: u64,
    // grid[round - 1][path - 1]
    grid: Vec<Vec<Slot>>,
    protection_paths: Option<(usize, usize)>,
}

/// NPS2-I schedule with the default session length of `n` rounds.
pub fn nps2i_schedule(n: usize, session: u64) -> Result<SessionSchedule, ScheduleError> {
    nps2i_schedule_with_rounds(n, session, n)
}

/// NPS2-I schedule. Session `s` protects on paths `(2s mod n) + 1` (sum row)
/// and `((2s + 1) mod n) + 1` (weighted row).
pub fn nps2i_schedule_with_rounds(
    n: usize,
    session: u64,
    rounds: usize,
) -> Result<SessionSchedule, ScheduleError> {
    if n < Scheme::Nps2I.min_paths() {
        return Err(ScheduleError::TooFewPaths {
            scheme: Scheme::Nps2I,
            n,
            min: Scheme::Nps2I.min_paths(),
        });
    }
    if rounds == 0 {
        return Err(ScheduleError::NoRounds);
    }
    let nn = n as u64;
    let j = ((2 * session) % nn) as usize + 1;
    let k = ((2 * session + 1) % nn) as usize + 1;
    let grid = (1..=rounds)
        .map(|round| {
            (1..=n)
                .map(|path| match path {
                    p if p == j => Slot::ProtectionSum,
                    p if p == k => Slot::ProtectionWeighted,
                    _ => Slot::Working { data_index: round },
                })
                .collect()
        })
        .collect();
    Ok(SessionSchedule {
        scheme: Scheme::Nps2I,
        n,
        session,
        grid,
        protection_paths: Some((j, k)),
    })
}

/// NPS2-II schedule for an even `n >= 4`; `n/2` rounds. Every session has the
/// same layout.
pub fn nps2ii_schedule(n: usize) -> Result<SessionSchedule, ScheduleError> {
    nps2ii_schedule_for_session(n, 0)
}

pub fn nps2ii_schedule_for_session(n: usize, session: u64) -> Result<SessionSchedule, ScheduleError> {
    if n % 2 == 1 {
        return Err(ScheduleError::OddPathCount(n));
    }
    if n < Scheme::Nps2II.min_paths() {
        return Err(ScheduleError::TooFewPaths {
            scheme: Scheme::Nps2II,
            n,
            min: Scheme::Nps2II.min_paths(),
        });
    }
    let rounds = n / 2;
    let grid = (1..=rounds)
        .map(|round| {
            (1..=n)
                .map(|path| {
                    let protection_round = path.div_ceil(2);
                    if round == protection_round {
                        if path % 2 == 1 {
                            Slot::ProtectionSum
                        } else {
                            Slot::ProtectionWeighted
                        }
                    } else if round < protection_round {
                        Slot::Working { data_index: round }
                    } else {
                        Slot::Working { data_index: round - 1 }
                    }
                })
                .collect()
        })
        .collect();
    Ok(SessionSchedule {
        scheme: Scheme::Nps2II,
        n,
        session,
        grid,
        protection_paths: None,
    })
}

/// Builds the schedule for `scheme`; `rounds` only applies to NPS2-I.
pub fn schedule_for(
    scheme: Scheme,
    n: usize,
    session: u64,
    rounds: Option<usize>,
) -> Result<SessionSchedule, ScheduleError> {
    match scheme {
        Scheme::Nps2I => nps2i_schedule_with_rounds(n, session, rounds.unwrap_or(n)),
        Scheme::Nps2II => nps2ii_schedule_for_session(n, session),
    }
}

impl SessionSchedule {
    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn session(&self) -> u64 {
        self.session
    }

    pub fn rounds(&self) -> usize {
        self.grid.len()
    }

    /// Protected slots per round, `n - 2`.
    pub fn width(&self) -> usize {
        self.n - 2
    }

    /// The dedicated NPS2-I pair `(sum path, weighted path)`.
    pub fn protection_paths(&self) -> Option<(usize, usize)> {
        self.protection_paths
    }

    pub fn grid(&self) -> &[Vec<Slot>] {
        &self.grid
    }

    fn check_round(&self, round: usize) -> Result<(), ScheduleError> {
        if (1..=self.rounds()).contains(&round) {
            Ok(())
        } else {
            Err(ScheduleError::RoundOutOfRange {
                round,
                rounds: self.rounds(),
            })
        }
    }

    /// Slot of a 1-based `(round, path)`.
    pub fn slot(&self, round: usize, path: usize) -> Result<Slot, ScheduleError> {
        self.check_round(round)?;
        assert!((1..=self.n).contains(&path), "path {path} outside 1..={}", self.n);
        Ok(self.grid[round - 1][path - 1])
    }

    /// `(sum path, weighted path)` for the round.
    pub fn protection_slots(&self, round: usize) -> Result<(usize, usize), ScheduleError> {
        self.check_round(round)?;
        let row = &self.grid[round - 1];
        let find = |kind| row.iter().position(|s| s.kind() == kind).map(|p| p + 1);
        Ok((
            find(SlotKind::ProtectionSum).expect("every round has a sum slot"),
            find(SlotKind::ProtectionWeighted).expect("every round has a weighted slot"),
        ))
    }

    /// Working slots of the round in ascending path order. The position in
    /// this list is the column rank used by the coefficient rows.
    pub fn protected_slots(&self, round: usize) -> Result<Vec<ProtectedSlot>, ScheduleError> {
        self.check_round(round)?;
        Ok(self.grid[round - 1]
            .iter()
            .enumerate()
            .filter_map(|(p, slot)| {
                slot.data_index().map(|data_index| ProtectedSlot {
                    path: p + 1,
                    source: p + 1,
                    data_index,
                })
            })
            .collect())
    }

    /// Every data unit the session carries, ordered by source then index.
    pub fn data_units(&self) -> Vec<DataUnit> {
        let mut units: Vec<DataUnit> = self
            .grid
            .iter()
            .flat_map(|row| {
                row.iter()
                    .enumerate()
                    .filter_map(|(p, s)| s.data_index().map(|d| (p + 1, d)))
            })
            .collect();
        units.sort_unstable();
        units
    }

    /// Largest data index any source uses.
    pub fn max_data_index(&self) -> usize {
        self.grid
            .iter()
            .flatten()
            .filter_map(|s| s.data_index())
            .max()
            .unwrap_or(0)
    }

    pub fn working_slot_count(&self) -> usize {
        self.grid
            .iter()
            .flatten()
            .filter(|s| s.kind() == SlotKind::Working)
            .count()
    }

    /// Working slots over all path-slots of the session, `(n - 2) / n`.
    pub fn capacity(&self) -> Ratio<u64> {
        Ratio::new(
            self.working_slot_count() as u64,
            (self.n * self.rounds()) as u64,
        )
    }

    /// Text matrix, one row per connection and one column per round, with
    /// `x_i^d` for data and `y_i^r` for protection symbols.
    pub fn render_text(&self) -> String {
        let labels = self.labels();
        let head = format!("{} session {}", self.scheme, self.session);
        let col_w = labels
            .iter()
            .flatten()
            .map(String::len)
            .chain((1..=self.rounds()).map(|r| r.to_string().len()))
            .max()
            .unwrap_or(1);
        let path_w = format!("s{0} -> r{0}", self.n).len();

        let mut out = format!("{head}\n{:path_w$} |", "");
        for r in 1..=self.rounds() {
            out.push_str(&format!(" {r:>col_w$}"));
        }
        out.push('\n');
        for (p, row) in labels.iter().enumerate() {
            let name = format!("s{0} -> r{0}", p + 1);
            out.push_str(&format!("{name:path_w$} |"));
            for l in row {
                out.push_str(&format!(" {l:>col_w$}"));
            }
            out.push('\n');
        }
        out
    }

    /// `labels()[path - 1][round - 1]`.
    pub fn labels(&self) -> Vec<Vec<String>> {
        (1..=self.n)
            .map(|path| {
                (1..=self.rounds())
                    .map(|round| match self.grid[round - 1][path - 1] {
                        Slot::Working { data_index } => format!("x_{path}^{data_index}"),
                        _ => format!("y_{path}^{round}"),
                    })
                    .collect()
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "scheme": self.scheme,
            "n": self.n,
            "session": self.session,
            "rounds": self.rounds(),
            "protection_paths": self.protection_paths.map(|(j, k)| [j, k]),
            "rows": self.labels(),
        })
    }
}

/// Normalized capacity of a schedule.
pub fn schedule_capacity(schedule: &SessionSchedule) -> Ratio<u64> {
    schedule.capacity()
}

/// Writes `r` as a fraction over `denom` when that is exact, e.g. `3/4` over
/// 8 becomes `6/8`; otherwise the reduced form.
pub fn format_ratio_over(r: Ratio<u64>, denom: u64) -> String {
    if denom > 0 && denom.is_multiple_of(*r.denom()) {
        format!("{}/{}", r.numer() * (denom / r.denom()), denom)
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn nps2i_n4_session0() {
        let s = nps2i_schedule(4, 0).unwrap();
        assert_eq!(s.protection_paths(), Some((1, 2)));
        assert_eq!(s.rounds(), 4);
        for r in 1..=4 {
            assert_eq!(s.slot(r, 1).unwrap(), Slot::ProtectionSum);
            assert_eq!(s.slot(r, 2).unwrap(), Slot::ProtectionWeighted);
            assert_eq!(s.slot(r, 3).unwrap(), Slot::Working { data_index: r });
            assert_eq!(s.slot(r, 4).unwrap(), Slot::Working { data_index: r });
        }
    }

    #[test]
    fn nps2i_pairs_rotate() {
        let pairs: Vec<_> = (0..3)
            .map(|s| nps2i_schedule(4, s).unwrap().protection_paths().unwrap())
            .collect();
        assert_eq!(pairs, vec![(1, 2), (3, 4), (1, 2)]);
        // odd n wraps across the end
        assert_eq!(nps2i_schedule(5, 2).unwrap().protection_paths(), Some((5, 1)));
    }

    #[test]
    fn nps2i_minimal_n() {
        for session in 0..4 {
            let s = nps2i_schedule(3, session).unwrap();
            assert_eq!(s.width(), 1);
            for r in 1..=3 {
                assert_eq!(s.protected_slots(r).unwrap().len(), 1);
            }
        }
        assert!(matches!(nps2i_schedule(2, 0), Err(ScheduleError::TooFewPaths { .. })));
        assert_eq!(nps2i_schedule_with_rounds(4, 0, 0), Err(ScheduleError::NoRounds));
    }

    #[test]
    fn nps2ii_n4_layout() {
        let s = nps2ii_schedule(4).unwrap();
        assert_eq!(s.rounds(), 2);
        assert_eq!(s.protection_slots(1).unwrap(), (1, 2));
        assert_eq!(s.protection_slots(2).unwrap(), (3, 4));
        assert_eq!(s.slot(1, 1).unwrap(), Slot::ProtectionSum);
        assert_eq!(s.slot(2, 1).unwrap(), Slot::Working { data_index: 1 });
        assert_eq!(s.slot(1, 3).unwrap(), Slot::Working { data_index: 1 });
        assert_eq!(s.slot(2, 3).unwrap(), Slot::ProtectionSum);
        let ps = |path, data_index| ProtectedSlot { path, source: path, data_index };
        assert_eq!(s.protected_slots(1).unwrap(), vec![ps(3, 1), ps(4, 1)]);
        assert_eq!(s.protected_slots(2).unwrap(), vec![ps(1, 1), ps(2, 1)]);
        assert!(matches!(s.protected_slots(3), Err(ScheduleError::RoundOutOfRange { .. })));
    }

    #[test]
    fn nps2ii_n6_path5() {
        let s = nps2ii_schedule(6).unwrap();
        let row: Vec<_> = (1..=3).map(|r| s.slot(r, 5).unwrap()).collect();
        assert_eq!(
            row,
            vec![
                Slot::Working { data_index: 1 },
                Slot::Working { data_index: 2 },
                Slot::ProtectionSum
            ]
        );
    }

    #[test]
    fn nps2ii_rejects_odd_and_small() {
        assert_eq!(nps2ii_schedule(7), Err(ScheduleError::OddPathCount(7)));
        assert!(matches!(nps2ii_schedule(2), Err(ScheduleError::TooFewPaths { .. })));
    }

    #[test]
    fn nps2i_working_set_is_constant() {
        // session 4 of n = 5 protects on (8 mod 5) + 1 = 4 and (9 mod 5) + 1 = 5
        let s = nps2i_schedule(5, 4).unwrap();
        assert_eq!(s.protection_paths(), Some((4, 5)));
        for r in 1..=5 {
            let got: Vec<_> = s
                .protected_slots(r)
                .unwrap()
                .iter()
                .map(|p| (p.path, p.source, p.data_index))
                .collect();
            assert_eq!(got, vec![(1, 1, r), (2, 2, r), (3, 3, r)]);
        }
    }

    #[test]
    fn capacity_examples() {
        assert_eq!(schedule_capacity(&nps2i_schedule(10, 0).unwrap()), Ratio::new(8, 10));
        assert_eq!(schedule_capacity(&nps2ii_schedule(10).unwrap()), Ratio::new(8, 10));
        let c = schedule_capacity(&nps2ii_schedule(4).unwrap());
        assert_eq!(c, Ratio::new(2 * 2, 4 * 2));
        assert_eq!(c, Ratio::new(1, 2));
        assert_eq!(schedule_capacity(&nps2i_schedule(3, 0).unwrap()), Ratio::new(1, 3));
        assert_eq!(format_ratio_over(Ratio::new(6, 8), 8), "6/8");
        assert_eq!(format_ratio_over(Ratio::new(1, 3), 8), "1/3");
    }

    #[test]
    fn nps2ii_fairness_and_completeness() {
        for n in (4..=20).step_by(2) {
            let s = nps2ii_schedule(n).unwrap();
            for path in 1..=n {
                let prot = (1..=s.rounds())
                    .filter(|&r| s.slot(r, path).unwrap().kind().is_protection())
                    .count();
                assert_eq!(prot, 1, "n={n} path={path}");
            }
            let units = s.data_units();
            let expect: Vec<_> = (1..=n).flat_map(|i| (1..n / 2).map(move |d| (i, d))).collect();
            assert_eq!(units, expect);
            assert_eq!(units.iter().collect::<BTreeSet<_>>().len(), units.len());
        }
    }

    #[test]
    fn nps2ii_protected_slots_follow_rotation() {
        for n in (4..=16).step_by(2) {
            let s = nps2ii_schedule(n).unwrap();
            for l in 1..=n / 2 {
                for p in s.protected_slots(l).unwrap() {
                    if p.source <= 2 * (l - 1) {
                        assert_eq!(p.data_index, l - 1);
                    } else {
                        assert!(p.source > 2 * l);
                        assert_eq!(p.data_index, l);
                    }
                }
            }
        }
    }

    #[test]
    fn render_matches_layout() {
        let s = nps2ii_schedule(4).unwrap();
        let labels = s.labels();
        assert_eq!(labels[0], vec!["y_1^1", "x_1^1"]);
        assert_eq!(labels[1], vec!["y_2^1", "x_2^1"]);
        assert_eq!(labels[2], vec!["x_3^1", "y_3^2"]);
        let text = s.render_text();
        assert!(text.contains("s1 -> r1 | y_1^1 x_1^1"), "{text}");
        assert!(text.contains("s3 -> r3 | x_3^1 y_3^2"), "{text}");
        let json = s.to_json();
        assert_eq!(json["rows"][0][0], "y_1^1");
        assert_eq!(json["scheme"], "nps2-ii");
    }

    #[test]
    fn scheme_parsing() {
        assert_eq!("nps2-i".parse::<Scheme>().unwrap(), Scheme::Nps2I);
        assert_eq!("NPS2-II".parse::<Scheme>().unwrap(), Scheme::Nps2II);
        assert!("nps3".parse::<Scheme>().is_err());
    }
}
