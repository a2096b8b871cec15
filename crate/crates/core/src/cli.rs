//! Configuration, reports and traces for the `nps2` binary.
//!
//! Settings are resolved flags first, then the optional TOML config file, then
//! `NPS2_SEED` (seed only), then built-in defaults.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::codec::CodecError;
use crate::field::{default_poly, parse_hex, FieldParams, FieldSpec};
use crate::schemes::{format_ratio_over, Scheme};
use crate::simnet::{
    CodingMode, FailurePattern, SessionSummary, SimConfig, Simulator, SweepReport, TraceRecord,
};
use crate::{Error, Result};

pub const SEED_ENV: &str = "NPS2_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "nps2",
    version,
    about = "Simulate two-failure network protection over n disjoint paths"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Run sessions with the configured failure spec (default: exhaustive sweep).
    Run,
    /// Run every pattern of at most two failures.
    Sweep,
    /// Print the session schedule as a connection x round matrix.
    DumpSchedule,
    /// Print the coefficient rows as hex vectors.
    DumpRows,
}

#[derive(Debug, Default, Args)]
pub struct Options {
    /// TOML config file; flags override its values.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// nps2-i or nps2-ii.
    #[arg(long, global = true)]
    pub scheme: Option<Scheme>,
    /// Number of disjoint paths.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Field as `m=8,poly=0x11d,gen=0x2`; any key may be omitted.
    #[arg(long, global = true, value_name = "SPEC")]
    pub field: Option<String>,
    #[arg(long, global = true, value_name = "M")]
    pub field_m: Option<u32>,
    /// Reduction polynomial bitmask in hex.
    #[arg(long, global = true, value_name = "HEX")]
    pub field_poly: Option<String>,
    /// Primitive element in hex.
    #[arg(long, global = true, value_name = "HEX")]
    pub field_gen: Option<String>,
    /// Transmit only the sum row (single-failure protection, works over GF(2)).
    #[arg(long, global = true)]
    pub sum_only: bool,
    #[arg(long, global = true)]
    pub sessions: Option<usize>,
    /// NPS2-I session length (default n).
    #[arg(long, global = true)]
    pub rounds: Option<usize>,
    /// Comma-separated failed paths, e.g. `2,5`.
    #[arg(long, global = true, value_delimiter = ',', conflicts_with_all = ["fail_random", "sweep"])]
    pub fail: Option<Vec<usize>>,
    /// Fail k random paths per session.
    #[arg(long, global = true, value_name = "K", conflicts_with = "sweep")]
    pub fail_random: Option<usize>,
    /// Exhaustive sweep over all patterns of at most two failures.
    #[arg(long, global = true)]
    pub sweep: bool,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the surviving-packet trace as JSON lines.
    #[arg(long, global = true, value_name = "PATH")]
    pub trace: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub report: Option<PathBuf>,
    #[arg(long, global = true, conflicts_with = "dump_rows")]
    pub dump_schedule: bool,
    #[arg(long, global = true)]
    pub dump_rows: bool,
    /// JSON output for the dump commands.
    #[arg(long, global = true)]
    pub json: bool,
}

/// Contents of a `--config` file. Every key is optional.
#[derive(Debug, Default, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub scheme: Option<Scheme>,
    pub n: Option<usize>,
    pub field: Option<FieldFile>,
    pub mode: Option<CodingMode>,
    pub sessions: Option<usize>,
    pub rounds: Option<usize>,
    pub fail: Option<Vec<usize>>,
    pub fail_random: Option<usize>,
    pub sweep: Option<bool>,
    pub seed: Option<u64>,
    pub trace: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

#[derive(Debug, Default, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldFile {
    pub m: Option<u32>,
    pub reduction_poly: Option<String>,
    pub generator: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Action {
    Run,
    DumpSchedule,
    DumpRows,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureSpec {
    Paths(Vec<usize>),
    Random(usize),
    Sweep,
}

/// A validated run configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub action: Action,
    pub scheme: Scheme,
    pub n: usize,
    pub field: FieldSpec,
    pub mode: CodingMode,
    pub sessions: usize,
    pub rounds: Option<usize>,
    pub failure: FailureSpec,
    pub seed: u64,
    pub trace: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub json: bool,
}

impl RunConfig {
    pub fn sim_config(&self) -> SimConfig {
        SimConfig {
            scheme: self.scheme,
            n: self.n,
            field: self.field.clone(),
            mode: self.mode,
            rounds: self.rounds,
        }
    }

    pub fn simulator(&self) -> Result<Simulator> {
        Simulator::new(self.sim_config())
    }
}

impl Default for RunConfig {
    /// NPS2-II, n = 8, GF(2^8) with 0x11d and generator 2, one session,
    /// exhaustive sweep, seed 0.
    fn default() -> Self {
        RunConfig {
            action: Action::Run,
            scheme: Scheme::Nps2II,
            n: 8,
            field: FieldSpec::default(),
            mode: CodingMode::Dual,
            sessions: 1,
            rounds: None,
            failure: FailureSpec::Sweep,
            seed: 0,
            trace: None,
            report: None,
            json: false,
        }
    }
}

/// Parses argv (including the program name) and resolves it into a
/// validated [`RunConfig`]. `env_seed` is the value of `NPS2_SEED`, if set.
pub fn parse_config<I, T>(args: I, env_seed: Option<&str>) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::Config(e.to_string()))?;
    resolve(cli, env_seed)
}

fn parse_field_flag(spec: &str) -> Result<FieldFile> {
    let mut out = FieldFile::default();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("--field entry `{part}` is not key=value")))?;
        match key.trim() {
            "m" => {
                out.m = Some(value.trim().parse().map_err(|_| {
                    Error::Config(format!("--field m=`{value}` is not an integer"))
                })?)
            }
            "poly" | "reduction_poly" => out.reduction_poly = Some(value.trim().to_string()),
            "gen" | "generator" => out.generator = Some(value.trim().to_string()),
            other => return Err(Error::Config(format!("unknown --field key `{other}`"))),
        }
    }
    Ok(out)
}

/// Applies precedence and validation to parsed arguments.
pub fn resolve(cli: Cli, env_seed: Option<&str>) -> Result<RunConfig> {
    let o = cli.opts;
    let file = match &o.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            toml::from_str::<ConfigFile>(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        }
        None => ConfigFile::default(),
    };
    let defaults = RunConfig::default();

    let action = match (cli.command, o.dump_schedule, o.dump_rows) {
        (Some(Command::DumpSchedule), ..) | (_, true, _) => Action::DumpSchedule,
        (Some(Command::DumpRows), ..) | (_, _, true) => Action::DumpRows,
        _ => Action::Run,
    };

    let scheme = o.scheme.or(file.scheme).unwrap_or(defaults.scheme);
    let n = o.n.or(file.n).unwrap_or(defaults.n);

    let flag_field = o.field.as_deref().map(parse_field_flag).transpose()?.unwrap_or_default();
    let file_field = file.field.unwrap_or_default();
    let m = o.field_m.or(flag_field.m).or(file_field.m).unwrap_or(8);
    let poly = match o
        .field_poly
        .or(flag_field.reduction_poly)
        .or(file_field.reduction_poly)
    {
        Some(hex) => parse_hex(&hex)?,
        None => default_poly(m).ok_or_else(|| {
            Error::Config(format!("field degree m={m} outside 1..=16"))
        })?,
    };
    let generator = match o.field_gen.or(flag_field.generator).or(file_field.generator) {
        Some(hex) => parse_hex(&hex)?,
        None if m == 1 => 1,
        None => 2,
    };
    let field = FieldSpec::new(m, poly, generator)?;

    let mode = if o.sum_only {
        CodingMode::SumOnly
    } else {
        file.mode.unwrap_or_default()
    };

    let failure = if o.sweep || matches!(cli.command, Some(Command::Sweep)) {
        FailureSpec::Sweep
    } else if let Some(paths) = o.fail {
        FailureSpec::Paths(paths)
    } else if let Some(k) = o.fail_random {
        FailureSpec::Random(k)
    } else if file.sweep == Some(true) {
        FailureSpec::Sweep
    } else if let Some(paths) = file.fail {
        FailureSpec::Paths(paths)
    } else if let Some(k) = file.fail_random {
        FailureSpec::Random(k)
    } else {
        FailureSpec::Sweep
    };

    let seed = match o.seed.or(file.seed) {
        Some(s) => s,
        None => match env_seed {
            Some(v) => v
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("{SEED_ENV}=`{v}` is not a 64-bit integer")))?,
            None => defaults.seed,
        },
    };

    let config = RunConfig {
        action,
        scheme,
        n,
        field,
        mode,
        sessions: o.sessions.or(file.sessions).unwrap_or(defaults.sessions),
        rounds: o.rounds.or(file.rounds),
        failure,
        seed,
        trace: o.trace.or(file.trace),
        report: o.report.or(file.report),
        json: o.json,
    };
    validate(&config)?;
    Ok(config)
}

/// Checks scheme/n/field compatibility and the failure spec.
pub fn validate(config: &RunConfig) -> Result<()> {
    if config.sessions == 0 {
        return Err(Error::Config("sessions must be at least 1".into()));
    }
    match config.simulator() {
        Ok(_) => {}
        Err(Error::Codec(CodecError::FieldTooSmall { width, m, min_m })) => {
            let hint = if m == 1 { "; use --sum-only for GF(2)" } else { "" };
            return Err(Error::Config(format!(
                "n - 2 = {width} protected slots exceed 2^{m} - 1 = {}; need m >= {min_m}{hint}",
                (1u32 << m) - 1
            )));
        }
        Err(e) => return Err(Error::Config(e.to_string())),
    }
    match &config.failure {
        FailureSpec::Paths(paths) => FailurePattern::new(paths.iter().copied())
            .validate(config.n)
            .map_err(|e| Error::Config(e.to_string())),
        FailureSpec::Random(k) if *k > config.n => Err(Error::Config(format!(
            "cannot fail {k} of {} paths",
            config.n
        ))),
        _ => Ok(()),
    }
}

/// Echo of the configuration inside a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub scheme: Scheme,
    pub n: usize,
    pub field: FieldParams,
    pub mode: CodingMode,
    pub sessions: usize,
    pub rounds: usize,
    pub failure: FailureSpec,
    pub seed: u64,
}

/// The JSON report written by `run` and `sweep`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub config: ConfigEcho,
    /// Working slots over all path-slots, as `(n - 2)/n`.
    pub schedule_capacity: String,
    /// Lowest per-session `(active paths)/n` among the run sessions.
    pub normalized_capacity: String,
    pub complete_rate: f64,
    pub all_complete: bool,
    pub sessions_total: usize,
    pub sessions_complete: usize,
    pub recovered_total: usize,
    pub scenario_histogram: std::collections::BTreeMap<crate::simnet::Scenario, usize>,
    pub round_scenario_histogram: std::collections::BTreeMap<crate::simnet::Scenario, usize>,
    pub outcomes: Vec<SessionSummary>,
    /// Seconds since the Unix epoch; the only field that varies between
    /// identical runs.
    pub generated_at: u64,
}

/// What [`execute`] produced.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub report: Option<Report>,
    pub trace: Vec<TraceRecord>,
    /// Every session completed.
    pub success: bool,
}

/// Runs the sessions described by `config` without touching the filesystem.
pub fn execute(config: &RunConfig) -> Result<RunArtifacts> {
    let sim = config.simulator()?;
    let data = sim.generate_data(config.sessions, config.seed);

    let (report, trace_patterns): (SweepReport, Vec<FailurePattern>) = match &config.failure {
        FailureSpec::Sweep => {
            let patterns = FailurePattern::up_to_two(config.n);
            (sim.run_patterns(&patterns, &data)?, vec![FailurePattern::none(); config.sessions])
        }
        FailureSpec::Paths(paths) => {
            let p = FailurePattern::new(paths.iter().copied());
            (sim.run_patterns(std::slice::from_ref(&p), &data)?, vec![p; config.sessions])
        }
        FailureSpec::Random(k) => {
            // separate stream from the data generator
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x9e37_79b9_7f4a_7c15);
            let patterns: Vec<_> = (0..config.sessions)
                .map(|_| FailurePattern::random(config.n, *k, &mut rng))
                .collect();
            let summaries = patterns
                .iter()
                .enumerate()
                .map(|(s, p)| {
                    sim.run_session(s as u64, p, &data)
                        .map(|r| SessionSummary::from_result(&r, config.n))
                })
                .collect::<Result<Vec<_>>>()?;
            (SweepReport::from_summaries(&sim, summaries), patterns)
        }
    };

    let mut trace = Vec::new();
    for (s, p) in trace_patterns.iter().enumerate() {
        let r = sim.run_session(s as u64, p, &data)?;
        trace.extend(r.trace.iter().map(|pk| pk.trace_record(sim.field())));
    }

    let schedule_capacity = sim.schedule(0).capacity();
    let min_capacity = report
        .sessions
        .iter()
        .map(|s| s.failed_paths.len())
        .max()
        .map(|worst| (config.n - worst.min(config.n)) as u64)
        .unwrap_or(config.n as u64);

    let success = report.all_complete();
    Ok(RunArtifacts {
        report: Some(Report {
            config: ConfigEcho {
                scheme: config.scheme,
                n: config.n,
                field: config.field.params(),
                mode: config.mode,
                sessions: config.sessions,
                rounds: sim.schedule(0).rounds(),
                failure: config.failure.clone(),
                seed: config.seed,
            },
            schedule_capacity: format_ratio_over(schedule_capacity, config.n as u64),
            normalized_capacity: format!("{min_capacity}/{}", config.n),
            complete_rate: report.complete_rate(),
            all_complete: success,
            sessions_total: report.total,
            sessions_complete: report.complete,
            recovered_total: report.recovered_total,
            scenario_histogram: report.scenario_histogram,
            round_scenario_histogram: report.round_scenario_histogram,
            outcomes: report.sessions,
            generated_at: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }),
        trace,
        success,
    })
}

/// Trace records as JSON lines.
pub fn trace_to_jsonl(trace: &[TraceRecord]) -> Result<String> {
    let mut out = String::new();
    for rec in trace {
        out.push_str(&serde_json::to_string(rec)?);
        out.push('\n');
    }
    Ok(out)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn io_err(source: std::io::Error) -> Error {
    Error::Io {
        path: PathBuf::from("<stdout>"),
        source,
    }
}

/// Schedule matrices for every configured session.
pub fn render_schedules(config: &RunConfig) -> Result<String> {
    let sim = config.simulator()?;
    if config.json {
        let all: Vec<_> = (0..config.sessions as u64)
            .map(|s| sim.schedule(s).to_json())
            .collect();
        Ok(serde_json::to_string_pretty(&all)? + "\n")
    } else {
        Ok((0..config.sessions as u64)
            .map(|s| sim.schedule(s).render_text())
            .collect::<Vec<_>>()
            .join("\n"))
    }
}

/// Coefficient rows as hex vectors.
pub fn render_rows(config: &RunConfig) -> Result<String> {
    let sim = config.simulator()?;
    let field = sim.field();
    let rows = sim.rows();
    let hex = |v: &[crate::FieldElement]| -> Vec<String> { v.iter().map(|&e| field.to_hex(e)).collect() };
    let sum = hex(rows.row_sum());
    let weighted = rows.row_weighted().map(hex);
    if config.json {
        let v = serde_json::json!({
            "field": field.params(),
            "width": rows.width(),
            "row_sum": sum,
            "row_weighted": weighted,
        });
        Ok(serde_json::to_string_pretty(&v)? + "\n")
    } else {
        let mut out = format!(
            "GF(2^{}) poly {:#x} generator {}  width {}\nsum:      [{}]\n",
            field.degree(),
            field.reduction_poly(),
            field.generator(),
            rows.width(),
            sum.join(" ")
        );
        match weighted {
            Some(w) => out.push_str(&format!("weighted: [{}]\n", w.join(" "))),
            None => out.push_str("weighted: (sum-only mode)\n"),
        }
        Ok(out)
    }
}

/// Carries out the action, writing artifacts to the configured paths and
/// human-facing output to `out`. Returns whether the run succeeded.
pub fn run(config: &RunConfig, out: &mut impl Write) -> Result<bool> {
    match config.action {
        Action::DumpSchedule => {
            out.write_all(render_schedules(config)?.as_bytes()).map_err(io_err)?;
            Ok(true)
        }
        Action::DumpRows => {
            out.write_all(render_rows(config)?.as_bytes()).map_err(io_err)?;
            Ok(true)
        }
        Action::Run => {
            let artifacts = execute(config)?;
            if let Some(path) = &config.trace {
                write_file(path, &trace_to_jsonl(&artifacts.trace)?)?;
            }
            let report = artifacts.report.expect("run produces a report");
            let json = serde_json::to_string_pretty(&report)? + "\n";
            match &config.report {
                Some(path) => {
                    write_file(path, &json)?;
                    writeln!(
                        out,
                        "{} n={} sessions {}/{} complete, {} symbols recovered, capacity {}",
                        config.scheme,
                        config.n,
                        report.sessions_complete,
                        report.sessions_total,
                        report.recovered_total,
                        report.schedule_capacity
                    )
                    .map_err(io_err)?;
                }
                None => out.write_all(json.as_bytes()).map_err(io_err)?,
            }
            Ok(artifacts.success)
        }
    }
}

/// Entry point used by the binary: returns the process exit code.
pub fn main_with<I, T>(args: I, env_seed: Option<&str>, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = write!(err, "{e}");
            return code;
        }
    };
    let result = resolve(cli, env_seed).and_then(|config| run(&config, out));
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig> {
        parse_config(std::iter::once("nps2").chain(args.iter().copied()), None)
    }

    #[test]
    fn defaults() {
        let c = parse(&[]).unwrap();
        assert_eq!(c, RunConfig::default());
        assert_eq!(c.scheme, Scheme::Nps2II);
        assert_eq!(c.n, 8);
        assert_eq!(c.field.params().reduction_poly, "0x11d");
        assert_eq!(c.field.generator().value(), 2);
        assert_eq!(c.sessions, 1);
        assert_eq!(c.failure, FailureSpec::Sweep);
    }

    #[test]
    fn odd_n_rejected_for_nps2ii() {
        let e = parse(&["--scheme", "nps2-ii", "--n", "7"]).unwrap_err();
        assert!(e.to_string().contains("even"), "{e}");
    }

    #[test]
    fn n_beyond_field_rejected() {
        let e = parse(&["--scheme", "nps2-i", "--n", "300", "--field", "m=8"]).unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("298") && msg.contains("255"), "{msg}");
        assert!(parse(&["--scheme", "nps2-i", "--n", "257"]).is_ok());
        assert!(parse(&["--scheme", "nps2-i", "--n", "300", "--field", "m=9"]).is_ok());
    }

    #[test]
    fn malformed_hex_rejected() {
        let e = parse(&["--field-poly", "0xZZ"]).unwrap_err();
        assert!(matches!(e, Error::MalformedHex(_)), "{e}");
        assert!(parse(&["--field", "m=8,poly=11b,gen=3"]).is_ok());
        assert!(parse(&["--field", "m=8,poly=11b"]).is_err());
        assert!(parse(&["--field", "q=8"]).is_err());
    }

    #[test]
    fn failure_specs() {
        assert_eq!(parse(&["--fail", "2,5"]).unwrap().failure, FailureSpec::Paths(vec![2, 5]));
        assert_eq!(parse(&["--fail-random", "2"]).unwrap().failure, FailureSpec::Random(2));
        assert_eq!(parse(&["sweep", "--n", "6"]).unwrap().failure, FailureSpec::Sweep);
        assert!(parse(&["--fail", "9"]).is_err());
        assert!(parse(&["--fail", "1", "--sweep"]).is_err());
    }

    #[test]
    fn seed_precedence() {
        let args = ["nps2", "--seed", "5"];
        assert_eq!(parse_config(args, Some("9")).unwrap().seed, 5);
        assert_eq!(parse_config(["nps2"], Some("9")).unwrap().seed, 9);
        assert!(parse_config(["nps2"], Some("nine")).is_err());
    }

    #[test]
    fn config_file_and_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        fs::write(
            &path,
            "scheme = \"nps2-i\"\nn = 5\nseed = 3\nfail = [1, 4]\n[field]\nm = 4\n",
        )
        .unwrap();
        let p = path.to_str().unwrap();
        let c = parse(&["--config", p]).unwrap();
        assert_eq!((c.scheme, c.n, c.seed), (Scheme::Nps2I, 5, 3));
        assert_eq!(c.field.degree(), 4);
        assert_eq!(c.failure, FailureSpec::Paths(vec![1, 4]));
        let c = parse(&["--config", p, "--n", "6", "--seed", "1"]).unwrap();
        assert_eq!((c.n, c.seed), (6, 1));
        assert_eq!(parse_config(["nps2", "--config", p], Some("8")).unwrap().seed, 3);

        fs::write(&path, "bogus = 1\n").unwrap();
        assert!(parse(&["--config", p]).is_err());
    }

    #[test]
    fn binary_field_needs_sum_only() {
        let e = parse(&["--field-m", "1", "--n", "4"]).unwrap_err();
        assert!(e.to_string().contains("--sum-only"), "{e}");
        let c = parse(&["--field-m", "1", "--n", "4", "--sum-only"]).unwrap();
        assert_eq!(c.mode, CodingMode::SumOnly);
    }

    #[test]
    fn actions() {
        assert_eq!(parse(&["dump-schedule"]).unwrap().action, Action::DumpSchedule);
        assert_eq!(parse(&["--dump-rows"]).unwrap().action, Action::DumpRows);
        assert_eq!(parse(&["run", "--n", "4"]).unwrap().action, Action::Run);
    }

    #[test]
    fn sweep_report_n8() {
        let c = parse(&["--n", "8"]).unwrap();
        let a = execute(&c).unwrap();
        let r = a.report.unwrap();
        assert!(a.success);
        assert_eq!(r.complete_rate, 1.0);
        assert_eq!(r.schedule_capacity, "6/8");
        assert_eq!(r.sessions_total, 1 + 8 + 28);
    }

    #[test]
    fn rows_dump() {
        let c = parse(&["dump-rows", "--n", "6"]).unwrap();
        let text = render_rows(&c).unwrap();
        assert!(text.contains("sum:      [01 01 01 01]"), "{text}");
        assert!(text.contains("weighted: [01 02 04 08]"), "{text}");
    }
}
