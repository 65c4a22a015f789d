//! The `pnanalyze` command: parse a net, run one analysis pass, write the
//! requested results in compressed form.

use std::fs;
use std::io::{self, Read, Write};
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, ValueEnum};
use pnanalyze_core::codec;
use pnanalyze_core::{
    analyze_with_order, parse_net, AnalysisError, AnalysisReport, Budget, EngineChoice, NetError,
    NetFormat, ParseError, TriState, VarOrder,
};
use thiserror::Error;

pub const EXIT_COMPLETE: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_INCOMPLETE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "pnanalyze",
    version,
    about = "Dead places, dead transitions and concurrent places of a P/T net",
    after_help = "Results are written as <stem>.dp, <stem>.dt and <stem>.cp next to the input \
                  (or in --output-dir). Cells: 1 = yes, 0 = no, . = unknown.\n\
                  Exit status: 0 all results complete, 2 some cell unknown, 1 error."
)]
pub struct Cli {
    /// Net file (PNML or text format); `-` reads standard input.
    pub input: PathBuf,

    /// Places never marked (writes <stem>.dp).
    #[arg(long)]
    pub dead_places: bool,

    /// Transitions never enabled (writes <stem>.dt).
    #[arg(long)]
    pub dead_transitions: bool,

    /// Pairs of places marked together (writes <stem>.cp).
    #[arg(long)]
    pub concurrent_places: bool,

    /// `auto` uses BDDs for ordinary 1-safe nets, explicit search otherwise.
    #[arg(long, value_enum, default_value_t = Engine::Auto)]
    pub engine: Engine,

    /// Input format; detected from the first byte when omitted.
    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Wall-clock budget in seconds.
    #[arg(long, env = "PNANALYZE_TIMEOUT", value_parser = parse_seconds)]
    pub timeout: Option<Duration>,

    /// Stop after this many states.
    #[arg(long, env = "PNANALYZE_MAX_STATES")]
    pub max_states: Option<NonZeroUsize>,

    /// Node limit for the BDD engine.
    #[arg(long)]
    pub max_bdd_nodes: Option<NonZeroUsize>,

    /// Largest token count per place before exploration gives up on a branch.
    #[arg(long)]
    pub token_cap: Option<u32>,

    /// Order BDD variables by reversed place declaration.
    #[arg(long)]
    pub reverse_order: bool,

    /// Directory for result files; defaults to the input's directory.
    #[arg(long, conflicts_with = "stdout")]
    pub output_dir: Option<PathBuf>,

    /// Write labelled results to standard output instead of files.
    #[arg(long)]
    pub stdout: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Explicit,
    Bdd,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Pnml,
    Text,
}

fn parse_seconds(s: &str) -> Result<Duration, String> {
    let secs: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if !secs.is_finite() || secs <= 0.0 {
        return Err("timeout must be positive".into());
    }
    Ok(Duration::from_secs_f64(secs))
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("no analysis requested; pass --dead-places, --dead-transitions or --concurrent-places")]
    NothingRequested,
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    TokenCap(NetError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    DeadPlaces,
    DeadTransitions,
    ConcurrentPlaces,
}

impl Kind {
    pub fn label(self) -> &'static str {
        match self {
            Kind::DeadPlaces => "dead-places",
            Kind::DeadTransitions => "dead-transitions",
            Kind::ConcurrentPlaces => "concurrent-places",
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Kind::DeadPlaces => "dp",
            Kind::DeadTransitions => "dt",
            Kind::ConcurrentPlaces => "cp",
        }
    }

    fn cells(self, report: &AnalysisReport) -> &[TriState] {
        match self {
            Kind::DeadPlaces => &report.dead_places,
            Kind::DeadTransitions => &report.dead_transitions,
            Kind::ConcurrentPlaces => report.concurrent.cells(),
        }
    }

    fn write<W: Write>(self, report: &AnalysisReport, sink: W) -> io::Result<()> {
        match self {
            Kind::ConcurrentPlaces => codec::write_matrix(&report.concurrent, sink),
            _ => codec::write_vector(self.cells(report), sink),
        }
    }
}

impl Cli {
    pub fn requested(&self) -> Vec<Kind> {
        [
            (self.dead_places, Kind::DeadPlaces),
            (self.dead_transitions, Kind::DeadTransitions),
            (self.concurrent_places, Kind::ConcurrentPlaces),
        ]
        .into_iter()
        .filter_map(|(on, k)| on.then_some(k))
        .collect()
    }

    fn budget(&self) -> Budget {
        Budget {
            max_states: self.max_states.map(NonZeroUsize::get),
            wall_clock: self.timeout,
            max_bdd_nodes: self.max_bdd_nodes.map(NonZeroUsize::get),
        }
    }

    fn reads_stdin(&self) -> bool {
        self.input.as_os_str() == "-"
    }
}

/// Parses arguments, runs, and reports errors; returns the exit status.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render().ansi());
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_COMPLETE };
        }
    };
    match run(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "pnanalyze: {e}");
            EXIT_ERROR
        }
    }
}

pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let kinds = cli.requested();
    if kinds.is_empty() {
        return Err(CliError::NothingRequested);
    }
    let display = cli.input.display().to_string();
    let content = if cli.reads_stdin() {
        let mut buf = Vec::new();
        io::stdin()
            .read_to_end(&mut buf)
            .map(|_| buf)
            .map_err(|source| CliError::Io { path: "<stdin>".into(), source })?
    } else {
        fs::read(&cli.input).map_err(|source| CliError::Io { path: display.clone(), source })?
    };
    let format = cli.format.map(|f| match f {
        Format::Pnml => NetFormat::Pnml,
        Format::Text => NetFormat::Text,
    });
    let mut net =
        parse_net(&content, format).map_err(|source| CliError::Parse { path: display, source })?;
    if let Some(cap) = cli.token_cap {
        net = net.with_token_cap(cap).map_err(CliError::TokenCap)?;
    }

    let engine = match cli.engine {
        Engine::Explicit => EngineChoice::Explicit,
        Engine::Bdd => EngineChoice::Bdd,
        Engine::Auto => EngineChoice::Auto,
    };
    let order = if cli.reverse_order {
        VarOrder::Reversed
    } else {
        VarOrder::Declaration
    };
    let report = analyze_with_order(&net, engine, &cli.budget(), order)?;

    let mut any_unknown = false;
    for &kind in &kinds {
        if cli.stdout || cli.reads_stdin() {
            let err = |source| CliError::Io { path: "<stdout>".into(), source };
            writeln!(stdout, "[{}]", kind.label()).map_err(err)?;
            kind.write(&report, &mut *stdout).map_err(err)?;
        } else {
            let path = output_path(cli, kind);
            let err = |source| CliError::Io { path: path.display().to_string(), source };
            let mut buf = Vec::new();
            kind.write(&report, &mut buf).map_err(err)?;
            fs::write(&path, buf).map_err(err)?;
        }
        let unknown = summarize(kind, &report, stderr);
        any_unknown |= unknown;
    }
    stdout
        .flush()
        .map_err(|source| CliError::Io { path: "<stdout>".into(), source })?;
    Ok(if any_unknown { EXIT_INCOMPLETE } else { EXIT_COMPLETE })
}

fn output_path(cli: &Cli, kind: Kind) -> PathBuf {
    let stem = cli.input.file_stem().unwrap_or_else(|| "net".as_ref());
    let dir = match &cli.output_dir {
        Some(d) => d.as_path(),
        None => cli.input.parent().unwrap_or(Path::new("")),
    };
    dir.join(stem).with_extension(kind.extension())
}

/// Writes the summary line and says whether any cell is unknown.
fn summarize(kind: Kind, report: &AnalysisReport, stderr: &mut dyn Write) -> bool {
    let mut counts = [0usize; 3];
    for c in kind.cells(report) {
        counts[match c {
            TriState::Yes => 0,
            TriState::No => 1,
            TriState::Unknown => 2,
        }] += 1;
    }
    let _ = writeln!(
        stderr,
        "{}: 1={} 0={} .={} states={} complete={} engine={}",
        kind.label(),
        counts[0],
        counts[1],
        counts[2],
        report.states_visited,
        if counts[2] == 0 { "yes" } else { "no" },
        report.engine,
    );
    counts[2] > 0
}
