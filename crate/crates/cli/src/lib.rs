//! Command-line front end: build, query, bench, stats, heuristic-bench and
//! verify.
//!
//! Exit codes: 0 success, 1 other failure, 2 usage, 3 I/O, 4 malformed
//! index file, 5 verification mismatch.

use std::ffi::OsString;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand};
use editdict::baseline::{build_partition_index, oracle_query, partition_stats};
use editdict::io::{load, read_word_list, save};
use editdict::subst_store::list_histogram;
use editdict::workload::generate_queries;
use editdict::{BuildConfig, Error, Index, LoadFactor, QueryStats};
use serde::Serialize;

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_MALFORMED: i32 = 4;
pub const EXIT_MISMATCH: i32 = 5;

const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Parser, Debug)]
#[command(name = "editdict", version, about = "Approximate dictionary lookups within edit distance 2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build an index from a word list and write it to disk.
    Build(BuildArgs),
    /// Report every indexed word within distance k of a pattern.
    Query(QueryArgs),
    /// Time queries derived from randomly edited dictionary words.
    Bench(BenchArgs),
    /// Substitution-list size histogram and table occupancy.
    Stats(StatsArgs),
    /// Candidate-list sizes of the two-piece partition heuristic.
    HeuristicBench(HeuristicArgs),
    /// Compare sampled queries against a brute-force scan.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=2))]
    errors: u8,
    #[arg(long, default_value_t = 0.7)]
    load_factor: f64,
    /// Store 4-bit signatures with every substitution entry.
    #[arg(long)]
    signatures: bool,
    /// Squeeze empty slots out of every table; the index becomes read-only.
    #[arg(long)]
    compact: bool,
    #[arg(long, default_value_t = editdict::config::DEFAULT_BETA)]
    beta: usize,
    #[arg(long, default_value_t = editdict::succinct::DEFAULT_DELTA)]
    delta: usize,
    #[arg(long, env = "EDITDICT_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("source").required(true).args(["pattern", "stdin"])))]
struct QueryArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long, default_value_t = 1)]
    k: u8,
    #[arg(long)]
    pattern: Option<String>,
    /// Read one pattern per line; print the matches of each on one line.
    #[arg(long)]
    stdin: bool,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long, default_value_t = 1000)]
    queries: usize,
    #[arg(long, default_value_t = 20)]
    rounds: usize,
    #[arg(long, env = "EDITDICT_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Query distance; also the number of random edits per query.
    #[arg(long, default_value_t = 1)]
    k: u8,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("stats_source").required(true).args(["index", "input"])))]
struct StatsArgs {
    #[arg(long)]
    index: Option<PathBuf>,
    #[arg(long)]
    input: Option<PathBuf>,
    /// Store levels to report when reading a word list.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
    errors: u8,
    #[arg(long, env = "EDITDICT_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct HeuristicArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 1)]
    k: u8,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, env = "EDITDICT_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }

    fn with_path(e: Error, path: &Path) -> Self {
        let f = Failure::from(e);
        Failure::new(f.code, format!("{}: {}", path.display(), f.message))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Io(_) => EXIT_IO,
            Error::BadMagic
            | Error::VersionMismatch { .. }
            | Error::Truncated { .. }
            | Error::ChecksumMismatch { .. }
            | Error::Corrupt(_) => EXIT_MALFORMED,
            Error::InvalidConfig(_) | Error::InvalidPattern | Error::Unsupported(_) => EXIT_USAGE,
            _ => EXIT_FAILURE,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(EXIT_IO, e.to_string())
    }
}

type CliResult = Result<(), Failure>;

/// Runs the command line `args` (program name first) and returns the exit
/// code. Diagnostics go to `stderr`.
pub fn run_cli<I, T>(args: I, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    let result = match cli.command {
        Command::Build(a) => build(a, stdout),
        Command::Query(a) => query(a, stdin, stdout),
        Command::Bench(a) => bench(a, stdout),
        Command::Stats(a) => stats(a, stdout),
        Command::HeuristicBench(a) => heuristic_bench(a, stdout),
        Command::Verify(a) => verify(a, stdout),
    };
    match result.and_then(|()| stdout.flush().map_err(Failure::from)) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn words_from(path: &Path) -> Result<Vec<Vec<u8>>, Failure> {
    read_word_list(path).map_err(|e| Failure::with_path(e, path))
}

fn index_from(path: &Path) -> Result<Index, Failure> {
    load(path).map_err(|e| Failure::with_path(e, path))
}

fn write_json(out: &mut dyn Write, value: &impl Serialize) -> CliResult {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| Failure::new(EXIT_FAILURE, e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct ConfigEcho {
    errors: u8,
    load_factor: f64,
    signatures: bool,
    compact: bool,
    beta: usize,
    delta: usize,
    seed: u64,
}

impl From<&BuildConfig> for ConfigEcho {
    fn from(c: &BuildConfig) -> Self {
        ConfigEcho {
            errors: c.errors,
            load_factor: c.load_factor.as_f64(),
            signatures: c.use_signatures,
            compact: c.compact,
            beta: c.beta,
            delta: c.delta,
            seed: c.rng_seed,
        }
    }
}

#[derive(Serialize)]
struct BuildReport {
    d: usize,
    n: usize,
    build_seconds: f64,
    file_bytes: u64,
    config: ConfigEcho,
}

fn build(a: BuildArgs, out: &mut dyn Write) -> CliResult {
    let words = words_from(&a.input)?;
    let cfg = BuildConfig {
        errors: a.errors,
        load_factor: LoadFactor::from_f64(a.load_factor)?,
        use_signatures: a.signatures,
        compact: a.compact,
        beta: a.beta,
        delta: a.delta,
        rng_seed: a.seed,
    };
    let start = Instant::now();
    let index = Index::build(words.iter().map(Vec::as_slice), &cfg)?;
    let build_seconds = start.elapsed().as_secs_f64();
    save(&index, &a.output).map_err(|e| Failure::with_path(e, &a.output))?;
    let report = BuildReport {
        d: index.word_count(),
        n: index.exact().total_length(),
        build_seconds,
        file_bytes: std::fs::metadata(&a.output)?.len(),
        config: ConfigEcho::from(index.config()),
    };
    if a.json {
        return write_json(out, &report);
    }
    writeln!(out, "d {}", report.d)?;
    writeln!(out, "n {}", report.n)?;
    writeln!(out, "build_seconds {:.6}", report.build_seconds)?;
    writeln!(out, "file_bytes {}", report.file_bytes)?;
    Ok(())
}

fn query(a: QueryArgs, stdin: &mut dyn BufRead, out: &mut dyn Write) -> CliResult {
    let index = index_from(&a.index)?;
    if let Some(p) = &a.pattern {
        for m in index.query(p.as_bytes(), a.k)?.matches {
            out.write_all(&m)?;
            out.write_all(b"\n")?;
        }
        return Ok(());
    }
    let mut line = Vec::new();
    loop {
        line.clear();
        if stdin.read_until(b'\n', &mut line)? == 0 {
            break;
        }
        let pattern = line.strip_suffix(b"\n").unwrap_or(&line);
        let pattern = pattern.strip_suffix(b"\r").unwrap_or(pattern);
        let matches = index.query(pattern, a.k)?.matches;
        out.write_all(&matches.join(&b' '))?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[derive(Serialize, Default)]
struct CounterTotals {
    lists_probed: usize,
    slots_scanned: usize,
    candidates: usize,
    exact_probes: usize,
    cap_activations: usize,
}

impl From<QueryStats> for CounterTotals {
    fn from(s: QueryStats) -> Self {
        CounterTotals {
            lists_probed: s.lists_probed,
            slots_scanned: s.slots_scanned,
            candidates: s.candidates,
            exact_probes: s.exact_probes,
            cap_activations: s.cap_activations,
        }
    }
}

#[derive(Serialize)]
struct BenchReport {
    d: usize,
    n: usize,
    k: u8,
    queries: usize,
    rounds: usize,
    threads: usize,
    seed: u64,
    /// Mean latency of each round in microseconds.
    round_means_us: Vec<f64>,
    mean_us: f64,
    empty_results: usize,
    totals: CounterTotals,
    config: ConfigEcho,
}

/// Runs `patterns` against `index` on `threads` workers; returns the wall
/// clock of the whole batch, the summed counters and the number of queries
/// with no match.
fn run_batch(index: &Index, patterns: &[Vec<u8>], k: u8, threads: usize) -> Result<(f64, QueryStats, usize), Failure> {
    let chunk = patterns.len().div_ceil(threads.max(1)).max(1);
    let start = Instant::now();
    let parts: Vec<editdict::Result<(QueryStats, usize)>> = std::thread::scope(|s| {
        let handles: Vec<_> = patterns
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    let mut stats = QueryStats::default();
                    let mut empty = 0;
                    for p in part {
                        let r = index.query(p, k)?;
                        stats += r.stats;
                        empty += r.matches.is_empty() as usize;
                    }
                    Ok((stats, empty))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("query worker panicked")).collect()
    });
    let elapsed = start.elapsed().as_secs_f64();
    let mut stats = QueryStats::default();
    let mut empty = 0;
    for p in parts {
        let (s, e) = p?;
        stats += s;
        empty += e;
    }
    Ok((elapsed, stats, empty))
}

fn bench(a: BenchArgs, out: &mut dyn Write) -> CliResult {
    if a.threads == 0 || a.rounds == 0 || a.queries == 0 {
        return Err(Failure::new(EXIT_USAGE, "--threads, --rounds and --queries must be positive"));
    }
    let index = index_from(&a.index)?;
    if a.k > index.config().errors {
        return Err(Failure::new(
            EXIT_USAGE,
            format!("--k {} exceeds the index error level {}", a.k, index.config().errors),
        ));
    }
    let words: Vec<&[u8]> = index.exact().words().collect();
    let mut round_means_us = Vec::with_capacity(a.rounds);
    let mut totals = QueryStats::default();
    let mut empty_results = 0;
    for round in 0..a.rounds {
        let patterns: Vec<Vec<u8>> = generate_queries(&words, a.queries, a.k, a.seed.wrapping_add(round as u64))
            .into_iter()
            .map(|q| q.pattern)
            .collect();
        if patterns.is_empty() {
            return Err(Failure::new(EXIT_FAILURE, "index holds no words"));
        }
        let (secs, stats, empty) = run_batch(&index, &patterns, a.k, a.threads)?;
        round_means_us.push(secs * 1e6 / patterns.len() as f64);
        totals += stats;
        empty_results += empty;
    }
    let mean_us = round_means_us.iter().sum::<f64>() / round_means_us.len() as f64;
    let report = BenchReport {
        d: index.word_count(),
        n: index.exact().total_length(),
        k: a.k,
        queries: a.queries,
        rounds: a.rounds,
        threads: a.threads,
        seed: a.seed,
        round_means_us,
        mean_us,
        empty_results,
        totals: totals.into(),
        config: ConfigEcho::from(index.config()),
    };
    if a.json {
        return write_json(out, &report);
    }
    writeln!(out, "d {} n {} k {} queries {} rounds {}", report.d, report.n, report.k, report.queries, report.rounds)?;
    for (i, m) in report.round_means_us.iter().enumerate() {
        writeln!(out, "round {:>3}  {:>10.3} us/query", i + 1, m)?;
    }
    writeln!(out, "mean       {:>10.3} us/query", report.mean_us)?;
    let t = &report.totals;
    writeln!(
        out,
        "lists_probed {} slots_scanned {} candidates {} exact_probes {} cap_activations {}",
        t.lists_probed, t.slots_scanned, t.candidates, t.exact_probes, t.cap_activations
    )?;
    writeln!(out, "empty_results {}", report.empty_results)?;
    Ok(())
}

#[derive(Serialize)]
struct HistogramReport {
    level: u8,
    total_entries: usize,
    rows: Vec<(String, f64)>,
}

#[derive(Serialize)]
struct OccupancyRow {
    table: String,
    capacity: usize,
    count: usize,
}

#[derive(Serialize)]
struct StatsReport {
    d: usize,
    n: usize,
    histograms: Vec<HistogramReport>,
    occupancy: Vec<OccupancyRow>,
}

fn stats(a: StatsArgs, out: &mut dyn Write) -> CliResult {
    let (words, seeds, levels, occupancy) = match (&a.index, &a.input) {
        (Some(path), _) => {
            let index = index_from(path)?;
            let words: Vec<Vec<u8>> = index.exact().words().map(<[u8]>::to_vec).collect();
            let mut occupancy: Vec<OccupancyRow> = index
                .exact()
                .occupancy()
                .into_iter()
                .map(|o| OccupancyRow {
                    table: o.length.map_or_else(|| "exact long".to_string(), |l| format!("exact len {l}")),
                    capacity: o.capacity,
                    count: o.count,
                })
                .collect();
            for s in [index.store1(), index.store2()].into_iter().flatten() {
                occupancy.push(OccupancyRow {
                    table: format!("level-{} store", s.level()),
                    capacity: s.capacity(),
                    count: s.entry_count(),
                });
            }
            (words, index.seeds(), 1..=index.config().errors, occupancy)
        }
        (None, Some(path)) => {
            let words = words_from(path)?;
            (words, editdict::index::derive_seeds(a.seed), 1..=a.errors, Vec::new())
        }
        (None, None) => unreachable!("clap requires a source"),
    };
    let refs: Vec<&[u8]> = words.iter().map(Vec::as_slice).collect();
    let histograms = levels
        .map(|level| {
            let h = list_histogram(&refs, level, seeds);
            HistogramReport { level, total_entries: h.total_entries, rows: h.table_rows() }
        })
        .collect();
    let report = StatsReport {
        d: refs.len(),
        n: refs.iter().map(|w| w.len()).sum(),
        histograms,
        occupancy,
    };
    if a.json {
        return write_json(out, &report);
    }
    writeln!(out, "d {} n {}", report.d, report.n)?;
    for h in &report.histograms {
        writeln!(out, "level {} substitution lists ({} entries)", h.level, h.total_entries)?;
        for (label, pct) in &h.rows {
            writeln!(out, "  {label:>4}  {pct:>7.2}%")?;
        }
    }
    if !report.occupancy.is_empty() {
        writeln!(out, "occupancy")?;
        for o in &report.occupancy {
            let load = if o.capacity == 0 { 0.0 } else { o.count as f64 / o.capacity as f64 };
            writeln!(out, "  {:<16} {:>10} / {:<10} {:.3}", o.table, o.count, o.capacity, load)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct HeuristicReport {
    d: usize,
    average: f64,
    max: usize,
}

fn heuristic_bench(a: HeuristicArgs, out: &mut dyn Write) -> CliResult {
    let words = words_from(&a.input)?;
    let pidx = build_partition_index(words.iter().map(Vec::as_slice));
    let (average, max) = partition_stats(&pidx, words.iter().map(Vec::as_slice));
    let report = HeuristicReport { d: words.len(), average, max };
    if a.json {
        return write_json(out, &report);
    }
    writeln!(out, "d {}", report.d)?;
    writeln!(out, "average {:.2}", report.average)?;
    writeln!(out, "max {}", report.max)?;
    Ok(())
}

fn verify(a: VerifyArgs, out: &mut dyn Write) -> CliResult {
    let index = index_from(&a.index)?;
    let words = words_from(&a.input)?;
    let refs: Vec<&[u8]> = words.iter().map(Vec::as_slice).collect();
    let queries = generate_queries(&refs, a.samples, a.k, a.seed);
    let mut mismatches = 0;
    for q in &queries {
        let got = index.query(&q.pattern, a.k)?.matches;
        let want = oracle_query(refs.iter().copied(), &q.pattern, a.k as usize);
        if got != want {
            mismatches += 1;
            if mismatches <= 5 {
                writeln!(
                    out,
                    "mismatch for {:?}: index {} words, oracle {} words",
                    String::from_utf8_lossy(&q.pattern),
                    got.len(),
                    want.len()
                )?;
            }
        }
    }
    writeln!(out, "verified {} queries at k = {}, {} mismatches", queries.len(), a.k, mismatches)?;
    if mismatches > 0 {
        return Err(Failure::new(EXIT_MISMATCH, format!("{mismatches} queries disagree with the oracle")));
    }
    Ok(())
}
