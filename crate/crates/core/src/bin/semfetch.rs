//! Command-line front end: score a page's links (`analyze`), score two
//! phrases (`similarity`) or replay a browsing trace (`simulate`).
//!
//! Exit codes: 0 success, 1 usage error, 2 I/O or processing failure.

use std::path::PathBuf;
use std::time::Duration;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use url::Url;

use semfetch_core::engine::{analyze_page, AnalysisReport, DecisionView, EngineConfig};
use semfetch_core::fetch::{Fetcher, HttpFetcher, MemoryFetcher};
use semfetch_core::page::PageSnapshot;
use semfetch_core::resources::{ResourcePaths, ResourceSet};
use semfetch_core::similar::{similarity_report, SimilarityReport};
use semfetch_core::simulator::{parse_trace, run_trace, SimulationReport};

const EXIT_USAGE: i32 = 1;
const EXIT_RUNTIME: i32 = 2;

#[derive(Parser)]
#[command(
    name = "semfetch",
    version,
    about = "Semantic web prefetching: score links against query keywords"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score a page's links and print the prefetch list
    Analyze(AnalyzeArgs),
    /// Score two phrases against each other
    Similarity(SimilarityArgs),
    /// Replay a browsing trace and report cache effectiveness
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Args)]
struct CommonArgs {
    /// Similar-relation probability threshold (inclusive, 0..=1)
    #[arg(long, env = "SEMFETCH_THRESHOLD", default_value_t = 0.7)]
    threshold: f64,

    /// Maximum number of links prefetched per page visit
    #[arg(long, env = "SEMFETCH_MAX_PREFETCH", default_value_t = 5)]
    max_prefetch: usize,

    /// Prefetch cache capacity
    #[arg(long, env = "SEMFETCH_CACHE_CAPACITY", default_value_t = 100)]
    cache_capacity: usize,

    /// Stop-word list (one word per line), replacing the built-in one
    #[arg(long, env = "SEMFETCH_STOPWORDS", value_name = "PATH")]
    stopwords: Option<PathBuf>,

    /// Lemma map (surface<TAB>lemma), replacing the built-in one
    #[arg(long, env = "SEMFETCH_LEMMAS", value_name = "PATH")]
    lemmas: Option<PathBuf>,

    /// Word-similarity table (lemma<TAB>lemma<TAB>score), replacing the built-in one
    #[arg(long, env = "SEMFETCH_SIMTABLE", value_name = "PATH")]
    simtable: Option<PathBuf>,

    /// Ontology (child<TAB>parent), replacing the built-in one
    #[arg(long, env = "SEMFETCH_ONTOLOGY", value_name = "PATH")]
    ontology: Option<PathBuf>,

    /// Number words (word<TAB>value), extending the built-in one..twenty
    #[arg(long, env = "SEMFETCH_NUMBERS", value_name = "PATH")]
    numbers: Option<PathBuf>,

    /// Output format
    #[arg(long, env = "SEMFETCH_FORMAT", value_enum, default_value_t = Format::Table)]
    format: Format,
}

impl CommonArgs {
    fn config(&self) -> Result<EngineConfig, Failure> {
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(Failure::usage(format!(
                "--threshold must be within 0..=1, got {}",
                self.threshold
            )));
        }
        Ok(EngineConfig {
            threshold: self.threshold,
            max_prefetch: self.max_prefetch,
            cache_capacity: self.cache_capacity,
        })
    }

    fn resources(&self) -> Result<ResourceSet, Failure> {
        let paths = ResourcePaths {
            stopwords: self.stopwords.clone(),
            lemmas: self.lemmas.clone(),
            simtable: self.simtable.clone(),
            ontology: self.ontology.clone(),
            numbers: self.numbers.clone(),
        };
        ResourceSet::load(&paths)
            .context("loading resources")
            .map_err(Failure::runtime)
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Page URL to fetch and analyze
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    url: Option<String>,

    /// Local HTML file to analyze instead of fetching
    #[arg(long, requires = "base_url")]
    file: Option<PathBuf>,

    /// Base URL the file's relative links resolve against
    #[arg(long, value_name = "URL")]
    base_url: Option<String>,

    /// The user's query keywords
    #[arg(long)]
    keywords: String,

    /// HTTP timeout in seconds
    #[arg(long, default_value_t = 10)]
    timeout: u64,

    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SimilarityArgs {
    /// First phrase (typically the user's keywords)
    phrase_a: String,

    /// Second phrase (typically an anchor text)
    phrase_b: String,

    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SimulateArgs {
    /// Trace file, one JSON event per line
    trace: PathBuf,

    #[command(flatten)]
    common: CommonArgs,
}

struct Failure {
    code: i32,
    error: anyhow::Error,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_USAGE,
            error: anyhow::anyhow!(message.into()),
        }
    }

    fn runtime(error: anyhow::Error) -> Failure {
        Failure {
            code: EXIT_RUNTIME,
            error,
        }
    }
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            // Help and version are successful outputs, not errors.
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{err}");
                return 0;
            }
            eprint!("{err}");
            return EXIT_USAGE;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(failure) => {
            eprintln!("error: {:#}", failure.error);
            failure.code
        }
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Analyze(args) => analyze(args),
        Command::Similarity(args) => similarity(args),
        Command::Simulate(args) => simulate(args),
    }
}

/// URL arguments are validated before any I/O; malformed values are
/// usage errors, unreachable hosts are runtime errors.
fn parse_url_arg(value: &str, flag: &str) -> Result<Url, Failure> {
    Url::parse(value).map_err(|e| Failure::usage(format!("{flag} {value:?} is not a valid URL: {e}")))
}

fn analyze(args: AnalyzeArgs) -> Result<(), Failure> {
    let config = args.common.config()?;
    let resources = args.common.resources()?;

    let (page_url, html) = match (&args.url, &args.file) {
        (Some(url), None) => {
            let parsed = parse_url_arg(url, "--url")?;
            let mut fetcher = HttpFetcher::new(Duration::from_secs(args.timeout))
                .context("building HTTP client")
                .map_err(Failure::runtime)?;
            let html = fetcher
                .fetch(parsed.as_str())
                .context("fetching page")
                .map_err(Failure::runtime)?;
            (parsed.to_string(), html)
        }
        (None, Some(file)) => {
            let base = args
                .base_url
                .as_deref()
                .expect("clap enforces --base-url with --file");
            let parsed = parse_url_arg(base, "--base-url")?;
            let html = std::fs::read_to_string(file)
                .with_context(|| format!("reading {}", file.display()))
                .map_err(Failure::runtime)?;
            (parsed.to_string(), html)
        }
        // clap's conflicts/required rules make these unreachable.
        _ => return Err(Failure::usage("exactly one of --url or --file is required")),
    };

    let snapshot = PageSnapshot::from_html(&page_url, &html)
        .context("reading page")
        .map_err(Failure::runtime)?;
    let report = analyze_page(&snapshot, &args.keywords, &resources, &config);
    match args.common.format {
        Format::Table => print_analysis_table(&report),
        Format::Json => print_json(&report)?,
    }
    Ok(())
}

fn similarity(args: SimilarityArgs) -> Result<(), Failure> {
    let config = args.common.config()?;
    let resources = args.common.resources()?;
    let report = similarity_report(&args.phrase_a, &args.phrase_b, &resources, config.threshold);
    match args.common.format {
        Format::Table => print_similarity_table(&report),
        Format::Json => print_json(&report)?,
    }
    Ok(())
}

fn simulate(args: SimulateArgs) -> Result<(), Failure> {
    let config = args.common.config()?;
    let resources = args.common.resources()?;
    let text = std::fs::read_to_string(&args.trace)
        .with_context(|| format!("reading {}", args.trace.display()))
        .map_err(Failure::runtime)?;
    let events = parse_trace(&text)
        .with_context(|| format!("parsing {}", args.trace.display()))
        .map_err(Failure::runtime)?;
    let mut fetcher = MemoryFetcher::synthesizing();
    let report = run_trace(&events, &resources, &config, &mut fetcher);
    match args.common.format {
        Format::Table => print_simulation_table(&report, events.len()),
        Format::Json => print_json(&report)?,
    }
    Ok(())
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value)
        .context("serializing output")
        .map_err(Failure::runtime)?;
    println!("{text}");
    Ok(())
}

fn print_similarity_table(report: &SimilarityReport) {
    println!("phrase a: {}", report.phrase_a);
    println!("  normalized: {}", report.a_normalized.join(", "));
    println!("phrase b: {}", report.phrase_b);
    println!("  normalized: {}", report.b_normalized.join(", "));

    if !report.a_normalized.is_empty() && !report.b_normalized.is_empty() {
        println!("similarity matrix (rows: phrase a, columns: phrase b):");
        let row_width = report
            .a_normalized
            .iter()
            .map(String::len)
            .max()
            .unwrap_or(0);
        let col_widths: Vec<usize> = report
            .b_normalized
            .iter()
            .map(|label| label.len().max(6))
            .collect();
        let mut header = format!("  {:row_width$}", "");
        for (label, width) in report.b_normalized.iter().zip(&col_widths) {
            header.push_str(&format!("  {label:>width$}"));
        }
        println!("{header}");
        for (i, row) in report.matrix.iter().enumerate() {
            let mut line = format!("  {:<row_width$}", report.a_normalized[i]);
            for (value, width) in row.iter().zip(&col_widths) {
                line.push_str(&format!("  {value:>width$.4}"));
            }
            println!("{line}");
        }
    }

    let maxima: Vec<String> = report.row_maxima.iter().map(|v| format!("{v:.4}")).collect();
    println!("row maxima: {}", maxima.join(", "));
    println!("total: {:.4}", report.total);
    println!("probability: {:.4}", report.probability);
    println!("threshold: {:.4}", report.threshold);
    println!(
        "verdict: {}",
        if report.passes { "similar" } else { "not similar" }
    );
}

fn print_decision_line(view: &DecisionView, index: Option<usize>) {
    let lead = match index {
        Some(i) => format!("{i:>3}."),
        None => "   -".to_string(),
    };
    println!(
        "{lead} {:<12} {:>7.4}  {}  ->  {}",
        view.relation, view.score, view.anchor_text, view.href
    );
}

fn print_analysis_table(report: &AnalysisReport) {
    println!("page: {}", report.page);
    println!("keywords: {}", report.keywords);
    println!(
        "prefetch list (threshold {:.4}, max {}):",
        report.threshold, report.max_prefetch
    );
    if report.prefetch.is_empty() {
        println!("    (empty)");
    }
    for (i, view) in report.prefetch.iter().enumerate() {
        print_decision_line(view, Some(i + 1));
    }
    if !report.rejected.is_empty() {
        println!("not selected:");
        for view in &report.rejected {
            print_decision_line(view, None);
        }
    }
}

fn print_simulation_table(report: &SimulationReport, events: usize) {
    println!("events:     {events} (skipped: {})", report.skipped_events);
    println!("requests:   {}", report.requests);
    println!("hits:       {}", report.hits);
    println!("misses:     {}", report.misses);
    println!("hit rate:   {:.4}", report.hit_rate);
    println!("prefetched: {}", report.prefetched);
    println!("used:       {}", report.used);
    println!("wasted:     {}", report.wasted_fetches);
    println!("precision:  {:.4}", report.precision);
}
