//! End-to-end tests of the `semfetch` binary: exit codes, output
//! formats and resource overrides.

use std::path::Path;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_semfetch");

const BOOK_QUERY: &str = "what is the best books on operating system";
const BOOK_ANCHOR: &str = "A complete book for good operating system";

fn fixture(rel: &str) -> String {
    format!("{}/tests/fixtures/{rel}", env!("CARGO_MANIFEST_DIR"))
}

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run_with(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(BIN);
    for var in [
        "SEMFETCH_THRESHOLD",
        "SEMFETCH_MAX_PREFETCH",
        "SEMFETCH_CACHE_CAPACITY",
        "SEMFETCH_STOPWORDS",
        "SEMFETCH_LEMMAS",
        "SEMFETCH_SIMTABLE",
        "SEMFETCH_ONTOLOGY",
        "SEMFETCH_NUMBERS",
        "SEMFETCH_FORMAT",
    ] {
        cmd.env_remove(var);
    }
    let output = cmd.args(args).envs(envs.iter().copied()).output().expect("binary runs");
    Output {
        code: output.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&output.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&output.stderr).into_owned(),
    }
}

fn run(args: &[&str]) -> Output {
    run_with(args, &[])
}

fn json(output: &Output) -> serde_json::Value {
    assert_eq!(output.code, 0, "stderr: {}", output.stderr);
    serde_json::from_str(&output.stdout).expect("stdout is JSON")
}

#[test]
fn similarity_table_uses_four_decimals() {
    let out = run(&["similarity", BOOK_QUERY, "what is a good book to learn fundamentals of computer operating system"]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    assert!(out.stdout.contains("normalized: book, good, operating system"));
    assert!(out.stdout.contains("total: 3.0000"));
    assert!(out.stdout.contains("probability: 0.5000"));
    assert!(out.stdout.contains("threshold: 0.7000"));
    assert!(out.stdout.contains("verdict: not similar"));
    assert!(out.stderr.is_empty());
}

#[test]
fn similarity_json_carries_the_same_numbers_as_the_table() {
    let report = json(&run(&["similarity", BOOK_QUERY, BOOK_ANCHOR, "--format", "json"]));
    assert!((report["probability"].as_f64().unwrap() - 0.75).abs() < 1e-9);
    assert_eq!(report["passes"], serde_json::Value::Bool(true));
    assert_eq!(report["phrase_a"].as_str().unwrap(), BOOK_QUERY);

    let table = run(&["similarity", BOOK_QUERY, BOOK_ANCHOR]);
    assert!(table.stdout.contains("probability: 0.7500"));
    assert!(table.stdout.contains("verdict: similar"));
}

#[test]
fn help_and_version_are_success() {
    let help = run(&["--help"]);
    assert_eq!(help.code, 0);
    for subcommand in ["analyze", "similarity", "simulate"] {
        assert!(help.stdout.contains(subcommand), "help must list {subcommand}");
    }

    let version = run(&["--version"]);
    assert_eq!(version.code, 0);
    assert!(version.stdout.contains("semfetch"));

    let sub_help = run(&["similarity", "--help"]);
    assert_eq!(sub_help.code, 0);
    assert!(sub_help.stdout.contains("--threshold"));
}

#[test]
fn usage_errors_exit_one() {
    let unknown = run(&["similarity", "a", "b", "--bogus"]);
    assert_eq!(unknown.code, 1);
    assert!(!unknown.stderr.is_empty());

    let missing_phrase = run(&["similarity", "only-one"]);
    assert_eq!(missing_phrase.code, 1);

    let missing_source = run(&["analyze", "--keywords", "x"]);
    assert_eq!(missing_source.code, 1);

    let file_without_base = run(&["analyze", "--file", "page.html", "--keywords", "x"]);
    assert_eq!(file_without_base.code, 1);
    assert!(file_without_base.stderr.contains("--base-url"));

    let no_trace = run(&["simulate"]);
    assert_eq!(no_trace.code, 1);

    let non_numeric = run(&["similarity", "a", "b", "--threshold", "abc"]);
    assert_eq!(non_numeric.code, 1);

    let out_of_range = run(&["similarity", "a", "b", "--threshold", "1.5"]);
    assert_eq!(out_of_range.code, 1);
    assert!(out_of_range.stderr.contains("0..=1"), "stderr: {}", out_of_range.stderr);

    let negative = run(&["similarity", "a", "b", "--threshold=-0.1"]);
    assert_eq!(negative.code, 1);

    let bad_url = run(&["analyze", "--url", "not a url", "--keywords", "x"]);
    assert_eq!(bad_url.code, 1);
    assert!(bad_url.stderr.contains("--url"));
}

#[test]
fn runtime_errors_exit_two() {
    let missing_trace = run(&["simulate", "/no/such/trace.jsonl"]);
    assert_eq!(missing_trace.code, 2);
    assert!(missing_trace.stderr.contains("reading"));

    let missing_file = run(&[
        "analyze",
        "--file",
        "/no/such/page.html",
        "--base-url",
        "http://x.test/",
        "--keywords",
        "x",
    ]);
    assert_eq!(missing_file.code, 2);

    let missing_resource = run(&["similarity", "a", "b", "--stopwords", "/no/such/stopwords.txt"]);
    assert_eq!(missing_resource.code, 2);
}

#[test]
fn malformed_trace_reports_the_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("broken.jsonl");
    std::fs::write(
        &trace,
        "{\"page_url\": \"http://a.test/\", \"links\": []}\n{not json\n",
    )
    .unwrap();
    let out = run(&["simulate", trace.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 2"), "stderr: {}", out.stderr);
}

#[test]
fn malformed_resource_files_are_runtime_errors() {
    let dir = tempfile::tempdir().unwrap();

    let simtable = dir.path().join("simtable.tsv");
    std::fs::write(&simtable, "cat\tdog\t1.5\n").unwrap();
    let out = run(&["similarity", "a", "b", "--simtable", simtable.to_str().unwrap()]);
    assert_eq!(out.code, 2);

    let lemmas = dir.path().join("lemmas.tsv");
    std::fs::write(&lemmas, "only-one-column\n").unwrap();
    let out = run(&["similarity", "a", "b", "--lemmas", lemmas.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 1"), "stderr: {}", out.stderr);
}

#[test]
fn env_vars_configure_defaults_and_flags_override_them() {
    let env = [("SEMFETCH_THRESHOLD", "0.8"), ("SEMFETCH_FORMAT", "json")];

    let report = json(&run_with(&["similarity", BOOK_QUERY, BOOK_ANCHOR], &env));
    assert_eq!(report["threshold"].as_f64().unwrap(), 0.8);
    assert_eq!(report["passes"], serde_json::Value::Bool(false));

    let report = json(&run_with(
        &["similarity", BOOK_QUERY, BOOK_ANCHOR, "--threshold", "0.7"],
        &env,
    ));
    assert_eq!(report["threshold"].as_f64().unwrap(), 0.7);
    assert_eq!(report["passes"], serde_json::Value::Bool(true));
}

#[test]
fn analyze_file_puts_the_sequential_link_first() {
    let page = fixture("pages/tutorial.html");
    let args = [
        "analyze",
        "--file",
        page.as_str(),
        "--base-url",
        "https://tutorial.test/html/html_intro.asp",
        "--keywords",
        "HTML tutorials",
    ];

    let report = json(&run_with(&[&args[..], &["--format", "json"]].concat(), &[]));
    let prefetch = report["prefetch"].as_array().unwrap();
    assert_eq!(prefetch.len(), 1, "only the local next link qualifies");
    assert_eq!(prefetch[0]["relation"].as_str().unwrap(), "sequential");
    assert_eq!(
        prefetch[0]["href"].as_str().unwrap(),
        "https://tutorial.test/html/html_editors.asp"
    );
    let rejected = report["rejected"].as_array().unwrap();
    assert!(rejected
        .iter()
        .any(|d| d["href"].as_str().unwrap().starts_with("https://forum.example.org")
            && d["relation"].as_str().unwrap() != "sequential"));

    let table = run(&args);
    assert_eq!(table.code, 0, "stderr: {}", table.stderr);
    assert!(table.stdout.contains("prefetch list"));
    assert!(table.stdout.contains("sequential"));
    assert!(table.stdout.contains("not selected:"));
}

#[test]
fn simulate_reports_cache_effectiveness() {
    let chain = fixture("traces/chain.jsonl");
    let report = json(&run(&["simulate", chain.as_str(), "--format", "json"]));
    assert_eq!(report["requests"].as_u64().unwrap(), 2);
    assert_eq!(report["hits"].as_u64().unwrap(), 2);
    assert_eq!(report["hit_rate"].as_f64().unwrap(), 1.0);
    assert_eq!(report["prefetched"].as_u64().unwrap(), 2);
    assert_eq!(report["wasted_fetches"].as_u64().unwrap(), 0);

    let table = run(&["simulate", chain.as_str()]);
    assert_eq!(table.code, 0);
    assert!(table.stdout.contains("hit rate:   1.0000"));
    assert!(table.stdout.contains("events:     3 (skipped: 0)"));
}

#[test]
fn simulate_threshold_gates_the_similar_prefetch() {
    let trace = fixture("traces/similar_click.jsonl");

    let relaxed = json(&run(&["simulate", trace.as_str(), "--format", "json"]));
    assert_eq!(relaxed["hit_rate"].as_f64().unwrap(), 1.0);

    let strict = json(&run(&[
        "simulate",
        trace.as_str(),
        "--format",
        "json",
        "--threshold",
        "0.8",
    ]));
    assert_eq!(strict["hit_rate"].as_f64().unwrap(), 0.0);
    assert_eq!(strict["prefetched"].as_u64().unwrap(), 0);
}

#[test]
fn custom_stopwords_replace_the_built_in_list() {
    let dir = tempfile::tempdir().unwrap();
    let stopwords = dir.path().join("stopwords.txt");
    // "best" lemmatizes to "good"; the post-lemmatization pass must
    // catch it against the custom list.
    std::fs::write(&stopwords, "good\n").unwrap();

    let report = json(&run(&[
        "similarity",
        "best books",
        "irrelevant",
        "--stopwords",
        stopwords.to_str().unwrap(),
        "--format",
        "json",
    ]));
    let normalized: Vec<&str> = report["a_normalized"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(normalized, ["book"]);
}

#[test]
fn custom_simtable_drives_the_score() {
    let dir = tempfile::tempdir().unwrap();
    let simtable = dir.path().join("simtable.tsv");
    std::fs::write(&simtable, "cat\tdog\t0.9\n").unwrap();

    let report = json(&run(&[
        "similarity",
        "cat",
        "dog",
        "--simtable",
        simtable.to_str().unwrap(),
        "--format",
        "json",
    ]));
    assert!((report["probability"].as_f64().unwrap() - 0.9).abs() < 1e-9);
    assert_eq!(report["matrix"][0][0].as_f64().unwrap(), 0.9);
    assert_eq!(report["passes"], serde_json::Value::Bool(true));
}

#[test]
fn analyze_validates_the_base_url_before_reading() {
    let page = fixture("pages/tutorial.html");
    let out = run(&[
        "analyze",
        "--file",
        page.as_str(),
        "--base-url",
        "not a url",
        "--keywords",
        "x",
    ]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("--base-url"));
}

#[test]
fn fixture_paths_exist() {
    // Guards against silently renamed fixtures: the CLI tests above
    // would otherwise fail with confusing runtime errors.
    for rel in [
        "pages/tutorial.html",
        "traces/chain.jsonl",
        "traces/unrelated.jsonl",
        "traces/mixed.jsonl",
        "traces/similar_click.jsonl",
    ] {
        assert!(Path::new(&fixture(rel)).exists(), "missing fixture {rel}");
    }
}
