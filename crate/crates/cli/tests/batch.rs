use std::io::{Cursor, Write};
use std::path::PathBuf;
use std::process::Command;

use ontosem_cli::{
    emit_structured, parse_structured, run_batch, run_batch_source, run_repl, run_repl_with,
    OutputFormat, RunConfig, Session, TraceLevel,
};

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn corpus_path() -> PathBuf {
    data("../core/data/demo-corpus.txt")
}

fn batch(cfg: &RunConfig, corpus: &str) -> (i32, String) {
    let session = Session::load(cfg).unwrap();
    let mut out = Vec::new();
    let code = run_batch_source(&session, cfg, corpus, &mut out).unwrap();
    (code, String::from_utf8(out).unwrap())
}

fn repl(input: &str) -> String {
    let session = Session::load(&RunConfig::default()).unwrap();
    let mut out = Vec::new();
    let code = run_repl_with(
        &session,
        &RunConfig::default(),
        &mut Cursor::new(input),
        &mut out,
        false,
    )
    .unwrap();
    assert_eq!(code, 0);
    String::from_utf8(out).unwrap()
}

#[test]
fn corpus_matches_golden() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_batch(
        &RunConfig::default(),
        Some(&corpus_path()),
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0, "{}", String::from_utf8_lossy(&err));
    let golden = std::fs::read_to_string(data("tests/golden/demo-corpus.out")).unwrap();
    assert_eq!(String::from_utf8(out).unwrap(), golden);
}

#[test]
fn traced_corpus_matches_golden() {
    let cfg = RunConfig {
        trace_level: TraceLevel::Steps,
        ..RunConfig::default()
    };
    let (code, out) = batch(&cfg, &std::fs::read_to_string(corpus_path()).unwrap());
    assert_eq!(code, 0);
    let golden = std::fs::read_to_string(data("tests/golden/demo-corpus-trace.out")).unwrap();
    assert_eq!(out, golden);
}

#[test]
fn binary_matches_golden() {
    let out = Command::new(env!("CARGO_BIN_EXE_ontosem"))
        .arg(corpus_path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let golden = std::fs::read_to_string(data("tests/golden/demo-corpus.out")).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden);
}

#[test]
fn single_reading_line() {
    let (code, out) = batch(&RunConfig::default(), "Sheba is a thief\n");
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "> Sheba is a thief\n1 reading: (E! v1 :: human)(THIEF(v1))\n"
    );
}

#[test]
fn blocked_marker() {
    let (code, out) = batch(
        &RunConfig::default(),
        "Olga is a tall beautiful dancer @blocked\n",
    );
    assert_eq!(code, 0);
    assert!(out.contains("0 readings: blocked as expected"));

    let (code, _) = batch(&RunConfig::default(), "Olga is a tall beautiful dancer\n");
    assert_eq!(code, 2);

    let (code, _) = batch(&RunConfig::default(), "Sheba is a thief @blocked\n");
    assert_eq!(code, 2);
}

#[test]
fn empty_corpus() {
    let (code, out) = batch(&RunConfig::default(), "");
    assert_eq!((code, out.as_str()), (0, ""));
    let (code, out) = batch(&RunConfig::default(), "# only a comment\n\n");
    assert_eq!((code, out.as_str()), (0, ""));
}

#[test]
fn parse_errors_fail_the_batch() {
    let (code, out) = batch(
        &RunConfig::default(),
        "Sheba is a thief\nSheba sings loudly\n",
    );
    assert_eq!(code, 2);
    assert!(out.contains("error:"));
    assert!(out.contains("1 reading: (E! v1 :: human)(THIEF(v1))"));
}

#[test]
fn load_failures_exit_1() {
    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "type a < b\ntype b < a\ntype thing").unwrap();
    let cfg = RunConfig {
        ontology_path: Some(bad.path().to_owned()),
        ..RunConfig::default()
    };
    let (mut out, mut err) = (Vec::new(), Vec::new());
    assert_eq!(run_batch(&cfg, Some(&corpus_path()), &mut out, &mut err), 1);
    assert!(out.is_empty());
    assert!(String::from_utf8(err).unwrap().contains("cycle"));

    let mut lex = tempfile::NamedTempFile::new().unwrap();
    writeln!(lex, "noun unicorn : type unicorn").unwrap();
    let cfg = RunConfig {
        lexicon_path: Some(lex.path().to_owned()),
        ..RunConfig::default()
    };
    assert_eq!(run_batch(&cfg, None, &mut Vec::new(), &mut Vec::new()), 1);
    assert_eq!(
        run_repl(
            &cfg,
            &mut Cursor::new(":quit\n"),
            &mut Vec::new(),
            &mut Vec::new(),
            false
        ),
        1
    );

    let missing = RunConfig {
        ontology_path: Some(data("no/such.ont")),
        ..RunConfig::default()
    };
    let out = Command::new(env!("CARGO_BIN_EXE_ontosem"))
        .arg("--ontology")
        .arg(missing.ontology_path.unwrap())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn binary_exit_2_on_unexpected_no_reading() {
    let mut corpus = tempfile::NamedTempFile::new().unwrap();
    writeln!(corpus, "The cat cancelled the party").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_ontosem"))
        .arg(corpus.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("0 readings"));
}

#[test]
fn repl_commands() {
    assert_eq!(repl(":msr human car\n"), "DRIVE(human, car)\n");
    assert_eq!(repl(":quit\nSheba is a thief\n"), "");
    let out =
        repl(":trace\n:frobnicate\n:msr human\n:msr human ghost\n:senses\nSheba is a thief\n");
    assert_eq!(out.matches("error:").count(), 5, "{out}");
    assert!(out.ends_with("1 reading: (E! v1 :: human)(THIEF(v1))\n"));
    assert_eq!(
        repl(":senses party\n"),
        "noun party : type politicalGroup | type socialEvent\n"
    );
    assert_eq!(
        repl(":senses Das Kapital\n"),
        "error: usage: :senses <word>\n"
    );
    assert_eq!(repl(":senses xyzzy\n"), "no senses for `xyzzy`\n");
    let traced = repl(":trace on\nSheba is a thief\n:trace off\nSheba is a thief\n");
    assert_eq!(traced.matches("step:").count(), 1);
}

#[test]
fn repl_promoted_party_has_two_readings() {
    let out = repl("Jon promoted the party\n");
    assert!(out.contains("2 readings:"));
    assert!(out.contains("  1. ") && out.contains("  2. "));
}

#[test]
fn repl_and_batch_agree() {
    let corpus = std::fs::read_to_string(corpus_path()).unwrap();
    let cfg = RunConfig {
        output_format: OutputFormat::Structured,
        ..RunConfig::default()
    };
    let (_, batch_out) = batch(&cfg, &corpus);
    let sentences: String = corpus
        .lines()
        .filter_map(ontosem_cli::corpus_line)
        .map(|(s, _)| format!("{s}\n"))
        .collect();
    let session = Session::load(&cfg).unwrap();
    let mut out = Vec::new();
    run_repl_with(&session, &cfg, &mut Cursor::new(sentences), &mut out, false).unwrap();
    let repl_out = String::from_utf8(out).unwrap();
    let readings = |s: &str| -> Vec<Vec<String>> {
        s.lines()
            .map(|l| parse_structured(l).unwrap().readings)
            .collect()
    };
    assert_eq!(readings(&batch_out), readings(&repl_out));
    assert_eq!(readings(&batch_out).len(), 11);
}

#[test]
fn structured_no_reading_has_warnings() {
    let session = Session::load(&RunConfig::default()).unwrap();
    let r = ontosem::interpret(
        "Olga is a tall beautiful dancer",
        &session.lexicon,
        &session.ontology,
    )
    .unwrap();
    let rec = parse_structured(&emit_structured(&r, false)).unwrap();
    assert!(rec.readings.is_empty());
    assert!(!rec.warnings.is_empty());
    assert_eq!(rec.version, 1);
}

#[test]
fn expand_attachment_flag() {
    let cfg = RunConfig {
        expand_attachment: true,
        ..RunConfig::default()
    };
    let (code, out) = batch(&cfg, "Olga is a beautiful dancer\n");
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "> Olga is a beautiful dancer\n2 readings:\n  \
         1. (E! v1 :: human)(E v2 :: dancing)(AGENT(v2, v1) & BEAUTIFUL(v1))\n  \
         2. (E! v1 :: human)(E v2 :: dancing)(AGENT(v2, v1) & BEAUTIFUL(v2))\n"
    );
}

#[test]
fn full_trace_shows_casts() {
    let cfg = RunConfig {
        trace_level: TraceLevel::Full,
        ..RunConfig::default()
    };
    let (_, out) = batch(&cfg, "Olga is a tall beautiful dancer @blocked\n");
    assert!(out.contains("initial: (E! Olga :: {thing})"));
    assert!(out.contains("cast: TALL: {entity} -> {physical} blocked"));
}
