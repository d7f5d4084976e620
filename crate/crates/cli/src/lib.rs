//! Batch and REPL front end.
//!
//! Text output, one block per sentence:
//!
//! ```text
//! > Sheba is a thief
//! 1 reading: (E! v1 :: human)(THIEF(v1))
//! ```
//!
//! Structured output is JSON Lines, one record per sentence:
//!
//! ```text
//! {"version":1,"sentence":"...","readings":["..."],
//!  "trace":[["p",["politicalGroup"],["event"],"bottom",[]]],"warnings":[]}
//! ```
//!
//! Each trace entry is `[var, left types, right types, case, output types]`
//! where case is one of `subsume-left`, `subsume-right`, `msr-bridge`,
//! `bottom`.

use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use ontosem::interpreter::{expand_attachment, InterpretResult};
use ontosem::logic::{print_annotated, print_canonical};
use ontosem::{demo, interpret, Lexicon, Ontology, Pos, TypeName};

pub const FORMAT_VERSION: u32 = 1;
pub const BLOCKED_MARKER: &str = "@blocked";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Mode {
    #[default]
    Batch,
    Repl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default, ValueEnum)]
pub enum TraceLevel {
    #[default]
    None,
    /// Unification steps and warnings.
    Steps,
    /// Also initial forms and adjective cast checks.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Structured,
}

/// Missing paths fall back to the bundled demo files.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub ontology_path: Option<PathBuf>,
    pub lexicon_path: Option<PathBuf>,
    pub mode: Mode,
    pub trace_level: TraceLevel,
    pub output_format: OutputFormat,
    pub expand_attachment: bool,
}

pub struct Session {
    pub ontology: Ontology,
    pub lexicon: Lexicon,
}

impl Session {
    pub fn load(cfg: &RunConfig) -> Result<Self> {
        let ont_src = match &cfg.ontology_path {
            Some(p) => read(p)?,
            None => demo::ONTOLOGY.to_owned(),
        };
        let lex_src = match &cfg.lexicon_path {
            Some(p) => read(p)?,
            None => demo::LEXICON.to_owned(),
        };
        let ontology = Ontology::parse(&ont_src).context("loading ontology")?;
        let lexicon = Lexicon::parse(&lex_src, &ontology).context("loading lexicon")?;
        Ok(Session { ontology, lexicon })
    }
}

fn read(p: &Path) -> Result<String> {
    fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceTuple(
    pub String,
    pub Vec<String>,
    pub Vec<String>,
    pub String,
    pub Vec<String>,
);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Record {
    pub version: u32,
    pub sentence: String,
    pub readings: Vec<String>,
    pub trace: Vec<TraceTuple>,
    pub warnings: Vec<String>,
}

fn names(s: &ontosem::TypeSet) -> Vec<String> {
    s.iter().map(|t| t.to_string()).collect()
}

/// Reading glosses, with attachment disjunctions split out when asked.
pub fn glosses(result: &InterpretResult, expand: bool) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for r in &result.readings {
        if expand {
            for f in expand_attachment(&r.form) {
                let g = print_canonical(&f);
                if !out.contains(&g) {
                    out.push(g);
                }
            }
        } else {
            out.push(r.gloss.clone());
        }
    }
    out
}

impl Record {
    pub fn from_result(result: &InterpretResult, expand: bool) -> Self {
        Record {
            version: FORMAT_VERSION,
            sentence: result.sentence.clone(),
            readings: glosses(result, expand),
            trace: result
                .trace
                .steps
                .iter()
                .map(|s| {
                    TraceTuple(
                        s.var.clone(),
                        names(&s.left),
                        names(&s.right),
                        s.case.as_str().to_owned(),
                        names(&s.output),
                    )
                })
                .collect(),
            warnings: result.warnings.clone(),
        }
    }
}

pub fn emit_structured(result: &InterpretResult, expand: bool) -> String {
    serde_json::to_string(&Record::from_result(result, expand)).expect("records serialize")
}

pub fn parse_structured(line: &str) -> Result<Record> {
    let rec: Record = serde_json::from_str(line).context("malformed record")?;
    anyhow::ensure!(
        rec.version == FORMAT_VERSION,
        "unsupported record version {}",
        rec.version
    );
    Ok(rec)
}

/// Outcome of one sentence, for exit-status bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Readings,
    NoReading,
    Error,
}

fn render_text(
    out: &mut dyn Write,
    sentence: &str,
    result: &std::result::Result<InterpretResult, ontosem::InterpretError>,
    cfg: &RunConfig,
    blocked_expected: bool,
) -> io::Result<Outcome> {
    writeln!(out, "> {sentence}")?;
    let result = match result {
        Ok(r) => r,
        Err(e) => {
            writeln!(out, "error: {e}")?;
            return Ok(Outcome::Error);
        }
    };
    if cfg.trace_level >= TraceLevel::Full {
        for f in &result.initial {
            writeln!(out, "  initial: {}", print_annotated(f))?;
        }
        for c in &result.casts {
            writeln!(out, "  cast: {c}")?;
        }
    }
    let readings = glosses(result, cfg.expand_attachment);
    match readings.len() {
        0 if blocked_expected => writeln!(out, "0 readings: blocked as expected")?,
        0 => writeln!(out, "0 readings")?,
        1 => writeln!(out, "1 reading: {}", readings[0])?,
        n => {
            writeln!(out, "{n} readings:")?;
            for (i, r) in readings.iter().enumerate() {
                writeln!(out, "  {}. {r}", i + 1)?;
            }
        }
    }
    if cfg.trace_level >= TraceLevel::Steps {
        for s in &result.trace.steps {
            writeln!(out, "  step: {s}")?;
        }
    }
    if cfg.trace_level >= TraceLevel::Steps || readings.is_empty() {
        for w in &result.warnings {
            writeln!(out, "  warning: {w}")?;
        }
    }
    Ok(if readings.is_empty() {
        Outcome::NoReading
    } else {
        Outcome::Readings
    })
}

fn run_sentence(
    session: &Session,
    cfg: &RunConfig,
    sentence: &str,
    blocked_expected: bool,
    out: &mut dyn Write,
) -> io::Result<Outcome> {
    let result = interpret(sentence, &session.lexicon, &session.ontology);
    match cfg.output_format {
        OutputFormat::Text => render_text(out, sentence, &result, cfg, blocked_expected),
        OutputFormat::Structured => match &result {
            Ok(r) => {
                writeln!(out, "{}", emit_structured(r, cfg.expand_attachment))?;
                Ok(if r.readings.is_empty() {
                    Outcome::NoReading
                } else {
                    Outcome::Readings
                })
            }
            Err(e) => {
                let rec = Record {
                    version: FORMAT_VERSION,
                    sentence: sentence.to_owned(),
                    readings: Vec::new(),
                    trace: Vec::new(),
                    warnings: vec![e.to_string()],
                };
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string(&rec).expect("records serialize")
                )?;
                Ok(Outcome::Error)
            }
        },
    }
}

/// Strips comments and the blocked marker. `None` for blank lines.
pub fn corpus_line(line: &str) -> Option<(&str, bool)> {
    let line = line.split('#').next().unwrap_or("").trim();
    if line.is_empty() {
        return None;
    }
    match line.strip_suffix(BLOCKED_MARKER) {
        Some(s) => Some((s.trim_end(), true)),
        None => Some((line, false)),
    }
}

/// Runs a corpus text. Returns 0 when every sentence behaved as marked,
/// 2 otherwise.
pub fn run_batch_source(
    session: &Session,
    cfg: &RunConfig,
    corpus: &str,
    out: &mut dyn Write,
) -> io::Result<i32> {
    let mut status = 0;
    let mut first = true;
    for (sentence, blocked) in corpus.lines().filter_map(corpus_line) {
        if !first && cfg.output_format == OutputFormat::Text {
            writeln!(out)?;
        }
        first = false;
        let outcome = run_sentence(session, cfg, sentence, blocked, out)?;
        let ok = match outcome {
            Outcome::Readings => !blocked,
            Outcome::NoReading => blocked,
            Outcome::Error => false,
        };
        if !ok {
            status = 2;
        }
    }
    Ok(status)
}

/// Batch mode. Exit status 1 on load failure, 2 on an unexpected outcome.
/// Without a path the bundled demo corpus is used.
pub fn run_batch(
    cfg: &RunConfig,
    sentences: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let loaded = Session::load(cfg).and_then(|s| {
        let corpus = match sentences {
            Some(p) => read(p)?,
            None => demo::CORPUS.to_owned(),
        };
        Ok((s, corpus))
    });
    let (session, corpus) = match loaded {
        Ok(x) => x,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            return 1;
        }
    };
    match run_batch_source(&session, cfg, &corpus, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn senses(session: &Session, word: &str, out: &mut dyn Write) -> io::Result<()> {
    let mut found = false;
    for pos in [Pos::ProperNoun, Pos::Noun, Pos::Adjective, Pos::Verb] {
        let senses = session.lexicon.lookup(word, pos);
        if senses.is_empty() {
            continue;
        }
        found = true;
        let text: Vec<String> = senses
            .iter()
            .map(|s| s.to_string())
            .filter(|s| !s.is_empty())
            .collect();
        if text.is_empty() {
            writeln!(out, "{pos} {word}")?;
        } else {
            writeln!(out, "{pos} {word} : {}", text.join(" | "))?;
        }
    }
    if !found {
        writeln!(out, "no senses for `{word}`")?;
    }
    Ok(())
}

fn command(
    session: &Session,
    cfg: &mut RunConfig,
    line: &str,
    out: &mut dyn Write,
) -> io::Result<bool> {
    let words: Vec<&str> = line.split_whitespace().collect();
    match words.as_slice() {
        [":quit"] => return Ok(false),
        [":trace", "on"] => {
            cfg.trace_level = TraceLevel::Steps;
            writeln!(out, "trace on")?;
        }
        [":trace", "off"] => {
            cfg.trace_level = TraceLevel::None;
            writeln!(out, "trace off")?;
        }
        [":trace", ..] => writeln!(out, "error: usage: :trace on|off")?,
        [":senses", word] => senses(session, word, out)?,
        [":senses", ..] => writeln!(out, "error: usage: :senses <word>")?,
        [":msr", a, b] => match session
            .ontology
            .msr(&TypeName::from(*a), &TypeName::from(*b))
        {
            Ok(Some(r)) => writeln!(out, "{r}")?,
            Ok(None) => writeln!(out, "no salient relation between {a} and {b}")?,
            Err(e) => writeln!(out, "error: {e}")?,
        },
        [":msr", ..] => writeln!(out, "error: usage: :msr <type> <type>")?,
        _ => writeln!(out, "error: unknown command `{line}`")?,
    }
    Ok(true)
}

/// REPL over any line source. The prompt is written only when `prompt` is
/// set (an interactive terminal).
pub fn run_repl_with(
    session: &Session,
    cfg: &RunConfig,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    prompt: bool,
) -> io::Result<i32> {
    let mut cfg = cfg.clone();
    let mut line = String::new();
    loop {
        if prompt {
            write!(out, "ontosem> ")?;
            out.flush()?;
        }
        line.clear();
        if input.read_line(&mut line)? == 0 {
            return Ok(0);
        }
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        if text.starts_with(':') {
            if !command(session, &mut cfg, text, out)? {
                return Ok(0);
            }
            continue;
        }
        run_sentence(session, &cfg, text, false, out)?;
    }
}

pub fn run_repl(
    cfg: &RunConfig,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    err: &mut dyn Write,
    prompt: bool,
) -> i32 {
    let session = match Session::load(cfg) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            return 1;
        }
    };
    match run_repl_with(&session, cfg, input, out, prompt) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_lines() {
        assert_eq!(corpus_line("  # note"), None);
        assert_eq!(corpus_line(""), None);
        assert_eq!(
            corpus_line("Sheba is a thief # note"),
            Some(("Sheba is a thief", false))
        );
        assert_eq!(
            corpus_line("Olga is a tall beautiful dancer @blocked"),
            Some(("Olga is a tall beautiful dancer", true))
        );
    }

    #[test]
    fn structured_record_for_pruned_sense() {
        let session = Session::load(&RunConfig::default()).unwrap();
        let r = interpret(
            "Jon cancelled the party",
            &session.lexicon,
            &session.ontology,
        )
        .unwrap();
        let line = emit_structured(&r, false);
        let rec = parse_structured(&line).unwrap();
        assert_eq!(rec.readings.len(), 1);
        assert!(rec.readings[0].contains("socialEvent"));
        assert!(rec
            .trace
            .iter()
            .any(|t| t.1 == ["politicalGroup"] && t.3 == "bottom" && t.4.is_empty()));
    }

    #[test]
    fn rejects_other_versions() {
        let line = r#"{"version":2,"sentence":"s","readings":[],"trace":[],"warnings":[]}"#;
        assert!(parse_structured(line).is_err());
    }
}
