use std::io::{self, IsTerminal};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use ontosem_cli::{run_batch, run_repl, Mode, OutputFormat, RunConfig, TraceLevel};

/// Interpret sentences against a type ontology and lexicon.
#[derive(Parser, Debug)]
#[command(name = "ontosem", version)]
struct Args {
    /// Ontology file (default: bundled demo ontology)
    #[arg(long)]
    ontology: Option<PathBuf>,
    /// Lexicon file (default: bundled demo lexicon)
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = TraceLevel::None)]
    trace: TraceLevel,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Split attachment disjunctions into separate readings
    #[arg(long)]
    expand_attachment: bool,
    /// Read sentences and commands interactively
    #[arg(long)]
    repl: bool,
    /// Corpus file, one sentence per line (default: bundled demo corpus)
    sentences: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = RunConfig {
        ontology_path: args.ontology,
        lexicon_path: args.lexicon,
        mode: if args.repl { Mode::Repl } else { Mode::Batch },
        trace_level: args.trace,
        output_format: args.format,
        expand_attachment: args.expand_attachment,
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut err = io::stderr();
    let code = match cfg.mode {
        Mode::Batch => run_batch(&cfg, args.sentences.as_deref(), &mut out, &mut err),
        Mode::Repl => {
            let stdin = io::stdin();
            let prompt = stdin.is_terminal();
            run_repl(&cfg, &mut stdin.lock(), &mut out, &mut err, prompt)
        }
    };
    ExitCode::from(code as u8)
}
