//! Ontological semantics for a small English fragment.
//!
//! Sentences are parsed, translated into typed first-order forms, and
//! resolved against a type ontology by type unification with bridging
//! through salient relations.

pub mod interpreter;
pub mod lexicon;
pub mod logic;
pub mod ontology;
pub mod parser;

pub use interpreter::{
    check_adjective_order, interpret, resolve, translate, InterpretError, InterpretResult, Reading,
    ResolveError, TranslateError, UnifyStep, UnifyTrace,
};
pub use lexicon::{load_lexicon, Lexicon, LexiconError, Pos, Sense};
pub use logic::{print_canonical, simplify, Formula, Var};
pub use ontology::{
    load_ontology, Ontology, OntologyError, TypeName, TypeSet, UnifyCase, UnifyOutcome,
};
pub use parser::{parse, tokenize, ParseError, ParseTree};

/// The bundled demo ontology, lexicon and corpus.
pub mod demo {
    use crate::{Lexicon, Ontology};

    pub const ONTOLOGY: &str = include_str!("../data/demo.ont");
    pub const LEXICON: &str = include_str!("../data/demo.lex");
    pub const CORPUS: &str = include_str!("../data/demo-corpus.txt");

    pub fn ontology() -> Ontology {
        Ontology::parse(ONTOLOGY).expect("demo ontology loads")
    }

    pub fn lexicon(g: &Ontology) -> Lexicon {
        Lexicon::parse(LEXICON, g).expect("demo lexicon loads")
    }
}
