//! The controlled English fragment.
//!
//! ```text
//! S   -> NP VP
//! VP  -> "is" IndefNP | "is" Adj+ | TV NP | TV "and" TV NP
//! NP  -> ProperName | ("a" | "an" | "the") Adj* Noun
//! ```
//!
//! Word classes come from the lexicon. The grammar is LL(1) apart from the
//! adjective/noun boundary, which is decided by looking one token ahead.

use thiserror::Error;

use crate::lexicon::{Lexicon, Pos};

const FUNCTION_WORDS: &[&str] = &["a", "an", "the", "is", "and"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Np {
    Proper(String),
    Indef { adjs: Vec<String>, noun: String },
    Def { adjs: Vec<String>, noun: String },
}

impl Np {
    pub fn adjs(&self) -> &[String] {
        match self {
            Np::Proper(_) => &[],
            Np::Indef { adjs, .. } | Np::Def { adjs, .. } => adjs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseTree {
    CopulaNp {
        subject: Np,
        pred: Np,
    },
    CopulaAdj {
        subject: Np,
        adjs: Vec<String>,
    },
    Transitive {
        subject: Np,
        verb: String,
        object: Np,
    },
    CoordTransitive {
        subject: Np,
        verbs: Vec<String>,
        object: Np,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty sentence")]
    Empty,
    #[error("at token {position}: expected {expected}, found {found}")]
    OutOfFragment {
        position: usize,
        expected: String,
        found: String,
    },
    #[error("unknown word `{token}` at token {position}")]
    UnknownWord { position: usize, token: String },
}

/// Splits on whitespace, strips terminal punctuation, lowercases function
/// words and merges the lexicon's multiword proper names (`Das_Kapital`).
pub fn tokenize(sentence: &str, lex: &Lexicon) -> Vec<String> {
    let raw: Vec<String> = sentence
        .split_whitespace()
        .map(|w| w.trim_end_matches(['.', '!', '?', ',', ';']))
        .filter(|w| !w.is_empty())
        .map(|w| {
            let lower = w.to_lowercase();
            if FUNCTION_WORDS.contains(&lower.as_str()) {
                lower
            } else {
                w.to_owned()
            }
        })
        .collect();

    let names = lex.multiword_names();
    let mut out = Vec::with_capacity(raw.len());
    let mut i = 0;
    'outer: while i < raw.len() {
        for name in &names {
            let n = name.len();
            if i + n <= raw.len() && raw[i..i + n].iter().zip(name).all(|(a, b)| a == b) {
                out.push(name.join("_"));
                i += n;
                continue 'outer;
            }
        }
        out.push(raw[i].clone());
        i += 1;
    }
    out
}

struct Cursor<'a> {
    tokens: &'a [String],
    pos: usize,
    lex: &'a Lexicon,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a str> {
        self.tokens.get(self.pos).map(String::as_str)
    }

    fn peek_at(&self, offset: usize) -> Option<&'a str> {
        self.tokens.get(self.pos + offset).map(String::as_str)
    }

    fn bump(&mut self) -> Option<&'a str> {
        let t = self.peek();
        self.pos += 1;
        t
    }

    fn fail(&self, expected: &str) -> ParseError {
        match self.peek() {
            Some(t) if !FUNCTION_WORDS.contains(&t) && !self.lex.knows(t) => {
                ParseError::UnknownWord {
                    position: self.pos,
                    token: t.to_owned(),
                }
            }
            found => ParseError::OutOfFragment {
                position: self.pos,
                expected: expected.to_owned(),
                found: found.map_or("end of sentence".to_owned(), |t| format!("`{t}`")),
            },
        }
    }

    fn np(&mut self) -> Result<Np, ParseError> {
        match self.peek() {
            Some("a" | "an") => {
                self.bump();
                let (adjs, noun) = self.nominal()?;
                Ok(Np::Indef { adjs, noun })
            }
            Some("the") => {
                self.bump();
                let (adjs, noun) = self.nominal()?;
                Ok(Np::Def { adjs, noun })
            }
            Some(t) if self.lex.has(t, Pos::ProperNoun) => {
                self.bump();
                Ok(Np::Proper(t.to_owned()))
            }
            _ => Err(self.fail("a determiner or a proper name")),
        }
    }

    fn indef_np(&mut self) -> Result<Np, ParseError> {
        match self.peek() {
            Some("a" | "an") => self.np(),
            _ => Err(self.fail("`a` or `an`")),
        }
    }

    // Adj* Noun. A word that is both stays an adjective while a nominal
    // word follows it.
    fn nominal(&mut self) -> Result<(Vec<String>, String), ParseError> {
        let mut adjs = Vec::new();
        loop {
            let Some(t) = self.peek() else {
                return Err(self.fail("a noun"));
            };
            let is_adj = self.lex.has(t, Pos::Adjective);
            let is_noun = self.lex.has(t, Pos::Noun);
            let more = self
                .peek_at(1)
                .is_some_and(|n| self.lex.has(n, Pos::Adjective) || self.lex.has(n, Pos::Noun));
            if is_noun && !(is_adj && more) {
                self.bump();
                return Ok((adjs, t.to_owned()));
            }
            if !is_adj {
                return Err(self.fail(if adjs.is_empty() {
                    "an adjective or a noun"
                } else {
                    "a noun"
                }));
            }
            adjs.push(t.to_owned());
            self.bump();
        }
    }

    fn verb(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(t) if self.lex.has(t, Pos::Verb) => {
                self.bump();
                Ok(t.to_owned())
            }
            _ => Err(self.fail("a verb")),
        }
    }

    fn end(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.fail("end of sentence")),
        }
    }
}

pub fn parse(tokens: &[String], lex: &Lexicon) -> Result<ParseTree, ParseError> {
    if tokens.is_empty() {
        return Err(ParseError::Empty);
    }
    let mut c = Cursor {
        tokens,
        pos: 0,
        lex,
    };
    let subject = c.np()?;
    let tree = if c.peek() == Some("is") {
        c.bump();
        if matches!(c.peek(), Some("a" | "an" | "the")) {
            let pred = c.indef_np()?;
            ParseTree::CopulaNp { subject, pred }
        } else {
            let mut adjs = Vec::new();
            while let Some(t) = c.peek().filter(|t| lex.has(t, Pos::Adjective)) {
                adjs.push(t.to_owned());
                c.bump();
            }
            if adjs.is_empty() {
                return Err(c.fail("an indefinite noun phrase or an adjective"));
            }
            ParseTree::CopulaAdj { subject, adjs }
        }
    } else {
        let first = c.verb()?;
        if c.peek() == Some("and") {
            c.bump();
            let second = c.verb()?;
            let object = c.np()?;
            ParseTree::CoordTransitive {
                subject,
                verbs: vec![first, second],
                object,
            }
        } else {
            let object = c.np()?;
            ParseTree::Transitive {
                subject,
                verb: first,
                object,
            }
        }
    };
    c.end()?;
    Ok(tree)
}

/// Tokenizes and parses in one step.
pub fn parse_sentence(sentence: &str, lex: &Lexicon) -> Result<ParseTree, ParseError> {
    parse(&tokenize(sentence, lex), lex)
}
