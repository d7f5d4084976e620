//! Word senses.
//!
//! Line format (`#` starts a comment):
//!
//! ```text
//! noun party : type politicalGroup | type socialEvent
//! noun dancer : defined DANCER human dancing AGENT
//! noun thief : pred THIEF(human)
//! adj tall : pred TALL(physical)
//! verb cancelled : frame CANCELLATION subj human obj event
//! verb owns : pred OWN(human, entity)
//! pn Sheba
//! pn Das Kapital : type book
//! ```
//!
//! Repeated `(word, pos)` lines accumulate senses.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::ontology::{parse_signature, Ontology, TypeName};

/// Type that reified events and role atoms are constrained to.
pub const ACTIVITY: &str = "activity";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pos {
    Noun,
    Adjective,
    Verb,
    ProperNoun,
}

impl Pos {
    pub fn keyword(self) -> &'static str {
        match self {
            Pos::Noun => "noun",
            Pos::Adjective => "adj",
            Pos::Verb => "verb",
            Pos::ProperNoun => "pn",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Pos> {
        Some(match s {
            "noun" => Pos::Noun,
            "adj" => Pos::Adjective,
            "verb" => Pos::Verb,
            "pn" => Pos::ProperNoun,
            _ => return None,
        })
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Sense {
    /// A common noun naming a type.
    Type(TypeName),
    /// A type-constrained predicate: adjectives, opaque nouns like `thief`,
    /// and relational (non-reified) verbs.
    Pred { name: String, args: Vec<TypeName> },
    /// A noun defined by an event template: `dancer` is the AGENT of some
    /// `dancing`.
    Defined {
        pred: String,
        subject: TypeName,
        event: TypeName,
        role: String,
    },
    /// A verb reified as an activity with SUBJECT/OBJECT roles.
    Frame {
        activity: String,
        subject: TypeName,
        object: Option<TypeName>,
    },
    /// A proper name. Names start at `thing` unless a type is given.
    ProperName { ty: Option<TypeName> },
}

impl Sense {
    fn fits(&self, pos: Pos) -> bool {
        match (pos, self) {
            (Pos::Noun, Sense::Type(_) | Sense::Defined { .. }) => true,
            (Pos::Noun, Sense::Pred { args, .. }) => args.len() == 1,
            (Pos::Adjective, Sense::Pred { args, .. }) => args.len() == 1,
            (Pos::Verb, Sense::Frame { .. }) => true,
            (Pos::Verb, Sense::Pred { args, .. }) => args.len() == 2,
            (Pos::ProperNoun, Sense::ProperName { .. }) => true,
            _ => false,
        }
    }

    fn types(&self) -> Vec<&TypeName> {
        match self {
            Sense::Type(t) => vec![t],
            Sense::Pred { args, .. } => args.iter().collect(),
            Sense::Defined { subject, event, .. } => vec![subject, event],
            Sense::Frame {
                subject, object, ..
            } => std::iter::once(subject).chain(object.as_ref()).collect(),
            Sense::ProperName { ty } => ty.iter().collect(),
        }
    }
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sense::Type(t) => write!(f, "type {t}"),
            Sense::Pred { name, args } => {
                let args: Vec<&str> = args.iter().map(TypeName::as_str).collect();
                write!(f, "pred {name}({})", args.join(", "))
            }
            Sense::Defined {
                pred,
                subject,
                event,
                role,
            } => {
                write!(f, "defined {pred} {subject} {event} {role}")
            }
            Sense::Frame {
                activity,
                subject,
                object,
            } => {
                write!(f, "frame {activity} subj {subject}")?;
                if let Some(o) = object {
                    write!(f, " obj {o}")?;
                }
                Ok(())
            }
            Sense::ProperName { ty: Some(t) } => write!(f, "type {t}"),
            Sense::ProperName { ty: None } => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexEntry {
    pub word: String,
    pub pos: Pos,
    pub senses: Vec<Sense>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexiconError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown type `{name}`")]
    UnknownType { line: usize, name: String },
    #[error("line {line}: `{word}` has no senses")]
    EmptySenses { line: usize, word: String },
    #[error("line {line}: sense `{sense}` does not fit part of speech `{pos}`")]
    PosMismatch {
        line: usize,
        pos: Pos,
        sense: String,
    },
    #[error("line {line}: event type `{event}` is not an activity")]
    EventNotActivity { line: usize, event: String },
    #[error("line {line}: reified senses need an `activity` type in the ontology")]
    MissingActivityType { line: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeMap<(Pos, String), LexEntry>,
}

pub fn load_lexicon(source: &str, ontology: &Ontology) -> Result<Lexicon, LexiconError> {
    Lexicon::parse(source, ontology)
}

/// Lookup key: proper names keep their case (spaces become `_`), every
/// other part of speech is case-insensitive.
fn key(word: &str, pos: Pos) -> String {
    match pos {
        Pos::ProperNoun => word.split_whitespace().collect::<Vec<_>>().join("_"),
        _ => word.to_lowercase(),
    }
}

fn parse_sense(text: &str, line: usize) -> Result<Sense, LexiconError> {
    let syntax = |message: String| LexiconError::Syntax { line, message };
    let words: Vec<&str> = text.split_whitespace().collect();
    match words.first().copied() {
        Some("type") if words.len() == 2 => Ok(Sense::Type(TypeName::from(words[1]))),
        Some("pred") => {
            let sig = text.trim()["pred".len()..].trim();
            let (name, args) = parse_signature(sig)
                .ok_or_else(|| syntax(format!("malformed predicate `{sig}`")))?;
            if args.is_empty() {
                return Err(syntax(format!("predicate `{name}` needs argument types")));
            }
            Ok(Sense::Pred {
                name,
                args: args.into_iter().map(TypeName::new).collect(),
            })
        }
        Some("defined") if words.len() == 5 => Ok(Sense::Defined {
            pred: words[1].to_owned(),
            subject: TypeName::from(words[2]),
            event: TypeName::from(words[3]),
            role: words[4].to_owned(),
        }),
        Some("frame") => match words[1..] {
            [act, "subj", s] => Ok(Sense::Frame {
                activity: act.to_owned(),
                subject: TypeName::from(s),
                object: None,
            }),
            [act, "subj", s, "obj", o] => Ok(Sense::Frame {
                activity: act.to_owned(),
                subject: TypeName::from(s),
                object: Some(TypeName::from(o)),
            }),
            _ => Err(syntax(
                "expected `frame PRED subj <type> [obj <type>]`".into(),
            )),
        },
        _ => Err(syntax(format!("unrecognised sense `{}`", text.trim()))),
    }
}

impl Lexicon {
    pub fn parse(source: &str, ontology: &Ontology) -> Result<Self, LexiconError> {
        let mut lex = Lexicon::default();
        for (i, raw) in source.lines().enumerate() {
            let line = i + 1;
            let text = match raw.find('#') {
                Some(j) => &raw[..j],
                None => raw,
            }
            .trim();
            if text.is_empty() {
                continue;
            }
            let syntax = |message: &str| LexiconError::Syntax {
                line,
                message: message.to_owned(),
            };
            let (head, body) = match text.split_once(':') {
                Some((h, b)) => (h.trim(), Some(b.trim())),
                None => (text, None),
            };
            let mut head_words = head.split_whitespace();
            let pos = head_words
                .next()
                .and_then(Pos::from_keyword)
                .ok_or_else(|| syntax("expected `noun`, `adj`, `verb` or `pn`"))?;
            let word: Vec<&str> = head_words.collect();
            if word.is_empty() {
                return Err(syntax("missing word"));
            }
            if pos != Pos::ProperNoun && word.len() > 1 {
                return Err(syntax("only proper names may span several words"));
            }
            let word = word.join(" ");

            let senses = match (pos, body) {
                (Pos::ProperNoun, None) => vec![Sense::ProperName { ty: None }],
                (Pos::ProperNoun, Some(b)) => match b.split_whitespace().collect::<Vec<_>>()[..] {
                    ["type", t] => vec![Sense::ProperName {
                        ty: Some(TypeName::from(t)),
                    }],
                    _ => return Err(syntax("expected `pn <Name> [: type <t>]`")),
                },
                (_, None) => return Err(LexiconError::EmptySenses { line, word }),
                (_, Some(b)) => {
                    let parts: Vec<&str> = b
                        .split('|')
                        .map(str::trim)
                        .filter(|p| !p.is_empty())
                        .collect();
                    if parts.is_empty() {
                        return Err(LexiconError::EmptySenses { line, word });
                    }
                    parts
                        .into_iter()
                        .map(|p| parse_sense(p, line))
                        .collect::<Result<Vec<_>, _>>()?
                }
            };

            for s in &senses {
                if !s.fits(pos) {
                    return Err(LexiconError::PosMismatch {
                        line,
                        pos,
                        sense: s.to_string(),
                    });
                }
                for t in s.types() {
                    if !ontology.contains(t.as_str()) {
                        return Err(LexiconError::UnknownType {
                            line,
                            name: t.to_string(),
                        });
                    }
                }
                if matches!(s, Sense::Defined { .. } | Sense::Frame { .. }) {
                    let activity = TypeName::from(ACTIVITY);
                    if !ontology.contains(ACTIVITY) {
                        return Err(LexiconError::MissingActivityType { line });
                    }
                    if let Sense::Defined { event, .. } = s {
                        if !ontology.subsumes(event, &activity).unwrap_or(false) {
                            return Err(LexiconError::EventNotActivity {
                                line,
                                event: event.to_string(),
                            });
                        }
                    }
                }
            }

            let k = key(&word, pos);
            let entry = lex
                .entries
                .entry((pos, k.clone()))
                .or_insert_with(|| LexEntry {
                    word: if pos == Pos::ProperNoun {
                        word.clone()
                    } else {
                        k
                    },
                    pos,
                    senses: Vec::new(),
                });
            for s in senses {
                if !entry.senses.contains(&s) {
                    entry.senses.push(s);
                }
            }
        }
        Ok(lex)
    }

    /// All senses of `(word, pos)`; empty when the word is absent.
    pub fn lookup(&self, word: &str, pos: Pos) -> &[Sense] {
        self.entries
            .get(&(pos, key(word, pos)))
            .map(|e| e.senses.as_slice())
            .unwrap_or(&[])
    }

    pub fn has(&self, word: &str, pos: Pos) -> bool {
        !self.lookup(word, pos).is_empty()
    }

    /// Whether the word has any entry at all.
    pub fn knows(&self, word: &str) -> bool {
        [Pos::Noun, Pos::Adjective, Pos::Verb, Pos::ProperNoun]
            .into_iter()
            .any(|p| self.has(word, p))
    }

    pub fn entries(&self) -> impl Iterator<Item = &LexEntry> {
        self.entries.values()
    }

    /// Proper names spanning several words, as word lists, longest first.
    pub fn multiword_names(&self) -> Vec<Vec<&str>> {
        let mut names: Vec<Vec<&str>> = self
            .entries
            .values()
            .filter(|e| e.pos == Pos::ProperNoun)
            .map(|e| e.word.split_whitespace().collect::<Vec<_>>())
            .filter(|w| w.len() > 1)
            .collect();
        names.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        names
    }
}

/// Prints the lexicon in its file format, one line per entry.
impl fmt::Display for Lexicon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in self.entries.values() {
            if e.pos == Pos::ProperNoun {
                for s in &e.senses {
                    match s {
                        Sense::ProperName { ty: Some(t) } => {
                            writeln!(f, "pn {} : type {t}", e.word)?
                        }
                        _ => writeln!(f, "pn {}", e.word)?,
                    }
                }
                continue;
            }
            let senses: Vec<String> = e.senses.iter().map(Sense::to_string).collect();
            writeln!(f, "{} {} : {}", e.pos, e.word, senses.join(" | "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn onto() -> Ontology {
        Ontology::parse(
            "type thing\ntype entity < thing\ntype physical < entity\ntype human < physical\n\
             type abstract < entity\ntype event < abstract\ntype activity < event\n\
             type dancing < activity\ntype socialEvent < event\ntype politicalGroup < entity\n\
             type book < physical",
        )
        .unwrap()
    }

    #[test]
    fn parses_each_sense_kind() {
        let lex = Lexicon::parse(
            "noun party : type politicalGroup | type socialEvent\n\
             adj tall : pred TALL(physical)\n\
             adj beautiful : pred BEAUTIFUL(entity)\n\
             noun dancer : defined DANCER human dancing AGENT\n\
             noun thief : pred THIEF(human)\n\
             verb cancelled : frame CANCELLATION subj human obj event\n\
             verb sleeps : frame SLEEPING subj human\n\
             verb owns : pred OWN(human, entity)\n\
             pn Sheba\n\
             pn Das Kapital : type book # a title\n",
            &onto(),
        )
        .unwrap();
        assert_eq!(
            lex.lookup("party", Pos::Noun),
            &[
                Sense::Type("politicalGroup".into()),
                Sense::Type("socialEvent".into())
            ]
        );
        assert_eq!(
            lex.lookup("tall", Pos::Adjective),
            &[Sense::Pred {
                name: "TALL".into(),
                args: vec!["physical".into()]
            }]
        );
        assert_eq!(
            lex.lookup("dancer", Pos::Noun),
            &[Sense::Defined {
                pred: "DANCER".into(),
                subject: "human".into(),
                event: "dancing".into(),
                role: "AGENT".into()
            }]
        );
        assert_eq!(
            lex.lookup("sleeps", Pos::Verb),
            &[Sense::Frame {
                activity: "SLEEPING".into(),
                subject: "human".into(),
                object: None
            }]
        );
        assert!(lex.has("BEAUTIFUL", Pos::Adjective));
        assert!(lex.lookup("zzz", Pos::Noun).is_empty());
        assert!(lex.has("Sheba", Pos::ProperNoun));
        assert!(!lex.has("sheba", Pos::ProperNoun));
        assert_eq!(
            lex.lookup("Das_Kapital", Pos::ProperNoun),
            &[Sense::ProperName {
                ty: Some("book".into())
            }]
        );
        assert_eq!(lex.multiword_names(), vec![vec!["Das", "Kapital"]]);
    }

    #[test]
    fn load_errors() {
        let o = onto();
        assert!(matches!(
            Lexicon::parse("noun cat : type cat", &o),
            Err(LexiconError::UnknownType { line: 1, .. })
        ));
        assert!(matches!(
            Lexicon::parse("noun cat :", &o),
            Err(LexiconError::EmptySenses { .. })
        ));
        assert!(matches!(
            Lexicon::parse("noun cat", &o),
            Err(LexiconError::EmptySenses { .. })
        ));
        assert!(matches!(
            Lexicon::parse("adj old : type entity", &o),
            Err(LexiconError::PosMismatch { .. })
        ));
        assert!(matches!(
            Lexicon::parse("verb runs : type entity", &o),
            Err(LexiconError::PosMismatch { .. })
        ));
        assert!(matches!(
            Lexicon::parse("noun x : defined X human socialEvent AGENT", &o),
            Err(LexiconError::EventNotActivity { .. })
        ));
        assert!(matches!(
            Lexicon::parse("adverb x : type entity", &o),
            Err(LexiconError::Syntax { .. })
        ));
        let no_activity = Ontology::parse("type thing\ntype human < thing").unwrap();
        assert!(matches!(
            Lexicon::parse("verb sleeps : frame SLEEPING subj human", &no_activity),
            Err(LexiconError::MissingActivityType { .. })
        ));
    }

    #[test]
    fn repeated_lines_accumulate() {
        let lex = Lexicon::parse(
            "noun party : type socialEvent\nnoun party : type politicalGroup\nnoun party : type socialEvent",
            &onto(),
        )
        .unwrap();
        assert_eq!(lex.lookup("party", Pos::Noun).len(), 2);
    }

    #[test]
    fn display_reloads_identically() {
        let src = "noun party : type politicalGroup | type socialEvent\n\
                   verb sleeps : frame SLEEPING subj human\n\
                   pn Das Kapital : type book\npn Jon\n";
        let lex = Lexicon::parse(src, &onto()).unwrap();
        let again = Lexicon::parse(&lex.to_string(), &onto()).unwrap();
        assert_eq!(lex, again);
    }
}
