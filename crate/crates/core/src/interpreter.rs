//! From parse trees to resolved readings.
//!
//! [`translate`] builds the initial form, where every variable still carries
//! one annotation per mention. [`check_adjective_order`] vets nested adjective
//! casts (upward only). [`resolve`] then unifies annotations in two phases:
//!
//! 1. Local: each variable's conjunctive annotations are folded left to right
//!    without bridging. Atoms inside a disjunction are checked against the
//!    folded type and become Bottom when they clash, which prunes that
//!    disjunct.
//! 2. Bridging: only a variable whose local fold is Bottom is re-folded with
//!    msr bridging. The argument position that failed is rebound to a fresh
//!    variable linked to the original through the salient relation.
//!
//! Surviving sense choices become separate readings; attachment ambiguity
//! stays inside one reading as a disjunction.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::lexicon::{Lexicon, Pos, Sense, ACTIVITY};
use crate::logic::{print_canonical, simplify, Arg, Formula, LogicError, QuantKind, Var};
use crate::ontology::{
    Bridge, Ontology, OntologyError, RelationSig, TypeName, TypeSet, UnifyCase, UnifyOutcome, ROOT,
};
use crate::parser::{parse, tokenize, Np, ParseError, ParseTree};

pub const SUBJECT: &str = "SUBJECT";
pub const OBJECT: &str = "OBJECT";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("no {pos} entry for `{word}`")]
    MissingEntry { word: String, pos: Pos },
    #[error("verb `{verb}` takes no object")]
    FrameArity { verb: String },
    #[error("adjective `{0}` has senses with different predicates")]
    AmbiguousModifier(String),
    #[error("noun `{0}` mixes type senses with defined or predicate senses")]
    MixedNounSenses(String),
    #[error("`{0}` names a type; nothing is predicated of the subject")]
    NothingPredicated(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("no reading survives unification")]
    NoReading {
        trace: UnifyTrace,
        warnings: Vec<String>,
    },
    #[error(transparent)]
    Ontology(#[from] OntologyError),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpretError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Ontology(#[from] OntologyError),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// A fully resolved form and its canonical print.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reading {
    pub form: Formula,
    pub gloss: String,
}

impl Reading {
    pub fn new(form: Formula) -> Self {
        let gloss = print_canonical(&form);
        Reading { form, gloss }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Local,
    Bridging,
    /// Checking an atom inside a disjunction against the resolved type.
    Attachment,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnifyStep {
    pub var: String,
    pub phase: Phase,
    pub left: TypeSet,
    pub right: TypeSet,
    pub case: UnifyCase,
    /// The surviving type; the kept left type for a bridge; Bottom otherwise.
    pub output: TypeSet,
    pub relation: Option<RelationSig>,
}

impl fmt::Display for UnifyStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} :: ({} • {}) -> {} [{}",
            self.var, self.left, self.right, self.output, self.case
        )?;
        if let Some(r) = &self.relation {
            write!(f, " {r}")?;
        }
        f.write_str("]")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UnifyTrace {
    pub steps: Vec<UnifyStep>,
    /// Each variable's phase-one result, in binding order.
    pub local_folds: Vec<(String, TypeSet)>,
}

impl UnifyTrace {
    fn push(&mut self, step: UnifyStep) {
        if !self.steps.contains(&step) {
            self.steps.push(step);
        }
    }

    fn extend(&mut self, other: UnifyTrace) {
        for s in other.steps {
            self.push(s);
        }
        for fold in other.local_folds {
            if !self.local_folds.contains(&fold) {
                self.local_folds.push(fold);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub readings: Vec<Reading>,
    pub trace: UnifyTrace,
    pub warnings: Vec<String>,
}

/// One step of an adjective cast chain, inner to outer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CastStep {
    pub pred: String,
    pub from: TypeSet,
    pub to: TypeSet,
    pub allowed: bool,
}

impl fmt::Display for CastStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.allowed { "allowed" } else { "blocked" };
        write!(f, "{}: {} -> {} {verdict}", self.pred, self.from, self.to)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterpretResult {
    pub sentence: String,
    pub readings: Vec<Reading>,
    pub trace: UnifyTrace,
    pub warnings: Vec<String>,
    pub initial: Vec<Formula>,
    pub casts: Vec<CastStep>,
}

impl InterpretResult {
    pub fn is_blocked(&self) -> bool {
        self.readings.is_empty()
    }
}

// ---------------------------------------------------------------------------
// translation

struct Translator<'a> {
    lex: &'a Lexicon,
    used: HashSet<String>,
    names: BTreeMap<String, Var>,
    np_quants: Vec<(QuantKind, Var, Vec<TypeSet>)>,
    event_quants: Vec<(QuantKind, Var, Vec<TypeSet>)>,
    events: usize,
}

fn activity() -> TypeSet {
    TypeSet::single(TypeName::from(ACTIVITY))
}

fn single(t: &TypeName) -> TypeSet {
    TypeSet::single(t.clone())
}

impl<'a> Translator<'a> {
    fn new(lex: &'a Lexicon) -> Self {
        Translator {
            lex,
            used: HashSet::new(),
            names: BTreeMap::new(),
            np_quants: Vec::new(),
            event_quants: Vec::new(),
            events: 0,
        }
    }

    fn fresh(&mut self, base: &str) -> Var {
        let mut name = base.to_owned();
        let mut n = 1;
        while self.used.contains(&name) {
            n += 1;
            name = format!("{base}{n}");
        }
        self.used.insert(name.clone());
        Var::new(name)
    }

    fn event_var(&mut self, ty: TypeSet) -> Var {
        loop {
            self.events += 1;
            let name = format!("a{}", self.events);
            if self.used.insert(name.clone()) {
                let v = Var::new(name);
                self.event_quants
                    .push((QuantKind::Exists, v.clone(), vec![ty]));
                return v;
            }
        }
    }

    fn senses(&self, word: &str, pos: Pos) -> Result<&'a [Sense], TranslateError> {
        let s = self.lex.lookup(word, pos);
        if s.is_empty() {
            Err(TranslateError::MissingEntry {
                word: word.to_owned(),
                pos,
            })
        } else {
            Ok(s)
        }
    }

    fn adjective(&self, word: &str) -> Result<(String, TypeSet), TranslateError> {
        let mut name: Option<&str> = None;
        let mut types = TypeSet::bottom();
        for s in self.senses(word, Pos::Adjective)? {
            if let Sense::Pred { name: n, args } = s {
                if name.is_some_and(|prev| prev != n) {
                    return Err(TranslateError::AmbiguousModifier(word.to_owned()));
                }
                name = Some(n);
                types.insert(args[0].clone());
            }
        }
        let name = name.ok_or_else(|| TranslateError::AmbiguousModifier(word.to_owned()))?;
        Ok((name.to_owned(), types))
    }

    /// Stacked adjectives: the one nearest the noun applies to the variable,
    /// each earlier one casts the term built so far.
    fn chain(&self, adjs: &[String], v: &Var) -> Result<Option<Formula>, TranslateError> {
        let Some((last, outer)) = adjs.split_last() else {
            return Ok(None);
        };
        let (pred, types) = self.adjective(last)?;
        let mut f = Formula::atom(pred, vec![Arg::new(v.clone(), types)]);
        for adj in outer.iter().rev() {
            let (pred, types) = self.adjective(adj)?;
            f = Formula::cast(pred, f, types);
        }
        Ok(Some(f))
    }

    fn modifiers(
        &self,
        adjs: &[String],
        v: &Var,
        event: Option<&Var>,
    ) -> Result<Option<Formula>, TranslateError> {
        let Some(on_subject) = self.chain(adjs, v)? else {
            return Ok(None);
        };
        Ok(Some(match event {
            Some(e) => {
                let on_event = self.chain(adjs, e)?.expect("same adjectives");
                Formula::or(on_subject, on_event)
            }
            None => on_subject,
        }))
    }

    /// The variable an NP introduces and the atoms that describe it.
    fn np(&mut self, np: &Np) -> Result<(Var, Vec<Formula>), TranslateError> {
        let (kind, adjs, noun) = match np {
            Np::Proper(name) => {
                if let Some(v) = self.names.get(name) {
                    return Ok((v.clone(), Vec::new()));
                }
                let ty = self
                    .senses(name, Pos::ProperNoun)?
                    .iter()
                    .find_map(|s| match s {
                        Sense::ProperName { ty } => ty.clone(),
                        _ => None,
                    })
                    .unwrap_or_else(|| TypeName::from(ROOT));
                let v = self.fresh(name);
                self.names.insert(name.clone(), v.clone());
                self.np_quants
                    .push((QuantKind::ExistsUnique, v.clone(), vec![single(&ty)]));
                return Ok((v, Vec::new()));
            }
            Np::Indef { adjs, noun } => (QuantKind::Exists, adjs, noun),
            Np::Def { adjs, noun } => (QuantKind::ExistsUnique, adjs, noun),
        };
        let base: String = noun
            .chars()
            .next()
            .map(|c| c.to_lowercase().collect())
            .unwrap_or_default();
        let v = self.fresh(&base);
        let mut atoms = Vec::new();
        match NounMeaning::of(noun, self.senses(noun, Pos::Noun)?)? {
            NounMeaning::Types(set) => {
                self.np_quants.push((kind, v.clone(), vec![set]));
                atoms.extend(self.modifiers(adjs, &v, None)?);
            }
            NounMeaning::Pred(name, ty) => {
                self.np_quants
                    .push((kind, v.clone(), vec![single(&TypeName::from(ROOT))]));
                atoms.push(Formula::atom(name, vec![Arg::new(v.clone(), single(&ty))]));
                atoms.extend(self.modifiers(adjs, &v, None)?);
            }
            NounMeaning::Defined {
                subject,
                event,
                role,
            } => {
                self.np_quants
                    .push((kind, v.clone(), vec![single(&subject)]));
                let e = self.event_var(single(&event));
                atoms.push(Formula::atom(
                    role,
                    vec![
                        Arg::new(e.clone(), activity()),
                        Arg::new(v.clone(), single(&subject)),
                    ],
                ));
                atoms.extend(self.modifiers(adjs, &v, Some(&e))?);
            }
        }
        Ok((v, atoms))
    }

    fn verb(
        &mut self,
        verb: &str,
        sense: &Sense,
        s: &Var,
        o: &Var,
    ) -> Result<Vec<Formula>, TranslateError> {
        match sense {
            Sense::Frame {
                activity: act,
                subject,
                object,
            } => {
                let object = object.as_ref().ok_or_else(|| TranslateError::FrameArity {
                    verb: verb.to_owned(),
                })?;
                let a = self.event_var(activity());
                Ok(vec![
                    Formula::atom(act.clone(), vec![Arg::new(a.clone(), activity())]),
                    Formula::atom(
                        SUBJECT,
                        vec![
                            Arg::new(a.clone(), activity()),
                            Arg::new(s.clone(), single(subject)),
                        ],
                    ),
                    Formula::atom(
                        OBJECT,
                        vec![Arg::new(a, activity()), Arg::new(o.clone(), single(object))],
                    ),
                ])
            }
            Sense::Pred { name, args } => Ok(vec![Formula::atom(
                name.clone(),
                vec![
                    Arg::new(s.clone(), single(&args[0])),
                    Arg::new(o.clone(), single(&args[1])),
                ],
            )]),
            _ => Err(TranslateError::MissingEntry {
                word: verb.to_owned(),
                pos: Pos::Verb,
            }),
        }
    }

    fn finish(self, atoms: Vec<Formula>) -> Formula {
        let body = Formula::conj(atoms).expect("every clause contributes an atom");
        self.np_quants
            .into_iter()
            .chain(self.event_quants)
            .rev()
            .fold(body, |body, (kind, var, types)| {
                Formula::quant(kind, var, types, body)
            })
    }
}

enum NounMeaning {
    Types(TypeSet),
    Pred(String, TypeName),
    Defined {
        subject: TypeName,
        event: TypeName,
        role: String,
    },
}

impl NounMeaning {
    fn of(noun: &str, senses: &[Sense]) -> Result<Self, TranslateError> {
        if senses.iter().all(|s| matches!(s, Sense::Type(_))) {
            return Ok(NounMeaning::Types(
                senses
                    .iter()
                    .filter_map(|s| match s {
                        Sense::Type(t) => Some(t.clone()),
                        _ => None,
                    })
                    .collect(),
            ));
        }
        match senses {
            [Sense::Pred { name, args }] => Ok(NounMeaning::Pred(name.clone(), args[0].clone())),
            [Sense::Defined {
                subject,
                event,
                role,
                ..
            }] => Ok(NounMeaning::Defined {
                subject: subject.clone(),
                event: event.clone(),
                role: role.clone(),
            }),
            _ => Err(TranslateError::MixedNounSenses(noun.to_owned())),
        }
    }
}

/// Builds the initial, unresolved forms for a parse tree: one per
/// combination of verb senses (a single form when verbs are unambiguous).
pub fn translate(
    tree: &ParseTree,
    lex: &Lexicon,
    _g: &Ontology,
) -> Result<Vec<Formula>, TranslateError> {
    let verbs: Vec<&str> = match tree {
        ParseTree::Transitive { verb, .. } => vec![verb.as_str()],
        ParseTree::CoordTransitive { verbs, .. } => verbs.iter().map(String::as_str).collect(),
        _ => Vec::new(),
    };
    let mut choices: Vec<Vec<&Sense>> = vec![Vec::new()];
    for v in &verbs {
        let senses = lex.lookup(v, Pos::Verb);
        if senses.is_empty() {
            return Err(TranslateError::MissingEntry {
                word: (*v).to_owned(),
                pos: Pos::Verb,
            });
        }
        choices = choices
            .into_iter()
            .flat_map(|prefix| {
                senses.iter().map(move |s| {
                    let mut c = prefix.clone();
                    c.push(s);
                    c
                })
            })
            .collect();
    }
    choices
        .into_iter()
        .map(|choice| translate_one(tree, lex, &verbs, &choice))
        .collect()
}

fn translate_one(
    tree: &ParseTree,
    lex: &Lexicon,
    verbs: &[&str],
    senses: &[&Sense],
) -> Result<Formula, TranslateError> {
    let mut tr = Translator::new(lex);
    let atoms = match tree {
        ParseTree::CopulaNp { subject, pred } => {
            let (s, mut atoms) = tr.np(subject)?;
            let (adjs, noun) = match pred {
                Np::Indef { adjs, noun } | Np::Def { adjs, noun } => (adjs, noun),
                Np::Proper(name) => return Err(TranslateError::NothingPredicated(name.clone())),
            };
            match NounMeaning::of(noun, tr.senses(noun, Pos::Noun)?)? {
                NounMeaning::Types(set) => {
                    if adjs.is_empty() {
                        return Err(TranslateError::NothingPredicated(noun.clone()));
                    }
                    if let Some((_, _, types)) = tr.np_quants.iter_mut().find(|(_, v, _)| v == &s) {
                        types.push(set);
                    }
                    atoms.extend(tr.modifiers(adjs, &s, None)?);
                }
                NounMeaning::Pred(name, ty) => {
                    atoms.push(Formula::atom(name, vec![Arg::new(s.clone(), single(&ty))]));
                    atoms.extend(tr.modifiers(adjs, &s, None)?);
                }
                NounMeaning::Defined {
                    subject,
                    event,
                    role,
                } => {
                    let e = tr.event_var(single(&event));
                    atoms.push(Formula::atom(
                        role,
                        vec![
                            Arg::new(e.clone(), activity()),
                            Arg::new(s.clone(), single(&subject)),
                        ],
                    ));
                    atoms.extend(tr.modifiers(adjs, &s, Some(&e))?);
                }
            }
            atoms
        }
        ParseTree::CopulaAdj { subject, adjs } => {
            let (s, mut atoms) = tr.np(subject)?;
            for adj in adjs {
                atoms.extend(tr.chain(std::slice::from_ref(adj), &s)?);
            }
            atoms
        }
        ParseTree::Transitive {
            subject, object, ..
        }
        | ParseTree::CoordTransitive {
            subject, object, ..
        } => {
            let (s, mut atoms) = tr.np(subject)?;
            let (o, obj_atoms) = tr.np(object)?;
            atoms.extend(obj_atoms);
            for (verb, sense) in verbs.iter().zip(senses) {
                atoms.extend(tr.verb(verb, sense, &s, &o)?);
            }
            atoms
        }
    };
    Ok(tr.finish(atoms))
}

// ---------------------------------------------------------------------------
// adjective casts

fn chain_steps(f: &Formula, g: &Ontology, out: &mut Vec<CastStep>) -> TypeSet {
    match f {
        Formula::Atom(a) => a
            .args
            .first()
            .map(|arg| arg.types.clone())
            .unwrap_or_default(),
        Formula::Cast {
            pred,
            inner,
            target,
        } => {
            let from = chain_steps(inner, g, out);
            let allowed = from
                .iter()
                .any(|s| target.iter().any(|t| g.subsumes(s, t).unwrap_or(false)));
            out.push(CastStep {
                pred: pred.clone(),
                from,
                to: target.clone(),
                allowed,
            });
            target.clone()
        }
        _ => TypeSet::bottom(),
    }
}

/// Every cast step in the form, each chain inner to outer. A step from `s`
/// to `t` is allowed iff `s <= t`.
pub fn check_adjective_order(f: &Formula, g: &Ontology) -> Vec<CastStep> {
    fn visit(f: &Formula, g: &Ontology, out: &mut Vec<CastStep>) {
        match f {
            Formula::Cast { .. } => {
                chain_steps(f, g, out);
            }
            Formula::Quant { body, .. } => visit(body, g, out),
            Formula::And(l, r) | Formula::Or(l, r) => {
                visit(l, g, out);
                visit(r, g, out);
            }
            Formula::Atom(_) | Formula::Bottom => {}
        }
    }
    let mut out = Vec::new();
    visit(f, g, &mut out);
    out
}

/// Replaces every cast chain containing a downward step with Bottom.
pub fn apply_adjective_order(f: &Formula, g: &Ontology) -> Formula {
    match f {
        Formula::Cast { .. } => {
            let mut steps = Vec::new();
            chain_steps(f, g, &mut steps);
            if steps.iter().all(|s| s.allowed) {
                f.clone()
            } else {
                Formula::Bottom
            }
        }
        Formula::Quant {
            kind,
            var,
            types,
            body,
        } => Formula::quant(
            *kind,
            var.clone(),
            types.clone(),
            apply_adjective_order(body, g),
        ),
        Formula::And(l, r) => {
            Formula::and(apply_adjective_order(l, g), apply_adjective_order(r, g))
        }
        Formula::Or(l, r) => Formula::or(apply_adjective_order(l, g), apply_adjective_order(r, g)),
        Formula::Atom(_) | Formula::Bottom => f.clone(),
    }
}

// ---------------------------------------------------------------------------
// resolution

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Site {
    Quant(usize),
    Arg { atom: usize, arg: usize },
}

#[derive(Debug, Clone)]
struct Occurrence {
    site: Site,
    types: TypeSet,
}

#[derive(Debug, Default)]
struct VarInfo {
    mandatory: Vec<Occurrence>,
}

fn collect(f: &Formula) -> Result<(Vec<Var>, BTreeMap<Var, VarInfo>), LogicError> {
    fn go(
        f: &Formula,
        under_or: bool,
        atom_no: &mut usize,
        bound: &mut Vec<Var>,
        info: &mut BTreeMap<Var, VarInfo>,
    ) -> Result<(), LogicError> {
        match f {
            Formula::Quant {
                var, types, body, ..
            } => {
                bound.push(var.clone());
                let entry = info.entry(var.clone()).or_default();
                entry
                    .mandatory
                    .extend(types.iter().enumerate().map(|(i, t)| Occurrence {
                        site: Site::Quant(i),
                        types: t.clone(),
                    }));
                go(body, under_or, atom_no, bound, info)
            }
            Formula::Atom(a) => {
                let n = *atom_no;
                *atom_no += 1;
                for (i, arg) in a.args.iter().enumerate() {
                    let entry = info
                        .get_mut(&arg.var)
                        .ok_or_else(|| LogicError::Unbound(arg.var.to_string()))?;
                    if !under_or {
                        entry.mandatory.push(Occurrence {
                            site: Site::Arg { atom: n, arg: i },
                            types: arg.types.clone(),
                        });
                    }
                }
                Ok(())
            }
            Formula::And(l, r) => {
                go(l, under_or, atom_no, bound, info)?;
                go(r, under_or, atom_no, bound, info)
            }
            Formula::Or(l, r) => {
                go(l, true, atom_no, bound, info)?;
                go(r, true, atom_no, bound, info)
            }
            Formula::Cast { inner, .. } => go(inner, under_or, atom_no, bound, info),
            Formula::Bottom => Ok(()),
        }
    }
    let mut bound = Vec::new();
    let mut info = BTreeMap::new();
    go(f, false, &mut 0, &mut bound, &mut info)?;
    Ok((bound, info))
}

fn record_pairs(
    trace: &mut UnifyTrace,
    var: &Var,
    phase: Phase,
    pairs: &[crate::ontology::PairOutcome],
) {
    for p in pairs {
        let (output, relation) = match &p.outcome {
            UnifyOutcome::Single(u) => (TypeSet::single(u.clone()), None),
            UnifyOutcome::Bridge(b) => (
                TypeSet::single(b.kept_left.clone()),
                Some(b.relation.clone()),
            ),
            UnifyOutcome::Bottom => (TypeSet::bottom(), None),
        };
        trace.push(UnifyStep {
            var: var.to_string(),
            phase,
            left: TypeSet::single(p.left.clone()),
            right: TypeSet::single(p.right.clone()),
            case: p.case,
            output,
            relation,
        });
    }
}

fn fold_local(
    g: &Ontology,
    var: &Var,
    occs: &[&Occurrence],
    trace: &mut UnifyTrace,
) -> Result<TypeSet, OntologyError> {
    let mut acc = occs[0].types.clone();
    for occ in &occs[1..] {
        let u = g.unify_sets(&acc, &occ.types, false)?;
        record_pairs(trace, var, Phase::Local, &u.pairs);
        acc = u.result;
        if acc.is_bottom() {
            break;
        }
    }
    Ok(acc)
}

type BridgeSites = Vec<(Site, Vec<Bridge>)>;

/// Returns the folded set and, per rebound argument site, the bridges that
/// could serve it.
fn fold_bridging(
    g: &Ontology,
    var: &Var,
    occs: &[&Occurrence],
    trace: &mut UnifyTrace,
) -> Result<(TypeSet, BridgeSites), OntologyError> {
    let mut acc = occs[0].types.clone();
    let mut bridged = Vec::new();
    for occ in &occs[1..] {
        let u = g.unify_sets(&acc, &occ.types, true)?;
        record_pairs(trace, var, Phase::Bridging, &u.pairs);
        if !u.result.is_bottom() {
            acc = u.result;
        } else if !u.bridges.is_empty() && matches!(occ.site, Site::Arg { .. }) {
            acc = u.bridges.iter().map(|b| b.kept_left.clone()).collect();
            bridged.push((occ.site, u.bridges));
        } else {
            return Ok((TypeSet::bottom(), bridged));
        }
    }
    Ok((acc, bridged))
}

/// Reorders a variable's annotations for folding.
pub type FoldOrder<'a> = &'a dyn Fn(&Var, usize) -> Vec<usize>;

#[derive(Default)]
pub struct ResolveOptions<'a> {
    /// Permutation of each variable's conjunctive annotations (quantifier
    /// sets first, then argument positions). The bridging phase keeps the
    /// quantifier sets as its seed and applies the permutation to the rest.
    pub fold_order: Option<FoldOrder<'a>>,
}

struct Splice {
    quants: Vec<(Var, TypeSet)>,
    atoms: Vec<Formula>,
}

fn fresh_name(used: &mut HashSet<String>, base: &str) -> Var {
    let mut n = 1;
    loop {
        let name = format!("{base}{n}");
        if used.insert(name.clone()) {
            return Var::new(name);
        }
        n += 1;
    }
}

struct Rewrite<'a> {
    g: &'a Ontology,
    assign: &'a BTreeMap<Var, TypeName>,
    rebind: &'a BTreeMap<Site, (Var, TypeName)>,
    atom_no: usize,
    trace: &'a mut UnifyTrace,
}

impl Rewrite<'_> {
    fn formula(&mut self, f: &Formula, under_or: bool) -> Result<Formula, OntologyError> {
        Ok(match f {
            Formula::Quant {
                kind, var, body, ..
            } => {
                let ty = self.assign[var].clone();
                let body = self.formula(body, under_or)?;
                Formula::quant(*kind, var.clone(), vec![TypeSet::single(ty)], body)
            }
            Formula::Atom(a) => {
                let n = self.atom_no;
                self.atom_no += 1;
                let mut args = Vec::with_capacity(a.args.len());
                for (i, arg) in a.args.iter().enumerate() {
                    if let Some((fresh, ty)) = self.rebind.get(&Site::Arg { atom: n, arg: i }) {
                        args.push(Arg::new(fresh.clone(), TypeSet::single(ty.clone())));
                        continue;
                    }
                    let ty = TypeSet::single(self.assign[&arg.var].clone());
                    if under_or {
                        let u = self.g.unify_sets(&ty, &arg.types, false)?;
                        record_pairs(self.trace, &arg.var, Phase::Attachment, &u.pairs);
                        if u.result.is_bottom() {
                            return Ok(Formula::Bottom);
                        }
                    }
                    args.push(Arg::new(arg.var.clone(), ty));
                }
                Formula::atom(a.pred.clone(), args)
            }
            Formula::And(l, r) => {
                Formula::and(self.formula(l, under_or)?, self.formula(r, under_or)?)
            }
            Formula::Or(l, r) => Formula::or(self.formula(l, true)?, self.formula(r, true)?),
            Formula::Cast {
                pred,
                inner,
                target,
            } => Formula::cast(pred.clone(), self.formula(inner, under_or)?, target.clone()),
            Formula::Bottom => Formula::Bottom,
        })
    }
}

/// Inserts `quants` after the existing quantifier prefix and conjoins
/// `atoms` to the body.
fn splice(f: Formula, quants: Vec<(Var, TypeSet)>, atoms: Vec<Formula>) -> Formula {
    match f {
        Formula::Quant {
            kind,
            var,
            types,
            body,
        } => Formula::quant(kind, var, types, splice(*body, quants, atoms)),
        body => {
            let body = match Formula::conj(atoms) {
                Some(extra) => Formula::and(body, extra),
                None => body,
            };
            quants.into_iter().rev().fold(body, |b, (v, t)| {
                Formula::quant(QuantKind::Exists, v, vec![t], b)
            })
        }
    }
}

pub fn resolve(f: &Formula, g: &Ontology) -> Result<Resolution, ResolveError> {
    resolve_with(f, g, &ResolveOptions::default())
}

pub fn resolve_with(
    f: &Formula,
    g: &Ontology,
    opts: &ResolveOptions<'_>,
) -> Result<Resolution, ResolveError> {
    let mut trace = UnifyTrace::default();
    let mut warnings = Vec::new();
    let no_reading = |trace: UnifyTrace, mut warnings: Vec<String>, why: String| {
        warnings.push(why);
        Err(ResolveError::NoReading { trace, warnings })
    };
    if f.is_bottom() {
        return no_reading(
            trace,
            warnings,
            "the form reduced to _|_ before unification".into(),
        );
    }
    let (vars, info) = collect(f)?;
    for v in &vars {
        for t in info[v].mandatory.iter().flat_map(|o| o.types.iter()) {
            g.check_set(&TypeSet::single(t.clone()))?;
        }
    }

    let mut finals: Vec<(Var, TypeSet)> = Vec::new();
    let mut bridge_sites: Vec<(Var, Site, Vec<Bridge>)> = Vec::new();
    for v in &vars {
        let occs = &info[v].mandatory;
        let order: Vec<usize> = match opts.fold_order {
            Some(order) => order(v, occs.len()),
            None => (0..occs.len()).collect(),
        };
        let ordered: Vec<&Occurrence> = order.iter().map(|&i| &occs[i]).collect();
        let local = fold_local(g, v, &ordered, &mut trace)?;
        trace.local_folds.push((v.to_string(), local.clone()));
        if !local.is_bottom() {
            finals.push((v.clone(), local));
            continue;
        }
        let (seed, rest): (Vec<&Occurrence>, Vec<&Occurrence>) = ordered
            .iter()
            .partition(|o| matches!(o.site, Site::Quant(_)));
        let mut bridging_order = seed;
        bridging_order.extend(rest);
        let (result, sites) = fold_bridging(g, v, &bridging_order, &mut trace)?;
        if result.is_bottom() {
            return no_reading(
                trace,
                warnings,
                format!("no type for `{v}`: unification failed and no salient relation applies"),
            );
        }
        for (site, bridges) in sites {
            let b = &bridges[0];
            if let Some(choice) = g.msr_choice(&b.kept_left, &b.kept_right)? {
                if !choice.tied_with.is_empty() {
                    let others: Vec<String> =
                        choice.tied_with.iter().map(|r| r.to_string()).collect();
                    warnings.push(format!(
                        "msr tie for ({} • {}): chose {} over {}",
                        b.kept_left,
                        b.kept_right,
                        choice.relation,
                        others.join(", ")
                    ));
                }
            }
            bridge_sites.push((v.clone(), site, bridges));
        }
        finals.push((v.clone(), result));
    }

    for (v, set) in &finals {
        let first = &info[v].mandatory[0].types;
        if first.len() > 1 {
            for t in first.iter().filter(|t| !set.contains(t)) {
                warnings.push(format!("pruned sense `{t}` of `{v}`"));
            }
        }
    }

    let mut used: HashSet<String> = vars.iter().map(|v| v.to_string()).collect();
    // fresh variables are named once and shared by every sense combination
    let fresh: Vec<(Var, Option<Var>)> = bridge_sites
        .iter()
        .map(|(_, _, bridges)| {
            let verbal = bridges[0].relation.verbal.is_some();
            let e = verbal.then(|| fresh_name(&mut used, "a"));
            (fresh_name(&mut used, "x"), e)
        })
        .collect();

    let mut readings: Vec<Reading> = Vec::new();
    let mut combos: Vec<BTreeMap<Var, TypeName>> = vec![BTreeMap::new()];
    for (v, set) in &finals {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                set.iter().map(move |t| {
                    let mut c = c.clone();
                    c.insert(v.clone(), t.clone());
                    c
                })
            })
            .collect();
    }

    'combo: for assign in combos {
        let mut rebind = BTreeMap::new();
        let mut extra = Splice {
            quants: Vec::new(),
            atoms: Vec::new(),
        };
        for ((v, site, bridges), (x, e)) in bridge_sites.iter().zip(&fresh) {
            let Some(b) = bridges.iter().find(|b| b.kept_left == assign[v]) else {
                continue 'combo;
            };
            let slot_type = &b.relation.args[b.right_slot()];
            let u = g.unify_sets(
                &TypeSet::single(slot_type.clone()),
                &TypeSet::single(b.kept_right.clone()),
                false,
            )?;
            record_pairs(&mut trace, x, Phase::Bridging, &u.pairs);
            let x_type = u
                .result
                .as_single()
                .cloned()
                .unwrap_or_else(|| b.kept_right.clone());
            rebind.insert(*site, (x.clone(), x_type.clone()));

            let mut slots = [None, None];
            slots[b.left_slot] = Some(Arg::new(v.clone(), TypeSet::single(b.kept_left.clone())));
            slots[b.right_slot()] = Some(Arg::new(x.clone(), TypeSet::single(x_type.clone())));
            let [first, second] = slots.map(|s| s.expect("both slots filled"));
            match (&b.relation.verbal, e) {
                (Some(pred), Some(e)) => {
                    extra.quants.push((e.clone(), activity()));
                    extra.quants.push((x.clone(), TypeSet::single(x_type)));
                    extra.atoms.push(Formula::atom(
                        pred.clone(),
                        vec![Arg::new(e.clone(), activity())],
                    ));
                    extra.atoms.push(Formula::atom(
                        SUBJECT,
                        vec![Arg::new(e.clone(), activity()), first],
                    ));
                    extra.atoms.push(Formula::atom(
                        OBJECT,
                        vec![Arg::new(e.clone(), activity()), second],
                    ));
                }
                _ => {
                    extra.quants.push((x.clone(), TypeSet::single(x_type)));
                    extra
                        .atoms
                        .push(Formula::atom(b.relation.name.clone(), vec![first, second]));
                }
            }
        }

        let mut rw = Rewrite {
            g,
            assign: &assign,
            rebind: &rebind,
            atom_no: 0,
            trace: &mut trace,
        };
        let body = rw.formula(f, false)?;
        let form = simplify(&splice(body, extra.quants, extra.atoms));
        if form.is_bottom() {
            let choice: Vec<String> = assign.iter().map(|(v, t)| format!("{v} :: {t}")).collect();
            warnings.push(format!("no reading with {}", choice.join(", ")));
            continue;
        }
        let reading = Reading::new(form);
        if !readings.iter().any(|r| r.gloss == reading.gloss) {
            readings.push(reading);
        }
    }

    for (v, _, bridges) in &bridge_sites {
        let b = &bridges[0];
        warnings.push(format!(
            "`{v}` :: {} meets {}: bridged via {}",
            b.kept_left, b.kept_right, b.relation
        ));
    }

    if readings.is_empty() {
        return no_reading(
            trace,
            warnings,
            "every sense combination reduced to _|_".into(),
        );
    }
    Ok(Resolution {
        readings,
        trace,
        warnings,
    })
}

/// Splits in-form attachment disjunctions into separate forms.
pub fn expand_attachment(f: &Formula) -> Vec<Formula> {
    match f {
        Formula::Or(l, r) => {
            let mut out = expand_attachment(l);
            out.extend(expand_attachment(r));
            out
        }
        Formula::And(l, r) => {
            let rs = expand_attachment(r);
            expand_attachment(l)
                .into_iter()
                .flat_map(|l| rs.iter().map(move |r| Formula::and(l.clone(), r.clone())))
                .collect()
        }
        Formula::Quant {
            kind,
            var,
            types,
            body,
        } => expand_attachment(body)
            .into_iter()
            .map(|b| Formula::quant(*kind, var.clone(), types.clone(), b))
            .collect(),
        Formula::Cast {
            pred,
            inner,
            target,
        } => expand_attachment(inner)
            .into_iter()
            .map(|i| Formula::cast(pred.clone(), i, target.clone()))
            .collect(),
        Formula::Atom(_) | Formula::Bottom => vec![f.clone()],
    }
}

/// tokenize -> parse -> translate -> adjective casts -> resolve.
///
/// A sentence whose every reading is blocked is not an error: the result
/// has no readings and says why in `warnings`.
pub fn interpret(
    sentence: &str,
    lex: &Lexicon,
    g: &Ontology,
) -> Result<InterpretResult, InterpretError> {
    let tokens = tokenize(sentence, lex);
    let tree = parse(&tokens, lex)?;
    let initial = translate(&tree, lex, g)?;

    let mut result = InterpretResult {
        sentence: sentence.trim().to_owned(),
        readings: Vec::new(),
        trace: UnifyTrace::default(),
        warnings: Vec::new(),
        initial: initial.clone(),
        casts: Vec::new(),
    };
    for form in &initial {
        let casts = check_adjective_order(form, g);
        for c in casts.iter().filter(|c| !c.allowed) {
            result.warnings.push(format!(
                "blocked downward cast {} -> {} under {}",
                c.from, c.to, c.pred
            ));
        }
        result.casts.extend(casts);
        let checked = simplify(&apply_adjective_order(form, g));
        match resolve(&checked, g) {
            Ok(res) => {
                result.trace.extend(res.trace);
                result.warnings.extend(res.warnings);
                for r in res.readings {
                    if !result.readings.iter().any(|x| x.gloss == r.gloss) {
                        result.readings.push(r);
                    }
                }
            }
            Err(ResolveError::NoReading { trace, warnings }) => {
                result.trace.extend(trace);
                result.warnings.extend(warnings);
            }
            Err(ResolveError::Ontology(e)) => return Err(e.into()),
            Err(ResolveError::Logic(e)) => return Err(e.into()),
        }
    }
    let mut seen = HashSet::new();
    result.warnings.retain(|w| seen.insert(w.clone()));
    Ok(result)
}
