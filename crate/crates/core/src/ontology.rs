//! The type hierarchy and the relation registry.
//!
//! An [`Ontology`] is a rooted DAG of type names under `thing`. Subsumption
//! (`s <= t`) is reflexive-transitive reachability along parent edges and is
//! precomputed at load time, so every query after [`Ontology::parse`] is a
//! table lookup. The registry holds typed relation signatures; binary ones
//! feed [`Ontology::msr`], the most-salient-relation lookup used when two
//! types meet without either subsuming the other.
//!
//! File format, one declaration per line (`#` starts a comment):
//!
//! ```text
//! type thing
//! type vehicle < artifact
//! type human < living, agent
//! rel DRIVE(human, car)
//! rel EAT(human, food) verbal EATING
//! ```
//!
//! Forward references between `type` lines are allowed; the hierarchy is
//! validated once the whole file has been read.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Name of the unique root type.
pub const ROOT: &str = "thing";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeName(String);

impl TypeName {
    pub fn new(name: impl Into<String>) -> Self {
        TypeName(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TypeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for TypeName {
    fn from(s: &str) -> Self {
        TypeName(s.to_owned())
    }
}

/// Candidate types for one variable occurrence. The empty set is Bottom.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeSet(BTreeSet<TypeName>);

impl TypeSet {
    pub fn bottom() -> Self {
        TypeSet(BTreeSet::new())
    }

    pub fn single(t: TypeName) -> Self {
        TypeSet(BTreeSet::from([t]))
    }

    pub fn is_bottom(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The sole member, if this set is a singleton.
    pub fn as_single(&self) -> Option<&TypeName> {
        if self.0.len() == 1 {
            self.0.iter().next()
        } else {
            None
        }
    }

    pub fn contains(&self, t: &TypeName) -> bool {
        self.0.contains(t)
    }

    pub fn insert(&mut self, t: TypeName) -> bool {
        self.0.insert(t)
    }

    pub fn iter(&self) -> impl Iterator<Item = &TypeName> {
        self.0.iter()
    }
}

impl FromIterator<TypeName> for TypeSet {
    fn from_iter<I: IntoIterator<Item = TypeName>>(iter: I) -> Self {
        TypeSet(iter.into_iter().collect())
    }
}

impl<'a> FromIterator<&'a str> for TypeSet {
    fn from_iter<I: IntoIterator<Item = &'a str>>(iter: I) -> Self {
        TypeSet(iter.into_iter().map(TypeName::from).collect())
    }
}

impl IntoIterator for TypeSet {
    type Item = TypeName;
    type IntoIter = std::collections::btree_set::IntoIter<TypeName>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

/// Renders `{a, b}`; Bottom renders as `_|_`.
impl fmt::Display for TypeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_bottom() {
            return f.write_str("_|_");
        }
        f.write_str("{")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str("}")
    }
}

/// A typed relation signature such as `DRIVE(human, car)`.
///
/// `verbal` names the activity predicate used when the relation is spliced
/// into a form as a reified event (`EAT` -> `EATING(a) & SUBJECT(a, x) & ...`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelationSig {
    pub name: String,
    pub args: Vec<TypeName>,
    pub verbal: Option<String>,
}

impl RelationSig {
    pub fn arity(&self) -> usize {
        self.args.len()
    }
}

impl fmt::Display for RelationSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// Both types survive a bridge; `left_slot` is the relation argument index
/// that `kept_left` fills (the other slot is filled by `kept_right`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bridge {
    pub relation: RelationSig,
    pub kept_left: TypeName,
    pub kept_right: TypeName,
    pub left_slot: usize,
}

impl Bridge {
    pub fn right_slot(&self) -> usize {
        1 - self.left_slot
    }

    /// The same bridge seen from the other side of the unification.
    pub fn swapped(&self) -> Bridge {
        Bridge {
            relation: self.relation.clone(),
            kept_left: self.kept_right.clone(),
            kept_right: self.kept_left.clone(),
            left_slot: self.right_slot(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnifyOutcome {
    Single(TypeName),
    Bridge(Bridge),
    Bottom,
}

/// Which case of the unification rule produced an outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnifyCase {
    SubsumeLeft,
    SubsumeRight,
    MsrBridge,
    Bottom,
}

impl UnifyCase {
    pub fn as_str(self) -> &'static str {
        match self {
            UnifyCase::SubsumeLeft => "subsume-left",
            UnifyCase::SubsumeRight => "subsume-right",
            UnifyCase::MsrBridge => "msr-bridge",
            UnifyCase::Bottom => "bottom",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "subsume-left" => UnifyCase::SubsumeLeft,
            "subsume-right" => UnifyCase::SubsumeRight,
            "msr-bridge" => UnifyCase::MsrBridge,
            "bottom" => UnifyCase::Bottom,
            _ => return None,
        })
    }
}

impl fmt::Display for UnifyCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One pairwise unification inside a set unification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairOutcome {
    pub left: TypeName,
    pub right: TypeName,
    pub case: UnifyCase,
    pub outcome: UnifyOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetUnification {
    /// Every `Single` result; Bottom when there were none.
    pub result: TypeSet,
    /// Bridge outcomes, in pair order.
    pub bridges: Vec<Bridge>,
    /// All pairs of `S x T`, in iteration order.
    pub pairs: Vec<PairOutcome>,
}

/// The relation msr picked, and any incomparable candidates it beat only by
/// declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MsrChoice<'a> {
    pub relation: &'a RelationSig,
    pub tied_with: Vec<&'a RelationSig>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OntologyError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate type `{name}`")]
    DuplicateType { line: usize, name: String },
    #[error("type `{child}` references unknown parent `{parent}`")]
    UnknownParent { child: String, parent: String },
    #[error("subsumption cycle through `{0}`")]
    Cycle(String),
    #[error("line {line}: relation {relation} references unknown type `{name}`")]
    UnknownRelationType {
        line: usize,
        relation: String,
        name: String,
    },
    #[error("line {line}: duplicate relation {relation}")]
    DuplicateRelation { line: usize, relation: String },
    #[error("root type `thing` is not declared")]
    MissingRoot,
    #[error("`thing` must not have parents")]
    RootWithParents,
    #[error("type `{0}` has no parent")]
    Orphan(String),
    #[error("unknown type `{0}`")]
    UnknownType(String),
}

#[derive(Debug, Clone)]
pub struct Ontology {
    names: Vec<TypeName>,
    index: HashMap<TypeName, usize>,
    parents: Vec<Vec<usize>>,
    // ancestors[i][j] <=> names[i] <= names[j]
    ancestors: Vec<Vec<bool>>,
    relations: Vec<RelationSig>,
}

/// Parses and validates an ontology file.
pub fn load_ontology(source: &str) -> Result<Ontology, OntologyError> {
    Ontology::parse(source)
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '-')
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
    .trim()
}

/// Parses `NAME(a, b)` into the name and argument list.
pub(crate) fn parse_signature(s: &str) -> Option<(String, Vec<String>)> {
    let open = s.find('(')?;
    let close = s.rfind(')')?;
    if close != s.len() - 1 || close < open {
        return None;
    }
    let name = s[..open].trim();
    if !is_identifier(name) {
        return None;
    }
    let inner = s[open + 1..close].trim();
    let args: Vec<String> = if inner.is_empty() {
        Vec::new()
    } else {
        inner.split(',').map(|a| a.trim().to_owned()).collect()
    };
    if args.iter().any(|a| !is_identifier(a)) {
        return None;
    }
    Some((name.to_owned(), args))
}

impl Ontology {
    pub fn parse(source: &str) -> Result<Self, OntologyError> {
        let mut decls: Vec<(usize, String, Vec<String>)> = Vec::new();
        let mut seen: HashMap<String, usize> = HashMap::new();
        let mut rels: Vec<(usize, String, Vec<String>, Option<String>)> = Vec::new();

        for (lineno, raw) in source.lines().enumerate() {
            let line_no = lineno + 1;
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let syntax = |message: &str| OntologyError::Syntax {
                line: line_no,
                message: message.to_owned(),
            };
            if let Some(rest) = line.strip_prefix("type ") {
                let (name, parents) = match rest.split_once('<') {
                    Some((n, p)) => {
                        let parents: Vec<String> =
                            p.split(',').map(|s| s.trim().to_owned()).collect();
                        (n.trim(), parents)
                    }
                    None => (rest.trim(), Vec::new()),
                };
                if !is_identifier(name) {
                    return Err(syntax("expected a type name"));
                }
                if parents.iter().any(|p| !is_identifier(p)) {
                    return Err(syntax("malformed parent list"));
                }
                if seen.insert(name.to_owned(), decls.len()).is_some() {
                    return Err(OntologyError::DuplicateType {
                        line: line_no,
                        name: name.to_owned(),
                    });
                }
                decls.push((line_no, name.to_owned(), parents));
            } else if let Some(rest) = line.strip_prefix("rel ") {
                let rest = rest.trim();
                let (sig, verbal) = match rest.find(')') {
                    Some(i) => (&rest[..=i], rest[i + 1..].trim()),
                    None => return Err(syntax("expected `NAME(type, ...)`")),
                };
                let verbal = if verbal.is_empty() {
                    None
                } else {
                    match verbal.split_whitespace().collect::<Vec<_>>()[..] {
                        ["verbal", pred] if is_identifier(pred) => Some(pred.to_owned()),
                        _ => return Err(syntax("expected `verbal PRED` after the signature")),
                    }
                };
                let (name, args) =
                    parse_signature(sig).ok_or_else(|| syntax("expected `NAME(type, ...)`"))?;
                if args.is_empty() || args.len() > 2 {
                    return Err(syntax("relations take one or two arguments"));
                }
                if verbal.is_some() && args.len() != 2 {
                    return Err(syntax("only binary relations can be verbal"));
                }
                rels.push((line_no, name, args, verbal));
            } else {
                return Err(syntax("expected `type` or `rel` declaration"));
            }
        }

        if !seen.contains_key(ROOT) {
            return Err(OntologyError::MissingRoot);
        }

        let names: Vec<TypeName> = decls
            .iter()
            .map(|(_, n, _)| TypeName::new(n.clone()))
            .collect();
        let index: HashMap<TypeName, usize> = names
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, n)| (n, i))
            .collect();
        let mut parents = vec![Vec::new(); names.len()];
        for (i, (_, name, ps)) in decls.iter().enumerate() {
            if name == ROOT {
                if !ps.is_empty() {
                    return Err(OntologyError::RootWithParents);
                }
                continue;
            }
            if ps.is_empty() {
                return Err(OntologyError::Orphan(name.clone()));
            }
            for p in ps {
                let j = *seen.get(p).ok_or_else(|| OntologyError::UnknownParent {
                    child: name.clone(),
                    parent: p.clone(),
                })?;
                if !parents[i].contains(&j) {
                    parents[i].push(j);
                }
            }
        }

        let order = topo_order(&parents).map_err(|i| OntologyError::Cycle(names[i].to_string()))?;

        // ancestors, filled parents-first
        let n = names.len();
        let mut ancestors = vec![vec![false; n]; n];
        for &i in &order {
            ancestors[i][i] = true;
            for &p in &parents[i] {
                let row_p = ancestors[p].clone();
                for (dst, src) in ancestors[i].iter_mut().zip(row_p) {
                    *dst |= src;
                }
            }
        }

        let mut relations: Vec<RelationSig> = Vec::new();
        for (line, name, args, verbal) in rels {
            let display = format!("{}({})", name, args.join(", "));
            let mut typed = Vec::with_capacity(args.len());
            for a in args {
                let t = TypeName::new(a);
                if !index.contains_key(&t) {
                    return Err(OntologyError::UnknownRelationType {
                        line,
                        relation: display,
                        name: t.0,
                    });
                }
                typed.push(t);
            }
            if relations.iter().any(|r| r.name == name && r.args == typed) {
                return Err(OntologyError::DuplicateRelation {
                    line,
                    relation: display,
                });
            }
            relations.push(RelationSig {
                name,
                args: typed,
                verbal,
            });
        }

        Ok(Ontology {
            names,
            index,
            parents,
            ancestors,
            relations,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(&TypeName::from(name))
    }

    /// All types in declaration order.
    pub fn types(&self) -> &[TypeName] {
        &self.names
    }

    pub fn relations(&self) -> &[RelationSig] {
        &self.relations
    }

    pub fn parents(&self, t: &TypeName) -> Result<Vec<&TypeName>, OntologyError> {
        let i = self.idx(t)?;
        Ok(self.parents[i].iter().map(|&p| &self.names[p]).collect())
    }

    fn idx(&self, t: &TypeName) -> Result<usize, OntologyError> {
        self.index
            .get(t)
            .copied()
            .ok_or_else(|| OntologyError::UnknownType(t.to_string()))
    }

    /// Validates every member of a type set.
    pub fn check_set(&self, s: &TypeSet) -> Result<(), OntologyError> {
        s.iter().try_for_each(|t| self.idx(t).map(|_| ()))
    }

    /// `s <= t`: `t` is reachable from `s` along parent edges (reflexively).
    pub fn subsumes(&self, s: &TypeName, t: &TypeName) -> Result<bool, OntologyError> {
        Ok(self.ancestors[self.idx(s)?][self.idx(t)?])
    }

    fn leq(&self, s: usize, t: usize) -> bool {
        self.ancestors[s][t]
    }

    /// Most salient binary relation connecting `s` and `t` in either
    /// argument order.
    pub fn msr(&self, s: &TypeName, t: &TypeName) -> Result<Option<&RelationSig>, OntologyError> {
        Ok(self.msr_choice(s, t)?.map(|c| c.relation))
    }

    /// Like [`Ontology::msr`], also reporting tied candidates.
    ///
    /// A candidate `R(a, b)` beats `R'(a', b')` when `a <= a'` and `b <= b'`
    /// with at least one strict. Among the undominated candidates the one
    /// declared first wins; the rest are reported in `tied_with`.
    pub fn msr_choice(
        &self,
        s: &TypeName,
        t: &TypeName,
    ) -> Result<Option<MsrChoice<'_>>, OntologyError> {
        let (si, ti) = (self.idx(s)?, self.idx(t)?);
        let candidates: Vec<(&RelationSig, usize, usize)> = self
            .relations
            .iter()
            .filter(|r| r.arity() == 2)
            .map(|r| (r, self.index[&r.args[0]], self.index[&r.args[1]]))
            .filter(|&(_, a, b)| {
                (self.leq(si, a) && self.leq(ti, b)) || (self.leq(ti, a) && self.leq(si, b))
            })
            .collect();
        let dominates = |(a, b): (usize, usize), (a2, b2): (usize, usize)| {
            self.leq(a, a2) && self.leq(b, b2) && (a != a2 || b != b2)
        };
        let undominated: Vec<&RelationSig> = candidates
            .iter()
            .filter(|&&(_, a, b)| {
                !candidates
                    .iter()
                    .any(|&(_, a2, b2)| dominates((a2, b2), (a, b)))
            })
            .map(|&(r, _, _)| r)
            .collect();
        Ok(undominated.split_first().map(|(first, rest)| MsrChoice {
            relation: first,
            tied_with: rest.to_vec(),
        }))
    }

    fn bridge_for(&self, rel: &RelationSig, s: &TypeName, t: &TypeName) -> Bridge {
        let (si, ti) = (self.index[s], self.index[t]);
        let (a, b) = (self.index[&rel.args[0]], self.index[&rel.args[1]]);
        let left_slot = if self.leq(si, a) && self.leq(ti, b) {
            0
        } else {
            1
        };
        Bridge {
            relation: rel.clone(),
            kept_left: s.clone(),
            kept_right: t.clone(),
            left_slot,
        }
    }

    /// Pairwise type unification `s • t`.
    pub fn unify_pair(
        &self,
        s: &TypeName,
        t: &TypeName,
        allow_bridge: bool,
    ) -> Result<UnifyOutcome, OntologyError> {
        Ok(self.unify_pair_case(s, t, allow_bridge)?.1)
    }

    /// [`Ontology::unify_pair`] together with the case that fired.
    pub fn unify_pair_case(
        &self,
        s: &TypeName,
        t: &TypeName,
        allow_bridge: bool,
    ) -> Result<(UnifyCase, UnifyOutcome), OntologyError> {
        let (si, ti) = (self.idx(s)?, self.idx(t)?);
        if self.leq(si, ti) {
            return Ok((UnifyCase::SubsumeLeft, UnifyOutcome::Single(s.clone())));
        }
        if self.leq(ti, si) {
            return Ok((UnifyCase::SubsumeRight, UnifyOutcome::Single(t.clone())));
        }
        if allow_bridge {
            if let Some(rel) = self.msr(s, t)? {
                return Ok((
                    UnifyCase::MsrBridge,
                    UnifyOutcome::Bridge(self.bridge_for(rel, s, t)),
                ));
            }
        }
        Ok((UnifyCase::Bottom, UnifyOutcome::Bottom))
    }

    /// Unifies every pair of `S x T`. Bottom pairs are dropped; bridges are
    /// returned alongside the set of single results.
    pub fn unify_sets(
        &self,
        left: &TypeSet,
        right: &TypeSet,
        allow_bridge: bool,
    ) -> Result<SetUnification, OntologyError> {
        let mut out = SetUnification {
            result: TypeSet::bottom(),
            bridges: Vec::new(),
            pairs: Vec::new(),
        };
        for s in left.iter() {
            for t in right.iter() {
                let (case, outcome) = self.unify_pair_case(s, t, allow_bridge)?;
                match &outcome {
                    UnifyOutcome::Single(u) => {
                        out.result.insert(u.clone());
                    }
                    UnifyOutcome::Bridge(b) => out.bridges.push(b.clone()),
                    UnifyOutcome::Bottom => {}
                }
                out.pairs.push(PairOutcome {
                    left: s.clone(),
                    right: t.clone(),
                    case,
                    outcome,
                });
            }
        }
        Ok(out)
    }
}

impl FromStr for Ontology {
    type Err = OntologyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ontology::parse(s)
    }
}

/// Kahn's algorithm over child -> parent edges; returns parents before
/// children, or a node on a cycle.
fn topo_order(parents: &[Vec<usize>]) -> Result<Vec<usize>, usize> {
    let n = parents.len();
    let mut children = vec![Vec::new(); n];
    let mut pending: Vec<usize> = parents.iter().map(Vec::len).collect();
    for (c, ps) in parents.iter().enumerate() {
        for &p in ps {
            children[p].push(c);
        }
    }
    let mut ready: Vec<usize> = (0..n).filter(|&i| pending[i] == 0).collect();
    ready.reverse();
    let mut order = Vec::with_capacity(n);
    while let Some(i) = ready.pop() {
        order.push(i);
        for &c in &children[i] {
            pending[c] -= 1;
            if pending[c] == 0 {
                ready.push(c);
            }
        }
    }
    if order.len() == n {
        Ok(order)
    } else {
        Err((0..n).find(|&i| pending[i] > 0).unwrap_or(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> TypeName {
        TypeName::from(s)
    }

    const SAMPLE: &str = "
        type thing
        type entity < thing
        type physical < entity
        type living < physical
        type human < living
        type artifact < physical
        type instrument < artifact
        type vehicle < artifact
        type car < vehicle
        type food < physical
        type omelet < food
        type abstract < entity
        type infContent < abstract
        type book < artifact
        type event < abstract
        type cat < living
        rel OLD(entity)
        rel MAKE(human, artifact)
        rel MANUFACTURE(human, instrument)
        rel RIDE(human, vehicle)
        rel DRIVE(human, car)
        rel EAT(human, food) verbal EATING
        rel HASCONTENT(book, infContent)
    ";

    fn g() -> Ontology {
        Ontology::parse(SAMPLE).unwrap()
    }

    #[test]
    fn chain_to_root() {
        let o = Ontology::parse(
            "type thing\ntype entity < thing\ntype living < entity\ntype human < living\n",
        )
        .unwrap();
        assert_eq!(o.len(), 4);
        assert!(o.subsumes(&t("human"), &t("thing")).unwrap());
        assert_eq!(o.parents(&t("human")).unwrap(), vec![&t("living")]);
    }

    #[test]
    fn root_only() {
        let o = Ontology::parse("type thing").unwrap();
        assert_eq!(o.len(), 1);
        assert!(o.subsumes(&t("thing"), &t("thing")).unwrap());
    }

    #[test]
    fn load_errors() {
        let cyc = "type thing\ntype a < b\ntype b < a\n";
        assert!(matches!(Ontology::parse(cyc), Err(OntologyError::Cycle(_))));
        assert!(matches!(
            Ontology::parse("type thing\ntype a < nowhere"),
            Err(OntologyError::UnknownParent { .. })
        ));
        assert!(matches!(
            Ontology::parse("type thing\ntype a < thing\ntype a < thing"),
            Err(OntologyError::DuplicateType { line: 3, .. })
        ));
        assert!(matches!(
            Ontology::parse("type thing\nrel R(thing, ghost)"),
            Err(OntologyError::UnknownRelationType { .. })
        ));
        assert!(matches!(
            Ontology::parse("type thing\nrel R(thing)\nrel R(thing)"),
            Err(OntologyError::DuplicateRelation { .. })
        ));
        assert_eq!(
            Ontology::parse("type a < b\ntype b").err(),
            Some(OntologyError::MissingRoot)
        );
        assert_eq!(
            Ontology::parse("type thing\ntype loose").err(),
            Some(OntologyError::Orphan("loose".into()))
        );
        assert!(matches!(
            Ontology::parse("type thing\nblah"),
            Err(OntologyError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            Ontology::parse("type thing\nrel R(thing, thing, thing)"),
            Err(OntologyError::Syntax { .. })
        ));
    }

    #[test]
    fn self_loop_is_a_cycle() {
        assert!(matches!(
            Ontology::parse("type thing\ntype a < a, thing"),
            Err(OntologyError::Cycle(_))
        ));
    }

    #[test]
    fn subsumption_examples() {
        let o = g();
        assert!(o.subsumes(&t("human"), &t("entity")).unwrap());
        assert!(o.subsumes(&t("cat"), &t("cat")).unwrap());
        assert!(o.subsumes(&t("car"), &t("physical")).unwrap());
        assert!(!o.subsumes(&t("physical"), &t("car")).unwrap());
        assert_eq!(
            o.subsumes(&t("unicorn"), &t("thing")),
            Err(OntologyError::UnknownType("unicorn".into()))
        );
    }

    #[test]
    fn msr_prefers_most_specific() {
        let o = g();
        assert_eq!(
            o.msr(&t("human"), &t("car")).unwrap().unwrap().name,
            "DRIVE"
        );
        assert_eq!(
            o.msr(&t("car"), &t("human")).unwrap().unwrap().name,
            "DRIVE"
        );
        assert_eq!(
            o.msr(&t("book"), &t("infContent")).unwrap().unwrap().name,
            "HASCONTENT"
        );
        assert_eq!(o.msr(&t("cat"), &t("event")).unwrap(), None);
        // unary relations never bridge
        assert_eq!(o.msr(&t("entity"), &t("entity")).unwrap(), None);
    }

    #[test]
    fn msr_tie_goes_to_first_declared() {
        let o = Ontology::parse(
            "type thing\ntype a < thing\ntype b < thing\ntype c < a, b\n\
             rel FIRST(a, thing)\nrel SECOND(b, thing)",
        )
        .unwrap();
        let choice = o.msr_choice(&t("c"), &t("thing")).unwrap().unwrap();
        assert_eq!(choice.relation.name, "FIRST");
        assert_eq!(choice.tied_with.len(), 1);
        assert_eq!(choice.tied_with[0].name, "SECOND");
    }

    #[test]
    fn unify_pair_cases() {
        let o = g();
        assert_eq!(
            o.unify_pair(&t("human"), &t("thing"), false).unwrap(),
            UnifyOutcome::Single(t("human"))
        );
        assert_eq!(
            o.unify_pair(&t("thing"), &t("human"), false).unwrap(),
            UnifyOutcome::Single(t("human"))
        );
        assert_eq!(
            o.unify_pair(&t("event"), &t("human"), true).unwrap(),
            UnifyOutcome::Bottom
        );
        assert_eq!(
            o.unify_pair(&t("omelet"), &t("human"), false).unwrap(),
            UnifyOutcome::Bottom
        );
        let UnifyOutcome::Bridge(b) = o.unify_pair(&t("omelet"), &t("human"), true).unwrap() else {
            panic!("expected a bridge");
        };
        assert_eq!(b.relation.to_string(), "EAT(human, food)");
        assert_eq!(b.relation.verbal.as_deref(), Some("EATING"));
        assert_eq!(
            (b.kept_left.as_str(), b.kept_right.as_str()),
            ("omelet", "human")
        );
        assert_eq!(b.left_slot, 1);
        for s in o.types() {
            assert_eq!(
                o.unify_pair(s, s, true).unwrap(),
                UnifyOutcome::Single(s.clone())
            );
        }
    }

    #[test]
    fn set_unification() {
        let o = Ontology::parse(
            "type thing\ntype entity < thing\ntype event < entity\n\
             type socialEvent < event\ntype politicalGroup < entity\ntype cat < entity",
        )
        .unwrap();
        let party: TypeSet = ["politicalGroup", "socialEvent"].into_iter().collect();
        let r = o
            .unify_sets(&party, &TypeSet::single(t("event")), false)
            .unwrap();
        assert_eq!(r.result, TypeSet::single(t("socialEvent")));
        assert_eq!(r.pairs[0].case, UnifyCase::Bottom);
        let r = o
            .unify_sets(&party, &TypeSet::single(t("entity")), false)
            .unwrap();
        assert_eq!(r.result, party);
        let cat = TypeSet::single(t("cat"));
        assert_eq!(o.unify_sets(&cat, &cat, false).unwrap().result, cat);
        let r = o
            .unify_sets(&cat, &TypeSet::single(t("event")), false)
            .unwrap();
        assert!(r.result.is_bottom());
    }
}
