//! Typed logical forms.
//!
//! Quantifiers bind variables to type annotations; every argument position
//! of an atom carries its own [`TypeSet`], so one variable accumulates
//! several annotations in a scope until resolution collapses them.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::ontology::TypeSet;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(String);

impl Var {
    pub fn new(name: impl Into<String>) -> Self {
        Var(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuantKind {
    Exists,
    /// Proper names and definites. Purely a marker; no uniqueness reasoning.
    ExistsUnique,
    Forall,
}

impl QuantKind {
    pub fn symbol(self) -> &'static str {
        match self {
            QuantKind::Exists => "E",
            QuantKind::ExistsUnique => "E!",
            QuantKind::Forall => "A",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arg {
    pub var: Var,
    pub types: TypeSet,
}

impl Arg {
    pub fn new(var: Var, types: TypeSet) -> Self {
        Arg { var, types }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Arg>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Quant {
        kind: QuantKind,
        var: Var,
        /// Usually one set; a copular type noun adds a second.
        types: Vec<TypeSet>,
        body: Box<Formula>,
    },
    Atom(Atom),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    /// `PRED(inner) :: target`: an outer adjective applied to an inner
    /// predication, casting the inner term to `target`.
    Cast {
        pred: String,
        inner: Box<Formula>,
        target: TypeSet,
    },
    Bottom,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("variable `{0}` is not bound")]
    Unbound(String),
}

impl Formula {
    pub fn atom(pred: impl Into<String>, args: Vec<Arg>) -> Self {
        Formula::Atom(Atom {
            pred: pred.into(),
            args,
        })
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn quant(kind: QuantKind, var: Var, types: Vec<TypeSet>, body: Formula) -> Self {
        Formula::Quant {
            kind,
            var,
            types,
            body: Box::new(body),
        }
    }

    pub fn cast(pred: impl Into<String>, inner: Formula, target: TypeSet) -> Self {
        Formula::Cast {
            pred: pred.into(),
            inner: Box::new(inner),
            target,
        }
    }

    /// Right-nested conjunction; `None` for an empty list.
    pub fn conj(parts: Vec<Formula>) -> Option<Formula> {
        parts
            .into_iter()
            .rev()
            .reduce(|acc, f| Formula::and(f, acc))
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, Formula::Bottom)
    }

    /// Every atom in pre-order, including atoms wrapped by casts.
    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.walk(&mut |f| {
            if let Formula::Atom(a) = f {
                out.push(a);
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a Formula)) {
        visit(self);
        match self {
            Formula::Quant { body, .. } => body.walk(visit),
            Formula::And(l, r) | Formula::Or(l, r) => {
                l.walk(visit);
                r.walk(visit);
            }
            Formula::Cast { inner, .. } => inner.walk(visit),
            Formula::Atom(_) | Formula::Bottom => {}
        }
    }

    /// Bound variables in binding (pre-order) order.
    pub fn bound_vars(&self) -> Vec<&Var> {
        let mut out = Vec::new();
        self.walk(&mut |f| {
            if let Formula::Quant { var, .. } = f {
                out.push(var);
            }
        });
        out
    }
}

/// Every annotation on `v`, left to right: the quantifier's sets, then each
/// argument position inside its scope.
pub fn collect_annotations(f: &Formula, v: &Var) -> Result<Vec<TypeSet>, LogicError> {
    fn find<'a>(f: &'a Formula, v: &Var) -> Option<&'a Formula> {
        match f {
            Formula::Quant { var, body, .. } => {
                if var == v {
                    Some(f)
                } else {
                    find(body, v)
                }
            }
            Formula::And(l, r) | Formula::Or(l, r) => find(l, v).or_else(|| find(r, v)),
            Formula::Cast { inner, .. } => find(inner, v),
            Formula::Atom(_) | Formula::Bottom => None,
        }
    }
    let Some(Formula::Quant { types, body, .. }) = find(f, v) else {
        return Err(LogicError::Unbound(v.to_string()));
    };
    let mut out = types.clone();
    for atom in body.atoms() {
        out.extend(
            atom.args
                .iter()
                .filter(|a| &a.var == v)
                .map(|a| a.types.clone()),
        );
    }
    Ok(out)
}

/// Bottom propagation and disjunct pruning, to a fixpoint.
pub fn simplify(f: &Formula) -> Formula {
    match f {
        Formula::Atom(a) => {
            if a.args.iter().any(|arg| arg.types.is_bottom()) {
                Formula::Bottom
            } else {
                f.clone()
            }
        }
        Formula::Cast {
            pred,
            inner,
            target,
        } => {
            let inner = simplify(inner);
            if inner.is_bottom() || target.is_bottom() {
                Formula::Bottom
            } else {
                Formula::cast(pred.clone(), inner, target.clone())
            }
        }
        Formula::And(l, r) => match (simplify(l), simplify(r)) {
            (Formula::Bottom, _) | (_, Formula::Bottom) => Formula::Bottom,
            (l, r) => Formula::and(l, r),
        },
        Formula::Or(l, r) => match (simplify(l), simplify(r)) {
            (Formula::Bottom, x) | (x, Formula::Bottom) => x,
            (l, r) => Formula::or(l, r),
        },
        Formula::Quant {
            kind,
            var,
            types,
            body,
        } => match simplify(body) {
            Formula::Bottom => Formula::Bottom,
            body => Formula::quant(*kind, var.clone(), types.clone(), body),
        },
        Formula::Bottom => Formula::Bottom,
    }
}

fn write_types(out: &mut String, types: &[TypeSet], braces: bool) {
    for (i, ts) in types.iter().enumerate() {
        if i > 0 {
            out.push_str(" • ");
        }
        match ts.as_single() {
            Some(t) if !braces => out.push_str(t.as_str()),
            _ => {
                let _ = write!(out, "{ts}");
            }
        }
    }
}

struct Printer {
    out: String,
    annotated: bool,
    // (bound variable, printed name), innermost last
    scope: Vec<(Var, String)>,
    next: usize,
}

impl Printer {
    fn name_of(&self, v: &Var) -> String {
        self.scope
            .iter()
            .rev()
            .find(|(bound, _)| bound == v)
            .map(|(_, n)| n.clone())
            .unwrap_or_else(|| v.to_string())
    }

    fn formula(&mut self, f: &Formula) {
        match f {
            Formula::Quant {
                kind,
                var,
                types,
                body,
            } => {
                let name = if self.annotated {
                    var.to_string()
                } else {
                    self.next += 1;
                    format!("v{}", self.next)
                };
                let _ = write!(self.out, "({} {name} :: ", kind.symbol());
                write_types(&mut self.out, types, self.annotated);
                self.out.push(')');
                self.scope.push((var.clone(), name));
                self.scope_body(body);
                self.scope.pop();
            }
            Formula::Atom(a) => {
                let _ = write!(self.out, "{}(", a.pred);
                for (i, arg) in a.args.iter().enumerate() {
                    if i > 0 {
                        self.out.push_str(", ");
                    }
                    let name = self.name_of(&arg.var);
                    self.out.push_str(&name);
                    if self.annotated {
                        let _ = write!(self.out, " :: {}", arg.types);
                    }
                }
                self.out.push(')');
            }
            Formula::And(l, r) | Formula::Or(l, r) => {
                let op = if matches!(f, Formula::And(..)) {
                    " & "
                } else {
                    " | "
                };
                self.out.push('(');
                self.formula(l);
                self.out.push_str(op);
                self.formula(r);
                self.out.push(')');
            }
            Formula::Cast {
                pred,
                inner,
                target,
            } => {
                let _ = write!(self.out, "{pred}(");
                self.formula(inner);
                if self.annotated {
                    let _ = write!(self.out, " :: {target}");
                }
                self.out.push(')');
            }
            Formula::Bottom => self.out.push_str("_|_"),
        }
    }

    // A scope body is always parenthesised exactly once.
    fn scope_body(&mut self, body: &Formula) {
        match body {
            Formula::Quant { .. } | Formula::And(..) | Formula::Or(..) => self.formula(body),
            _ => {
                self.out.push('(');
                self.formula(body);
                self.out.push(')');
            }
        }
    }
}

/// Deterministic display form with variables renamed `v1, v2, ...` in
/// binding order, e.g. `(E! v1 :: human)(THIEF(v1))`.
///
/// Argument annotations and cast targets are not printed, so two forms that
/// differ only there print identically.
pub fn print_canonical(f: &Formula) -> String {
    let mut p = Printer {
        out: String::new(),
        annotated: false,
        scope: Vec::new(),
        next: 0,
    };
    p.formula(f);
    p.out
}

/// Prints a form with its original variable names and every annotation,
/// e.g. `(E! Sheba :: {thing})(THIEF(Sheba :: {human}))`.
pub fn print_annotated(f: &Formula) -> String {
    let mut p = Printer {
        out: String::new(),
        annotated: true,
        scope: Vec::new(),
        next: 0,
    };
    p.formula(f);
    p.out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_canonical(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(names: &[&str]) -> TypeSet {
        names.iter().copied().collect()
    }

    fn arg(v: &str, t: &str) -> Arg {
        Arg::new(Var::new(v), ts(&[t]))
    }

    fn sheba() -> Formula {
        Formula::quant(
            QuantKind::ExistsUnique,
            Var::new("Sheba"),
            vec![ts(&["thing"])],
            Formula::atom("THIEF", vec![arg("Sheba", "human")]),
        )
    }

    #[test]
    fn annotations_in_syntactic_order() {
        let f = sheba();
        assert_eq!(
            collect_annotations(&f, &Var::new("Sheba")).unwrap(),
            vec![ts(&["thing"]), ts(&["human"])]
        );
        assert_eq!(
            collect_annotations(&f, &Var::new("x")),
            Err(LogicError::Unbound("x".into()))
        );
        let once = Formula::quant(
            QuantKind::Exists,
            Var::new("c"),
            vec![ts(&["cat"])],
            Formula::atom("P", vec![]),
        );
        assert_eq!(collect_annotations(&once, &Var::new("c")).unwrap().len(), 1);
    }

    #[test]
    fn simplify_rules() {
        let p = Formula::atom("RECREATIONAL", vec![arg("a", "dancing")]);
        assert_eq!(simplify(&Formula::or(Formula::Bottom, p.clone())), p);
        assert_eq!(simplify(&Formula::or(p.clone(), Formula::Bottom)), p);
        assert_eq!(
            simplify(&Formula::and(Formula::Bottom, p.clone())),
            Formula::Bottom
        );
        assert_eq!(
            simplify(&Formula::and(p.clone(), Formula::Bottom)),
            Formula::Bottom
        );
        let q = Formula::atom("Q", vec![arg("b", "cat")]);
        let clean = Formula::or(p.clone(), q);
        assert_eq!(simplify(&clean), clean);
        let bad = Formula::atom(
            "EXPERIENCED",
            vec![Arg::new(Var::new("a"), TypeSet::bottom())],
        );
        assert_eq!(simplify(&bad), Formula::Bottom);
        let quant = Formula::quant(QuantKind::Exists, Var::new("a"), vec![ts(&["x"])], bad);
        assert_eq!(simplify(&quant), Formula::Bottom);
        let cast = Formula::cast("BEAUTIFUL", Formula::Bottom, ts(&["entity"]));
        assert_eq!(simplify(&cast), Formula::Bottom);
    }

    #[test]
    fn canonical_printing() {
        let f = Formula::quant(
            QuantKind::ExistsUnique,
            Var::new("Sheba"),
            vec![ts(&["human"])],
            Formula::atom("THIEF", vec![arg("Sheba", "human")]),
        );
        assert_eq!(print_canonical(&f), "(E! v1 :: human)(THIEF(v1))");
        assert_eq!(print_canonical(&Formula::Bottom), "_|_");

        let sara = Formula::quant(
            QuantKind::ExistsUnique,
            Var::new("Sara"),
            vec![ts(&["human"])],
            Formula::quant(
                QuantKind::Exists,
                Var::new("c"),
                vec![ts(&["cat"])],
                Formula::and(
                    Formula::atom("BLACK", vec![arg("c", "cat")]),
                    Formula::atom("OWN", vec![arg("Sara", "human"), arg("c", "cat")]),
                ),
            ),
        );
        assert_eq!(
            print_canonical(&sara),
            "(E! v1 :: human)(E v2 :: cat)(BLACK(v2) & OWN(v1, v2))"
        );
    }

    #[test]
    fn annotated_printing() {
        assert_eq!(
            print_annotated(&sheba()),
            "(E! Sheba :: {thing})(THIEF(Sheba :: {human}))"
        );
        let cast = Formula::cast(
            "BEAUTIFUL",
            Formula::atom("TALL", vec![arg("Olga", "physical")]),
            ts(&["entity"]),
        );
        assert_eq!(
            print_annotated(&cast),
            "BEAUTIFUL(TALL(Olga :: {physical}) :: {entity})"
        );
        assert_eq!(print_canonical(&cast), "BEAUTIFUL(TALL(Olga))");
    }

    #[test]
    fn shadowed_binders_rename_by_scope() {
        let inner = Formula::quant(
            QuantKind::Exists,
            Var::new("x"),
            vec![ts(&["b"])],
            Formula::atom("P", vec![arg("x", "b")]),
        );
        let f = Formula::quant(
            QuantKind::Forall,
            Var::new("x"),
            vec![ts(&["a"])],
            Formula::and(inner, Formula::atom("Q", vec![arg("x", "a")])),
        );
        assert_eq!(
            print_canonical(&f),
            "(A v1 :: a)((E v2 :: b)(P(v2)) & Q(v1))"
        );
    }

    #[test]
    fn conj_nests_right() {
        let p = |n: &str| Formula::atom(n, vec![]);
        let f = Formula::conj(vec![p("A"), p("B"), p("C")]).unwrap();
        assert_eq!(print_canonical(&f), "(A() & (B() & C()))");
        assert_eq!(Formula::conj(vec![]), None);
    }
}
