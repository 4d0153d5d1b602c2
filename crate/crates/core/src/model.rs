//! Schemas, dependencies, queries, databases and the homomorphism machinery
//! that every decision procedure is built on.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Interned-ish symbol: predicate, constant or variable name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sym(Arc<str>);

impl Sym {
    pub fn new(s: &str) -> Self {
        Sym(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Sym {
    fn from(s: &str) -> Self {
        Sym::new(s)
    }
}

impl From<String> for Sym {
    fn from(s: String) -> Self {
        Sym(Arc::from(s))
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Name of the reserved nullary predicate that no database ever contains.
pub const BOT: &str = "⊥";

pub fn bot() -> Sym {
    Sym::new(BOT)
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Term {
    Var(Sym),
    Const(Sym),
}

impl Term {
    pub fn var(s: &str) -> Self {
        Term::Var(Sym::new(s))
    }

    pub fn cst(s: &str) -> Self {
        Term::Const(Sym::new(s))
    }

    pub fn as_var(&self) -> Option<&Sym> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn name(&self) -> &Sym {
        match self {
            Term::Var(s) | Term::Const(s) => s,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// A predicate atom. `aux` marks the auxiliary copy `p^aux` of a predicate,
/// which only occurs inside rewritten sentences.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Atom {
    pub pred: Sym,
    pub aux: bool,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: &str, args: Vec<Term>) -> Self {
        Atom {
            pred: Sym::new(pred),
            aux: false,
            args,
        }
    }

    pub fn bot() -> Self {
        Atom {
            pred: bot(),
            aux: false,
            args: Vec::new(),
        }
    }

    pub fn is_bot(&self) -> bool {
        self.pred.as_str() == BOT
    }

    pub fn vars(&self) -> impl Iterator<Item = &Sym> {
        self.args.iter().filter_map(Term::as_var)
    }

    /// The ground fact this atom denotes, if it has no variables.
    pub fn to_fact(&self) -> Option<Fact> {
        let args = self
            .args
            .iter()
            .map(|t| match t {
                Term::Const(c) => Some(c.clone()),
                Term::Var(_) => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Fact {
            pred: self.pred.clone(),
            args,
        })
    }

    pub fn apply(&self, s: &Substitution) -> Atom {
        Atom {
            pred: self.pred.clone(),
            aux: self.aux,
            args: self.args.iter().map(|t| s.apply_term(t)).collect(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_bot() {
            return f.write_str("false");
        }
        write!(f, "{}", self.pred)?;
        if self.aux {
            f.write_str("^aux")?;
        }
        f.write_str("(")?;
        for (i, t) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Inequality {
    pub left: Term,
    pub right: Term,
}

impl Inequality {
    pub fn new(left: Term, right: Term) -> Self {
        Inequality { left, right }
    }

    pub fn apply(&self, s: &Substitution) -> Inequality {
        Inequality {
            left: s.apply_term(&self.left),
            right: s.apply_term(&self.right),
        }
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} != {}", self.left, self.right)
    }
}

/// A conjunction of predicate atoms and inequalities.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Conjunction {
    pub atoms: Vec<Atom>,
    pub ineqs: Vec<Inequality>,
}

impl Conjunction {
    pub fn new(atoms: Vec<Atom>, ineqs: Vec<Inequality>) -> Self {
        Conjunction { atoms, ineqs }
    }

    /// Variables in order of first appearance, atoms before inequalities.
    pub fn vars(&self) -> Vec<Sym> {
        let mut out: Vec<Sym> = Vec::new();
        let mut push = |v: &Sym| {
            if !out.contains(v) {
                out.push(v.clone());
            }
        };
        for a in &self.atoms {
            a.vars().for_each(&mut push);
        }
        for i in &self.ineqs {
            for t in [&i.left, &i.right] {
                if let Term::Var(v) = t {
                    push(v);
                }
            }
        }
        out
    }

    /// Variables occurring in some predicate atom.
    pub fn atom_vars(&self) -> BTreeSet<Sym> {
        self.atoms.iter().flat_map(|a| a.vars().cloned()).collect()
    }

    pub fn constants(&self) -> BTreeSet<Sym> {
        let atom_terms = self.atoms.iter().flat_map(|a| a.args.iter());
        let ineq_terms = self.ineqs.iter().flat_map(|i| [&i.left, &i.right]);
        atom_terms
            .chain(ineq_terms)
            .filter_map(|t| match t {
                Term::Const(c) => Some(c.clone()),
                Term::Var(_) => None,
            })
            .collect()
    }

    pub fn is_bot(&self) -> bool {
        self.atoms.len() == 1 && self.atoms[0].is_bot() && self.ineqs.is_empty()
    }

    pub fn apply(&self, s: &Substitution) -> Conjunction {
        Conjunction {
            atoms: self.atoms.iter().map(|a| a.apply(s)).collect(),
            ineqs: self.ineqs.iter().map(|i| i.apply(s)).collect(),
        }
    }
}

impl fmt::Display for Conjunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self
            .atoms
            .iter()
            .map(|a| a.to_string())
            .chain(self.ineqs.iter().map(|i| i.to_string()));
        let mut first = true;
        for p in parts {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            f.write_str(&p)?;
        }
        Ok(())
    }
}

/// `exists y: conj`; the free variables are the remaining ones.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Cq {
    pub exists: Vec<Sym>,
    pub body: Conjunction,
}

impl Cq {
    pub fn new(exists: Vec<Sym>, body: Conjunction) -> Self {
        Cq { exists, body }
    }

    pub fn bot() -> Self {
        Cq {
            exists: Vec::new(),
            body: Conjunction::new(vec![Atom::bot()], Vec::new()),
        }
    }

    pub fn is_bot(&self) -> bool {
        self.body.is_bot()
    }

    pub fn free_vars(&self) -> Vec<Sym> {
        self.body
            .vars()
            .into_iter()
            .filter(|v| !self.exists.contains(v))
            .collect()
    }
}

impl fmt::Display for Cq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_bot() {
            return f.write_str("false");
        }
        if !self.exists.is_empty() {
            write!(f, "exists {}: ", join(&self.exists, ","))?;
        }
        write!(f, "{}", self.body)
    }
}

/// A union of conjunctive queries.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Ucq {
    pub disjuncts: Vec<Cq>,
}

impl Ucq {
    pub fn new(disjuncts: Vec<Cq>) -> Self {
        Ucq { disjuncts }
    }

    pub fn bot() -> Self {
        Ucq {
            disjuncts: vec![Cq::bot()],
        }
    }

    pub fn is_bot(&self) -> bool {
        self.disjuncts.iter().all(Cq::is_bot)
    }

    pub fn free_vars(&self) -> BTreeSet<Sym> {
        self.disjuncts.iter().flat_map(|q| q.free_vars()).collect()
    }

    pub fn is_boolean(&self) -> bool {
        self.free_vars().is_empty()
    }
}

impl fmt::Display for Ucq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, q) in self.disjuncts.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{q}")?;
        }
        Ok(())
    }
}

/// `forall x: body -> head` where the head is a UCQ (or false).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Dependency {
    pub forall: Vec<Sym>,
    pub body: Conjunction,
    pub head: Ucq,
}

impl Dependency {
    pub fn new(body: Conjunction, head: Ucq) -> Self {
        Dependency {
            forall: body.vars(),
            body,
            head,
        }
    }

    pub fn is_denial(&self) -> bool {
        self.head.is_bot()
    }

    pub fn is_linear(&self) -> bool {
        self.body.atoms.len() == 1
    }

    pub fn is_full(&self) -> bool {
        self.head.disjuncts.iter().all(|q| q.exists.is_empty())
    }

    pub fn body_preds(&self) -> BTreeSet<Sym> {
        self.body.atoms.iter().map(|a| a.pred.clone()).collect()
    }

    pub fn head_preds(&self) -> BTreeSet<Sym> {
        self.head
            .disjuncts
            .iter()
            .flat_map(|q| q.body.atoms.iter())
            .filter(|a| !a.is_bot())
            .map(|a| a.pred.clone())
            .collect()
    }

    /// All variable names used anywhere in the dependency.
    pub fn all_vars(&self) -> BTreeSet<Sym> {
        let mut out: BTreeSet<Sym> = self.body.vars().into_iter().collect();
        for q in &self.head.disjuncts {
            out.extend(q.body.vars());
            out.extend(q.exists.iter().cloned());
        }
        out
    }

    pub fn constants(&self) -> BTreeSet<Sym> {
        let mut out = self.body.constants();
        for q in &self.head.disjuncts {
            out.extend(q.body.constants());
        }
        out
    }

    /// Copy with every variable `v` renamed to `rename(v)`.
    pub fn rename_vars(&self, rename: impl Fn(&Sym) -> Sym) -> Dependency {
        let s = Substitution::from_pairs(
            self.all_vars()
                .into_iter()
                .map(|v| {
                    let to = Term::Var(rename(&v));
                    (v, to)
                })
                .collect::<Vec<_>>(),
        );
        let rn = |v: &Sym| match s.get(v) {
            Some(Term::Var(w)) => w.clone(),
            _ => v.clone(),
        };
        Dependency {
            forall: self.forall.iter().map(rn).collect(),
            body: self.body.apply(&s),
            head: Ucq::new(
                self.head
                    .disjuncts
                    .iter()
                    .map(|q| Cq::new(q.exists.iter().map(rn).collect(), q.body.apply(&s)))
                    .collect(),
            ),
        }
    }
}

impl fmt::Display for Dependency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.forall.is_empty() {
            write!(f, "forall {}: ", join(&self.forall, ","))?;
        }
        write!(f, "{} -> {} .", self.body, self.head)
    }
}

/// Predicates occurring in a set of dependencies, in order of first appearance.
pub fn predicates_of(sigma: &[Dependency]) -> Vec<(Sym, usize)> {
    let mut out: Vec<(Sym, usize)> = Vec::new();
    let mut push = |a: &Atom| {
        if !a.is_bot() && !out.iter().any(|(p, _)| *p == a.pred) {
            out.push((a.pred.clone(), a.args.len()));
        }
    };
    for d in sigma {
        d.body.atoms.iter().for_each(&mut push);
        for q in &d.head.disjuncts {
            q.body.atoms.iter().for_each(&mut push);
        }
    }
    out
}

/// A ground fact.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Fact {
    pub pred: Sym,
    pub args: Vec<Sym>,
}

impl Fact {
    pub fn new(pred: &str, args: &[&str]) -> Self {
        Fact {
            pred: Sym::new(pred),
            args: args.iter().map(|a| Sym::new(a)).collect(),
        }
    }

    pub fn to_atom(&self) -> Atom {
        Atom {
            pred: self.pred.clone(),
            aux: false,
            args: self.args.iter().cloned().map(Term::Const).collect(),
        }
    }
}

impl serde::Serialize for Fact {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.pred, join(&self.args, ","))
    }
}

/// Facts in canonical (lexicographic) order.
pub type FactSet = BTreeSet<Fact>;

/// Facts of one predicate, using the fact ordering to find the block.
pub fn facts_of<'a>(facts: &'a FactSet, pred: &Sym) -> impl Iterator<Item = &'a Fact> + 'a {
    let start = Fact {
        pred: pred.clone(),
        args: Vec::new(),
    };
    let pred = pred.clone();
    facts.range(start..).take_while(move |f| f.pred == pred)
}

pub fn constants_of(facts: &FactSet) -> BTreeSet<Sym> {
    facts.iter().flat_map(|f| f.args.iter().cloned()).collect()
}

/// Predicate arities. The reserved nullary predicate is always present.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Schema {
    preds: BTreeMap<Sym, usize>,
}

impl Default for Schema {
    fn default() -> Self {
        let mut preds = BTreeMap::new();
        preds.insert(bot(), 0);
        Schema { preds }
    }
}

impl Schema {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_dependencies(sigma: &[Dependency]) -> Result<Self> {
        let mut s = Schema::new();
        for (p, n) in predicates_of(sigma) {
            s.declare(&p, n)?;
        }
        for d in sigma {
            s.check_conjunction(&d.body)?;
            for q in &d.head.disjuncts {
                s.check_conjunction(&q.body)?;
            }
        }
        Ok(s)
    }

    pub fn declare(&mut self, pred: &Sym, arity: usize) -> Result<()> {
        match self.preds.get(pred) {
            Some(&n) if n != arity => Err(Error::Schema(format!(
                "predicate {pred} used with arity {arity} but declared with arity {n}"
            ))),
            Some(_) => Ok(()),
            None => {
                self.preds.insert(pred.clone(), arity);
                Ok(())
            }
        }
    }

    pub fn arity(&self, pred: &Sym) -> Option<usize> {
        self.preds.get(pred).copied()
    }

    pub fn contains(&self, pred: &Sym) -> bool {
        self.preds.contains_key(pred)
    }

    /// Declared predicates, excluding the reserved one.
    pub fn predicates(&self) -> impl Iterator<Item = (&Sym, usize)> {
        self.preds
            .iter()
            .filter(|(p, _)| p.as_str() != BOT)
            .map(|(p, n)| (p, *n))
    }

    pub fn check_atom(&self, a: &Atom) -> Result<()> {
        match self.arity(&a.pred) {
            None => Err(Error::Schema(format!("unknown predicate {}", a.pred))),
            Some(n) if n != a.args.len() => Err(Error::Schema(format!(
                "predicate {} has arity {n}, used with {} arguments",
                a.pred,
                a.args.len()
            ))),
            Some(_) => Ok(()),
        }
    }

    pub fn check_fact(&self, f: &Fact) -> Result<()> {
        if f.pred.as_str() == BOT {
            return Err(Error::Schema(
                "the reserved predicate cannot be stored".into(),
            ));
        }
        self.check_atom(&f.to_atom())
    }

    pub fn check_conjunction(&self, c: &Conjunction) -> Result<()> {
        c.atoms.iter().try_for_each(|a| self.check_atom(a))
    }

    pub fn check_ucq(&self, q: &Ucq) -> Result<()> {
        q.disjuncts
            .iter()
            .try_for_each(|cq| self.check_conjunction(&cq.body))
    }
}

/// A finite set of facts over a schema.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Database {
    pub schema: Schema,
    pub facts: FactSet,
}

impl Database {
    pub fn new(schema: Schema, facts: impl IntoIterator<Item = Fact>) -> Result<Self> {
        let facts: FactSet = facts.into_iter().collect();
        for f in &facts {
            schema.check_fact(f)?;
        }
        Ok(Database { schema, facts })
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn constants(&self) -> BTreeSet<Sym> {
        constants_of(&self.facts)
    }

    pub fn instantiations(&self, conj: &Conjunction) -> Result<Vec<Substitution>> {
        self.schema.check_conjunction(conj)?;
        Ok(instantiations(conj, &self.facts))
    }

    pub fn satisfies(&self, dep: &Dependency) -> Result<bool> {
        self.schema.check_conjunction(&dep.body)?;
        self.schema.check_ucq(&dep.head)?;
        Ok(satisfies(&self.facts, dep))
    }

    pub fn consistent(&self, sigma: &[Dependency]) -> Result<bool> {
        for d in sigma {
            if !self.satisfies(d)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn images_of_ucq(&self, q: &Ucq) -> Result<Vec<FactSet>> {
        self.schema.check_ucq(q)?;
        images_of_ucq(q, &self.facts)
    }
}

/// A map from variables to terms. Matching produces ground substitutions.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Substitution {
    map: BTreeMap<Sym, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Sym, Term)>) -> Self {
        Substitution {
            map: pairs.into_iter().collect(),
        }
    }

    pub fn insert(&mut self, v: Sym, t: Term) {
        self.map.insert(v, t);
    }

    pub fn get(&self, v: &Sym) -> Option<&Term> {
        self.map.get(v)
    }

    /// The constant bound to `v`, if any.
    pub fn value(&self, v: &Sym) -> Option<&Sym> {
        match self.map.get(v) {
            Some(Term::Const(c)) => Some(c),
            _ => None,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Sym, &Term)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => self.map.get(v).cloned().unwrap_or_else(|| t.clone()),
            Term::Const(_) => t.clone(),
        }
    }

    pub fn restrict(&self, vars: &[Sym]) -> Substitution {
        Substitution {
            map: self
                .map
                .iter()
                .filter(|(v, _)| vars.contains(v))
                .map(|(v, t)| (v.clone(), t.clone()))
                .collect(),
        }
    }

    fn from_bindings(b: &Bindings) -> Self {
        Substitution {
            map: b
                .iter()
                .map(|(v, c)| (v.clone(), Term::Const(c.clone())))
                .collect(),
        }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}->{t}")?;
        }
        f.write_str("}")
    }
}

pub(crate) fn join<T: fmt::Display>(items: &[T], sep: &str) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

// ---------------------------------------------------------------------------
// matching

type Bindings = Vec<(Sym, Sym)>;

fn lookup<'a>(b: &'a Bindings, v: &Sym) -> Option<&'a Sym> {
    b.iter().rev().find(|(w, _)| w == v).map(|(_, c)| c)
}

fn resolve<'a>(b: &'a Bindings, t: &'a Term) -> Option<&'a Sym> {
    match t {
        Term::Const(c) => Some(c),
        Term::Var(v) => lookup(b, v),
    }
}

fn ineqs_ok(ineqs: &[Inequality], b: &Bindings, require_bound: bool) -> bool {
    ineqs
        .iter()
        .all(|i| match (resolve(b, &i.left), resolve(b, &i.right)) {
            (Some(l), Some(r)) => l != r,
            _ => !require_bound,
        })
}

/// Enumerates every extension of `b` mapping all atoms of `conj` into `facts`
/// and satisfying its inequalities. The callback can stop the search.
fn search<F>(conj: &Conjunction, facts: &FactSet, b: &mut Bindings, f: &mut F) -> ControlFlow<()>
where
    F: FnMut(&Bindings) -> ControlFlow<()>,
{
    fn go<F>(
        atoms: &[Atom],
        ineqs: &[Inequality],
        facts: &FactSet,
        b: &mut Bindings,
        f: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&Bindings) -> ControlFlow<()>,
    {
        let Some((atom, rest)) = atoms.split_first() else {
            return if ineqs_ok(ineqs, b, true) {
                f(b)
            } else {
                ControlFlow::Continue(())
            };
        };
        if atom.is_bot() {
            return ControlFlow::Continue(());
        }
        for fact in facts_of(facts, &atom.pred) {
            if fact.args.len() != atom.args.len() {
                continue;
            }
            let mark = b.len();
            let mut ok = true;
            for (t, c) in atom.args.iter().zip(&fact.args) {
                match t {
                    Term::Const(k) => ok = k == c,
                    Term::Var(v) => match lookup(b, v) {
                        Some(bound) => ok = bound == c,
                        None => b.push((v.clone(), c.clone())),
                    },
                }
                if !ok {
                    break;
                }
            }
            if ok && ineqs_ok(ineqs, b, false) {
                go(rest, ineqs, facts, b, f)?;
            }
            b.truncate(mark);
        }
        ControlFlow::Continue(())
    }
    go(&conj.atoms, &conj.ineqs, facts, b, f)
}

fn seed(initial: &Substitution) -> Bindings {
    initial
        .iter()
        .filter_map(|(v, t)| match t {
            Term::Const(c) => Some((v.clone(), c.clone())),
            Term::Var(_) => None,
        })
        .collect()
}

/// Whether `conj` has a match in `facts` extending `initial`.
pub fn has_match(conj: &Conjunction, facts: &FactSet, initial: &Substitution) -> bool {
    let mut b = seed(initial);
    search(conj, facts, &mut b, &mut |_| ControlFlow::Break(())).is_break()
}

/// All matches of `conj` in `facts` extending `initial`, restricted to the
/// variables of `conj`, sorted by their values in variable order.
pub fn matches(conj: &Conjunction, facts: &FactSet, initial: &Substitution) -> Vec<Substitution> {
    let vars = conj.vars();
    let mut b = seed(initial);
    let mut rows: BTreeSet<Vec<Sym>> = BTreeSet::new();
    let _ = search(conj, facts, &mut b, &mut |b| {
        rows.insert(
            vars.iter()
                .map(|v| lookup(b, v).cloned().expect("safe conjunction"))
                .collect(),
        );
        ControlFlow::Continue(())
    });
    rows.into_iter()
        .map(|row| {
            Substitution::from_pairs(vars.iter().cloned().zip(row.into_iter().map(Term::Const)))
        })
        .collect()
}

/// Every substitution mapping `conj` into `facts` (satisfying inequalities),
/// in lexicographic order of the bound constants.
pub fn instantiations(conj: &Conjunction, facts: &FactSet) -> Vec<Substitution> {
    matches(conj, facts, &Substitution::new())
}

/// The set of facts `σ(conj)`. Fails if σ leaves an atom variable unbound.
pub fn image(conj: &Conjunction, s: &Substitution) -> Result<FactSet> {
    conj.atoms
        .iter()
        .filter(|a| !a.is_bot())
        .map(|a| {
            let g = a.apply(s);
            g.to_fact().ok_or_else(|| {
                let v = g
                    .vars()
                    .next()
                    .cloned()
                    .expect("non-ground atom has a variable");
                Error::UnboundVariable(v.to_string())
            })
        })
        .collect()
}

/// Distinct images of the disjuncts of a Boolean UCQ in `facts`.
pub fn images_of_ucq(q: &Ucq, facts: &FactSet) -> Result<Vec<FactSet>> {
    if let Some(v) = q.free_vars().into_iter().next() {
        return Err(Error::UnboundVariable(v.to_string()));
    }
    let mut out: BTreeSet<FactSet> = BTreeSet::new();
    for cq in &q.disjuncts {
        for s in instantiations(&cq.body, facts) {
            out.insert(image(&cq.body, &s)?);
        }
    }
    Ok(out.into_iter().collect())
}

/// Whether a Boolean UCQ holds in `facts`.
pub fn holds(q: &Ucq, facts: &FactSet) -> bool {
    q.disjuncts
        .iter()
        .any(|cq| has_match(&cq.body, facts, &Substitution::new()))
}

/// Whether the head of `dep`, instantiated by the body match `s`, has an image.
pub fn head_has_image(dep: &Dependency, facts: &FactSet, s: &Substitution) -> bool {
    dep.head.disjuncts.iter().any(|q| {
        let frontier = s.restrict(&q.free_vars());
        has_match(&q.body, facts, &frontier)
    })
}

/// Distinct images of `head(σ(dep))` in `facts`.
pub fn head_images(dep: &Dependency, facts: &FactSet, s: &Substitution) -> Vec<FactSet> {
    let mut out: BTreeSet<FactSet> = BTreeSet::new();
    for q in &dep.head.disjuncts {
        if q.is_bot() {
            continue;
        }
        let frontier = s.restrict(&q.free_vars());
        for m in matches(&q.body, facts, &frontier) {
            let mut full = frontier.clone();
            for (v, t) in m.iter() {
                full.insert(v.clone(), t.clone());
            }
            out.insert(image(&q.body, &full).expect("match binds all atom variables"));
        }
    }
    out.into_iter().collect()
}

/// `facts ⊨ dep`: every body match has a head image.
pub fn satisfies(facts: &FactSet, dep: &Dependency) -> bool {
    let mut b = Bindings::new();
    let violated = search(&dep.body, facts, &mut b, &mut |b| {
        let s = Substitution::from_bindings(b);
        if head_has_image(dep, facts, &s) {
            ControlFlow::Continue(())
        } else {
            ControlFlow::Break(())
        }
    });
    violated.is_continue()
}

pub fn consistent(facts: &FactSet, sigma: &[Dependency]) -> bool {
    sigma.iter().all(|d| satisfies(facts, d))
}

/// Body matches of `dep` in `facts` without a head image.
pub fn violations(facts: &FactSet, dep: &Dependency) -> Vec<Substitution> {
    instantiations(&dep.body, facts)
        .into_iter()
        .filter(|s| !head_has_image(dep, facts, s))
        .collect()
}
