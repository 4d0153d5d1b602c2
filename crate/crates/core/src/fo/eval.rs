//! Active-domain evaluation of sentences.
//!
//! Quantifiers range over the active domain, but each variable is only tried
//! against the values that can make the quantified body take the deciding
//! truth value. Those candidates come from a syntactic range analysis: an
//! atom restricts its variables to the projections of matching facts, an
//! equality to a single value, and the connectives combine ranges by
//! intersection or union depending on polarity.

use std::collections::BTreeSet;

use super::Formula;
use crate::error::{Error, Result};
use crate::model::{constants_of, facts_of, Atom, Fact, FactSet, Schema, Sym, Term, BOT};

/// The structure a sentence is evaluated in: base facts, auxiliary facts
/// (the interpretation of `p^aux`) and extra domain elements.
#[derive(Clone, Debug)]
pub struct EvalContext<'a> {
    pub facts: &'a FactSet,
    pub aux: &'a FactSet,
    pub extra_domain: BTreeSet<Sym>,
    pub schema: Option<&'a Schema>,
}

impl<'a> EvalContext<'a> {
    pub fn new(facts: &'a FactSet, aux: &'a FactSet) -> Self {
        EvalContext {
            facts,
            aux,
            extra_domain: BTreeSet::new(),
            schema: None,
        }
    }

    pub fn with_schema(mut self, schema: &'a Schema) -> Self {
        self.schema = Some(schema);
        self
    }

    pub fn with_extra_domain(mut self, extra: impl IntoIterator<Item = Sym>) -> Self {
        self.extra_domain.extend(extra);
        self
    }
}

/// Truth value of a sentence in the context.
pub fn evaluate(phi: &Formula, ctx: &EvalContext<'_>) -> Result<bool> {
    if let Some(v) = phi.free_vars().into_iter().next() {
        return Err(Error::UnboundVariable(v.to_string()));
    }
    if let Some(schema) = ctx.schema {
        check_preds(phi, schema)?;
    }
    let mut domain = constants_of(ctx.facts);
    domain.extend(constants_of(ctx.aux));
    domain.extend(phi.constants());
    domain.extend(ctx.extra_domain.iter().cloned());
    let ev = Evaluator {
        facts: ctx.facts,
        aux: ctx.aux,
        domain,
    };
    Ok(ev.eval(phi, &mut Vec::new()))
}

fn check_preds(phi: &Formula, schema: &Schema) -> Result<()> {
    let mut err = None;
    phi.map_atoms(&mut |a| {
        if !a.is_bot() && err.is_none() {
            if let Err(e) = schema.check_atom(a) {
                err = Some(e);
            }
        }
        Formula::Atom(a.clone())
    });
    err.map_or(Ok(()), Err)
}

type Env = Vec<(Sym, Sym)>;

fn lookup<'e>(env: &'e Env, v: &Sym) -> Option<&'e Sym> {
    env.iter().rev().find(|(w, _)| w == v).map(|(_, c)| c)
}

/// Candidate values for a variable; `All` means no restriction was found.
#[derive(Debug)]
enum Range {
    All,
    Set(BTreeSet<Sym>),
}

impl Range {
    fn empty() -> Self {
        Range::Set(BTreeSet::new())
    }

    fn is_empty(&self) -> bool {
        matches!(self, Range::Set(s) if s.is_empty())
    }

    fn intersect(self, other: Range) -> Range {
        match (self, other) {
            (Range::All, r) | (r, Range::All) => r,
            (Range::Set(a), Range::Set(b)) => Range::Set(a.intersection(&b).cloned().collect()),
        }
    }

    fn union(self, other: Range) -> Range {
        match (self, other) {
            (Range::Set(mut a), Range::Set(b)) => {
                a.extend(b);
                Range::Set(a)
            }
            _ => Range::All,
        }
    }
}

struct Evaluator<'a> {
    facts: &'a FactSet,
    aux: &'a FactSet,
    domain: BTreeSet<Sym>,
}

/// Variable context for range analysis: `masked` variables are unbound even if
/// the environment has a value for the same name.
struct Scope<'e> {
    env: &'e Env,
    masked: Vec<Sym>,
}

impl Scope<'_> {
    fn value<'t>(&'t self, t: &'t Term) -> Option<&'t Sym> {
        match t {
            Term::Const(c) => Some(c),
            Term::Var(v) if self.masked.contains(v) => None,
            Term::Var(v) => lookup(self.env, v),
        }
    }
}

impl Evaluator<'_> {
    fn store(&self, a: &Atom) -> &FactSet {
        if a.aux {
            self.aux
        } else {
            self.facts
        }
    }

    fn value<'e>(env: &'e Env, t: &'e Term) -> &'e Sym {
        match t {
            Term::Const(c) => c,
            Term::Var(v) => lookup(env, v).expect("sentence has no free variables"),
        }
    }

    fn eval(&self, f: &Formula, env: &mut Env) -> bool {
        match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => {
                if a.pred.as_str() == BOT {
                    return false;
                }
                let fact = Fact {
                    pred: a.pred.clone(),
                    args: a.args.iter().map(|t| Self::value(env, t).clone()).collect(),
                };
                self.store(a).contains(&fact)
            }
            Formula::Eq(s, t) => Self::value(env, s) == Self::value(env, t),
            Formula::Neq(s, t) => Self::value(env, s) != Self::value(env, t),
            Formula::Not(g) => !self.eval(g, env),
            Formula::And(gs) => gs.iter().all(|g| self.eval(g, env)),
            Formula::Or(gs) => gs.iter().any(|g| self.eval(g, env)),
            Formula::Implies(a, b) => !self.eval(a, env) || self.eval(b, env),
            Formula::Exists(vs, g) => self.quantify(vs, g, env, true),
            Formula::Forall(vs, g) => self.quantify(vs, g, env, false),
        }
    }

    /// `existential`: search for a value making the body true; otherwise for a
    /// value making it false.
    fn quantify(&self, vs: &[Sym], body: &Formula, env: &mut Env, existential: bool) -> bool {
        let Some((v, rest)) = vs.split_first() else {
            return self.eval(body, env);
        };
        let range = {
            let mut scope = Scope {
                env,
                masked: vs.to_vec(),
            };
            self.range(body, v, existential, &mut scope)
        };
        let candidates: Vec<Sym> = match range {
            Range::All => self.domain.iter().cloned().collect(),
            Range::Set(s) => s.into_iter().filter(|c| self.domain.contains(c)).collect(),
        };
        for c in candidates {
            env.push((v.clone(), c));
            let r = self.quantify(rest, body, env, existential);
            env.pop();
            if r == existential {
                return existential;
            }
        }
        !existential
    }

    /// Over-approximates the values of `v` for which `f` can evaluate to `pos`.
    fn range(&self, f: &Formula, v: &Sym, pos: bool, sc: &mut Scope<'_>) -> Range {
        if let Some(b) = self.ground_value(f, sc) {
            return if b == pos { Range::All } else { Range::empty() };
        }
        match f {
            Formula::True | Formula::False => unreachable!("constants are ground"),
            Formula::Atom(a) => {
                if pos {
                    self.atom_range(a, v, sc)
                } else {
                    Range::All
                }
            }
            Formula::Eq(s, t) if pos => Self::eq_range(s, t, v, sc),
            Formula::Neq(s, t) if !pos => Self::eq_range(s, t, v, sc),
            Formula::Eq(..) | Formula::Neq(..) => Range::All,
            Formula::Not(g) => self.range(g, v, !pos, sc),
            Formula::And(gs) if pos => self.meet(gs, v, true, sc),
            Formula::Or(gs) if !pos => self.meet(gs, v, false, sc),
            Formula::And(gs) | Formula::Or(gs) => self.join(gs, v, pos, sc),
            Formula::Implies(a, b) => {
                if pos {
                    let ra = self.range(a, v, false, sc);
                    if matches!(ra, Range::All) {
                        return Range::All;
                    }
                    ra.union(self.range(b, v, true, sc))
                } else {
                    let ra = self.range(a, v, true, sc);
                    if ra.is_empty() {
                        return ra;
                    }
                    ra.intersect(self.range(b, v, false, sc))
                }
            }
            Formula::Exists(vs, g) | Formula::Forall(vs, g) => {
                if vs.contains(v) {
                    return Range::All;
                }
                let mark = sc.masked.len();
                sc.masked.extend(vs.iter().cloned());
                let r = self.range(g, v, pos, sc);
                sc.masked.truncate(mark);
                r
            }
        }
    }

    /// Children must all take `pos`: intersect. Cheap leaves are tried first
    /// and the deeper children are only analysed when no leaf restricts.
    fn meet(&self, gs: &[Formula], v: &Sym, pos: bool, sc: &mut Scope<'_>) -> Range {
        let mut acc = Range::All;
        for g in gs.iter().filter(|g| is_leaf(g)) {
            acc = acc.intersect(self.range(g, v, pos, sc));
            if acc.is_empty() {
                return acc;
            }
        }
        if matches!(acc, Range::Set(_)) {
            return acc;
        }
        for g in gs.iter().filter(|g| !is_leaf(g)) {
            acc = acc.intersect(self.range(g, v, pos, sc));
            if acc.is_empty() {
                return acc;
            }
        }
        acc
    }

    /// Some child must take `pos`: union, unrestricted if any child is.
    fn join(&self, gs: &[Formula], v: &Sym, pos: bool, sc: &mut Scope<'_>) -> Range {
        let mut acc = Range::empty();
        for g in gs {
            acc = acc.union(self.range(g, v, pos, sc));
            if matches!(acc, Range::All) {
                return acc;
            }
        }
        acc
    }

    /// Truth value of a leaf whose terms are all known in the scope.
    fn ground_value(&self, f: &Formula, sc: &Scope<'_>) -> Option<bool> {
        match f {
            Formula::True => Some(true),
            Formula::False => Some(false),
            Formula::Atom(a) => {
                if a.pred.as_str() == BOT {
                    return Some(false);
                }
                let args = a
                    .args
                    .iter()
                    .map(|t| sc.value(t).cloned())
                    .collect::<Option<Vec<_>>>()?;
                Some(self.store(a).contains(&Fact {
                    pred: a.pred.clone(),
                    args,
                }))
            }
            Formula::Eq(s, t) => Some(sc.value(s)? == sc.value(t)?),
            Formula::Neq(s, t) => Some(sc.value(s)? != sc.value(t)?),
            _ => None,
        }
    }

    fn atom_range(&self, a: &Atom, v: &Sym, sc: &Scope<'_>) -> Range {
        let target = Term::Var(v.clone());
        if !a.args.contains(&target) {
            return Range::All;
        }
        let mut out = BTreeSet::new();
        'facts: for fact in facts_of(self.store(a), &a.pred) {
            if fact.args.len() != a.args.len() {
                continue;
            }
            let mut seen: Option<&Sym> = None;
            for (t, c) in a.args.iter().zip(&fact.args) {
                if *t == target {
                    match seen {
                        Some(prev) if prev != c => continue 'facts,
                        _ => seen = Some(c),
                    }
                } else if let Some(val) = sc.value(t) {
                    if val != c {
                        continue 'facts;
                    }
                }
            }
            if let Some(c) = seen {
                out.insert(c.clone());
            }
        }
        Range::Set(out)
    }

    fn eq_range(s: &Term, t: &Term, v: &Sym, sc: &Scope<'_>) -> Range {
        let target = Term::Var(v.clone());
        let other = if *s == target {
            t
        } else if *t == target {
            s
        } else {
            return Range::All;
        };
        match sc.value(other) {
            Some(c) => Range::Set([c.clone()].into_iter().collect()),
            None => Range::All,
        }
    }
}

fn is_leaf(f: &Formula) -> bool {
    matches!(
        f,
        Formula::Atom(_) | Formula::Eq(..) | Formula::Neq(..) | Formula::True | Formula::False
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_fo;

    fn facts(items: &[(&str, &[&str])]) -> FactSet {
        items.iter().map(|(p, a)| Fact::new(p, a)).collect()
    }

    fn eval_str(src: &str, d: &FactSet, aux: &FactSet) -> bool {
        let f = parse_fo(src).unwrap();
        evaluate(&f, &EvalContext::new(d, aux)).unwrap()
    }

    #[test]
    fn exists_over_facts() {
        let d = facts(&[("P", &["c", "a"]), ("P", &["d", "c"])]);
        let none = FactSet::new();
        assert!(eval_str("exists x: P(c,x)", &d, &none));
        assert!(!eval_str("exists x: P(a,x)", &d, &none));
    }

    #[test]
    fn empty_database_tautologies() {
        let none = FactSet::new();
        assert!(eval_str("forall x: (P(x,x) -> false)", &none, &none));
        assert!(!eval_str("exists x: P(x,x)", &none, &none));
    }

    #[test]
    fn negation_and_universal() {
        let d = facts(&[("P", &["a", "b"]), ("P", &["b", "a"]), ("T", &["a"])]);
        let none = FactSet::new();
        assert!(eval_str("forall x,y: (P(x,y) -> P(y,x))", &d, &none));
        assert!(!eval_str("forall x,y: (P(x,y) -> T(x))", &d, &none));
        assert!(eval_str("exists x,y: (P(x,y) & !T(x))", &d, &none));
        assert!(eval_str("forall x: (!T(x) | x = a)", &d, &none));
        assert!(eval_str("exists x: (x != a & !T(x))", &d, &none));
    }

    #[test]
    fn auxiliary_atoms_read_the_aux_store() {
        let d = facts(&[("P", &["a"])]);
        let aux = facts(&[("P", &["b"])]);
        assert!(eval_str("P^aux(b) & !P^aux(a) & P(a)", &d, &aux));
    }

    #[test]
    fn free_variable_is_an_error() {
        let none = FactSet::new();
        let f = parse_fo("P(x)").unwrap();
        // parse_fo treats x as a constant; build a genuinely free variable
        assert!(evaluate(&f, &EvalContext::new(&none, &none)).is_ok());
        let g = Formula::Atom(Atom::new("P", vec![Term::var("x")]));
        assert!(matches!(
            evaluate(&g, &EvalContext::new(&none, &none)),
            Err(Error::UnboundVariable(_))
        ));
    }

    #[test]
    fn unknown_predicate_with_schema() {
        let none = FactSet::new();
        let schema = Schema::new();
        let f = parse_fo("exists x: Q(x)").unwrap();
        let ctx = EvalContext::new(&none, &none).with_schema(&schema);
        assert!(matches!(evaluate(&f, &ctx), Err(Error::Schema(_))));
    }

    #[test]
    fn fresh_constants_do_not_change_domain_independent_sentences() {
        let d = facts(&[("P", &["a", "b"]), ("T", &["b"])]);
        let none = FactSet::new();
        let f = parse_fo("forall x,y: (P(x,y) -> exists z: (T(y) & z = y))").unwrap();
        let base = evaluate(&f, &EvalContext::new(&d, &none)).unwrap();
        let wider = evaluate(
            &f,
            &EvalContext::new(&d, &none).with_extra_domain(["n1", "n2", "n3"].map(Sym::new)),
        )
        .unwrap();
        assert_eq!(base, wider);
        assert!(base);
    }
}
