//! First-order sentences over base and auxiliary predicates.

mod eval;
mod names;
mod unify;

pub use eval::{evaluate, EvalContext};
pub use names::NameSupply;
pub use unify::{unify_atoms, Unifier};

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{Atom, Conjunction, Cq, Fact, FactSet, Substitution, Sym, Term, Ucq};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Eq(Term, Term),
    Neq(Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(Vec<Sym>, Box<Formula>),
    Forall(Vec<Sym>, Box<Formula>),
}

impl Formula {
    /// Conjunction that drops `true`, absorbs `false`, flattens nested
    /// conjunctions and unwraps singletons.
    pub fn and(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::And(inner) => out.extend(inner),
                p => out.push(p),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().expect("one element"),
            _ => Formula::And(out),
        }
    }

    /// Disjunction that drops `false`, absorbs `true`, flattens nested
    /// disjunctions and unwraps singletons.
    pub fn or(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::False => {}
                Formula::True => return Formula::True,
                Formula::Or(inner) => out.extend(inner),
                p => out.push(p),
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().expect("one element"),
            _ => Formula::Or(out),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        match f {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            f => Formula::Not(Box::new(f)),
        }
    }

    /// Implication; simplified only when the antecedent is constant.
    pub fn implies(a: Formula, b: Formula) -> Formula {
        match a {
            Formula::False => Formula::True,
            Formula::True => b,
            a => Formula::Implies(Box::new(a), Box::new(b)),
        }
    }

    pub fn exists(vars: Vec<Sym>, body: Formula) -> Formula {
        match body {
            Formula::False => Formula::False,
            body if vars.is_empty() => body,
            body => Formula::Exists(vars, Box::new(body)),
        }
    }

    pub fn forall(vars: Vec<Sym>, body: Formula) -> Formula {
        match body {
            Formula::True => Formula::True,
            body if vars.is_empty() => body,
            body => Formula::Forall(vars, Box::new(body)),
        }
    }

    /// `s = t`, folded when both sides are syntactically decided.
    pub fn eq(s: Term, t: Term) -> Formula {
        if s == t {
            Formula::True
        } else if !s.is_var() && !t.is_var() {
            Formula::False
        } else {
            Formula::Eq(s, t)
        }
    }

    pub fn neq(s: Term, t: Term) -> Formula {
        Formula::not_eq_folded(s, t)
    }

    fn not_eq_folded(s: Term, t: Term) -> Formula {
        if s == t {
            Formula::False
        } else if !s.is_var() && !t.is_var() {
            Formula::True
        } else {
            Formula::Neq(s, t)
        }
    }

    pub fn atom(a: Atom) -> Formula {
        if a.is_bot() && !a.aux {
            Formula::False
        } else {
            Formula::Atom(a)
        }
    }

    /// The conjunction of atoms and inequalities, as a formula.
    pub fn conj(c: &Conjunction) -> Formula {
        Formula::and(
            c.atoms.iter().cloned().map(Formula::atom).chain(
                c.ineqs
                    .iter()
                    .map(|i| Formula::neq(i.left.clone(), i.right.clone())),
            ),
        )
    }

    pub fn cq(q: &Cq) -> Formula {
        Formula::exists(q.exists.clone(), Formula::conj(&q.body))
    }

    pub fn ucq(q: &Ucq) -> Formula {
        Formula::or(q.disjuncts.iter().map(Formula::cq))
    }

    /// Rebuilds the formula bottom-up, replacing every atom by `f(atom)` and
    /// re-simplifying.
    pub fn map_atoms(&self, f: &mut impl FnMut(&Atom) -> Formula) -> Formula {
        match self {
            Formula::True | Formula::False | Formula::Eq(..) | Formula::Neq(..) => self.clone(),
            Formula::Atom(a) => f(a),
            Formula::Not(g) => Formula::not(g.map_atoms(f)),
            Formula::And(gs) => Formula::and(gs.iter().map(|g| g.map_atoms(f)).collect::<Vec<_>>()),
            Formula::Or(gs) => Formula::or(gs.iter().map(|g| g.map_atoms(f)).collect::<Vec<_>>()),
            Formula::Implies(a, b) => Formula::implies(a.map_atoms(f), b.map_atoms(f)),
            Formula::Exists(vs, g) => Formula::exists(vs.clone(), g.map_atoms(f)),
            Formula::Forall(vs, g) => Formula::forall(vs.clone(), g.map_atoms(f)),
        }
    }

    /// Number of atom, equality and inequality leaves.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False => 1,
            Formula::Atom(_) | Formula::Eq(..) | Formula::Neq(..) => 1,
            Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => g.size(),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().map(Formula::size).sum(),
            Formula::Implies(a, b) => a.size() + b.size(),
        }
    }

    pub fn constants(&self) -> BTreeSet<Sym> {
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t| {
            if let Term::Const(c) = t {
                out.insert(c.clone());
            }
        });
        out
    }

    fn visit_terms(&self, f: &mut impl FnMut(&Term)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => a.args.iter().for_each(f),
            Formula::Eq(s, t) | Formula::Neq(s, t) => {
                f(s);
                f(t);
            }
            Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => g.visit_terms(f),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.visit_terms(f)),
            Formula::Implies(a, b) => {
                a.visit_terms(f);
                b.visit_terms(f);
            }
        }
    }

    /// Variables occurring free.
    pub fn free_vars(&self) -> BTreeSet<Sym> {
        fn go(f: &Formula, bound: &mut Vec<Sym>, out: &mut BTreeSet<Sym>) {
            let mut term = |t: &Term, bound: &Vec<Sym>| {
                if let Term::Var(v) = t {
                    if !bound.contains(v) {
                        out.insert(v.clone());
                    }
                }
            };
            match f {
                Formula::True | Formula::False => {}
                Formula::Atom(a) => a.args.iter().for_each(|t| term(t, bound)),
                Formula::Eq(s, t) | Formula::Neq(s, t) => {
                    term(s, bound);
                    term(t, bound);
                }
                Formula::Not(g) => go(g, bound, out),
                Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| go(g, bound, out)),
                Formula::Implies(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Formula::Exists(vs, g) | Formula::Forall(vs, g) => {
                    let mark = bound.len();
                    bound.extend(vs.iter().cloned());
                    go(g, bound, out);
                    bound.truncate(mark);
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Every variable name used, bound or free.
    pub fn variables(&self) -> BTreeSet<Sym> {
        fn go(f: &Formula, out: &mut BTreeSet<Sym>) {
            match f {
                Formula::Exists(vs, g) | Formula::Forall(vs, g) => {
                    out.extend(vs.iter().cloned());
                    go(g, out);
                }
                Formula::Not(g) => go(g, out),
                Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| go(g, out)),
                Formula::Implies(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                _ => {}
            }
        }
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t| {
            if let Term::Var(v) = t {
                out.insert(v.clone());
            }
        });
        go(self, &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Structural equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        fn term_eq(s: &Term, t: &Term, env: &[(Sym, Sym)]) -> bool {
            match (s, t) {
                (Term::Const(a), Term::Const(b)) => a == b,
                (Term::Var(a), Term::Var(b)) => {
                    let l = env.iter().rev().position(|(x, _)| x == a);
                    let r = env.iter().rev().position(|(_, y)| y == b);
                    match (l, r) {
                        (Some(i), Some(j)) => i == j,
                        (None, None) => a == b,
                        _ => false,
                    }
                }
                _ => false,
            }
        }
        fn go(f: &Formula, g: &Formula, env: &mut Vec<(Sym, Sym)>) -> bool {
            match (f, g) {
                (Formula::True, Formula::True) | (Formula::False, Formula::False) => true,
                (Formula::Atom(a), Formula::Atom(b)) => {
                    a.pred == b.pred
                        && a.aux == b.aux
                        && a.args.len() == b.args.len()
                        && a.args.iter().zip(&b.args).all(|(s, t)| term_eq(s, t, env))
                }
                (Formula::Eq(s1, t1), Formula::Eq(s2, t2))
                | (Formula::Neq(s1, t1), Formula::Neq(s2, t2)) => {
                    term_eq(s1, s2, env) && term_eq(t1, t2, env)
                }
                (Formula::Not(a), Formula::Not(b)) => go(a, b, env),
                (Formula::And(xs), Formula::And(ys)) | (Formula::Or(xs), Formula::Or(ys)) => {
                    xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| go(x, y, env))
                }
                (Formula::Implies(a1, b1), Formula::Implies(a2, b2)) => {
                    go(a1, a2, env) && go(b1, b2, env)
                }
                (Formula::Exists(v1, b1), Formula::Exists(v2, b2))
                | (Formula::Forall(v1, b1), Formula::Forall(v2, b2)) => {
                    if v1.len() != v2.len() {
                        return false;
                    }
                    let mark = env.len();
                    env.extend(v1.iter().cloned().zip(v2.iter().cloned()));
                    let ok = go(b1, b2, env);
                    env.truncate(mark);
                    ok
                }
                _ => false,
            }
        }
        go(self, other, &mut Vec::new())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_fo(self))
    }
}

/// The auxiliary copy of an atom.
pub fn aux_atom(a: &Atom) -> Result<Atom> {
    if a.aux {
        return Err(Error::AlreadyAuxiliary(a.to_string()));
    }
    Ok(Atom {
        aux: true,
        ..a.clone()
    })
}

/// Replaces every predicate atom by its auxiliary copy.
pub fn aux_formula(f: &Formula) -> Result<Formula> {
    let mut err = None;
    let out = f.map_atoms(&mut |a| {
        if a.is_bot() {
            return Formula::False;
        }
        match aux_atom(a) {
            Ok(b) => Formula::Atom(b),
            Err(e) => {
                err.get_or_insert(e);
                Formula::Atom(a.clone())
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Ground auxiliary atoms for a set of facts.
pub fn aux_facts(facts: &FactSet) -> Vec<Atom> {
    facts
        .iter()
        .map(|f| Atom {
            aux: true,
            ..f.to_atom()
        })
        .collect()
}

/// Formula for `σ(conj)` with atoms optionally made auxiliary.
pub fn conj_formula(c: &Conjunction, s: &Substitution, aux: bool) -> Formula {
    Formula::and(
        c.atoms
            .iter()
            .map(|a| {
                let mut b = a.apply(s);
                if aux && !b.is_bot() {
                    b.aux = true;
                }
                if b.is_bot() {
                    Formula::False
                } else {
                    Formula::Atom(b)
                }
            })
            .chain(c.ineqs.iter().map(|i| {
                let i = i.apply(s);
                Formula::neq(i.left, i.right)
            })),
    )
}

/// Facts as a closed conjunction, useful for tests.
pub fn facts_formula(facts: &FactSet) -> Formula {
    Formula::and(facts.iter().map(|f: &Fact| Formula::Atom(f.to_atom())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(args: &[&str]) -> Atom {
        Atom::new("P", args.iter().map(|a| Term::var(a)).collect())
    }

    #[test]
    fn constructors_simplify() {
        assert_eq!(Formula::and([Formula::True, Formula::True]), Formula::True);
        assert_eq!(
            Formula::and([Formula::Atom(p(&["x"])), Formula::False]),
            Formula::False
        );
        assert_eq!(Formula::or(Vec::new()), Formula::False);
        assert_eq!(
            Formula::implies(Formula::False, Formula::Atom(p(&["x"]))),
            Formula::True
        );
        assert_eq!(Formula::eq(Term::cst("a"), Term::cst("b")), Formula::False);
        assert_eq!(Formula::neq(Term::cst("a"), Term::cst("b")), Formula::True);
        assert_eq!(Formula::atom(Atom::bot()), Formula::False);
    }

    #[test]
    fn implication_to_true_is_kept() {
        let f = Formula::implies(Formula::Atom(p(&["x"])), Formula::True);
        assert!(matches!(f, Formula::Implies(..)));
    }

    #[test]
    fn aux_twice_is_an_error() {
        let a = aux_atom(&p(&["x"])).unwrap();
        assert!(a.aux);
        assert!(matches!(aux_atom(&a), Err(Error::AlreadyAuxiliary(_))));
        let f = Formula::Atom(a);
        assert!(aux_formula(&f).is_err());
    }

    #[test]
    fn alpha_equivalence_tracks_binders() {
        let f = Formula::Exists(vec![Sym::new("x")], Box::new(Formula::Atom(p(&["x"]))));
        let g = Formula::Exists(vec![Sym::new("y")], Box::new(Formula::Atom(p(&["y"]))));
        let h = Formula::Exists(vec![Sym::new("y")], Box::new(Formula::Atom(p(&["x"]))));
        assert!(f.alpha_eq(&g));
        assert!(!f.alpha_eq(&h));
    }

    #[test]
    fn free_variables_respect_scope() {
        let f = Formula::And(vec![
            Formula::Exists(vec![Sym::new("x")], Box::new(Formula::Atom(p(&["x"])))),
            Formula::Atom(p(&["z"])),
        ]);
        assert_eq!(f.free_vars(), [Sym::new("z")].into_iter().collect());
    }
}
