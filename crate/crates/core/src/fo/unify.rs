use std::collections::{BTreeMap, BTreeSet};

use crate::model::{Atom, Substitution, Sym, Term};

/// Most general unifier builder. Constants are rigid. When two variables meet,
/// the one marked local is bound so that outer variables survive as long as
/// possible.
#[derive(Clone, Debug, Default)]
pub struct Unifier {
    map: BTreeMap<Sym, Term>,
    local: BTreeSet<Sym>,
}

impl Unifier {
    pub fn new(local: impl IntoIterator<Item = Sym>) -> Self {
        Unifier {
            map: BTreeMap::new(),
            local: local.into_iter().collect(),
        }
    }

    fn walk(&self, t: &Term) -> Term {
        let mut cur = t.clone();
        while let Term::Var(v) = &cur {
            match self.map.get(v) {
                Some(next) => cur = next.clone(),
                None => break,
            }
        }
        cur
    }

    pub fn unify_terms(&mut self, s: &Term, t: &Term) -> bool {
        let (s, t) = (self.walk(s), self.walk(t));
        if s == t {
            return true;
        }
        match (&s, &t) {
            (Term::Const(_), Term::Const(_)) => false,
            (Term::Var(a), Term::Var(b)) => {
                if self.local.contains(b) || !self.local.contains(a) {
                    self.map.insert(b.clone(), s.clone());
                } else {
                    self.map.insert(a.clone(), t.clone());
                }
                true
            }
            (Term::Var(a), Term::Const(_)) => {
                self.map.insert(a.clone(), t.clone());
                true
            }
            (Term::Const(_), Term::Var(b)) => {
                self.map.insert(b.clone(), s.clone());
                true
            }
        }
    }

    pub fn unify(&mut self, a: &Atom, b: &Atom) -> bool {
        a.pred == b.pred
            && a.aux == b.aux
            && a.args.len() == b.args.len()
            && a.args
                .iter()
                .zip(&b.args)
                .all(|(s, t)| self.unify_terms(s, t))
    }

    /// The idempotent substitution for all bound variables.
    pub fn substitution(&self) -> Substitution {
        Substitution::from_pairs(
            self.map
                .keys()
                .map(|v| (v.clone(), self.walk(&Term::Var(v.clone())))),
        )
    }

    /// Bindings of local variables only.
    pub fn local_substitution(&self) -> Substitution {
        Substitution::from_pairs(
            self.map
                .keys()
                .filter(|v| self.local.contains(*v))
                .map(|v| (v.clone(), self.walk(&Term::Var(v.clone())))),
        )
    }

    /// Constraints the unifier imposes on non-local variables, as `v = t`.
    pub fn outer_equalities(&self) -> Vec<(Term, Term)> {
        self.map
            .keys()
            .filter(|v| !self.local.contains(*v))
            .map(|v| (Term::Var(v.clone()), self.walk(&Term::Var(v.clone()))))
            .collect()
    }
}

/// The most general unifier of two atoms, binding variables of `b` in
/// preference to those of `a`. Constants are rigid.
pub fn unify_atoms(a: &Atom, b: &Atom) -> Option<Substitution> {
    let mut u = Unifier::new(b.vars().cloned());
    u.unify(a, b).then(|| u.substitution())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom(p: &str, args: &[Term]) -> Atom {
        Atom::new(p, args.to_vec())
    }

    #[test]
    fn binds_second_atom_variables() {
        let a = atom("T", &[Term::cst("e"), Term::var("z1")]);
        let b = atom("T", &[Term::var("y"), Term::var("z")]);
        let s = unify_atoms(&a, &b).unwrap();
        assert_eq!(s.to_string(), "{y->e, z->z1}");
    }

    #[test]
    fn constants_are_rigid() {
        let a = atom("P", &[Term::cst("a")]);
        let b = atom("P", &[Term::cst("b")]);
        assert!(unify_atoms(&a, &b).is_none());
        let c = atom("Q", &[Term::cst("a")]);
        assert!(unify_atoms(&a, &c).is_none());
    }

    #[test]
    fn repeated_variables_produce_outer_equalities() {
        // R(u,w) against R(x,x) forces u = w
        let a = atom("R", &[Term::var("u"), Term::var("w")]);
        let b = atom("R", &[Term::var("x"), Term::var("x")]);
        let mut un = Unifier::new([Sym::new("x")]);
        assert!(un.unify(&a, &b));
        assert_eq!(un.local_substitution().len(), 1);
        let eqs = un.outer_equalities();
        assert_eq!(eqs.len(), 1);
        let s = un.substitution();
        assert_eq!(s.apply_term(&Term::var("u")), s.apply_term(&Term::var("w")));
    }

    #[test]
    fn unifier_is_idempotent() {
        let a = atom("P", &[Term::var("x"), Term::var("x"), Term::cst("c")]);
        let b = atom("P", &[Term::var("y"), Term::var("z"), Term::var("z")]);
        let s = unify_atoms(&a, &b).unwrap();
        let a2 = a.apply(&s);
        assert_eq!(a2, b.apply(&s));
        assert_eq!(a2.apply(&s), a2);
        assert!(a2.args.iter().all(|t| *t == Term::cst("c")));
    }
}
