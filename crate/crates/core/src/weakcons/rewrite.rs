//! Sentences over base and auxiliary predicates whose truth on `D ∪ aux(D')`
//! decides the weak consistency of `D'`.

use crate::classify::topological_order;
use crate::error::{Error, Result};
use crate::fo::{aux_atom, conj_formula, Formula, NameSupply, Unifier};
use crate::model::{predicates_of, Atom, Dependency, Substitution, Sym, Term};

/// Dependencies in topological order, or `NotAcyclic`.
fn ordered(sigma: &[Dependency]) -> Result<Vec<&Dependency>> {
    let order = topological_order(sigma).ok_or(Error::NotAcyclic)?;
    Ok(order.into_iter().map(|i| &sigma[i]).collect())
}

/// Variables of the renamed copy `tau` left unbound by `s`, body first.
fn unbound_vars(vars: impl IntoIterator<Item = Sym>, s: &Substitution) -> Vec<Sym> {
    let mut out: Vec<Sym> = Vec::new();
    for v in vars {
        if s.get(&v).is_none() && !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

fn equalities(u: &Unifier) -> Vec<Formula> {
    u.outer_equalities()
        .into_iter()
        .map(|(s, t)| Formula::eq(s, t))
        .collect()
}

struct ClosureBuilder<'a> {
    ordered: Vec<&'a Dependency>,
    names: NameSupply,
}

impl ClosureBuilder<'_> {
    /// Membership of `alpha` in the forward closure, using the first `i`
    /// dependencies of the topological order.
    fn in_fc(&mut self, alpha: &Atom, i: usize) -> Formula {
        let mut parts = vec![Formula::Atom(aux_atom(alpha).expect("base atom"))];
        for j in 0..i {
            let tau = self.names.rename_apart(self.ordered[j]);
            let local: Vec<Sym> = tau.all_vars().into_iter().collect();
            for q in tau.head.disjuncts.iter().filter(|q| !q.is_bot()) {
                for gamma in &q.body.atoms {
                    let mut u = Unifier::new(local.iter().cloned());
                    if !u.unify(alpha, gamma) {
                        continue;
                    }
                    let s = u.local_substitution();
                    let mut inner = equalities(&u);
                    inner.push(conj_formula(&tau.body, &s, false));
                    inner.push(conj_formula(&q.body, &s, false));
                    for beta in &tau.body.atoms {
                        let beta = beta.apply(&s);
                        inner.push(self.in_fc(&beta, j));
                    }
                    let vars = unbound_vars(tau.body.vars().into_iter().chain(q.body.vars()), &s);
                    parts.push(Formula::exists(vars, Formula::and(inner)));
                }
            }
        }
        Formula::or(parts)
    }
}

/// The sentence true on `D ∪ aux(D')` iff the forward closure of `D'` is
/// consistent, for acyclic dependencies that are FDET on `D`.
pub fn build_wcons(sigma: &[Dependency]) -> Result<Formula> {
    let mut b = ClosureBuilder {
        ordered: ordered(sigma)?,
        names: NameSupply::avoiding(sigma),
    };
    let h = b.ordered.len();
    let mut conjuncts = Vec::new();
    for tau in b.ordered.clone() {
        let mut antecedent: Vec<Formula> = Vec::new();
        for beta in &tau.body.atoms {
            antecedent.push(b.in_fc(beta, h));
        }
        antecedent.push(conj_formula(
            &crate::model::Conjunction::new(Vec::new(), tau.body.ineqs.clone()),
            &Substitution::new(),
            false,
        ));
        let mut heads = Vec::new();
        for q in &tau.head.disjuncts {
            if q.is_bot() {
                continue;
            }
            let mut inner: Vec<Formula> = q.body.atoms.iter().map(|g| b.in_fc(g, h)).collect();
            inner.push(conj_formula(
                &crate::model::Conjunction::new(Vec::new(), q.body.ineqs.clone()),
                &Substitution::new(),
                false,
            ));
            heads.push(Formula::exists(q.exists.clone(), Formula::and(inner)));
        }
        conjuncts.push(Formula::forall(
            tau.forall.clone(),
            Formula::implies(Formula::and(antecedent), Formula::or(heads)),
        ));
    }
    Ok(Formula::and(conjuncts))
}

/// Specializes a weak-consistency sentence to the candidate subset described
/// by the atoms `a`: each `p^aux(t)` becomes "`t` is one of the `p`-atoms of
/// `a`".
pub fn wcons_over_atoms(wcons: &Formula, a: &[Atom]) -> Formula {
    wcons.map_atoms(&mut |atom| {
        if !atom.aux {
            return Formula::Atom(atom.clone());
        }
        Formula::or(
            a.iter()
                .filter(|b| b.pred == atom.pred && b.args.len() == atom.args.len())
                .map(|b| {
                    Formula::and(
                        std::iter::once(Formula::Atom(b.clone())).chain(
                            atom.args
                                .iter()
                                .zip(&b.args)
                                .map(|(s, t)| Formula::eq(s.clone(), t.clone())),
                        ),
                    )
                })
                .collect::<Vec<_>>(),
        )
    })
}

struct LinearBuilder<'a> {
    ordered: Vec<&'a Dependency>,
    names: NameSupply,
}

impl LinearBuilder<'_> {
    /// `{alpha}` is weakly consistent w.r.t. the dependencies from position
    /// `from` onwards.
    fn atom(&mut self, alpha: &Atom, from: usize) -> Formula {
        let mut conjuncts = Vec::new();
        for i in from..self.ordered.len() {
            let tau = self.names.rename_apart(self.ordered[i]);
            let mut u = Unifier::new(tau.all_vars());
            if !u.unify(alpha, &tau.body.atoms[0]) {
                continue;
            }
            let s = u.local_substitution();
            let mut guard = equalities(&u);
            guard.extend(tau.body.ineqs.iter().map(|iq| {
                let iq = iq.apply(&s);
                Formula::neq(iq.left, iq.right)
            }));
            let mut disjuncts = Vec::new();
            for q in &tau.head.disjuncts {
                if q.is_bot() {
                    continue;
                }
                let mut inner = vec![conj_formula(&q.body, &s, false)];
                for gamma in &q.body.atoms {
                    let gamma = gamma.apply(&s);
                    inner.push(self.atom(&gamma, i + 1));
                }
                let vars = unbound_vars(q.exists.iter().cloned(), &s);
                disjuncts.push(Formula::exists(vars, Formula::and(inner)));
            }
            conjuncts.push(Formula::implies(
                Formula::and(guard),
                Formula::or(disjuncts),
            ));
        }
        Formula::and(conjuncts)
    }
}

/// The weak-consistency sentence of a single atom against acyclic linear
/// dependencies given in topological order.
pub fn build_wcons_al_atom(alpha: &Atom, sigma_suffix: &[Dependency]) -> Result<Formula> {
    if !sigma_suffix.iter().all(Dependency::is_linear) {
        return Err(Error::NotLinear);
    }
    let mut names = NameSupply::avoiding(sigma_suffix);
    names.reserve(alpha.vars().cloned());
    let mut b = LinearBuilder {
        ordered: sigma_suffix.iter().collect(),
        names,
    };
    Ok(b.atom(alpha, 0))
}

/// `forall x: p^aux(x) -> ...` for every predicate of the dependencies: true
/// on `D ∪ aux(D')` iff `D'` is weakly consistent, for acyclic linear sets.
pub fn build_wcons_al(sigma: &[Dependency]) -> Result<Formula> {
    if !sigma.iter().all(Dependency::is_linear) {
        return Err(Error::NotLinear);
    }
    let mut b = LinearBuilder {
        ordered: ordered(sigma)?,
        names: NameSupply::avoiding(sigma),
    };
    let mut conjuncts = Vec::new();
    for (p, arity) in predicates_of(sigma) {
        let base = Sym::new("x");
        let vars: Vec<Sym> = (0..arity).map(|_| b.names.fresh(&base)).collect();
        let alpha = Atom {
            pred: p,
            aux: false,
            args: vars.iter().cloned().map(Term::Var).collect(),
        };
        let body = b.atom(&alpha, 0);
        let premise = Formula::Atom(aux_atom(&alpha).expect("base atom"));
        conjuncts.push(Formula::forall(vars, Formula::implies(premise, body)));
    }
    Ok(Formula::and(conjuncts))
}
