//! Entailment of Boolean UCQs under the AllRep and IntRep semantics.

use std::ops::ControlFlow;

use serde::Serialize;

use crate::classify::{classify, topological_order, Classification};
use crate::error::{Error, Result};
use crate::fo::{evaluate, EvalContext, Formula, NameSupply};
use crate::model::{
    consistent, holds, images_of_ucq, Atom, Conjunction, Cq, Dependency, Fact, FactSet,
    Substitution, Sym, Term, Ucq,
};
use crate::names::named_enum;
use crate::options::Options;
use crate::repair::enumerate_repairs;
use crate::subsets::{binomial, for_each_combination};
use crate::weakcons::{
    build_wcons, build_wcons_al_atom, forward_closure, unique_repair_linear, unsupported_facts,
    wcons_over_atoms, WcMethod, WeakConsistency,
};

named_enum! {
    pub enum Semantics {
        AllRep => "allrep",
        IntRep => "intrep",
    }
}

named_enum! {
    pub enum EntMethod {
        Auto => "auto",
        Brute => "brute",
        Alg2AllRep => "alg2_allrep",
        Alg3IntRep => "alg3_intrep",
        Alg4AcyclicFdet => "alg4_acyclic_fdet",
        LinearUnique => "linear_unique",
        LinearFdetImages => "linear_fdet_images",
        RewriteQent => "rewrite_qent",
        RewriteQentAl => "rewrite_qent_al",
    }
}

impl EntMethod {
    /// Candidates tried by `auto`, best first. Methods refusing the instance
    /// for size reasons pass it on to the next admissible one.
    pub fn preference(sem: Semantics) -> Vec<EntMethod> {
        let mut v = vec![EntMethod::RewriteQentAl, EntMethod::LinearFdetImages];
        if sem == Semantics::IntRep {
            v.extend([EntMethod::Alg4AcyclicFdet, EntMethod::RewriteQent]);
        }
        v.push(EntMethod::LinearUnique);
        v.push(match sem {
            Semantics::AllRep => EntMethod::Alg2AllRep,
            Semantics::IntRep => EntMethod::Alg3IntRep,
        });
        v.push(EntMethod::Brute);
        v
    }

    pub fn admissible(
        self,
        class: &Classification,
        sem: Semantics,
    ) -> std::result::Result<(), String> {
        let fdet = class.fdet.unwrap_or(false);
        let need = |ok: bool, what: &str| if ok { Ok(()) } else { Err(what.to_string()) };
        match self {
            EntMethod::Auto | EntMethod::Brute => Ok(()),
            EntMethod::Alg2AllRep => need(sem == Semantics::AllRep, "decides AllRep only"),
            EntMethod::Alg3IntRep => need(sem == Semantics::IntRep, "decides IntRep only"),
            EntMethod::Alg4AcyclicFdet | EntMethod::RewriteQent => {
                need(sem == Semantics::IntRep, "decides IntRep only")?;
                need(
                    class.acyclic && fdet,
                    "requires acyclic dependencies that are FDET on the database",
                )
            }
            EntMethod::LinearUnique => need(class.linear, "requires linear dependencies"),
            EntMethod::LinearFdetImages => need(
                class.linear && fdet,
                "requires linear dependencies that are FDET on the database",
            ),
            EntMethod::RewriteQentAl => need(
                class.linear && class.acyclic,
                "requires acyclic linear dependencies",
            ),
        }
    }
}

/// Evidence for an answer, when the method produces one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Witness {
    /// A repair in which the query is false.
    Repair(FactSet),
    /// An image of the query contained in every repair.
    Image(FactSet),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntOutcome {
    pub entailed: bool,
    pub semantics: Semantics,
    pub method: EntMethod,
    pub witness: Option<Witness>,
}

/// Rejects queries with free variables or unsafe inequalities.
pub fn check_query(q: &Ucq) -> Result<()> {
    if !q.is_boolean() {
        return Err(Error::Invalid(format!("query {q} has free variables")));
    }
    for cq in &q.disjuncts {
        let atom_vars = cq.body.atom_vars();
        if let Some(v) = cq.body.vars().into_iter().find(|v| !atom_vars.contains(v)) {
            return Err(Error::Invalid(format!(
                "query {q} is unsafe: {v} occurs only in inequalities"
            )));
        }
    }
    Ok(())
}

/// Decides whether the query is entailed.
pub fn entails(
    facts: &FactSet,
    sigma: &[Dependency],
    q: &Ucq,
    sem: Semantics,
    method: EntMethod,
    opts: &Options,
) -> Result<EntOutcome> {
    check_query(q)?;
    let class = classify(sigma, Some(facts));
    if method != EntMethod::Auto {
        method
            .admissible(&class, sem)
            .map_err(|reason| Error::MethodInapplicable {
                method: method.name().to_string(),
                reason,
            })?;
        return run(facts, sigma, q, sem, method, &class, opts);
    }
    for m in EntMethod::preference(sem) {
        if m.admissible(&class, sem).is_err() {
            continue;
        }
        match run(facts, sigma, q, sem, m, &class, opts) {
            Err(Error::FormulaTooLarge { .. } | Error::InstanceTooLarge { .. })
                if m != EntMethod::Brute =>
            {
                continue
            }
            r => return r,
        }
    }
    unreachable!("brute is always admissible")
}

fn run(
    facts: &FactSet,
    sigma: &[Dependency],
    q: &Ucq,
    sem: Semantics,
    method: EntMethod,
    class: &Classification,
    opts: &Options,
) -> Result<EntOutcome> {
    let (entailed, witness) = match method {
        EntMethod::Brute => entails_brute(facts, sigma, q, sem, opts)?,
        EntMethod::Alg2AllRep => entails_alg2(facts, sigma, q, class, opts)?,
        EntMethod::Alg3IntRep => entails_alg3(facts, sigma, q, class, opts)?,
        EntMethod::Alg4AcyclicFdet => entails_alg4(facts, sigma, q, opts)?,
        EntMethod::LinearUnique => {
            let r = unique_repair_linear(facts, sigma)?;
            let images = images_of_ucq(q, &r)?;
            match (images.into_iter().next(), sem) {
                (Some(m), Semantics::IntRep) => (true, Some(Witness::Image(m))),
                (Some(_), Semantics::AllRep) => (true, None),
                (None, Semantics::AllRep) => (false, Some(Witness::Repair(r))),
                (None, Semantics::IntRep) => (false, None),
            }
        }
        EntMethod::LinearFdetImages => {
            let m = entails_linear_fdet_images(facts, sigma, q)?;
            let witness = match (&m, sem) {
                (Some(m), Semantics::IntRep) => Some(Witness::Image(m.clone())),
                _ => None,
            };
            (m.is_some(), witness)
        }
        EntMethod::RewriteQent => {
            let phi = build_qent(q, sigma, opts)?;
            (
                evaluate(&phi, &EvalContext::new(facts, &FactSet::new()))?,
                None,
            )
        }
        EntMethod::RewriteQentAl => {
            let phi = build_qent_al(q, sigma)?;
            (
                evaluate(&phi, &EvalContext::new(facts, &FactSet::new()))?,
                None,
            )
        }
        EntMethod::Auto => unreachable!("resolved by the caller"),
    };
    Ok(EntOutcome {
        entailed,
        semantics: sem,
        method,
        witness,
    })
}

type Verdict = (bool, Option<Witness>);

/// Evaluates the query on every repair, or on their intersection.
pub fn entails_brute(
    facts: &FactSet,
    sigma: &[Dependency],
    q: &Ucq,
    sem: Semantics,
    opts: &Options,
) -> Result<Verdict> {
    let rs = enumerate_repairs(facts, sigma, opts)?;
    Ok(match sem {
        Semantics::AllRep => match rs.repairs.iter().find(|r| !holds(q, r)) {
            Some(r) => (false, Some(Witness::Repair(r.clone()))),
            None => (true, None),
        },
        Semantics::IntRep => match images_of_ucq(q, &rs.intersection)?.into_iter().next() {
            Some(m) => (true, Some(Witness::Image(m))),
            None => (false, None),
        },
    })
}

/// Calls `f` on every subset of `facts` with at most `max` elements, by
/// increasing size and then lexicographically.
fn for_each_subset(
    facts: &FactSet,
    max: usize,
    mut f: impl FnMut(FactSet) -> Result<ControlFlow<()>>,
) -> Result<ControlFlow<()>> {
    let all: Vec<&Fact> = facts.iter().collect();
    let mut err = None;
    for k in 0..=max.min(all.len()) {
        let flow = for_each_combination(all.len(), k, |idx| {
            match f(idx.iter().map(|&i| all[i].clone()).collect()) {
                Ok(c) => c,
                Err(e) => {
                    err = Some(e);
                    ControlFlow::Break(())
                }
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        if flow.is_break() {
            return Ok(flow);
        }
    }
    Ok(ControlFlow::Continue(()))
}

fn subset_cap(facts: &FactSet, opts: &Options) -> Result<()> {
    if facts.len() > opts.cap {
        return Err(Error::InstanceTooLarge {
            size: facts.len(),
            cap: opts.cap,
        });
    }
    Ok(())
}

/// AllRep: false iff some consistent subset falsifying the query cannot be
/// extended by any single fact without losing weak consistency.
pub fn entails_alg2(
    facts: &FactSet,
    sigma: &[Dependency],
    q: &Ucq,
    class: &Classification,
    opts: &Options,
) -> Result<Verdict> {
    subset_cap(facts, opts)?;
    let mut wc = WeakConsistency::with_class(facts, sigma, WcMethod::Auto, class, opts)?;
    let mut counter = None;
    let _ = for_each_subset(facts, facts.len(), |d1| {
        if !consistent(&d1, sigma) || holds(q, &d1) {
            return Ok(ControlFlow::Continue(()));
        }
        for a in facts.difference(&d1) {
            let mut ext = d1.clone();
            ext.insert(a.clone());
            if wc.check(&ext)? {
                return Ok(ControlFlow::Continue(()));
            }
        }
        counter = Some(d1);
        Ok(ControlFlow::Break(()))
    })?;
    Ok(match counter {
        Some(r) => (false, Some(Witness::Repair(r))),
        None => (true, None),
    })
}

/// IntRep: true iff some image `M` of the query has no weakly consistent
/// subset `D'` with `D' ∪ M` not weakly consistent.
pub fn entails_alg3(
    facts: &FactSet,
    sigma: &[Dependency],
    q: &Ucq,
    class: &Classification,
    opts: &Options,
) -> Result<Verdict> {
    subset_cap(facts, opts)?;
    let mut wc = WeakConsistency::with_class(facts, sigma, WcMethod::Auto, class, opts)?;
    for m in images_of_ucq(q, facts)? {
        let flow = for_each_subset(facts, facts.len(), |d1| {
            if !wc.check(&d1)? {
                return Ok(ControlFlow::Continue(()));
            }
            let mut ext = d1;
            ext.extend(m.iter().cloned());
            Ok(if wc.check(&ext)? {
                ControlFlow::Continue(())
            } else {
                ControlFlow::Break(())
            })
        })?;
        if flow.is_continue() {
            return Ok((true, Some(Witness::Image(m))));
        }
    }
    Ok((false, None))
}

/// The size bound of the acyclic FDET procedures: `(k, h, k^(h+1))` with `k`
/// the largest number of body atoms and `h` the number of dependencies.
pub fn subset_bound(sigma: &[Dependency]) -> (usize, usize, u128) {
    let k = sigma.iter().map(|d| d.body.atoms.len()).max().unwrap_or(0);
    let h = sigma.len();
    let bound = (k as u128).checked_pow(h as u32 + 1).unwrap_or(u128::MAX);
    (k, h, bound)
}

/// IntRep for acyclic dependencies that are FDET on the database: only
/// subsets of bounded size need to be inspected.
pub fn entails_alg4(
    facts: &FactSet,
    sigma: &[Dependency],
    q: &Ucq,
    opts: &Options,
) -> Result<Verdict> {
    if topological_order(sigma).is_none() {
        return Err(Error::NotAcyclic);
    }
    let (_, _, bound) = subset_bound(sigma);
    let n = facts.len();
    let max = bound.min(n as u128) as usize;
    let budget = 1u128 << opts.cap.min(127);
    let work: u128 =
        (0..=max as u128).fold(0u128, |acc, i| acc.saturating_add(binomial(n as u128, i)));
    if work > budget {
        return Err(Error::InstanceTooLarge {
            size: n,
            cap: opts.cap,
        });
    }
    let fc_consistent = |s: &FactSet| -> Result<bool> {
        Ok(consistent(
            &forward_closure(s, facts, sigma)?.closure,
            sigma,
        ))
    };
    for m in images_of_ucq(q, facts)? {
        let flow = for_each_subset(facts, max, |d1| {
            if !fc_consistent(&d1)? {
                return Ok(ControlFlow::Continue(()));
            }
            let mut ext = d1;
            ext.extend(m.iter().cloned());
            Ok(if fc_consistent(&ext)? {
                ControlFlow::Continue(())
            } else {
                ControlFlow::Break(())
            })
        })?;
        if flow.is_continue() {
            return Ok((true, Some(Witness::Image(m))));
        }
    }
    Ok((false, None))
}

/// Linear dependencies: the query is entailed iff it holds in the unique
/// repair. Both semantics agree.
pub fn entails_linear(facts: &FactSet, sigma: &[Dependency], q: &Ucq) -> Result<bool> {
    check_query(q)?;
    Ok(holds(q, &unique_repair_linear(facts, sigma)?))
}

/// Linear FDET dependencies: an image of the query whose facts are each
/// weakly consistent on their own.
pub fn entails_linear_fdet_images(
    facts: &FactSet,
    sigma: &[Dependency],
    q: &Ucq,
) -> Result<Option<FactSet>> {
    let bad = unsupported_facts(facts, sigma)?;
    Ok(images_of_ucq(q, facts)?
        .into_iter()
        .find(|m| m.is_disjoint(&bad)))
}

/// The query as a single-fact BCQ.
pub fn fact_query(fact: &Fact) -> Ucq {
    Ucq::new(vec![Cq::new(
        Vec::new(),
        Conjunction::new(vec![fact.to_atom()], Vec::new()),
    )])
}

/// Instance checking: entailment of a single fact. The semantics coincide,
/// so IntRep is used.
pub fn instance_check(
    facts: &FactSet,
    sigma: &[Dependency],
    fact: &Fact,
    method: EntMethod,
    opts: &Options,
) -> Result<EntOutcome> {
    entails(
        facts,
        sigma,
        &fact_query(fact),
        Semantics::IntRep,
        method,
        opts,
    )
}

/// Copy of `q` with its variables renamed to fresh names.
fn rename_query(q: &Cq, names: &mut NameSupply) -> Cq {
    let s = Substitution::from_pairs(
        q.exists
            .iter()
            .map(|v| (v.clone(), Term::Var(names.fresh(v)))),
    );
    let exists = q
        .exists
        .iter()
        .map(|v| s.apply_term(&Term::Var(v.clone())).name().clone())
        .collect();
    Cq::new(exists, q.body.apply(&s))
}

/// Predicates occurring in dependency bodies with their arities, in order of
/// first appearance: the only ones whose facts can make a set inconsistent.
fn body_predicates(sigma: &[Dependency]) -> Vec<(Sym, usize)> {
    let mut out: Vec<(Sym, usize)> = Vec::new();
    for a in sigma.iter().flat_map(|d| &d.body.atoms) {
        if !out.iter().any(|(p, _)| *p == a.pred) {
            out.push((a.pred.clone(), a.args.len()));
        }
    }
    out
}

/// Multisets of predicate indices `0..l` of size at most `max`, smallest
/// first.
fn multisets(l: usize, max: usize) -> Vec<Vec<usize>> {
    fn go(l: usize, size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for p in start..l {
            cur.push(p);
            go(l, size, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for size in 0..=max {
        go(l, size, 0, &mut Vec::new(), &mut out);
    }
    out
}

/// The IntRep rewriting for acyclic dependencies that are FDET on the
/// database it is evaluated on.
///
/// Every candidate subset `D'` of bounded size is described by an atom set
/// with fresh single-occurrence variables; the sentence asks for an image of
/// the query that keeps every weakly consistent such `D'` weakly consistent.
pub fn build_qent(q: &Ucq, sigma: &[Dependency], opts: &Options) -> Result<Formula> {
    check_query(q)?;
    let wcons = build_wcons(sigma)?;
    let preds = body_predicates(sigma);
    let (_, _, bound) = subset_bound(sigma);
    let l = preds.len() as u128;
    // The guard is l^bound, the number of atom sequences of the largest
    // size; the sets actually built are the multisets of size <= bound.
    let guard = match u32::try_from(bound) {
        Ok(b) => l.checked_pow(b).unwrap_or(u128::MAX),
        Err(_) if l <= 1 => l,
        Err(_) => u128::MAX,
    };
    if guard > opts.max_atom_sets {
        return Err(Error::FormulaTooLarge {
            atom_sets: guard,
            limit: opts.max_atom_sets,
        });
    }
    let mut names = NameSupply::avoiding(sigma);
    names.reserve(wcons.variables());
    for cq in &q.disjuncts {
        names.reserve(cq.body.vars());
        names.reserve(cq.body.constants());
    }
    let y = Sym::new("y");
    let mut disjuncts = Vec::new();
    for cq in q.disjuncts.iter().filter(|cq| !cq.is_bot()) {
        let cq = rename_query(cq, &mut names);
        let mut conjuncts = vec![Formula::conj(&cq.body)];
        for ms in multisets(preds.len(), bound.min(usize::MAX as u128) as usize) {
            let mut vars = Vec::new();
            let atoms: Vec<Atom> = ms
                .iter()
                .map(|&i| {
                    let (p, arity) = &preds[i];
                    let args = (0..*arity)
                        .map(|_| {
                            let v = names.fresh(&y);
                            vars.push(v.clone());
                            Term::Var(v)
                        })
                        .collect();
                    Atom {
                        pred: p.clone(),
                        aux: false,
                        args,
                    }
                })
                .collect();
            let mut with_q = atoms.clone();
            with_q.extend(cq.body.atoms.iter().cloned());
            let body = Formula::implies(
                Formula::and(atoms.iter().cloned().map(Formula::Atom)),
                Formula::implies(
                    wcons_over_atoms(&wcons, &atoms),
                    wcons_over_atoms(&wcons, &with_q),
                ),
            );
            conjuncts.push(Formula::forall(vars, body));
        }
        disjuncts.push(Formula::exists(cq.exists.clone(), Formula::and(conjuncts)));
    }
    Ok(Formula::or(disjuncts))
}

/// The rewriting for acyclic linear dependencies: an image of the query whose
/// atoms are each weakly consistent on their own.
pub fn build_qent_al(q: &Ucq, sigma: &[Dependency]) -> Result<Formula> {
    check_query(q)?;
    if !sigma.iter().all(Dependency::is_linear) {
        return Err(Error::NotLinear);
    }
    let order = topological_order(sigma).ok_or(Error::NotAcyclic)?;
    let ordered: Vec<Dependency> = order.into_iter().map(|i| sigma[i].clone()).collect();
    let mut disjuncts = Vec::new();
    for cq in q.disjuncts.iter().filter(|cq| !cq.is_bot()) {
        let mut conjuncts = vec![Formula::conj(&cq.body)];
        for alpha in &cq.body.atoms {
            let phi = build_wcons_al_atom(alpha, &ordered)?;
            // atoms sharing a predicate often yield the same condition
            if !conjuncts.iter().any(|c| c.alpha_eq(&phi)) {
                conjuncts.push(phi);
            }
        }
        disjuncts.push(Formula::exists(cq.exists.clone(), Formula::and(conjuncts)));
    }
    Ok(Formula::or(disjuncts))
}
