//! Repairs: exhaustive enumeration and repair checking.

use std::ops::ControlFlow;

use serde::Serialize;

use crate::classify::{classify, Classification};
use crate::error::{Error, Result};
use crate::fo::{aux_formula, evaluate, EvalContext, Formula, NameSupply};
use crate::model::{consistent, predicates_of, Atom, Dependency, Fact, FactSet, Sym, Term};
use crate::names::named_enum;
use crate::options::Options;
use crate::subsets::for_each_combination;
use crate::weakcons::{unique_repair_linear, unsupported_facts, WcMethod, WeakConsistency};

/// All repairs of a database and their intersection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepairSet {
    pub repairs: Vec<FactSet>,
    pub intersection: FactSet,
}

impl RepairSet {
    pub fn contains(&self, subset: &FactSet) -> bool {
        self.repairs.iter().any(|r| r == subset)
    }
}

/// The ⊆-maximal consistent subsets of `facts`, sorted.
///
/// Candidates are visited by decreasing size; a consistent candidate is a
/// repair unless it sits inside a repair found earlier.
pub fn enumerate_repairs(
    facts: &FactSet,
    sigma: &[Dependency],
    opts: &Options,
) -> Result<RepairSet> {
    let n = facts.len();
    if n > opts.cap {
        return Err(Error::InstanceTooLarge {
            size: n,
            cap: opts.cap,
        });
    }
    let all: Vec<&Fact> = facts.iter().collect();
    let subset = |mask: u64| -> FactSet {
        (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| all[i].clone())
            .collect()
    };
    let mut found: Vec<u64> = Vec::new();
    for k in (0..=n).rev() {
        let _ = for_each_combination(n, k, |idx| {
            let m = idx.iter().fold(0u64, |m, &i| m | 1 << i);
            if !found.iter().any(|r| m & r == m) && consistent(&subset(m), sigma) {
                found.push(m);
            }
            ControlFlow::Continue(())
        });
    }
    let mut repairs: Vec<FactSet> = found.into_iter().map(subset).collect();
    repairs.sort();
    let mut intersection = repairs[0].clone();
    for r in &repairs[1..] {
        intersection.retain(|f| r.contains(f));
    }
    Ok(RepairSet {
        repairs,
        intersection,
    })
}

named_enum! {
    pub enum RcMethod {
        Auto => "auto",
        Brute => "brute",
        GeneralWc => "general_wc",
        AcyclicLocal => "acyclic_local",
        RewriteAcyclic => "rewrite_acyclic",
        LinearUnique => "linear_unique",
        LinearFdet => "linear_fdet",
    }
}

impl RcMethod {
    pub const PREFERENCE: &'static [RcMethod] = &[
        RcMethod::AcyclicLocal,
        RcMethod::LinearFdet,
        RcMethod::LinearUnique,
        RcMethod::GeneralWc,
    ];

    pub fn admissible(self, class: &Classification) -> std::result::Result<(), String> {
        let fdet = class.fdet.unwrap_or(false);
        let need = |ok: bool, what: &str| if ok { Ok(()) } else { Err(what.to_string()) };
        match self {
            RcMethod::Auto | RcMethod::Brute | RcMethod::GeneralWc => Ok(()),
            RcMethod::AcyclicLocal | RcMethod::RewriteAcyclic => {
                need(class.acyclic, "requires acyclic dependencies")
            }
            RcMethod::LinearUnique => need(class.linear, "requires linear dependencies"),
            RcMethod::LinearFdet => need(
                class.linear && fdet,
                "requires linear dependencies that are FDET on the database",
            ),
        }
    }

    pub fn resolve(self, class: &Classification) -> Result<RcMethod> {
        if self == RcMethod::Auto {
            return Ok(*RcMethod::PREFERENCE
                .iter()
                .find(|m| m.admissible(class).is_ok())
                .expect("general_wc is always admissible"));
        }
        self.admissible(class)
            .map(|_| self)
            .map_err(|reason| Error::MethodInapplicable {
                method: self.name().to_string(),
                reason,
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RcOutcome {
    pub is_repair: bool,
    pub method: RcMethod,
    /// A fact of the database that can be added to a consistent non-repair.
    pub blocking_fact: Option<Fact>,
}

/// Decides whether `subset` is a repair of the database.
pub fn repair_check(
    subset: &FactSet,
    facts: &FactSet,
    sigma: &[Dependency],
    method: RcMethod,
    opts: &Options,
) -> Result<RcOutcome> {
    let class = classify(sigma, Some(facts));
    let method = method.resolve(&class)?;
    let done = |is_repair: bool, blocking_fact: Option<Fact>| {
        Ok(RcOutcome {
            is_repair,
            method,
            blocking_fact,
        })
    };
    if !subset.is_subset(facts) || !consistent(subset, sigma) {
        return done(false, None);
    }
    let mut missing = facts.difference(subset);
    let extended = |a: &Fact| {
        let mut s = subset.clone();
        s.insert(a.clone());
        s
    };
    let blocking = match method {
        RcMethod::Brute => {
            let rs = enumerate_repairs(facts, sigma, opts)?;
            rs.repairs
                .iter()
                .find(|r| subset.is_subset(r))
                .and_then(|r| r.difference(subset).next().cloned())
        }
        RcMethod::GeneralWc => {
            let mut wc = WeakConsistency::with_class(facts, sigma, WcMethod::Auto, &class, opts)?;
            let mut hit = None;
            for a in missing {
                if wc.check(&extended(a))? {
                    hit = Some(a.clone());
                    break;
                }
            }
            hit
        }
        RcMethod::AcyclicLocal => missing.find(|a| consistent(&extended(a), sigma)).cloned(),
        RcMethod::RewriteAcyclic => {
            let phi = build_check_repair(sigma)?;
            let is_repair = repair_check_sentence(&phi, subset, facts, sigma)?;
            let blocking = if is_repair {
                None
            } else {
                missing.find(|a| consistent(&extended(a), sigma)).cloned()
            };
            return done(is_repair, blocking);
        }
        RcMethod::LinearUnique => {
            let r = unique_repair_linear(facts, sigma)?;
            if &r == subset {
                None
            } else {
                // a consistent subset of a linear instance lies inside the
                // unique repair
                r.difference(subset).next().cloned()
            }
        }
        RcMethod::LinearFdet => {
            let bad = unsupported_facts(facts, sigma)?;
            missing.find(|a| !bad.contains(*a)).cloned()
        }
        RcMethod::Auto => unreachable!("resolved above"),
    };
    done(blocking.is_none(), blocking)
}

/// Evaluates a repair-checking sentence on `D ∪ aux(subset)`. Facts whose
/// predicate the dependencies never mention are outside the sentence's view;
/// a subset missing one of them cannot be maximal.
pub fn repair_check_sentence(
    phi: &Formula,
    subset: &FactSet,
    facts: &FactSet,
    sigma: &[Dependency],
) -> Result<bool> {
    let preds: Vec<Sym> = predicates_of(sigma).into_iter().map(|(p, _)| p).collect();
    if facts.difference(subset).any(|f| !preds.contains(&f.pred)) {
        return Ok(false);
    }
    evaluate(phi, &EvalContext::new(facts, subset))
}

/// The sentence true on `D ∪ aux(D')` iff `D'` is a repair, for acyclic
/// dependencies.
///
/// Heads are read over the auxiliary copy, so the first conjunct states that
/// `D'` is consistent; the second states that adding any single missing fact
/// breaks consistency.
pub fn build_check_repair(sigma: &[Dependency]) -> Result<Formula> {
    if crate::classify::topological_order(sigma).is_none() {
        return Err(Error::NotAcyclic);
    }
    let inc_aux = inc_aux(sigma)?;
    let mut names = NameSupply::avoiding(sigma);
    let mut conjuncts = vec![Formula::not(inc_aux.clone())];
    for (p, arity) in predicates_of(sigma) {
        let base = Sym::new("x");
        let vars: Vec<Sym> = (0..arity).map(|_| names.fresh(&base)).collect();
        let alpha = Atom {
            pred: p,
            aux: false,
            args: vars.iter().cloned().map(Term::Var).collect(),
        };
        let premise = Formula::and([
            Formula::Atom(alpha.clone()),
            Formula::not(Formula::Atom(Atom {
                aux: true,
                ..alpha.clone()
            })),
        ]);
        conjuncts.push(Formula::forall(
            vars,
            Formula::implies(premise, incons(&inc_aux, &alpha)),
        ));
    }
    Ok(Formula::and(conjuncts))
}

/// Some dependency is violated inside the auxiliary copy.
fn inc_aux(sigma: &[Dependency]) -> Result<Formula> {
    let mut disjuncts = Vec::new();
    for d in sigma {
        let body = aux_formula(&Formula::conj(&d.body))?;
        let head = aux_formula(&Formula::ucq(&d.head))?;
        disjuncts.push(Formula::exists(
            d.forall.clone(),
            Formula::and([body, Formula::not(head)]),
        ));
    }
    Ok(Formula::or(disjuncts))
}

/// `inc_aux` with `alpha` treated as an extra auxiliary fact.
fn incons(inc_aux: &Formula, alpha: &Atom) -> Formula {
    inc_aux.map_atoms(&mut |a| {
        if a.aux && a.pred == alpha.pred && a.args.len() == alpha.args.len() {
            Formula::or([
                Formula::Atom(a.clone()),
                Formula::and(
                    a.args
                        .iter()
                        .zip(&alpha.args)
                        .map(|(t, x)| Formula::eq(t.clone(), x.clone())),
                ),
            ])
        } else {
            Formula::Atom(a.clone())
        }
    })
}
