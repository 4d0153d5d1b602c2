//! Weak consistency: can a subset of the database be extended, inside the
//! database, to a set that satisfies every dependency?

mod rewrite;

pub use rewrite::{build_wcons, build_wcons_al, build_wcons_al_atom, wcons_over_atoms};

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::ops::ControlFlow;

use serde::Serialize;

use crate::classify::{classify, Classification};
use crate::error::{Error, Result};
use crate::fo::{evaluate, EvalContext, Formula};
use crate::model::{
    consistent, head_has_image, head_images, image, instantiations, Dependency, Fact, FactSet,
    Substitution,
};
use crate::names::named_enum;
use crate::options::Options;
use crate::subsets::for_each_combination;

named_enum! {
    pub enum WcMethod {
        Auto => "auto",
        Brute => "brute",
        Fc => "fc",
        LinearRepair => "linear_repair",
        Reach => "reach",
        RewriteAcyclicFdet => "rewrite_acyclic_fdet",
        RewriteAcyclicLinear => "rewrite_acyclic_linear",
    }
}

impl WcMethod {
    /// Preference order used by `auto`.
    pub const PREFERENCE: &'static [WcMethod] = &[
        WcMethod::RewriteAcyclicLinear,
        WcMethod::RewriteAcyclicFdet,
        WcMethod::Reach,
        WcMethod::LinearRepair,
        WcMethod::Fc,
        WcMethod::Brute,
    ];

    /// `Err(reason)` when the class precondition of the method fails.
    pub fn admissible(self, class: &Classification) -> std::result::Result<(), String> {
        let fdet = class.fdet.unwrap_or(false);
        let need = |ok: bool, what: &str| if ok { Ok(()) } else { Err(what.to_string()) };
        match self {
            WcMethod::Auto | WcMethod::Brute => Ok(()),
            WcMethod::Fc => need(fdet, "requires dependencies that are FDET on the database"),
            WcMethod::LinearRepair => need(class.linear, "requires linear dependencies"),
            WcMethod::Reach => need(
                class.linear && fdet,
                "requires linear dependencies that are FDET on the database",
            ),
            WcMethod::RewriteAcyclicFdet => need(
                class.acyclic && fdet,
                "requires acyclic dependencies that are FDET on the database",
            ),
            WcMethod::RewriteAcyclicLinear => need(
                class.acyclic && class.linear,
                "requires acyclic linear dependencies",
            ),
        }
    }

    /// The concrete method `self` stands for on an instance of this class.
    pub fn resolve(self, class: &Classification) -> Result<WcMethod> {
        if self == WcMethod::Auto {
            return Ok(*WcMethod::PREFERENCE
                .iter()
                .find(|m| m.admissible(class).is_ok())
                .expect("brute is always admissible"));
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
pub struct WcOutcome {
    pub weakly_consistent: bool,
    pub method: WcMethod,
    /// A consistent superset inside the database (brute and linear methods).
    pub witness_superset: Option<FactSet>,
}

/// One step of a forward closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub dependency: usize,
    pub substitution: Substitution,
    pub added: FactSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForwardClosure {
    pub closure: FactSet,
    pub trace: Vec<TraceStep>,
}

/// Least superset of `seed` that contains, for every body match inside it,
/// the unique head image of that match in `facts`.
pub fn forward_closure(
    seed: &FactSet,
    facts: &FactSet,
    sigma: &[Dependency],
) -> Result<ForwardClosure> {
    let mut closure = seed.clone();
    let mut trace = Vec::new();
    loop {
        let mut changed = false;
        for (i, d) in sigma.iter().enumerate() {
            for s in instantiations(&d.body, &closure) {
                let images = head_images(d, facts, &s);
                match images.as_slice() {
                    [] => {}
                    [m] => {
                        if !m.is_subset(&closure) {
                            let added: FactSet = m.difference(&closure).cloned().collect();
                            closure.extend(added.iter().cloned());
                            trace.push(TraceStep {
                                dependency: i,
                                substitution: s,
                                added,
                            });
                            changed = true;
                        }
                    }
                    _ => {
                        return Err(Error::NotFdet(format!(
                            "dependency {i} has {} head images for {s}",
                            images.len()
                        )))
                    }
                }
            }
        }
        if !changed {
            return Ok(ForwardClosure { closure, trace });
        }
    }
}

/// Greatest subset of `facts` in which every body match has a head image:
/// the unique repair under linear dependencies.
pub fn unique_repair_linear(facts: &FactSet, sigma: &[Dependency]) -> Result<FactSet> {
    if !sigma.iter().all(Dependency::is_linear) {
        return Err(Error::NotLinear);
    }
    let mut current = facts.clone();
    loop {
        let mut doomed = FactSet::new();
        for d in sigma {
            for s in instantiations(&d.body, &current) {
                if !head_has_image(d, &current, &s) {
                    doomed.extend(image(&d.body, &s)?);
                }
            }
        }
        if doomed.is_empty() {
            return Ok(current);
        }
        current.retain(|f| !doomed.contains(f));
    }
}

/// Facts from which the failure vertex is reachable in the fact graph of
/// linear, FDET dependencies: exactly the facts that are not weakly
/// consistent on their own.
pub fn unsupported_facts(facts: &FactSet, sigma: &[Dependency]) -> Result<BTreeSet<Fact>> {
    if !sigma.iter().all(Dependency::is_linear) {
        return Err(Error::NotLinear);
    }
    // reverse adjacency: target -> sources; `None` stands for the failure vertex
    let mut preds: HashMap<Option<Fact>, Vec<Fact>> = HashMap::new();
    for (i, d) in sigma.iter().enumerate() {
        for s in instantiations(&d.body, facts) {
            let beta = image(&d.body, &s)?
                .into_iter()
                .next()
                .expect("linear body has one atom");
            let images = head_images(d, facts, &s);
            match images.as_slice() {
                [] => preds.entry(None).or_default().push(beta),
                [m] => {
                    for g in m {
                        preds.entry(Some(g.clone())).or_default().push(beta.clone());
                    }
                }
                _ => {
                    return Err(Error::NotFdet(format!(
                        "dependency {i} has {} head images for {s}",
                        images.len()
                    )))
                }
            }
        }
    }
    let mut bad = BTreeSet::new();
    let mut queue: VecDeque<Fact> = preds.get(&None).cloned().unwrap_or_default().into();
    while let Some(f) = queue.pop_front() {
        if bad.insert(f.clone()) {
            if let Some(srcs) = preds.get(&Some(f)) {
                queue.extend(srcs.iter().cloned());
            }
        }
    }
    Ok(bad)
}

/// `{fact}` is weakly consistent, decided by reachability.
pub fn weakly_consistent_reach(fact: &Fact, facts: &FactSet, sigma: &[Dependency]) -> Result<bool> {
    Ok(facts.contains(fact) && !unsupported_facts(facts, sigma)?.contains(fact))
}

/// Smallest consistent `S` with `subset ⊆ S ⊆ facts`, trying sizes in
/// increasing order and same-size candidates lexicographically.
pub fn weakly_consistent_brute(
    subset: &FactSet,
    facts: &FactSet,
    sigma: &[Dependency],
    opts: &Options,
) -> Result<Option<FactSet>> {
    if facts.len() > opts.cap {
        return Err(Error::InstanceTooLarge {
            size: facts.len(),
            cap: opts.cap,
        });
    }
    if !subset.is_subset(facts) {
        return Ok(None);
    }
    let free: Vec<&Fact> = facts.difference(subset).collect();
    let mut found = None;
    for k in 0..=free.len() {
        let _ = for_each_combination(free.len(), k, |idx| {
            let mut s = subset.clone();
            s.extend(idx.iter().map(|&i| free[i].clone()));
            if consistent(&s, sigma) {
                found = Some(s);
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        if found.is_some() {
            break;
        }
    }
    Ok(found)
}

enum Prepared {
    Brute,
    Fc,
    Repair(FactSet),
    Reach(BTreeSet<Fact>),
    Sentence(Formula),
}

/// Weak-consistency checks against one database, with the method resolved
/// and its per-database work done once. Answers are memoized.
pub struct WeakConsistency<'a> {
    facts: &'a FactSet,
    sigma: &'a [Dependency],
    method: WcMethod,
    prepared: Prepared,
    opts: Options,
    memo: HashMap<FactSet, bool>,
}

impl<'a> WeakConsistency<'a> {
    pub fn new(
        facts: &'a FactSet,
        sigma: &'a [Dependency],
        method: WcMethod,
        opts: &Options,
    ) -> Result<Self> {
        let class = classify(sigma, Some(facts));
        Self::with_class(facts, sigma, method, &class, opts)
    }

    pub fn with_class(
        facts: &'a FactSet,
        sigma: &'a [Dependency],
        method: WcMethod,
        class: &Classification,
        opts: &Options,
    ) -> Result<Self> {
        let method = method.resolve(class)?;
        let prepared = match method {
            WcMethod::Brute => {
                if facts.len() > opts.cap {
                    return Err(Error::InstanceTooLarge {
                        size: facts.len(),
                        cap: opts.cap,
                    });
                }
                Prepared::Brute
            }
            WcMethod::Fc => Prepared::Fc,
            WcMethod::LinearRepair => Prepared::Repair(unique_repair_linear(facts, sigma)?),
            WcMethod::Reach => Prepared::Reach(unsupported_facts(facts, sigma)?),
            WcMethod::RewriteAcyclicFdet => Prepared::Sentence(build_wcons(sigma)?),
            WcMethod::RewriteAcyclicLinear => Prepared::Sentence(build_wcons_al(sigma)?),
            WcMethod::Auto => unreachable!("resolved above"),
        };
        Ok(WeakConsistency {
            facts,
            sigma,
            method,
            prepared,
            opts: opts.clone(),
            memo: HashMap::new(),
        })
    }

    pub fn method(&self) -> WcMethod {
        self.method
    }

    pub fn check(&mut self, subset: &FactSet) -> Result<bool> {
        if let Some(&b) = self.memo.get(subset) {
            return Ok(b);
        }
        let b = self.decide(subset)?;
        self.memo.insert(subset.clone(), b);
        Ok(b)
    }

    fn decide(&self, subset: &FactSet) -> Result<bool> {
        if !subset.is_subset(self.facts) {
            return Ok(false);
        }
        match &self.prepared {
            Prepared::Brute => {
                Ok(weakly_consistent_brute(subset, self.facts, self.sigma, &self.opts)?.is_some())
            }
            Prepared::Fc => {
                let fc = forward_closure(subset, self.facts, self.sigma)?;
                Ok(consistent(&fc.closure, self.sigma))
            }
            Prepared::Repair(r) => Ok(subset.is_subset(r)),
            Prepared::Reach(bad) => Ok(subset.is_disjoint(bad)),
            Prepared::Sentence(phi) => evaluate(phi, &EvalContext::new(self.facts, subset)),
        }
    }

    /// A consistent superset of `subset` inside the database, for the methods
    /// that produce one.
    pub fn witness(&self, subset: &FactSet) -> Result<Option<FactSet>> {
        match &self.prepared {
            Prepared::Brute => weakly_consistent_brute(subset, self.facts, self.sigma, &self.opts),
            Prepared::Repair(r) => Ok(subset.is_subset(r).then(|| r.clone())),
            _ => Ok(None),
        }
    }
}

/// Decides whether `subset` is weakly consistent with the database.
pub fn weakly_consistent(
    subset: &FactSet,
    facts: &FactSet,
    sigma: &[Dependency],
    method: WcMethod,
    opts: &Options,
) -> Result<WcOutcome> {
    let mut wc = WeakConsistency::new(facts, sigma, method, opts)?;
    let verdict = wc.check(subset)?;
    Ok(WcOutcome {
        weakly_consistent: verdict,
        method: wc.method(),
        witness_superset: if verdict { wc.witness(subset)? } else { None },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_database, parse_dependencies};

    fn instance(deps: &str, db: &str) -> (Vec<Dependency>, FactSet) {
        let (schema, sigma) = parse_dependencies(deps).unwrap();
        (sigma, parse_database(db, &schema).unwrap().facts)
    }

    fn subset(src: &str, facts: &FactSet) -> FactSet {
        let schema = crate::model::Schema::new();
        let s = parse_database(src, &schema).unwrap().facts;
        assert!(s.is_subset(facts), "{src}");
        s
    }

    const SIGMA2: &str = "forall v: R(v,v) -> false .\n\
        forall x,y,z: P(x,y), T(x,z) -> exists w: R(x,w), w != z .";
    const D2: &str = "P(a,b). T(a,c). R(a,d). P(e,f). T(e,g). R(e,e).";
    const SIGMA3: &str = "forall x,y: P(x,y) -> exists z: T(y,z), y != z .\n\
        forall x,y: T(x,y) -> exists v,w: R(x,v,w) .";
    const D3: &str = "P(a,b). T(b,c). T(a,d). T(a,e). R(a,d,b).";

    #[test]
    fn closure_adds_forced_images() {
        let (sigma, d) = instance(SIGMA2, D2);
        let fc = forward_closure(&subset("P(e,f). T(e,g).", &d), &d, &sigma).unwrap();
        assert!(fc.closure.contains(&Fact::new("R", &["e", "e"])));
        assert!(!consistent(&fc.closure, &sigma));
        let fc = forward_closure(&subset("P(a,b). T(a,c).", &d), &d, &sigma).unwrap();
        assert_eq!(fc.closure, subset("P(a,b). T(a,c). R(a,d).", &d));
        assert_eq!(fc.trace.len(), 1);
        assert_eq!(fc.trace[0].dependency, 1);
        let empty = forward_closure(&FactSet::new(), &d, &sigma).unwrap();
        assert!(empty.closure.is_empty());
    }

    #[test]
    fn closure_reports_non_fdet() {
        let (sigma, d) = instance(
            "forall x: T(x) -> exists y: P(y,x) .",
            "T(a). P(b,a). P(c,a).",
        );
        let seed = subset("T(a).", &d);
        assert!(matches!(
            forward_closure(&seed, &d, &sigma),
            Err(Error::NotFdet(_))
        ));
    }

    #[test]
    fn all_methods_on_the_fdet_example() {
        let (sigma, d) = instance(SIGMA2, D2);
        let opts = Options::default();
        let good = subset("P(a,b). T(a,c).", &d);
        let bad = subset("P(e,f). T(e,g).", &d);
        for m in [
            WcMethod::Auto,
            WcMethod::Brute,
            WcMethod::Fc,
            WcMethod::RewriteAcyclicFdet,
        ] {
            assert!(
                weakly_consistent(&good, &d, &sigma, m, &opts)
                    .unwrap()
                    .weakly_consistent
            );
            assert!(
                !weakly_consistent(&bad, &d, &sigma, m, &opts)
                    .unwrap()
                    .weakly_consistent
            );
        }
        assert!(
            weakly_consistent(&FactSet::new(), &d, &sigma, WcMethod::Auto, &opts)
                .unwrap()
                .weakly_consistent
        );
        assert!(matches!(
            weakly_consistent(&good, &d, &sigma, WcMethod::LinearRepair, &opts),
            Err(Error::MethodInapplicable { .. })
        ));
    }

    #[test]
    fn auto_prefers_rewriting() {
        let (sigma, d) = instance(SIGMA2, D2);
        let out = weakly_consistent(
            &FactSet::new(),
            &d,
            &sigma,
            WcMethod::Auto,
            &Options::default(),
        )
        .unwrap();
        assert_eq!(out.method, WcMethod::RewriteAcyclicFdet);
    }

    #[test]
    fn linear_example() {
        let (sigma, d) = instance(SIGMA3, D3);
        let opts = Options::default();
        let repair = unique_repair_linear(&d, &sigma).unwrap();
        assert_eq!(repair, subset("T(a,d). T(a,e). R(a,d,b).", &d));
        let good = subset("T(a,e).", &d);
        let bad = subset("P(a,b). T(b,c).", &d);
        for m in [
            WcMethod::Brute,
            WcMethod::LinearRepair,
            WcMethod::RewriteAcyclicLinear,
            WcMethod::Auto,
        ] {
            assert!(
                weakly_consistent(&good, &d, &sigma, m, &opts)
                    .unwrap()
                    .weakly_consistent
            );
            assert!(
                !weakly_consistent(&bad, &d, &sigma, m, &opts)
                    .unwrap()
                    .weakly_consistent
            );
        }
        let out = weakly_consistent(&good, &d, &sigma, WcMethod::LinearRepair, &opts).unwrap();
        assert_eq!(out.witness_superset, Some(repair));
    }

    #[test]
    fn denial_fact_alone_is_not_weakly_consistent() {
        let (sigma, d) = instance(SIGMA2, D2);
        let s = subset("R(e,e).", &d);
        assert!(weakly_consistent_brute(&s, &d, &sigma, &Options::default())
            .unwrap()
            .is_none());
    }

    #[test]
    fn brute_witness_is_smallest() {
        let (sigma, d) = instance(SIGMA2, D2);
        let s = subset("P(a,b). T(a,c).", &d);
        let w = weakly_consistent_brute(&s, &d, &sigma, &Options::default())
            .unwrap()
            .unwrap();
        assert_eq!(w, subset("P(a,b). T(a,c). R(a,d).", &d));
    }

    #[test]
    fn brute_respects_cap() {
        let (sigma, d) = instance(SIGMA2, D2);
        let opts = Options::with_cap(3);
        assert!(matches!(
            weakly_consistent_brute(&FactSet::new(), &d, &sigma, &opts),
            Err(Error::InstanceTooLarge { size: 6, cap: 3 })
        ));
    }

    #[test]
    fn reachability_matches_repair_on_linear_fdet() {
        let (sigma, d) = instance(
            "forall x: A(x) -> B(x) .\nforall x: B(x) -> C(x) .\nforall x: C(x) -> false .\nforall x: D(x) -> B(x) .",
            "A(a). B(a). A(b). D(c). B(c). C(c). A(e).",
        );
        let bad = unsupported_facts(&d, &sigma).unwrap();
        let repair = unique_repair_linear(&d, &sigma).unwrap();
        for f in &d {
            assert_eq!(!bad.contains(f), repair.contains(f), "{f}");
        }
        assert!(!weakly_consistent_reach(&Fact::new("A", &["b"]), &d, &sigma).unwrap());
    }

    #[test]
    fn subset_outside_database_is_rejected() {
        let (sigma, d) = instance(SIGMA2, D2);
        let outside: FactSet = [Fact::new("P", &["z", "z"])].into_iter().collect();
        for m in [WcMethod::Brute, WcMethod::Fc, WcMethod::RewriteAcyclicFdet] {
            let out = weakly_consistent(&outside, &d, &sigma, m, &Options::default()).unwrap();
            assert!(!out.weakly_consistent);
        }
    }
}
