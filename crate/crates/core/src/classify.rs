//! Structural classes of dependency sets.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::fo::{Formula, NameSupply};
use crate::model::{head_images, instantiations, Atom, Cq, Dependency, FactSet, Substitution};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub linear: bool,
    pub full: bool,
    pub acyclic: bool,
    /// Dependency indices; empty unless acyclic.
    #[serde(rename = "topological_order")]
    pub topo_order: Vec<usize>,
    /// Only decided when a database is supplied.
    pub fdet: Option<bool>,
}

pub fn classify(sigma: &[Dependency], facts: Option<&FactSet>) -> Classification {
    let topo = topological_order(sigma);
    Classification {
        linear: sigma.iter().all(Dependency::is_linear),
        full: sigma.iter().all(Dependency::is_full),
        acyclic: topo.is_some(),
        topo_order: topo.unwrap_or_default(),
        fdet: facts.map(|d| is_fdet(sigma, d)),
    }
}

/// Edges `i -> j` whenever a head predicate of `i` occurs in the body of `j`.
pub fn dependency_graph(sigma: &[Dependency]) -> Vec<Vec<usize>> {
    sigma
        .iter()
        .map(|ti| {
            let heads = ti.head_preds();
            sigma
                .iter()
                .enumerate()
                .filter(|(_, tj)| !tj.body_preds().is_disjoint(&heads))
                .map(|(j, _)| j)
                .collect()
        })
        .collect()
}

pub fn is_acyclic(sigma: &[Dependency]) -> bool {
    topological_order(sigma).is_some()
}

/// A topological order of the dependency graph, smallest index first among
/// the available choices; `None` on a cycle.
pub fn topological_order(sigma: &[Dependency]) -> Option<Vec<usize>> {
    let graph = dependency_graph(sigma);
    let mut indeg = vec![0usize; sigma.len()];
    for succ in &graph {
        for &j in succ {
            indeg[j] += 1;
        }
    }
    let mut ready: BTreeSet<usize> = (0..sigma.len()).filter(|&i| indeg[i] == 0).collect();
    let mut order = Vec::with_capacity(sigma.len());
    while let Some(i) = ready.pop_first() {
        order.push(i);
        for &j in &graph[i] {
            indeg[j] -= 1;
            if indeg[j] == 0 {
                ready.insert(j);
            }
        }
    }
    (order.len() == sigma.len()).then_some(order)
}

/// A body match with two or more distinct head images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FdetViolation {
    pub dependency: usize,
    pub substitution: Substitution,
    pub images: Vec<FactSet>,
}

pub fn fdet_violation(sigma: &[Dependency], facts: &FactSet) -> Option<FdetViolation> {
    sigma.iter().enumerate().find_map(|(i, d)| {
        instantiations(&d.body, facts).into_iter().find_map(|s| {
            let images = head_images(d, facts, &s);
            (images.len() > 1).then_some(FdetViolation {
                dependency: i,
                substitution: s,
                images,
            })
        })
    })
}

/// Every body match has at most one head image (images compared as sets).
pub fn is_fdet(sigma: &[Dependency], facts: &FactSet) -> bool {
    fdet_violation(sigma, facts).is_none()
}

/// A sentence true on a database exactly when the dependencies are FDET on it.
///
/// For every body match and every pair of head disjuncts `q`, `q'` (a disjunct
/// paired with itself included), two images must be the same set of facts.
pub fn build_check_fdet(sigma: &[Dependency]) -> Formula {
    let mut names = NameSupply::avoiding(sigma);
    Formula::and(sigma.iter().map(|d| {
        let qs: Vec<&Cq> = d.head.disjuncts.iter().filter(|q| !q.is_bot()).collect();
        let mut pairs = Vec::new();
        for (i, q) in qs.iter().enumerate() {
            for q2 in &qs[i..] {
                let primed = prime(q2, &mut names);
                let same = image_eq(&q.body.atoms, &primed.body.atoms);
                if same == Formula::True {
                    continue;
                }
                pairs.push(Formula::forall(
                    q.exists.clone(),
                    Formula::implies(
                        Formula::conj(&q.body),
                        Formula::forall(
                            primed.exists.clone(),
                            Formula::implies(Formula::conj(&primed.body), same),
                        ),
                    ),
                ));
            }
        }
        if pairs.is_empty() {
            return Formula::True;
        }
        Formula::forall(
            d.forall.clone(),
            Formula::implies(Formula::conj(&d.body), Formula::and(pairs)),
        )
    }))
}

/// Copy of `q` with its existential variables renamed.
fn prime(q: &Cq, names: &mut NameSupply) -> Cq {
    let s = Substitution::from_pairs(
        q.exists
            .iter()
            .map(|v| (v.clone(), crate::model::Term::Var(names.fresh(v)))),
    );
    let exists = q
        .exists
        .iter()
        .map(|v| {
            s.apply_term(&crate::model::Term::Var(v.clone()))
                .name()
                .clone()
        })
        .collect();
    Cq::new(exists, q.body.apply(&s))
}

fn same_atom(a: &Atom, b: &Atom) -> Formula {
    if a.pred != b.pred || a.args.len() != b.args.len() {
        return Formula::False;
    }
    Formula::and(
        a.args
            .iter()
            .zip(&b.args)
            .map(|(s, t)| Formula::eq(s.clone(), t.clone())),
    )
}

/// The atom sets `xs` and `ys` denote the same set of facts.
fn image_eq(xs: &[Atom], ys: &[Atom]) -> Formula {
    let covered = |from: &[Atom], into: &[Atom]| {
        Formula::and(
            from.iter()
                .map(|a| Formula::or(into.iter().map(|b| same_atom(a, b))))
                .collect::<Vec<_>>(),
        )
    };
    Formula::and([covered(xs, ys), covered(ys, xs)])
}
